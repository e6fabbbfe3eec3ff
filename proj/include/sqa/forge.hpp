#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sqa/coref.hpp"
#include "sqa/engine.hpp"
#include "sqa/parser.hpp"
#include "sqa/random.hpp"
#include "sqa/relation.hpp"
#include "sqa/scene.hpp"

namespace sqa {

// Relation between two story entities as annotated by the generator. Ids are
// gold coref chain ids; a group chain id stands for all of its members.
struct GoldTriplet {
    std::string trajector;
    std::string indicator;
    std::string landmark;
    std::optional<RelationType> relation;
    std::size_t sentence = 0;
    EntityId trajector_id = 0;
    EntityId landmark_id = 0;

    friend bool operator==(const GoldTriplet&, const GoldTriplet&) = default;
};

struct GoldMention {
    std::string text;
    std::size_t sentence = 0;
    std::size_t index = 0;   // position in the story's mention sequence

    friend bool operator==(const GoldMention&, const GoldMention&) = default;
};

struct GoldChain {
    EntityId id = 0;
    std::vector<GoldMention> mentions;
    Cardinality cardinality = Cardinality::Singular;
    std::size_t declared_count = 1;
    std::vector<EntityId> members;           // group chains
    std::optional<EntityId> scene_entity;    // singular chains of generated stories

    bool is_group() const { return cardinality != Cardinality::Singular; }
    friend bool operator==(const GoldChain&, const GoldChain&) = default;
};

struct RenderedStory {
    std::vector<std::string> sentences;
    std::vector<GoldTriplet> triplets;
    std::vector<GoldChain> chains;
    std::vector<std::optional<EntityId>> chain_of_entity;   // scene id -> chain id
};

struct SelectorQuery {
    Quantifier quantifier = Quantifier::Unique;
    std::vector<EntityId> ids;   // chain ids, ascending

    friend bool operator==(const SelectorQuery&, const SelectorQuery&) = default;
};

struct Question {
    std::string id;
    QuestionMode mode = QuestionMode::YN;
    std::string text;
    std::vector<RelationType> candidates;       // FR
    bool gold_yes = false;                      // YN
    std::vector<RelationType> gold_relations;   // FR, canonical order
    std::size_t hops = 1;
    // Resolved query used when the pipeline runs on gold annotations.
    SelectorQuery trajector;
    SelectorQuery landmark;
    std::optional<RelationType> relation;       // YN

    bool quantified() const {
        return trajector.quantifier != Quantifier::Unique || landmark.quantifier != Quantifier::Unique;
    }
    friend bool operator==(const Question&, const Question&) = default;
};

// Facts over scene entity ids: every containment edge (parent first) plus
// sibling relations forming a connected graph inside each block and across
// blocks.
std::vector<Fact> select_stated_facts(const Scene& scene, const GenConfig& config, Rng& rng);

RenderedStory render_story(const Scene& scene, const std::vector<Fact>& facts, const GenConfig& config, Rng& rng,
                           const RelationLexicon& lexicon = RelationLexicon::defaults());

struct QuestionBatch {
    std::vector<Question> questions;
    std::vector<std::string> warnings;
};

QuestionBatch generate_questions(const Scene& scene, const std::vector<Fact>& facts, const RenderedStory& story,
                                 const GenConfig& config, Rng& rng, const std::string& id_prefix = "q",
                                 const RelationLexicon& lexicon = RelationLexicon::defaults());

// NEAR/FAR, DC/EC and PO/EQ swap; everything else maps to its reverse.
RelationType contrast(RelationType r);

// One YN question per triplet; odd positions get the contrasting relation and
// gold No. Pronoun and generic phrases are replaced by a descriptive mention
// of the same chain when `chains` provides one.
std::vector<Question> synthesize_extra_questions(const std::vector<GoldTriplet>& triplets,
                                                 const std::vector<GoldChain>& chains = {},
                                                 const RelationLexicon& lexicon = RelationLexicon::defaults(),
                                                 const AttributeLexicon& attributes = AttributeLexicon::defaults());

struct Story {
    std::string id;
    std::vector<std::string> sentences;
    std::vector<GoldTriplet> gold_triplets;
    std::vector<GoldChain> gold_coref;
    std::optional<Scene> scene;
    std::vector<Fact> stated;   // scene-level facts; not serialized
    std::vector<Question> questions;
};

struct Dataset {
    int format_version = 1;
    std::uint64_t seed = 0;
    GenConfig config;
    std::vector<Story> stories;
};

// Story `index` uses seed config.seed ^ index.
Story generate_story(const GenConfig& config, std::size_t index, std::vector<std::string>* warnings = nullptr);
Dataset generate_dataset(const GenConfig& config, std::size_t stories, std::vector<std::string>* warnings = nullptr);

}  // namespace sqa
