#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sqa/coref.hpp"
#include "sqa/engine.hpp"
#include "sqa/forge.hpp"
#include "sqa/parser.hpp"

namespace sqa {

enum class PipelineMode : std::uint8_t { GoldTriplets, FullParse };

std::string_view to_string(PipelineMode m);
std::optional<PipelineMode> pipeline_mode_from_string(std::string_view s);

struct ResolvedQuery {
    Quantifier trajector_quantifier = Quantifier::Unique;
    std::vector<EntityId> trajectors;
    Quantifier landmark_quantifier = Quantifier::Unique;
    std::vector<EntityId> landmarks;
    RelationType relation = RelationType::DC;
};

// Q1 t in T. Q2 l in L. query(t, r, l) = True, with All read as "for all" and
// Any/Unique as "exists". False and Unknown both give No.
bool answer_yn(const ClosureResult& closure, const ResolvedQuery& query);

// Candidates that hold between the pair, in canonical relation order.
std::vector<RelationType> answer_fr(const ClosureResult& closure, EntityId a, EntityId b,
                                    const std::vector<RelationType>& candidates);

struct Prediction {
    std::string question_id;
    QuestionMode mode = QuestionMode::YN;
    bool yes = false;                        // YN
    std::vector<RelationType> relations;     // FR
    bool abstained = false;
    std::string error;                       // reason for abstaining
    std::vector<DerivationTree> trace;       // derivations behind a positive answer
};

struct PipelineOptions {
    PipelineMode mode = PipelineMode::GoldTriplets;
    ParseMode parse_mode = ParseMode::Strict;
    bool trace = false;
    double triplet_dropout = 0.0;            // fraction of triplets discarded before reasoning
    std::uint64_t dropout_seed = 0;
    const RelationLexicon* relations = &RelationLexicon::defaults();
    const AttributeLexicon* attributes = &AttributeLexicon::defaults();
    LinkOptions link;
    ClosureOptions closure;
};

// Story-level view after extraction and linking: facts over chain ids.
struct StoryFacts {
    std::vector<Fact> facts;
    std::vector<CorefChain> chains;          // FullParse only
    std::vector<Mention> mentions;           // FullParse only
};

StoryFacts gold_story_facts(const Story& story);
StoryFacts parsed_story_facts(const Story& story, const PipelineOptions& options);

std::vector<Prediction> run_pipeline(const Dataset& dataset, const PipelineOptions& options = {});

}  // namespace sqa
