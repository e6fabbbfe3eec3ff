#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqa/coref.hpp"
#include "sqa/relation.hpp"

namespace sqa {

// Controlled grammar accepted by the parser:
//
//   STORY-SENT := NP ("is"|"are") REL-EXPR NP ("and" REL-EXPR NP)* "."
//               | NP ("has"|"contains") NP ("and" NP)* "."
//   NP         := ("a"|"an"|"the"|NUMBER) [SIZE] [COLOR] NOUN | "block" LETTER
//   YN-Q       := ("Is"|"Are") QNP REL-EXPR QNP "?"
//   QNP        := ("the"|"any"|"all"|"a"|"an") [SIZE] [COLOR] NOUN | "block" LETTER
//   FR-Q       := "What is the position of" QNP "relative to" QNP "?"
//
// REL-EXPR is any expression of the relation lexicon (longest match wins).
// The pronoun "it" is also accepted as a story NP. In questions "a"/"an"
// read like "any".

class GrammarError : public std::runtime_error {
public:
    GrammarError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (token " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

enum class ParseMode : std::uint8_t { Strict, Lenient };

struct ParsedTriplet {
    Mention trajector;
    std::string indicator;
    Mention landmark;
    std::optional<RelationType> relation;   // nullopt: indicator has no spatial meaning
    std::size_t sentence = 0;
    std::size_t trajector_mention = 0;       // index into the story mention list
    std::size_t landmark_mention = 0;
};

struct SentenceParse {
    std::vector<Mention> mentions;
    std::vector<ParsedTriplet> triplets;     // mention indices local to this sentence
};

struct ParserContext {
    const RelationLexicon* relations = &RelationLexicon::defaults();
    const AttributeLexicon* attributes = &AttributeLexicon::defaults();
    ParseMode mode = ParseMode::Strict;
};

// Splits into lowercase word tokens with '.', '?' and ',' as separate tokens.
std::vector<std::string> tokenize(std::string_view text);

SentenceParse parse_sentence_full(std::string_view sentence, std::size_t sentence_index, const ParserContext& ctx);
std::vector<ParsedTriplet> parse_sentence(std::string_view sentence, const ParserContext& ctx,
                                          std::size_t sentence_index = 0);

enum class QuestionMode : std::uint8_t { YN, FR };

std::string_view to_string(QuestionMode m);
std::optional<QuestionMode> question_mode_from_string(std::string_view s);

struct ParsedQuestion {
    QuestionMode mode = QuestionMode::YN;
    Mention trajector;
    Mention landmark;
    EntitySelector trajector_selector;
    EntitySelector landmark_selector;
    std::optional<RelationType> relation;    // YN only
    std::vector<RelationType> candidates;    // FR only
};

// FR questions take their candidate list from `fr_candidates`.
ParsedQuestion parse_question(std::string_view question, const ParserContext& ctx,
                              const std::vector<RelationType>& fr_candidates);

struct StoryExtraction {
    std::vector<ParsedTriplet> triplets;
    std::vector<Mention> mentions;
};

StoryExtraction extract_story(const std::vector<std::string>& sentences, const ParserContext& ctx);

}  // namespace sqa
