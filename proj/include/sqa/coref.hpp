#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqa/engine.hpp"

namespace sqa {

enum class Quantifier : std::uint8_t { Unique, Any, All };

std::string_view to_string(Quantifier q);
std::optional<Quantifier> quantifier_from_string(std::string_view name);

enum class Cardinality : std::uint8_t { Singular, Plural, Group };

// Normalized lowercase attribute values; empty means "not given".
struct Attributes {
    std::string determiner;
    std::string size;
    std::string color;
    std::string noun;     // singular form; empty for generic nouns ("object")
    std::string letter;   // block letter

    // No key carries two different values.
    bool compatible_with(const Attributes& other) const;
    // Every matching key given here is given with the same value in `other`.
    bool subset_of(const Attributes& other) const;
    void merge(const Attributes& other);

    friend bool operator==(const Attributes&, const Attributes&) = default;
};

struct Mention {
    std::string surface;          // normalized NP text, determiner included
    std::size_t sentence = 0;
    Attributes attributes;
    Cardinality cardinality = Cardinality::Singular;
    std::size_t count = 1;        // n for Plural(n)
    bool pronoun = false;

    // Surface without the leading determiner or number word.
    std::string head() const;
};

class CorefError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AmbiguityError : public CorefError {
public:
    using CorefError::CorefError;
};

class ArityError : public CorefError {
public:
    using CorefError::CorefError;
};

class NoMatchError : public CorefError {
public:
    using CorefError::CorefError;
};

// Word lists that drive attribute extraction. Loaded from JSON with keys
// `colors`, `shapes`, `sizes`, `generic_nouns` (and optionally `pronouns`).
class AttributeLexicon {
public:
    std::vector<std::string> colors;
    std::vector<std::string> shapes;
    std::vector<std::string> sizes;
    std::vector<std::string> generic_nouns;
    std::vector<std::string> pronouns;

    static const AttributeLexicon& defaults();
    static AttributeLexicon from_json_text(std::string_view text);
    static AttributeLexicon load(const std::filesystem::path& path);
    std::string to_json_text() const;

    bool is_color(std::string_view w) const;
    bool is_size(std::string_view w) const;
    bool is_generic(std::string_view w) const;
    bool is_pronoun(std::string_view w) const;
    // Singular form of a known shape noun, accepting regular plurals.
    std::optional<std::string> shape_of(std::string_view w) const;
};

// "one".."ten" or digits; nullopt otherwise.
std::optional<std::size_t> number_word(std::string_view w);
std::string_view number_name(std::size_t n);
bool is_determiner(std::string_view w);

// Builds a mention from an already-delimited NP token sequence
// (determiner/number, optional size, optional color, noun) or "block X".
Mention make_mention(std::span<const std::string> tokens, std::size_t sentence, const AttributeLexicon& lexicon);

struct CorefChain {
    EntityId id = 0;
    std::vector<std::size_t> mentions;   // indices into the linked mention list
    Attributes canonical;
    Cardinality cardinality = Cardinality::Singular;
    std::size_t declared_count = 1;      // Plural(n) groups
    std::vector<EntityId> members;       // group chains only

    bool is_group() const { return cardinality != Cardinality::Singular; }
};

struct LinkOptions {
    bool resolve_pronouns = true;
};

std::vector<CorefChain> link_story(std::span<const Mention> mentions, const LinkOptions& options = {});

// mention index -> chain id
std::vector<EntityId> chain_of_mentions(std::span<const CorefChain> chains, std::size_t mention_count);

std::vector<EntityId> expand_group(const CorefChain& chain);

struct EntitySelector {
    Attributes attributes;
    Quantifier quantifier = Quantifier::Unique;
};

Quantifier quantifier_of(const Mention& m);

struct ResolvedSelector {
    EntitySelector selector;
    std::vector<EntityId> ids;   // ascending
};

ResolvedSelector resolve_question_entity(const Mention& mention, std::span<const CorefChain> chains,
                                         std::span<const Mention> story_mentions);

}  // namespace sqa
