#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sqa {

// Declaration order is the canonical relation order used everywhere output
// has to be stable (FR answers, serialized closures, reports).
enum class RelationType : std::uint8_t {
    DC, EC, PO, EQ, TPP, NTPP, TPPI, NTPPI,
    LEFT, RIGHT, BELOW, ABOVE, BEHIND, FRONT,
    FAR, NEAR,
};

inline constexpr std::size_t kRelationCount = 16;

inline constexpr std::array<RelationType, kRelationCount> kAllRelations = {
    RelationType::DC,    RelationType::EC,     RelationType::PO,    RelationType::EQ,
    RelationType::TPP,   RelationType::NTPP,   RelationType::TPPI,  RelationType::NTPPI,
    RelationType::LEFT,  RelationType::RIGHT,  RelationType::BELOW, RelationType::ABOVE,
    RelationType::BEHIND, RelationType::FRONT, RelationType::FAR,   RelationType::NEAR,
};

inline constexpr std::array<RelationType, 6> kDirectionalRelations = {
    RelationType::LEFT, RelationType::RIGHT, RelationType::BELOW,
    RelationType::ABOVE, RelationType::BEHIND, RelationType::FRONT,
};

// Rule-schema classes. Dir and PP feed Not/Inverse/Transitivity; Dis and
// RccNonPp feed Symmetry.
enum class RelationClass : std::uint8_t { Dir, Dis, PP, RccNonPp };

constexpr std::size_t index_of(RelationType r) { return static_cast<std::size_t>(r); }

constexpr RelationType reverse(RelationType r) {
    switch (r) {
        case RelationType::LEFT:   return RelationType::RIGHT;
        case RelationType::RIGHT:  return RelationType::LEFT;
        case RelationType::BELOW:  return RelationType::ABOVE;
        case RelationType::ABOVE:  return RelationType::BELOW;
        case RelationType::BEHIND: return RelationType::FRONT;
        case RelationType::FRONT:  return RelationType::BEHIND;
        case RelationType::TPP:    return RelationType::TPPI;
        case RelationType::TPPI:   return RelationType::TPP;
        case RelationType::NTPP:   return RelationType::NTPPI;
        case RelationType::NTPPI:  return RelationType::NTPP;
        default:                   return r;
    }
}

constexpr RelationClass class_of(RelationType r) {
    switch (r) {
        case RelationType::LEFT: case RelationType::RIGHT:
        case RelationType::BELOW: case RelationType::ABOVE:
        case RelationType::BEHIND: case RelationType::FRONT:
            return RelationClass::Dir;
        case RelationType::FAR: case RelationType::NEAR:
            return RelationClass::Dis;
        case RelationType::TPP: case RelationType::NTPP:
        case RelationType::TPPI: case RelationType::NTPPI:
            return RelationClass::PP;
        default:
            return RelationClass::RccNonPp;
    }
}

// Dir or PP: the domain of the Not, Inverse and Transitivity schemas.
constexpr bool is_ordered(RelationType r) {
    auto c = class_of(r);
    return c == RelationClass::Dir || c == RelationClass::PP;
}

constexpr bool is_symmetric(RelationType r) { return !is_ordered(r); }

// TPP or NTPP, the "*PP" slot of the Combination schema.
constexpr bool is_proper_part(RelationType r) {
    return r == RelationType::TPP || r == RelationType::NTPP;
}

std::string_view to_string(RelationType r);
std::string_view to_string(RelationClass c);
std::optional<RelationType> relation_from_string(std::string_view name);

// Lowercase and collapse whitespace; punctuation is left alone.
std::string normalize_phrase(std::string_view text);
std::vector<std::string> split_words(std::string_view text);

class LexiconError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LexiconMatch {
    RelationType relation;
    std::size_t token_count;
    std::string_view expression;
};

// Surface expressions for each relation type. Insertion order is kept: the
// first expression registered for a relation is the one used for rendering.
class RelationLexicon {
public:
    struct Entry {
        std::vector<std::string> tokens;
        std::string expression;
        RelationType relation;
    };

    RelationLexicon() = default;

    static const RelationLexicon& defaults();
    // Both reject text that leaves a relation without any expression.
    static RelationLexicon parse(std::string_view text);
    static RelationLexicon load(const std::filesystem::path& path);

    void add(std::string_view expression, RelationType relation);

    // Longest expression that is a token prefix of `tokens`.
    std::optional<LexiconMatch> match_prefix(std::span<const std::string> tokens) const;

    // Every relation type must be covered.
    void validate() const;

    std::string_view preferred_expression(RelationType r) const;
    std::vector<std::string_view> expressions_for(RelationType r) const;
    const std::vector<Entry>& entries() const { return entries_; }
    bool contains_expression(std::string_view normalized) const;

    std::string serialize() const;

private:
    std::vector<Entry> entries_;
};

std::optional<RelationType> lookup_expression(const RelationLexicon& lexicon, std::string_view phrase);

}  // namespace sqa
