#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sqa/relation.hpp"

namespace sqa {

// Dense per-story entity identifier (0..n-1), assigned by the coref linker.
using EntityId = std::uint32_t;

enum class Polarity : std::uint8_t { Positive, Negative };

enum class Rule : std::uint8_t { Stated, Not, Inverse, Symmetry, Transitivity, Combination };

std::string_view to_string(Rule rule);
std::optional<Rule> rule_from_string(std::string_view name);

enum class TruthValue : std::uint8_t { True, False, Unknown };

std::string_view to_string(TruthValue v);

struct Triple {
    EntityId subject = 0;
    RelationType relation = RelationType::DC;
    EntityId object = 0;

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct Provenance {
    Rule rule = Rule::Stated;
    std::size_t sentence = 0;       // stated facts only
    std::vector<Triple> premises;   // derived facts only; premises are positive
};

struct Fact {
    Triple triple;
    Polarity polarity = Polarity::Positive;
    Provenance provenance;

    static Fact stated(EntityId subject, RelationType relation, EntityId object, std::size_t sentence = 0);

    bool positive() const { return polarity == Polarity::Positive; }
    // Identity is (triple, polarity); provenance does not take part.
    friend bool operator==(const Fact& a, const Fact& b) {
        return a.triple == b.triple && a.polarity == b.polarity;
    }
};

// "LEFT(0,1)" / "NOT RIGHT(0,1)"
std::string format_fact(const Triple& t, Polarity p = Polarity::Positive);

// Single schema applications. Each returns the conclusion with derived
// provenance, or nullopt when the schema does not fire for these premises.
std::optional<Fact> apply_inverse(const Fact& f);
std::optional<Fact> apply_symmetry(const Fact& f);
std::optional<Fact> apply_not(const Fact& f);
std::optional<Fact> apply_transitivity(const Fact& f1, const Fact& f2);
// pp(X,Z), R(Z,H), pp'(Y,H) => R(X,Y) with pp, pp' in {TPP, NTPP}, R directional.
std::optional<Fact> apply_combination(const Fact& f1, const Fact& f2, const Fact& f3);
// Dispatch on `rule`; premises in schema order.
std::optional<Fact> apply_rule(Rule rule, std::span<const Fact> premises);

class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ContradictionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClosureOptions {
    std::size_t max_derived = 10'000'000;
    std::size_t max_entities = 1u << 14;
};

struct Contradiction {
    Triple positive;   // the fact holds positively and its negation was derived
};

struct DerivationTree {
    Triple fact;
    Polarity polarity = Polarity::Positive;
    Rule rule = Rule::Stated;
    std::size_t sentence = 0;
    std::vector<DerivationTree> premises;

    // 1 for a stated fact.
    std::size_t depth() const;
    std::size_t rule_applications() const;
};

class ClosureResult {
public:
    struct Entry {
        Triple triple;
        Polarity polarity;
        Rule rule;
        std::uint8_t premise_count;
        std::uint32_t depth;
        std::size_t sentence;
        std::array<std::uint32_t, 3> premises;
    };

    ClosureResult() = default;

    std::size_t entity_count() const { return entity_count_; }
    std::size_t stated_count() const { return stated_count_; }
    std::size_t size() const { return entries_.size(); }

    bool contains(const Triple& t, Polarity p = Polarity::Positive) const;
    const Entry* find(const Triple& t, Polarity p = Polarity::Positive) const;

    // Canonical (subject, relation, object) order.
    std::vector<Triple> positives() const;
    std::vector<Triple> negatives() const;
    std::size_t positive_count() const { return positive_count_; }
    std::size_t negative_count() const { return entries_.size() - positive_count_; }

    const std::optional<Contradiction>& contradiction() const { return contradiction_; }
    const std::vector<Entry>& entries() const { return entries_; }

    // Depth of the shallowest derivation (1 = stated); 0 when absent.
    std::size_t depth(const Triple& t, Polarity p = Polarity::Positive) const;

private:
    friend class ClosureBuilder;

    struct KeyHash {
        std::size_t operator()(std::uint64_t k) const noexcept {
            k ^= k >> 33;
            k *= 0xff51afd7ed558ccdULL;
            k ^= k >> 33;
            return static_cast<std::size_t>(k);
        }
    };

    static std::uint64_t key(const Triple& t, Polarity p) {
        return (static_cast<std::uint64_t>(t.subject) << 34) | (static_cast<std::uint64_t>(t.object) << 5) |
               (static_cast<std::uint64_t>(index_of(t.relation)) << 1) | (p == Polarity::Negative ? 1u : 0u);
    }

    std::size_t entity_count_ = 0;
    std::size_t stated_count_ = 0;
    std::size_t positive_count_ = 0;
    std::vector<Entry> entries_;
    std::unordered_map<std::uint64_t, std::uint32_t, KeyHash> index_;
    std::optional<Contradiction> contradiction_;
};

// Forward-chains the five schemas to fixpoint (semi-naive, round by round).
// Input order does not matter: stated facts are canonicalized first, so the
// result, its traces and its serialization depend only on the fact set.
ClosureResult closure(std::span<const Fact> stated, const ClosureOptions& options = {});

TruthValue query(const ClosureResult& result, EntityId subject, RelationType relation, EntityId object);

DerivationTree explain(const ClosureResult& result, const Triple& fact, Polarity polarity = Polarity::Positive);

// Re-applies every rule in the tree bottom-up; returns the re-derived
// conclusion or nullopt if some step does not fire.
std::optional<Fact> replay(const DerivationTree& tree);

}  // namespace sqa
