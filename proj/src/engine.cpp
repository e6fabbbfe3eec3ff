#include "sqa/engine.hpp"

#include <algorithm>
#include <bit>

namespace sqa {

std::string_view to_string(Rule rule) {
    switch (rule) {
        case Rule::Stated: return "Stated";
        case Rule::Not: return "Not";
        case Rule::Inverse: return "Inverse";
        case Rule::Symmetry: return "Symmetry";
        case Rule::Transitivity: return "Transitivity";
        case Rule::Combination: return "Combination";
    }
    return "?";
}

std::optional<Rule> rule_from_string(std::string_view name) {
    for (auto r : {Rule::Stated, Rule::Not, Rule::Inverse, Rule::Symmetry, Rule::Transitivity, Rule::Combination})
        if (to_string(r) == name) return r;
    return std::nullopt;
}

std::string_view to_string(TruthValue v) {
    switch (v) {
        case TruthValue::True: return "True";
        case TruthValue::False: return "False";
        case TruthValue::Unknown: return "Unknown";
    }
    return "?";
}

Fact Fact::stated(EntityId subject, RelationType relation, EntityId object, std::size_t sentence) {
    Fact f;
    f.triple = {subject, relation, object};
    f.provenance.sentence = sentence;
    return f;
}

std::string format_fact(const Triple& t, Polarity p) {
    std::string out = p == Polarity::Negative ? "NOT " : "";
    out += to_string(t.relation);
    out += '(' + std::to_string(t.subject) + ',' + std::to_string(t.object) + ')';
    return out;
}

namespace {

Fact derived(Triple t, Polarity p, Rule rule, std::initializer_list<Triple> premises) {
    Fact f;
    f.triple = t;
    f.polarity = p;
    f.provenance.rule = rule;
    f.provenance.premises.assign(premises.begin(), premises.end());
    return f;
}

}  // namespace

std::optional<Fact> apply_inverse(const Fact& f) {
    if (!f.positive() || !is_ordered(f.triple.relation)) return std::nullopt;
    const auto& t = f.triple;
    return derived({t.object, reverse(t.relation), t.subject}, Polarity::Positive, Rule::Inverse, {t});
}

std::optional<Fact> apply_symmetry(const Fact& f) {
    if (!f.positive() || !is_symmetric(f.triple.relation)) return std::nullopt;
    const auto& t = f.triple;
    return derived({t.object, t.relation, t.subject}, Polarity::Positive, Rule::Symmetry, {t});
}

std::optional<Fact> apply_not(const Fact& f) {
    if (!f.positive() || !is_ordered(f.triple.relation)) return std::nullopt;
    const auto& t = f.triple;
    return derived({t.subject, reverse(t.relation), t.object}, Polarity::Negative, Rule::Not, {t});
}

std::optional<Fact> apply_transitivity(const Fact& f1, const Fact& f2) {
    if (!f1.positive() || !f2.positive()) return std::nullopt;
    const auto& a = f1.triple;
    const auto& b = f2.triple;
    if (a.relation != b.relation || !is_ordered(a.relation) || a.object != b.subject) return std::nullopt;
    return derived({a.subject, a.relation, b.object}, Polarity::Positive, Rule::Transitivity, {a, b});
}

std::optional<Fact> apply_combination(const Fact& f1, const Fact& f2, const Fact& f3) {
    if (!f1.positive() || !f2.positive() || !f3.positive()) return std::nullopt;
    const auto& part = f1.triple;
    const auto& dir = f2.triple;
    const auto& other = f3.triple;
    if (!is_proper_part(part.relation) || !is_proper_part(other.relation)) return std::nullopt;
    if (class_of(dir.relation) != RelationClass::Dir) return std::nullopt;
    if (part.object != dir.subject || other.object != dir.object) return std::nullopt;
    return derived({part.subject, dir.relation, other.subject}, Polarity::Positive, Rule::Combination,
                   {part, dir, other});
}

std::optional<Fact> apply_rule(Rule rule, std::span<const Fact> premises) {
    switch (rule) {
        case Rule::Stated:
            return std::nullopt;
        case Rule::Not:
            return premises.size() == 1 ? apply_not(premises[0]) : std::nullopt;
        case Rule::Inverse:
            return premises.size() == 1 ? apply_inverse(premises[0]) : std::nullopt;
        case Rule::Symmetry:
            return premises.size() == 1 ? apply_symmetry(premises[0]) : std::nullopt;
        case Rule::Transitivity:
            return premises.size() == 2 ? apply_transitivity(premises[0], premises[1]) : std::nullopt;
        case Rule::Combination:
            return premises.size() == 3 ? apply_combination(premises[0], premises[1], premises[2]) : std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// ClosureResult

const ClosureResult::Entry* ClosureResult::find(const Triple& t, Polarity p) const {
    if (t.subject >= entity_count_ || t.object >= entity_count_) return nullptr;
    auto it = index_.find(key(t, p));
    return it == index_.end() ? nullptr : &entries_[it->second];
}

bool ClosureResult::contains(const Triple& t, Polarity p) const { return find(t, p) != nullptr; }

std::size_t ClosureResult::depth(const Triple& t, Polarity p) const {
    const auto* e = find(t, p);
    return e ? e->depth : 0;
}

std::vector<Triple> ClosureResult::positives() const {
    std::vector<Triple> out;
    out.reserve(positive_count_);
    for (const auto& e : entries_)
        if (e.polarity == Polarity::Positive) out.push_back(e.triple);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Triple> ClosureResult::negatives() const {
    std::vector<Triple> out;
    out.reserve(entries_.size() - positive_count_);
    for (const auto& e : entries_)
        if (e.polarity == Polarity::Negative) out.push_back(e.triple);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Semi-naive evaluation

namespace {

// Square bit matrix, allocated on first use.
class BitMatrix {
public:
    bool allocated() const { return !bits_.empty(); }

    void allocate(std::size_t n) {
        words_ = (n + 63) / 64;
        bits_.assign(std::max<std::size_t>(n * words_, 1), 0);
    }

    bool test(std::size_t r, std::size_t c) const {
        return allocated() && ((bits_[r * words_ + c / 64] >> (c % 64)) & 1u);
    }
    void set(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64); }
    void reset(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] &= ~(std::uint64_t{1} << (c % 64)); }

    const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * words_; }
    std::size_t words() const { return words_; }

private:
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

template <typename F>
void for_each_bit(const std::uint64_t* row, std::size_t words, F&& fn) {
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = row[w];
        while (bits) {
            int b = std::countr_zero(bits);
            bits &= bits - 1;
            fn(static_cast<EntityId>(w * 64 + static_cast<std::size_t>(b)));
        }
    }
}

constexpr std::array<RelationType, 2> kProperParts = {RelationType::TPP, RelationType::NTPP};

}  // namespace

class ClosureBuilder {
public:
    ClosureBuilder(ClosureResult& out, std::size_t n, const ClosureOptions& options)
        : out_(out), n_(n), options_(options) {
        out_.entity_count_ = n;
    }

    void seed(const std::vector<Fact>& stated) {
        for (const auto& f : stated) {
            auto idx = static_cast<std::uint32_t>(out_.entries_.size());
            out_.entries_.push_back({f.triple, Polarity::Positive, Rule::Stated, 0, 1, f.provenance.sentence, {}});
            out_.index_.emplace(ClosureResult::key(f.triple, Polarity::Positive), idx);
            mark_known(f.triple);
            delta_.push_back(idx);
        }
        out_.stated_count_ = stated.size();
    }

    void run() {
        while (!delta_.empty()) {
            next_.clear();
            for (auto idx : delta_) fire(idx);
            for (auto idx : next_) {
                const auto& t = out_.entries_[idx].triple;
                mark_known(t);
                auto r = index_of(t.relation);
                pending_rows_[r].reset(t.subject, t.object);
                pending_cols_[r].reset(t.object, t.subject);
            }
            delta_.swap(next_);
        }
        finish();
    }

private:
    BitMatrix& ensure(std::array<BitMatrix, kRelationCount>& m, RelationType r) {
        auto& bm = m[index_of(r)];
        if (!bm.allocated()) bm.allocate(n_);
        return bm;
    }

    void mark_known(const Triple& t) {
        ensure(rows_, t.relation).set(t.subject, t.object);
        ensure(cols_, t.relation).set(t.object, t.subject);
    }

    bool seen(const Triple& t) const {
        auto r = index_of(t.relation);
        return rows_[r].test(t.subject, t.object) || pending_rows_[r].test(t.subject, t.object);
    }

    std::uint32_t lookup(const Triple& t) const {
        return out_.index_.find(ClosureResult::key(t, Polarity::Positive))->second;
    }

    void check_capacity() const {
        if (out_.entries_.size() - out_.stated_count_ > options_.max_derived)
            throw CapacityError("closure exceeded " + std::to_string(options_.max_derived) + " derived facts");
    }

    void add_positive(const Triple& t, Rule rule, std::initializer_list<std::uint32_t> premises) {
        if (seen(t)) return;
        auto idx = static_cast<std::uint32_t>(out_.entries_.size());
        ClosureResult::Entry e{t, Polarity::Positive, rule, static_cast<std::uint8_t>(premises.size()), 0, 0, {}};
        std::uint32_t depth = 0;
        std::size_t i = 0;
        for (auto p : premises) {
            e.premises[i++] = p;
            depth = std::max(depth, out_.entries_[p].depth);
        }
        e.depth = depth + 1;
        out_.entries_.push_back(e);
        out_.index_.emplace(ClosureResult::key(t, Polarity::Positive), idx);
        ensure(pending_rows_, t.relation).set(t.subject, t.object);
        ensure(pending_cols_, t.relation).set(t.object, t.subject);
        next_.push_back(idx);
        check_capacity();
    }

    void add_negative(const Triple& t, std::uint32_t premise) {
        auto& neg = ensure(negatives_, t.relation);
        if (neg.test(t.subject, t.object)) return;
        neg.set(t.subject, t.object);
        auto idx = static_cast<std::uint32_t>(out_.entries_.size());
        out_.entries_.push_back(
            {t, Polarity::Negative, Rule::Not, 1, out_.entries_[premise].depth + 1, 0, {premise, 0, 0}});
        out_.index_.emplace(ClosureResult::key(t, Polarity::Negative), idx);
        check_capacity();
    }

    void fire(std::uint32_t idx) {
        const Triple d = out_.entries_[idx].triple;
        const auto r = d.relation;

        if (is_ordered(r)) {
            add_positive({d.object, reverse(r), d.subject}, Rule::Inverse, {idx});
            add_negative({d.subject, reverse(r), d.object}, idx);
            transitivity(idx, d);
        } else {
            add_positive({d.object, r, d.subject}, Rule::Symmetry, {idx});
        }
        combination(idx, d);
    }

    void transitivity(std::uint32_t idx, const Triple& d) {
        const auto r = index_of(d.relation);
        const auto& rows = rows_[r];
        const auto& cols = cols_[r];
        const auto words = rows.words();

        // d = R(x,z) first: R(z,y) => R(x,y)
        {
            const auto* zr = rows.row(d.object);
            const auto* xr = rows.row(d.subject);
            const auto& pend = pending_rows_[r];
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t bits = zr[w] & ~xr[w];
                if (pend.allocated()) bits &= ~pend.row(d.subject)[w];
                while (bits) {
                    auto y = static_cast<EntityId>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                    bits &= bits - 1;
                    add_positive({d.subject, d.relation, y}, Rule::Transitivity,
                                 {idx, lookup({d.object, d.relation, y})});
                }
            }
        }
        // d = R(z,y) second: R(w,z) => R(w,y)
        {
            const auto* zc = cols.row(d.subject);
            const auto* yc = cols.row(d.object);
            const auto& pend = pending_cols_[r];
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t bits = zc[w] & ~yc[w];
                if (pend.allocated()) bits &= ~pend.row(d.object)[w];
                while (bits) {
                    auto x = static_cast<EntityId>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                    bits &= bits - 1;
                    add_positive({x, d.relation, d.object}, Rule::Transitivity,
                                 {lookup({x, d.relation, d.subject}), idx});
                }
            }
        }
    }

    // pp(X,Z), R(Z,H), pp'(Y,H) => R(X,Y); d may fill any of the three slots.
    void combination(std::uint32_t idx, const Triple& d) {
        if (is_proper_part(d.relation)) {
            // d = pp(X,Z)
            const EntityId x = d.subject, z = d.object;
            for (auto dir : kDirectionalRelations) {
                const auto& dir_rows = rows_[index_of(dir)];
                if (!dir_rows.allocated()) continue;
                for_each_bit(dir_rows.row(z), dir_rows.words(), [&](EntityId h) {
                    for (auto pp : kProperParts) {
                        const auto& pp_cols = cols_[index_of(pp)];
                        if (!pp_cols.allocated()) continue;
                        for_each_bit(pp_cols.row(h), pp_cols.words(), [&](EntityId y) {
                            add_positive({x, dir, y}, Rule::Combination,
                                         {idx, lookup({z, dir, h}), lookup({y, pp, h})});
                        });
                    }
                });
            }
            // d = pp'(Y,H)
            const EntityId y = d.subject, h = d.object;
            for (auto dir : kDirectionalRelations) {
                const auto& dir_cols = cols_[index_of(dir)];
                if (!dir_cols.allocated()) continue;
                for_each_bit(dir_cols.row(h), dir_cols.words(), [&](EntityId zz) {
                    for (auto pp : kProperParts) {
                        const auto& pp_cols = cols_[index_of(pp)];
                        if (!pp_cols.allocated()) continue;
                        for_each_bit(pp_cols.row(zz), pp_cols.words(), [&](EntityId xx) {
                            add_positive({xx, dir, y}, Rule::Combination,
                                         {lookup({xx, pp, zz}), lookup({zz, dir, h}), idx});
                        });
                    }
                });
            }
        } else if (class_of(d.relation) == RelationClass::Dir) {
            // d = R(Z,H)
            const EntityId z = d.subject, h = d.object;
            for (auto pp1 : kProperParts) {
                const auto& c1 = cols_[index_of(pp1)];
                if (!c1.allocated()) continue;
                for_each_bit(c1.row(z), c1.words(), [&](EntityId x) {
                    for (auto pp2 : kProperParts) {
                        const auto& c2 = cols_[index_of(pp2)];
                        if (!c2.allocated()) continue;
                        for_each_bit(c2.row(h), c2.words(), [&](EntityId y) {
                            add_positive({x, d.relation, y}, Rule::Combination,
                                         {lookup({x, pp1, z}), idx, lookup({y, pp2, h})});
                        });
                    }
                });
            }
        }
    }

    void finish() {
        std::size_t positives = 0;
        for (const auto& e : out_.entries_)
            if (e.polarity == Polarity::Positive) ++positives;
        out_.positive_count_ = positives;

        std::optional<Triple> first;
        for (const auto& e : out_.entries_) {
            if (e.polarity != Polarity::Negative) continue;
            const auto& t = e.triple;
            if (!rows_[index_of(t.relation)].test(t.subject, t.object)) continue;
            if (!first || t < *first) first = t;
        }
        if (first) out_.contradiction_ = Contradiction{*first};
    }

    ClosureResult& out_;
    std::size_t n_;
    const ClosureOptions& options_;
    std::array<BitMatrix, kRelationCount> rows_, cols_, pending_rows_, pending_cols_, negatives_;
    std::vector<std::uint32_t> delta_, next_;
};

ClosureResult closure(std::span<const Fact> stated, const ClosureOptions& options) {
    std::vector<Fact> facts;
    facts.reserve(stated.size());
    EntityId max_id = 0;
    for (const auto& f : stated) {
        if (!f.positive()) throw std::invalid_argument("stated fact " + format_fact(f.triple, f.polarity) + " is negative");
        if (f.triple.subject == f.triple.object)
            throw std::invalid_argument("stated fact " + format_fact(f.triple) + " relates an entity to itself");
        max_id = std::max({max_id, f.triple.subject, f.triple.object});
        Fact copy;
        copy.triple = f.triple;
        copy.provenance.sentence = f.provenance.sentence;
        facts.push_back(std::move(copy));
    }
    std::sort(facts.begin(), facts.end(), [](const Fact& a, const Fact& b) {
        if (a.triple != b.triple) return a.triple < b.triple;
        return a.provenance.sentence < b.provenance.sentence;
    });
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());

    std::size_t n = facts.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
    if (n > options.max_entities)
        throw CapacityError("closure over " + std::to_string(n) + " entities exceeds limit of " +
                            std::to_string(options.max_entities));

    ClosureResult result;
    ClosureBuilder builder(result, n, options);
    builder.seed(facts);
    builder.run();
    return result;
}

TruthValue query(const ClosureResult& result, EntityId subject, RelationType relation, EntityId object) {
    if (const auto& c = result.contradiction())
        throw ContradictionError("closure is contradictory at " + format_fact(c->positive));
    Triple t{subject, relation, object};
    if (result.contains(t, Polarity::Positive)) return TruthValue::True;
    if (result.contains(t, Polarity::Negative)) return TruthValue::False;
    return TruthValue::Unknown;
}

// ---------------------------------------------------------------------------
// Traces

std::size_t DerivationTree::depth() const {
    std::size_t d = 0;
    for (const auto& p : premises) d = std::max(d, p.depth());
    return d + 1;
}

std::size_t DerivationTree::rule_applications() const {
    if (rule == Rule::Stated) return 0;
    std::size_t n = 1;
    for (const auto& p : premises) n += p.rule_applications();
    return n;
}

namespace {

DerivationTree build_tree(const ClosureResult& result, std::uint32_t idx) {
    const auto& e = result.entries()[idx];
    DerivationTree tree{e.triple, e.polarity, e.rule, e.sentence, {}};
    tree.premises.reserve(e.premise_count);
    for (std::uint8_t i = 0; i < e.premise_count; ++i) tree.premises.push_back(build_tree(result, e.premises[i]));
    return tree;
}

}  // namespace

DerivationTree explain(const ClosureResult& result, const Triple& fact, Polarity polarity) {
    const auto* e = result.find(fact, polarity);
    if (!e) throw NotFoundError(format_fact(fact, polarity) + " was not derived");
    return build_tree(result, static_cast<std::uint32_t>(e - result.entries().data()));
}

std::optional<Fact> replay(const DerivationTree& tree) {
    if (tree.rule == Rule::Stated) {
        if (tree.polarity != Polarity::Positive || !tree.premises.empty()) return std::nullopt;
        return Fact::stated(tree.fact.subject, tree.fact.relation, tree.fact.object, tree.sentence);
    }
    std::vector<Fact> premises;
    premises.reserve(tree.premises.size());
    for (const auto& p : tree.premises) {
        auto f = replay(p);
        if (!f) return std::nullopt;
        premises.push_back(std::move(*f));
    }
    auto conclusion = apply_rule(tree.rule, premises);
    if (!conclusion || conclusion->triple != tree.fact || conclusion->polarity != tree.polarity) return std::nullopt;
    return conclusion;
}

}  // namespace sqa
