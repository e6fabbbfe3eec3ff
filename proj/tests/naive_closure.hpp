#pragma once

// Exhaustive fixpoint iteration used as a reference for the closure engine.
// Relation tables are written out here again on purpose so that a mistake in
// the library tables cannot hide in both places.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace naive {

// Names double as the relation identity.
inline const std::map<std::string, std::string>& reverse_table() {
    static const std::map<std::string, std::string> t{
        {"LEFT", "RIGHT"}, {"RIGHT", "LEFT"},   {"BELOW", "ABOVE"}, {"ABOVE", "BELOW"},
        {"BEHIND", "FRONT"}, {"FRONT", "BEHIND"}, {"TPP", "TPPI"},   {"TPPI", "TPP"},
        {"NTPP", "NTPPI"}, {"NTPPI", "NTPP"},
    };
    return t;
}

inline bool directional(const std::string& r) {
    return r == "LEFT" || r == "RIGHT" || r == "BELOW" || r == "ABOVE" || r == "BEHIND" || r == "FRONT";
}
inline bool proper_part(const std::string& r) { return r == "TPP" || r == "NTPP" || r == "TPPI" || r == "NTPPI"; }
inline bool distance(const std::string& r) { return r == "FAR" || r == "NEAR"; }
inline bool rcc_non_pp(const std::string& r) { return r == "DC" || r == "EC" || r == "PO" || r == "EQ"; }

// (negated, subject, relation, object)
using Fact = std::tuple<bool, unsigned, std::string, unsigned>;

struct Result {
    std::set<Fact> facts;
    std::map<Fact, unsigned> level;   // 1 = stated
};

inline Result closure(const std::vector<std::tuple<unsigned, std::string, unsigned>>& stated) {
    Result res;
    for (const auto& [s, r, o] : stated) {
        Fact f{false, s, r, o};
        if (res.facts.insert(f).second) res.level[f] = 1;
    }
    for (unsigned round = 2;; ++round) {
        std::vector<Fact> pos;
        for (const auto& f : res.facts)
            if (!std::get<0>(f)) pos.push_back(f);
        std::set<Fact> fresh;
        auto emit = [&](Fact f) {
            if (!res.facts.count(f)) fresh.insert(std::move(f));
        };
        for (const auto& [neg, x, r, y] : pos) {
            if (directional(r) || proper_part(r)) {
                const auto& rev = reverse_table().at(r);
                emit({false, y, rev, x});   // Inverse
                emit({true, x, rev, y});    // Not
            }
            if (distance(r) || rcc_non_pp(r)) emit({false, y, r, x});   // Symmetry
        }
        // Transitivity: R(X,Z), R(Z,Y) -> R(X,Y), all ordered pairs of premises
        for (const auto& [n1, x, r1, z] : pos) {
            if (!(directional(r1) || proper_part(r1))) continue;
            for (const auto& [n2, z2, r2, y] : pos)
                if (r2 == r1 && z2 == z) emit({false, x, r1, y});
        }
        // Combination: pp(X,Z), R(Z,H), pp'(Y,H) -> R(X,Y)
        for (const auto& [n1, x, pp, z] : pos) {
            if (pp != "TPP" && pp != "NTPP") continue;
            for (const auto& [n2, z2, r, h] : pos) {
                if (z2 != z || !directional(r)) continue;
                for (const auto& [n3, y, pp2, h2] : pos)
                    if ((pp2 == "TPP" || pp2 == "NTPP") && h2 == h) emit({false, x, r, y});
            }
        }
        if (fresh.empty()) break;
        for (const auto& f : fresh) {
            res.facts.insert(f);
            res.level[f] = round;
        }
    }
    return res;
}

}  // namespace naive
