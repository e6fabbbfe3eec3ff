#include "sqa/relation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sqa {

namespace {

constexpr std::array<std::string_view, kRelationCount> kNames = {
    "DC", "EC", "PO", "EQ", "TPP", "NTPP", "TPPI", "NTPPI",
    "LEFT", "RIGHT", "BELOW", "ABOVE", "BEHIND", "FRONT", "FAR", "NEAR",
};

// First entry per relation is its rendering form; every form must fit
// "X is <expr> Y" except the has/contains verbs, which the grammar handles.
constexpr std::pair<std::string_view, RelationType> kDefaultExpressions[] = {
    {"disjoint from", RelationType::DC},
    {"disconnected from", RelationType::DC},
    {"separated from", RelationType::DC},
    {"disjoint", RelationType::DC},
    {"touching", RelationType::EC},
    {"externally connected to", RelationType::EC},
    {"overlapping", RelationType::PO},
    {"overlapped with", RelationType::PO},
    {"partially overlapping", RelationType::PO},
    {"overlapped", RelationType::PO},
    {"equal to", RelationType::EQ},
    {"identical to", RelationType::EQ},
    {"equal", RelationType::EQ},
    {"covered by", RelationType::TPP},
    {"inside", RelationType::NTPP},
    {"in", RelationType::NTPP},
    {"within", RelationType::NTPP},
    {"inside of", RelationType::NTPP},
    {"covering", RelationType::TPPI},
    {"covers", RelationType::TPPI},
    {"containing", RelationType::NTPPI},
    {"has", RelationType::NTPPI},
    {"contains", RelationType::NTPPI},
    {"left of", RelationType::LEFT},
    {"to the left of", RelationType::LEFT},
    {"on the left of", RelationType::LEFT},
    {"on the left side of", RelationType::LEFT},
    {"right of", RelationType::RIGHT},
    {"to the right of", RelationType::RIGHT},
    {"on the right of", RelationType::RIGHT},
    {"on the right side of", RelationType::RIGHT},
    {"below", RelationType::BELOW},
    {"under", RelationType::BELOW},
    {"beneath", RelationType::BELOW},
    {"underneath", RelationType::BELOW},
    {"above", RelationType::ABOVE},
    {"over", RelationType::ABOVE},
    {"on top of", RelationType::ABOVE},
    {"behind", RelationType::BEHIND},
    {"in back of", RelationType::BEHIND},
    {"in front of", RelationType::FRONT},
    {"in front", RelationType::FRONT},
    {"far from", RelationType::FAR},
    {"far away from", RelationType::FAR},
    {"far", RelationType::FAR},
    {"near", RelationType::NEAR},
    {"close to", RelationType::NEAR},
    {"near to", RelationType::NEAR},
    {"close", RelationType::NEAR},
};

}  // namespace

std::string_view to_string(RelationType r) { return kNames[index_of(r)]; }

std::string_view to_string(RelationClass c) {
    switch (c) {
        case RelationClass::Dir: return "Dir";
        case RelationClass::Dis: return "Dis";
        case RelationClass::PP: return "PP";
        case RelationClass::RccNonPp: return "RccNonPp";
    }
    return "?";
}

std::optional<RelationType> relation_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kRelationCount; ++i) {
        if (kNames[i].size() != name.size()) continue;
        bool same = std::equal(name.begin(), name.end(), kNames[i].begin(), [](char a, char b) {
            return std::toupper(static_cast<unsigned char>(a)) == b;
        });
        if (same) return kAllRelations[i];
    }
    return std::nullopt;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string normalize_phrase(std::string_view text) {
    std::string out;
    for (const auto& w : split_words(text)) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

const RelationLexicon& RelationLexicon::defaults() {
    static const RelationLexicon lexicon = [] {
        RelationLexicon lex;
        for (const auto& [expr, rel] : kDefaultExpressions) lex.add(expr, rel);
        return lex;
    }();
    return lexicon;
}

void RelationLexicon::add(std::string_view expression, RelationType relation) {
    auto tokens = split_words(expression);
    if (tokens.empty()) throw LexiconError("empty relation expression");
    auto normalized = normalize_phrase(expression);
    for (const auto& e : entries_) {
        if (e.expression == normalized) {
            if (e.relation != relation)
                throw LexiconError("expression '" + normalized + "' mapped to both " +
                                   std::string(to_string(e.relation)) + " and " +
                                   std::string(to_string(relation)));
            return;
        }
    }
    entries_.push_back(Entry{std::move(tokens), std::move(normalized), relation});
}

RelationLexicon RelationLexicon::parse(std::string_view text) {
    RelationLexicon lex;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') {
            if (end == text.size()) break;
            continue;
        }
        auto tab = line.find('\t');
        if (tab == std::string_view::npos)
            throw LexiconError("lexicon line " + std::to_string(line_no) + ": expected '<expression>\\t<RELATION>'");
        auto name = normalize_phrase(line.substr(tab + 1));
        auto rel = relation_from_string(name);
        if (!rel) throw LexiconError("lexicon line " + std::to_string(line_no) + ": unknown relation '" + name + "'");
        lex.add(line.substr(0, tab), *rel);
        if (end == text.size()) break;
    }
    lex.validate();
    return lex;
}

RelationLexicon RelationLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LexiconError("cannot open lexicon " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::optional<LexiconMatch> RelationLexicon::match_prefix(std::span<const std::string> tokens) const {
    const Entry* best = nullptr;
    for (const auto& e : entries_) {
        if (e.tokens.size() > tokens.size()) continue;
        if (best && e.tokens.size() <= best->tokens.size()) continue;
        if (std::equal(e.tokens.begin(), e.tokens.end(), tokens.begin())) best = &e;
    }
    if (!best) return std::nullopt;
    return LexiconMatch{best->relation, best->tokens.size(), best->expression};
}

void RelationLexicon::validate() const {
    for (auto r : kAllRelations) {
        bool found = std::any_of(entries_.begin(), entries_.end(), [r](const Entry& e) { return e.relation == r; });
        if (!found) throw LexiconError("lexicon has no expression for " + std::string(to_string(r)));
    }
}

std::string_view RelationLexicon::preferred_expression(RelationType r) const {
    for (const auto& e : entries_)
        if (e.relation == r) return e.expression;
    throw LexiconError("lexicon has no expression for " + std::string(to_string(r)));
}

std::vector<std::string_view> RelationLexicon::expressions_for(RelationType r) const {
    std::vector<std::string_view> out;
    for (const auto& e : entries_)
        if (e.relation == r) out.push_back(e.expression);
    return out;
}

bool RelationLexicon::contains_expression(std::string_view normalized) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.expression == normalized; });
}

std::string RelationLexicon::serialize() const {
    std::string out = "# expression<TAB>RELATION\n";
    for (const auto& e : entries_) {
        out += e.expression;
        out += '\t';
        out += to_string(e.relation);
        out += '\n';
    }
    return out;
}

std::optional<RelationType> lookup_expression(const RelationLexicon& lexicon, std::string_view phrase) {
    auto tokens = split_words(phrase);
    if (tokens.empty()) return std::nullopt;
    auto m = lexicon.match_prefix(tokens);
    if (!m || m->token_count != tokens.size()) return std::nullopt;
    return m->relation;
}

}  // namespace sqa
