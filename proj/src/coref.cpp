#include "sqa/coref.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sqa {

using nlohmann::json;

std::string_view to_string(Quantifier q) {
    switch (q) {
        case Quantifier::Unique: return "Unique";
        case Quantifier::Any: return "Any";
        case Quantifier::All: return "All";
    }
    return "?";
}

std::optional<Quantifier> quantifier_from_string(std::string_view name) {
    for (auto q : {Quantifier::Unique, Quantifier::Any, Quantifier::All})
        if (to_string(q) == name) return q;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Attributes

namespace {

template <typename F>
bool all_keys(const Attributes& a, const Attributes& b, F&& pred) {
    return pred(a.size, b.size) && pred(a.color, b.color) && pred(a.noun, b.noun) && pred(a.letter, b.letter);
}

bool contains(const std::vector<std::string>& words, std::string_view w) {
    return std::find(words.begin(), words.end(), w) != words.end();
}

std::optional<std::string> singular_in(const std::vector<std::string>& words, std::string_view w) {
    if (contains(words, w)) return std::string(w);
    if (w.size() > 2 && w.ends_with("es") && contains(words, w.substr(0, w.size() - 2)))
        return std::string(w.substr(0, w.size() - 2));
    if (w.size() > 1 && w.ends_with('s') && contains(words, w.substr(0, w.size() - 1)))
        return std::string(w.substr(0, w.size() - 1));
    return std::nullopt;
}

std::string strip_plural(std::string_view w) {
    if (w.size() > 3 && w.ends_with("es")) {
        auto stem = w.substr(0, w.size() - 2);
        if (stem.ends_with('x') || stem.ends_with('s') || stem.ends_with("sh") || stem.ends_with("ch"))
            return std::string(stem);
    }
    if (w.size() > 2 && w.ends_with('s') && !w.ends_with("ss")) return std::string(w.substr(0, w.size() - 1));
    return std::string(w);
}

constexpr std::string_view kNumberNames[] = {"zero", "one", "two", "three", "four", "five",
                                             "six",  "seven", "eight", "nine", "ten"};

}  // namespace

bool Attributes::compatible_with(const Attributes& other) const {
    return all_keys(*this, other, [](const std::string& a, const std::string& b) {
        return a.empty() || b.empty() || a == b;
    });
}

bool Attributes::subset_of(const Attributes& other) const {
    return all_keys(*this, other, [](const std::string& a, const std::string& b) { return a.empty() || a == b; });
}

void Attributes::merge(const Attributes& other) {
    auto fill = [](std::string& a, const std::string& b) {
        if (a.empty()) a = b;
    };
    fill(size, other.size);
    fill(color, other.color);
    fill(noun, other.noun);
    fill(letter, other.letter);
}

std::string Mention::head() const {
    auto sp = surface.find(' ');
    if (sp == std::string::npos) return surface;
    auto first = std::string_view(surface).substr(0, sp);
    if (is_determiner(first) || number_word(first)) return surface.substr(sp + 1);
    return surface;
}

std::optional<std::size_t> number_word(std::string_view w) {
    for (std::size_t i = 1; i < std::size(kNumberNames); ++i)
        if (kNumberNames[i] == w) return i;
    if (!w.empty() && w.size() <= 3 && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return static_cast<std::size_t>(std::stoul(std::string(w)));
    return std::nullopt;
}

std::string_view number_name(std::size_t n) {
    if (n < std::size(kNumberNames)) return kNumberNames[n];
    throw std::out_of_range("no number word for " + std::to_string(n));
}

bool is_determiner(std::string_view w) {
    return w == "a" || w == "an" || w == "the" || w == "any" || w == "all";
}

// ---------------------------------------------------------------------------
// AttributeLexicon

const AttributeLexicon& AttributeLexicon::defaults() {
    static const AttributeLexicon lex = [] {
        AttributeLexicon l;
        l.colors = {"black", "blue", "green", "grey", "gray", "red", "yellow", "white", "orange", "purple", "brown", "pink"};
        l.shapes = {"circle", "square", "triangle", "star", "cube", "sphere", "ball", "box",
                    "car", "house", "cup", "plate", "dog", "cat", "church", "tree", "table", "chair"};
        l.sizes = {"small", "medium", "big", "large", "tiny", "huge"};
        l.generic_nouns = {"object", "shape", "thing", "item", "entity"};
        l.pronouns = {"it"};
        return l;
    }();
    return lex;
}

AttributeLexicon AttributeLexicon::from_json_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw CorefError(std::string("attribute lexicon: ") + e.what());
    }
    AttributeLexicon l = defaults();
    auto read = [&](const char* key, std::vector<std::string>& dst) {
        if (!j.contains(key)) return;
        if (!j[key].is_array()) throw CorefError(std::string("attribute lexicon: '") + key + "' must be an array");
        dst.clear();
        for (const auto& v : j[key]) dst.push_back(normalize_phrase(v.get<std::string>()));
    };
    read("colors", l.colors);
    read("shapes", l.shapes);
    read("sizes", l.sizes);
    read("generic_nouns", l.generic_nouns);
    read("pronouns", l.pronouns);
    return l;
}

AttributeLexicon AttributeLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CorefError("cannot open attribute lexicon " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string AttributeLexicon::to_json_text() const {
    json j = {{"colors", colors}, {"shapes", shapes}, {"sizes", sizes},
              {"generic_nouns", generic_nouns}, {"pronouns", pronouns}};
    return j.dump(2);
}

bool AttributeLexicon::is_color(std::string_view w) const { return contains(colors, w); }
bool AttributeLexicon::is_size(std::string_view w) const { return contains(sizes, w); }
bool AttributeLexicon::is_pronoun(std::string_view w) const { return contains(pronouns, w); }
bool AttributeLexicon::is_generic(std::string_view w) const { return singular_in(generic_nouns, w).has_value(); }
std::optional<std::string> AttributeLexicon::shape_of(std::string_view w) const { return singular_in(shapes, w); }

// ---------------------------------------------------------------------------
// Mentions

Mention make_mention(std::span<const std::string> tokens, std::size_t sentence, const AttributeLexicon& lexicon) {
    if (tokens.empty()) throw std::invalid_argument("empty noun phrase");
    Mention m;
    m.sentence = sentence;
    for (const auto& t : tokens) {
        if (!m.surface.empty()) m.surface.push_back(' ');
        m.surface += t;
    }

    if (tokens.size() == 1 && lexicon.is_pronoun(tokens[0])) {
        m.pronoun = true;
        return m;
    }
    if (tokens.size() == 2 && tokens[0] == "block" && tokens[1].size() == 1) {
        m.attributes.noun = "block";
        m.attributes.letter = tokens[1];
        return m;
    }

    std::size_t i = 0;
    bool plural_context = false;
    if (auto n = number_word(tokens[0])) {
        m.attributes.determiner = tokens[0];
        if (*n >= 2) {
            m.cardinality = Cardinality::Plural;
            m.count = *n;
            plural_context = true;
        }
        ++i;
    } else if (is_determiner(tokens[0])) {
        m.attributes.determiner = tokens[0];
        plural_context = tokens[0] == "all";
        ++i;
    }
    if (i < tokens.size() - 1 && lexicon.is_size(tokens[i])) m.attributes.size = tokens[i++];
    if (i < tokens.size() - 1 && lexicon.is_color(tokens[i])) m.attributes.color = tokens[i++];
    if (i != tokens.size() - 1) throw std::invalid_argument("malformed noun phrase '" + m.surface + "'");

    const auto& noun = tokens[i];
    if (lexicon.is_generic(noun)) {
        m.attributes.noun.clear();
        if (noun != std::string(singular_in(lexicon.generic_nouns, noun).value_or(noun))) plural_context = true;
    } else if (auto shape = lexicon.shape_of(noun)) {
        m.attributes.noun = *shape;
        if (*shape != noun) plural_context = true;
    } else {
        m.attributes.noun = plural_context ? strip_plural(noun) : noun;
    }
    if (plural_context && m.cardinality == Cardinality::Singular) m.cardinality = Cardinality::Group;
    return m;
}

Quantifier quantifier_of(const Mention& m) {
    const auto& d = m.attributes.determiner;
    if (d == "all") return Quantifier::All;
    if (d == "any" || d == "a" || d == "an") return Quantifier::Any;
    return Quantifier::Unique;
}

// ---------------------------------------------------------------------------
// Linking

namespace {

bool indefinite(const Mention& m) {
    const auto& d = m.attributes.determiner;
    return d == "a" || d == "an" || d == "one";
}

Attributes matching_attributes(const Mention& m) {
    Attributes a = m.attributes;
    a.determiner.clear();
    return a;
}

class Linker {
public:
    Linker(std::span<const Mention> mentions, const LinkOptions& options) : mentions_(mentions), options_(options) {}

    std::vector<CorefChain> run() {
        for (std::size_t i = 0; i < mentions_.size(); ++i) place(i);
        return std::move(chains_);
    }

private:
    std::size_t last_mention(const CorefChain& c) const { return c.mentions.back(); }
    std::size_t last_sentence(const CorefChain& c) const { return mentions_[last_mention(c)].sentence; }

    CorefChain& open(std::size_t i, Cardinality card, std::size_t count) {
        CorefChain c;
        c.id = static_cast<EntityId>(chains_.size());
        c.cardinality = card;
        c.declared_count = card == Cardinality::Plural ? count : 0;
        if (card == Cardinality::Singular) c.declared_count = 1;
        chains_.push_back(std::move(c));
        join(chains_.back(), i);
        return chains_.back();
    }

    void join(CorefChain& c, std::size_t i) {
        c.mentions.push_back(i);
        c.canonical.merge(matching_attributes(mentions_[i]));
    }

    // Most recently mentioned chain; two candidates last seen in the same
    // sentence cannot be told apart.
    CorefChain* most_recent(std::vector<CorefChain*>& candidates, std::size_t i) {
        if (candidates.empty()) return nullptr;
        std::sort(candidates.begin(), candidates.end(),
                  [&](const CorefChain* a, const CorefChain* b) { return last_mention(*a) > last_mention(*b); });
        if (candidates.size() > 1 && last_sentence(*candidates[0]) == last_sentence(*candidates[1]))
            throw AmbiguityError("mention '" + mentions_[i].surface + "' in sentence " +
                                 std::to_string(mentions_[i].sentence) + " matches chains " +
                                 std::to_string(candidates[0]->id) + " and " + std::to_string(candidates[1]->id));
        return candidates.front();
    }

    void place(std::size_t i) {
        const auto& m = mentions_[i];
        if (m.pronoun) {
            CorefChain* best = nullptr;
            if (options_.resolve_pronouns)
                for (auto& c : chains_)
                    if (!c.is_group() && (!best || last_mention(c) > last_mention(*best))) best = &c;
            if (best) join(*best, i);
            else open(i, Cardinality::Singular, 1);
            return;
        }
        auto attrs = matching_attributes(m);

        if (!attrs.letter.empty()) {
            for (auto& c : chains_) {
                if (!c.is_group() && c.canonical.letter == attrs.letter && c.canonical.noun == attrs.noun) {
                    join(c, i);
                    return;
                }
            }
            open(i, Cardinality::Singular, 1);
            return;
        }

        if (m.cardinality == Cardinality::Plural) {
            open(i, Cardinality::Plural, m.count);
            return;
        }
        if (m.cardinality == Cardinality::Group) {
            std::vector<CorefChain*> groups;
            for (auto& c : chains_)
                if (c.is_group() && attrs.subset_of(c.canonical)) groups.push_back(&c);
            if (auto* g = most_recent(groups, i)) join(*g, i);
            else open(i, Cardinality::Group, 0);
            return;
        }

        if (indefinite(m)) {
            open(i, Cardinality::Singular, 1);
            return;
        }

        std::vector<CorefChain*> exact, partial;
        const auto head = m.head();
        for (auto& c : chains_) {
            if (c.is_group()) continue;
            bool same_surface = std::any_of(c.mentions.begin(), c.mentions.end(),
                                            [&](std::size_t k) { return mentions_[k].head() == head; });
            if (same_surface) exact.push_back(&c);
            else if (attrs.subset_of(c.canonical)) partial.push_back(&c);
        }
        if (auto* c = most_recent(exact.empty() ? partial : exact, i)) {
            join(*c, i);
            return;
        }

        // First definite mention of a member of an earlier plural group.
        std::vector<CorefChain*> groups;
        for (auto& c : chains_) {
            if (!c.is_group()) continue;
            bool full = c.declared_count > 0 && c.members.size() >= c.declared_count;
            if (!full && !attrs.noun.empty() && attrs.noun == c.canonical.noun && attrs.compatible_with(c.canonical))
                groups.push_back(&c);
        }
        CorefChain* group = most_recent(groups, i);
        auto group_id = group ? std::optional<EntityId>(group->id) : std::nullopt;
        auto& chain = open(i, Cardinality::Singular, 1);
        if (group_id) chains_[*group_id].members.push_back(chain.id);
    }

    std::span<const Mention> mentions_;
    const LinkOptions& options_;
    std::vector<CorefChain> chains_;
};

}  // namespace

std::vector<CorefChain> link_story(std::span<const Mention> mentions, const LinkOptions& options) {
    return Linker(mentions, options).run();
}

std::vector<EntityId> chain_of_mentions(std::span<const CorefChain> chains, std::size_t mention_count) {
    std::vector<EntityId> out(mention_count, 0);
    for (const auto& c : chains)
        for (auto k : c.mentions)
            if (k < mention_count) out[k] = c.id;
    return out;
}

std::vector<EntityId> expand_group(const CorefChain& chain) {
    if (!chain.is_group()) throw ArityError("chain " + std::to_string(chain.id) + " is not a group");
    if (chain.declared_count > 0 && chain.members.size() != chain.declared_count)
        throw ArityError("group " + std::to_string(chain.id) + " declares " + std::to_string(chain.declared_count) +
                         " members but " + std::to_string(chain.members.size()) + " were found");
    if (chain.members.size() < 2)
        throw ArityError("group " + std::to_string(chain.id) + " has fewer than two members");
    return chain.members;
}

ResolvedSelector resolve_question_entity(const Mention& mention, std::span<const CorefChain> chains,
                                         std::span<const Mention> story_mentions) {
    ResolvedSelector out;
    out.selector.quantifier = quantifier_of(mention);
    out.selector.attributes = matching_attributes(mention);
    const auto& attrs = out.selector.attributes;

    auto last = [](const CorefChain& c) { return c.mentions.empty() ? std::size_t{0} : c.mentions.back(); };

    if (out.selector.quantifier == Quantifier::Unique) {
        const auto head = mention.head();
        const CorefChain* exact = nullptr;
        const CorefChain* partial = nullptr;
        for (const auto& c : chains) {
            if (c.is_group()) continue;
            bool same = std::any_of(c.mentions.begin(), c.mentions.end(), [&](std::size_t k) {
                return k < story_mentions.size() && story_mentions[k].head() == head;
            });
            if (same) {
                if (!exact || last(c) > last(*exact)) exact = &c;
            } else if (attrs.subset_of(c.canonical)) {
                if (!partial || last(c) > last(*partial)) partial = &c;
            }
        }
        const auto* hit = exact ? exact : partial;
        if (!hit) throw NoMatchError("no story entity matches '" + mention.surface + "'");
        out.ids.push_back(hit->id);
        return out;
    }

    for (const auto& c : chains)
        if (!c.is_group() && attrs.subset_of(c.canonical)) out.ids.push_back(c.id);
    if (out.ids.empty()) throw NoMatchError("no story entity matches '" + mention.surface + "'");
    std::sort(out.ids.begin(), out.ids.end());
    return out;
}

}  // namespace sqa
