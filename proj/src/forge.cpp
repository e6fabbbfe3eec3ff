#include "sqa/forge.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace sqa {

// ---------------------------------------------------------------------------
// Fact selection

namespace {

Triple flipped(const Triple& t) { return {t.object, reverse(t.relation), t.subject}; }

std::vector<RelationType> truths_between(const Scene& scene, EntityId a, EntityId b) {
    std::vector<RelationType> out;
    for (auto r : kAllRelations)
        if (geometric_truth(scene, a, r, b)) out.push_back(r);
    return out;
}

class FactSelector {
public:
    FactSelector(const Scene& scene, const GenConfig& config, Rng& rng) : scene_(scene), config_(config), rng_(rng) {}

    std::vector<Fact> run() {
        for (const auto& e : scene_.entities) {
            if (!e.parent) continue;
            if (geometric_truth(scene_, *e.parent, RelationType::NTPPI, e.id))
                add({*e.parent, RelationType::NTPPI, e.id});
            else if (geometric_truth(scene_, *e.parent, RelationType::TPPI, e.id))
                add({*e.parent, RelationType::TPPI, e.id});
            else
                throw SceneError("entity " + std::to_string(e.id) + " is not a proper part of its parent");
        }
        std::vector<std::vector<EntityId>> groups;
        for (const auto& e : scene_.entities)
            if (!e.parent) groups.push_back(scene_.children(e.id));
        groups.push_back(scene_.children(std::nullopt));
        for (const auto& g : groups) connect(g);
        for (const auto& g : groups) densify(g);
        return std::move(facts_);
    }

private:
    void add(const Triple& t) {
        auto key = std::min(t, flipped(t));
        if (seen_.insert(key).second) facts_.push_back(Fact::stated(t.subject, t.relation, t.object));
    }

    void connect(std::vector<EntityId> group) {
        if (group.size() < 2) return;
        rng_.shuffle(group);
        for (std::size_t i = 1; i < group.size(); ++i) {
            EntityId a = group[i], b = group[rng_.index(i)];
            if (rng_.chance(0.5)) std::swap(a, b);
            auto truths = truths_between(scene_, a, b);
            std::vector<RelationType> directional;
            for (auto r : truths)
                if (class_of(r) == RelationClass::Dir) directional.push_back(r);
            const auto& pool = !directional.empty() && rng_.chance(0.8) ? directional : truths;
            add({a, rng_.pick(pool), b});
        }
    }

    void densify(const std::vector<EntityId>& group) {
        if (config_.density <= 0.0) return;
        for (std::size_t i = 0; i < group.size(); ++i)
            for (std::size_t j = i + 1; j < group.size(); ++j)
                for (auto r : truths_between(scene_, group[i], group[j])) {
                    if (!rng_.chance(config_.density)) continue;
                    Triple t{group[i], r, group[j]};
                    add(rng_.chance(0.5) ? flipped(t) : t);
                }
    }

    const Scene& scene_;
    const GenConfig& config_;
    Rng& rng_;
    std::vector<Fact> facts_;
    std::set<Triple> seen_;
};

}  // namespace

std::vector<Fact> select_stated_facts(const Scene& scene, const GenConfig& config, Rng& rng) {
    return FactSelector(scene, config, rng).run();
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string plural_of(const std::string& noun) {
    if (noun.ends_with('x') || noun.ends_with('s') || noun.ends_with("sh") || noun.ends_with("ch")) return noun + "es";
    return noun + "s";
}

std::string lowercase(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string capitalized(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

std::string article_for(const std::string& word) {
    return !word.empty() && std::string_view("aeiou").find(word[0]) != std::string_view::npos ? "an" : "a";
}

std::string description(const Attributes& a) {
    std::string out;
    for (const auto* w : {&a.size, &a.color, &a.noun}) {
        if (w->empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += *w;
    }
    return out;
}

std::string block_phrase(const Attributes& a) {
    return "block " + std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(a.letter[0]))));
}

class StoryWriter {
public:
    StoryWriter(const Scene& scene, const GenConfig& config, Rng& rng, const RelationLexicon& lexicon)
        : scene_(scene), config_(config), rng_(rng), lexicon_(lexicon), introduced_(scene.size(), false),
          group_of_(scene.size()) {
        out_.chain_of_entity.assign(scene.size(), std::nullopt);
    }

    RenderedStory run(const std::vector<Fact>& facts) {
        std::vector<Triple> stated;
        for (const auto& f : facts) stated.push_back(f.triple);

        for (const auto& e : scene_.entities) {
            if (e.parent) continue;
            containment(e.id, stated);
            std::vector<Triple> inner;
            for (const auto& t : stated)
                if (sibling_under(t, e.id)) inner.push_back(t);
            relations(inner);
        }
        std::vector<Triple> top;
        for (const auto& t : stated)
            if (sibling_under(t, std::nullopt)) top.push_back(t);
        relations(top);

        for (const auto& t : stated) {
            bool containment_edge = scene_.entities[t.object].parent == t.subject;
            if (!containment_edge && !sibling_under(t, scene_.entities[t.subject].parent))
                throw std::invalid_argument("fact " + format_fact(t) + " is neither containment nor sibling");
        }
        return std::move(out_);
    }

private:
    struct Phrase {
        std::string text;   // as written
        std::optional<EntityId> chain;
    };

    bool sibling_under(const Triple& t, std::optional<EntityId> parent) const {
        return scene_.entities[t.subject].parent == parent && scene_.entities[t.object].parent == parent;
    }

    EntityId chain_for(EntityId e) {
        if (auto c = out_.chain_of_entity[e]) return *c;
        GoldChain c;
        c.id = static_cast<EntityId>(out_.chains.size());
        c.scene_entity = e;
        if (auto g = group_of_[e]) out_.chains[*g].members.push_back(c.id);
        out_.chains.push_back(c);
        out_.chain_of_entity[e] = c.id;
        return c.id;
    }

    void record(EntityId chain, const std::string& text) {
        out_.chains[chain].mentions.push_back({lowercase(text), sentence_, mention_count_++});
    }

    Phrase entity_phrase(EntityId e, bool allow_pronoun) {
        const auto& a = scene_.entities[e].attributes;
        std::string text;
        if (allow_pronoun && last_named_ == e && rng_.chance(config_.pronoun_probability)) {
            text = "it";
        } else if (!a.letter.empty()) {
            text = block_phrase(a);
        } else {
            auto desc = description(a);
            text = (introduced_[e] ? "the" : article_for(desc)) + " " + desc;
        }
        introduced_[e] = true;
        auto chain = chain_for(e);
        record(chain, text);
        last_named_ = e;
        return {text, chain};
    }

    Phrase group_phrase(const std::vector<EntityId>& members) {
        const auto& noun = scene_.entities[members.front()].attributes.noun;
        std::string text = std::string(number_name(members.size())) + " " + plural_of(noun);
        GoldChain c;
        c.id = static_cast<EntityId>(out_.chains.size());
        c.cardinality = Cardinality::Plural;
        c.declared_count = members.size();
        out_.chains.push_back(c);
        for (auto m : members) {
            group_of_[m] = c.id;
            introduced_[m] = true;
        }
        record(c.id, text);
        last_named_.reset();
        return {text, c.id};
    }

    void triplet(const Phrase& trajector, const std::string& indicator, RelationType r, const Phrase& landmark) {
        GoldTriplet t;
        t.trajector = lowercase(trajector.text);
        t.indicator = indicator;
        t.landmark = lowercase(landmark.text);
        t.relation = r;
        t.sentence = sentence_;
        t.trajector_id = *trajector.chain;
        t.landmark_id = *landmark.chain;
        out_.triplets.push_back(std::move(t));
    }

    void finish(std::string text) {
        out_.sentences.push_back(capitalized(std::move(text)) + ".");
        ++sentence_;
    }

    void containment(EntityId block, const std::vector<Triple>& stated) {
        std::vector<EntityId> inside, covered;
        for (const auto& t : stated) {
            if (t.subject != block || scene_.entities[t.object].parent != block) continue;
            (t.relation == RelationType::NTPPI ? inside : covered).push_back(t.object);
        }
        std::sort(inside.begin(), inside.end());
        std::sort(covered.begin(), covered.end());

        if (!inside.empty()) {
            std::map<std::string, std::vector<EntityId>> by_shape;
            for (auto e : inside) by_shape[scene_.entities[e].attributes.noun].push_back(e);
            // items: single entities, or a group given by its members
            std::vector<std::vector<EntityId>> items;
            for (auto& [shape, ids] : by_shape) {
                if (ids.size() >= 2 && ids.size() <= 10 && rng_.chance(config_.group_probability)) {
                    items.push_back(ids);
                } else {
                    for (auto e : ids) items.push_back({e});
                }
            }
            rng_.shuffle(items);
            auto subject = entity_phrase(block, true);
            std::string text = subject.text + " has";
            for (std::size_t i = 0; i < items.size(); ++i) {
                auto object = items[i].size() == 1 ? entity_phrase(items[i][0], false) : group_phrase(items[i]);
                text += (i ? " and " : " ") + object.text;
                triplet(subject, "has", RelationType::NTPPI, object);
            }
            finish(text);
        }
        if (!covered.empty()) {
            rng_.shuffle(covered);
            std::vector<Triple> clauses;
            for (auto e : covered) clauses.push_back({block, RelationType::TPPI, e});
            sentence_of(clauses);
        }
    }

    // One sentence, all clauses sharing the subject.
    void sentence_of(const std::vector<Triple>& clauses) {
        auto subject = entity_phrase(clauses.front().subject, true);
        std::string text = subject.text + " is";
        for (std::size_t i = 0; i < clauses.size(); ++i) {
            const auto& t = clauses[i];
            std::string expression(lexicon_.preferred_expression(t.relation));
            auto object = entity_phrase(t.object, false);
            text += (i ? " and " : " ") + expression + " " + object.text;
            triplet(subject, expression, t.relation, object);
        }
        finish(text);
    }

    void relations(std::vector<Triple> facts) {
        rng_.shuffle(facts);
        std::vector<bool> used(facts.size(), false);
        for (std::size_t i = 0; i < facts.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            std::vector<Triple> clauses{facts[i]};
            for (std::size_t j = i + 1; j < facts.size() && clauses.size() < 3; ++j) {
                if (used[j] || facts[j].subject != facts[i].subject) continue;
                if (!rng_.chance(config_.conjunction_probability)) continue;
                used[j] = true;
                clauses.push_back(facts[j]);
            }
            sentence_of(clauses);
        }
    }

    const Scene& scene_;
    const GenConfig& config_;
    Rng& rng_;
    const RelationLexicon& lexicon_;
    RenderedStory out_;
    std::vector<bool> introduced_;
    std::vector<std::optional<EntityId>> group_of_;
    std::optional<EntityId> last_named_;
    std::size_t sentence_ = 0;
    std::size_t mention_count_ = 0;
};

}  // namespace

RenderedStory render_story(const Scene& scene, const std::vector<Fact>& facts, const GenConfig& config, Rng& rng,
                           const RelationLexicon& lexicon) {
    for (const auto& f : facts) {
        if (!f.positive()) throw std::invalid_argument("only positive facts can be rendered");
        if (f.triple.subject >= scene.size() || f.triple.object >= scene.size())
            throw std::invalid_argument("fact " + format_fact(f.triple) + " refers to an unknown entity");
    }
    return StoryWriter(scene, config, rng, lexicon).run(facts);
}

// ---------------------------------------------------------------------------
// Questions

namespace {

std::string question_phrase(const Scene& scene, EntityId e) {
    const auto& a = scene.entities[e].attributes;
    if (!a.letter.empty()) return block_phrase(a);
    return "the " + description(a);
}

struct AttributeGroup {
    Attributes attributes;
    std::vector<EntityId> members;   // scene ids, ascending
};

std::string quantified_phrase(Quantifier q, const Attributes& a) {
    Attributes shown = a;
    if (q == Quantifier::All) shown.noun = plural_of(shown.noun);
    return (q == Quantifier::All ? "all " : "any ") + description(shown);
}

// Q1 t in T. Q2 l in L. holds(t, l)
template <typename Holds>
bool quantified_answer(Quantifier q1, const std::vector<EntityId>& ts, Quantifier q2, const std::vector<EntityId>& ls,
                       Holds&& holds) {
    auto inner = [&](EntityId t) {
        if (q2 == Quantifier::All) return std::all_of(ls.begin(), ls.end(), [&](EntityId l) { return holds(t, l); });
        return std::any_of(ls.begin(), ls.end(), [&](EntityId l) { return holds(t, l); });
    };
    if (q1 == Quantifier::All) return std::all_of(ts.begin(), ts.end(), inner);
    return std::any_of(ts.begin(), ts.end(), inner);
}

class QuestionWriter {
public:
    QuestionWriter(const Scene& scene, const std::vector<Fact>& facts, const RenderedStory& story,
                   const GenConfig& config, Rng& rng, const RelationLexicon& lexicon)
        : scene_(scene), story_(story), config_(config), rng_(rng), lexicon_(lexicon), closure_(closure(facts)) {
        for (const auto& e : scene.entities)
            if (chain(e.id)) mentioned_.push_back(e.id);
    }

    QuestionBatch run(const std::string& prefix) {
        std::vector<Question> yn;
        positives(yn);
        negatives(yn);
        rng_.shuffle(yn);
        auto quantified = quantified_questions();
        auto fr = find_relations();

        for (auto* part : {&yn, &quantified, &fr})
            for (auto& q : *part) {
                q.id = prefix + "-q" + std::to_string(batch_.questions.size());
                batch_.questions.push_back(std::move(q));
            }
        return std::move(batch_);
    }

private:
    std::optional<EntityId> chain(EntityId e) const {
        return e < story_.chain_of_entity.size() ? story_.chain_of_entity[e] : std::nullopt;
    }

    bool hop_ok(std::size_t depth) const {
        return static_cast<std::int64_t>(depth) >= config_.hops.min && static_cast<std::int64_t>(depth) <= config_.hops.max;
    }

    bool crosses_blocks(EntityId a, EntityId b) const {
        const auto& pa = scene_.entities[a].parent;
        const auto& pb = scene_.entities[b].parent;
        return pa && pb && *pa != *pb;
    }

    SelectorQuery unique(EntityId e) const { return {Quantifier::Unique, {*chain(e)}}; }

    Question yes_no(const Triple& t, bool gold, std::size_t hops) const {
        Question q;
        q.mode = QuestionMode::YN;
        q.text = "Is " + question_phrase(scene_, t.subject) + " " + std::string(lexicon_.preferred_expression(t.relation)) +
                 " " + question_phrase(scene_, t.object) + "?";
        q.gold_yes = gold;
        q.hops = hops;
        q.trajector = unique(t.subject);
        q.landmark = unique(t.object);
        q.relation = t.relation;
        return q;
    }

    template <typename T>
    std::optional<T> draw(const std::vector<T>& pool, const std::set<T>& taken) {
        std::vector<T> open;
        for (const auto& x : pool)
            if (!taken.count(x)) open.push_back(x);
        if (open.empty()) return std::nullopt;
        return rng_.pick(open);
    }

    void positives(std::vector<Question>& out) {
        const std::size_t want = (config_.yn_per_story + 1) / 2;
        std::vector<Triple> all, deep, across;
        for (const auto& t : closure_.positives()) {
            if (t.subject == t.object || !chain(t.subject) || !chain(t.object)) continue;
            auto d = closure_.depth(t);
            if (!hop_ok(d)) continue;
            all.push_back(t);
            if (d >= 2) deep.push_back(t);
            if (crosses_blocks(t.subject, t.object) && class_of(t.relation) == RelationClass::Dir) across.push_back(t);
        }
        positive_pool_ = all;
        std::size_t made = 0;
        auto emit = [&](const Triple& t) {
            asked_.insert(t);
            out.push_back(yes_no(t, true, closure_.depth(t)));
            ++made;
        };
        if (want > 0)
            if (auto t = draw(across, asked_)) emit(*t);
        while (made < want) {
            std::optional<Triple> t;
            if (rng_.chance(0.5)) t = draw(deep, asked_);
            if (!t) t = draw(all, asked_);
            if (!t) break;
            emit(*t);
        }
        if (made < want)
            batch_.warnings.push_back("only " + std::to_string(made) + " of " + std::to_string(want) +
                                      " positive YN questions could be generated");
    }

    std::size_t no_hops(const Triple& t) const {
        auto d = closure_.depth(t, Polarity::Negative);
        return d ? d : 1;
    }

    void negatives(std::vector<Question>& out) {
        const std::size_t want = config_.yn_per_story / 2;
        std::size_t made = 0;
        auto emit = [&](const Triple& t) {
            asked_.insert(t);
            out.push_back(yes_no(t, false, no_hops(t)));
            ++made;
        };
        auto usable = [&](const Triple& t) {
            return t.subject != t.object && !asked_.count(t) && !geometric_truth(scene_, t.subject, t.relation, t.object) &&
                   !closure_.contains(t);
        };

        // reversed relations of derivable facts
        std::vector<Triple> reversed;
        for (const auto& t : positive_pool_)
            if (is_ordered(t.relation)) {
                Triple r{t.subject, reverse(t.relation), t.object};
                if (usable(r)) reversed.push_back(r);
            }
        const std::size_t want_reversed = (want + 1) / 2;
        while (made < want_reversed) {
            auto t = draw(reversed, asked_);
            if (!t) break;
            emit(*t);
        }
        for (std::size_t attempt = 0; made < want && attempt < 200 && mentioned_.size() >= 2; ++attempt) {
            Triple t{rng_.pick(mentioned_), rng_.pick(config_.candidates), rng_.pick(mentioned_)};
            if (usable(t)) emit(t);
        }
        if (made < want)
            batch_.warnings.push_back("only " + std::to_string(made) + " of " + std::to_string(want) +
                                      " negative YN questions could be generated");
    }

    std::vector<AttributeGroup> attribute_groups() const {
        std::map<std::tuple<std::string, std::string, std::string>, std::vector<EntityId>> by_key;
        for (auto e : mentioned_) {
            const auto& a = scene_.entities[e].attributes;
            if (!a.letter.empty() || a.noun.empty()) continue;
            by_key[{"", "", a.noun}].push_back(e);
            by_key[{"", a.color, a.noun}].push_back(e);
            by_key[{a.size, "", a.noun}].push_back(e);
        }
        std::vector<AttributeGroup> out;
        std::set<std::vector<EntityId>> seen;
        for (auto& [key, ids] : by_key) {
            if (ids.size() < 2 || ids.size() > 4 || !seen.insert(ids).second) continue;
            AttributeGroup g;
            std::tie(g.attributes.size, g.attributes.color, g.attributes.noun) = key;
            g.members = ids;
            out.push_back(std::move(g));
        }
        return out;
    }

    SelectorQuery group_query(Quantifier q, const std::vector<EntityId>& members) const {
        SelectorQuery s{q, {}};
        for (auto e : members) s.ids.push_back(*chain(e));
        std::sort(s.ids.begin(), s.ids.end());
        return s;
    }

    std::vector<Question> quantified_questions() {
        std::vector<Question> out;
        if (config_.quantified_per_story == 0) return out;
        auto groups = attribute_groups();
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < groups.size(); ++i)
            for (std::size_t j = 0; j < groups.size(); ++j) {
                const auto& a = groups[i].members;
                const auto& b = groups[j].members;
                bool disjoint = std::none_of(a.begin(), a.end(),
                                             [&](EntityId e) { return std::find(b.begin(), b.end(), e) != b.end(); });
                if (i != j && disjoint) pairs.emplace_back(i, j);
            }
        std::set<std::string> texts;
        for (std::size_t made = 0; made < config_.quantified_per_story && !pairs.empty(); ++made) {
            const bool want_yes = rng_.chance(0.5);
            bool found = false;
            for (std::size_t attempt = 0; attempt < 80 && !found; ++attempt) {
                auto [ti, li] = rng_.pick(pairs);
                const auto& T = groups[ti];
                const auto& L = groups[li];
                auto r = rng_.pick(std::vector<RelationType>(kDirectionalRelations.begin(), kDirectionalRelations.end()));
                auto q1 = rng_.chance(0.5) ? Quantifier::All : Quantifier::Any;
                auto q2 = rng_.chance(0.5) ? Quantifier::All : Quantifier::Any;
                bool oracle = quantified_answer(q1, T.members, q2, L.members, [&](EntityId a, EntityId b) {
                    return geometric_truth(scene_, a, r, b);
                });
                bool derived = quantified_answer(q1, T.members, q2, L.members, [&](EntityId a, EntityId b) {
                    return closure_.contains({a, r, b});
                });
                if (oracle != derived) continue;
                if (attempt < 40 && oracle != want_yes) continue;

                Question q;
                q.mode = QuestionMode::YN;
                q.text = std::string(q1 == Quantifier::All ? "Are " : "Is ") + quantified_phrase(q1, T.attributes) + " " +
                         std::string(lexicon_.preferred_expression(r)) + " " + quantified_phrase(q2, L.attributes) + "?";
                if (!texts.insert(q.text).second) continue;
                q.gold_yes = oracle;
                q.relation = r;
                q.trajector = group_query(q1, T.members);
                q.landmark = group_query(q2, L.members);
                std::size_t hops = 1;
                for (auto a : T.members)
                    for (auto b : L.members) hops = std::max(hops, closure_.depth({a, r, b}));
                q.hops = hops;
                out.push_back(std::move(q));
                found = true;
            }
        }
        if (out.size() < config_.quantified_per_story)
            batch_.warnings.push_back("only " + std::to_string(out.size()) + " of " +
                                      std::to_string(config_.quantified_per_story) +
                                      " quantified questions could be generated");
        return out;
    }

    std::vector<Question> find_relations() {
        std::vector<Question> out;
        std::vector<RelationType> candidates = config_.candidates;
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        using Pair = std::pair<EntityId, EntityId>;
        std::vector<Pair> all, deep, across;
        for (auto a : mentioned_)
            for (auto b : mentioned_) {
                if (a == b) continue;
                std::size_t depth = 0;
                for (auto r : candidates) depth = std::max(depth, closure_.depth({a, r, b}));
                if (depth == 0 || !hop_ok(depth)) continue;
                all.emplace_back(a, b);
                if (depth >= 2) deep.emplace_back(a, b);
                if (crosses_blocks(a, b)) across.emplace_back(a, b);
            }
        std::set<Pair> taken;
        auto emit = [&](const Pair& p) {
            taken.insert(p);
            Question q;
            q.mode = QuestionMode::FR;
            q.text = "What is the position of " + question_phrase(scene_, p.first) + " relative to " +
                     question_phrase(scene_, p.second) + "?";
            q.candidates = candidates;
            std::size_t hops = 1;
            for (auto r : candidates)
                if (auto d = closure_.depth({p.first, r, p.second})) {
                    q.gold_relations.push_back(r);
                    hops = std::max(hops, d);
                }
            q.hops = hops;
            q.trajector = unique(p.first);
            q.landmark = unique(p.second);
            out.push_back(std::move(q));
        };
        if (config_.fr_per_story > 0)
            if (auto p = draw(across, taken)) emit(*p);
        while (out.size() < config_.fr_per_story) {
            std::optional<Pair> p;
            if (rng_.chance(0.5)) p = draw(deep, taken);
            if (!p) p = draw(all, taken);
            if (!p) break;
            emit(*p);
        }
        if (out.size() < config_.fr_per_story)
            batch_.warnings.push_back("only " + std::to_string(out.size()) + " of " +
                                      std::to_string(config_.fr_per_story) + " FR questions could be generated");
        return out;
    }

    const Scene& scene_;
    const RenderedStory& story_;
    const GenConfig& config_;
    Rng& rng_;
    const RelationLexicon& lexicon_;
    ClosureResult closure_;
    std::vector<EntityId> mentioned_;
    std::vector<Triple> positive_pool_;
    std::set<Triple> asked_;
    QuestionBatch batch_;
};

}  // namespace

QuestionBatch generate_questions(const Scene& scene, const std::vector<Fact>& facts, const RenderedStory& story,
                                 const GenConfig& config, Rng& rng, const std::string& id_prefix,
                                 const RelationLexicon& lexicon) {
    return QuestionWriter(scene, facts, story, config, rng, lexicon).run(id_prefix);
}

RelationType contrast(RelationType r) {
    switch (r) {
        case RelationType::NEAR: return RelationType::FAR;
        case RelationType::FAR: return RelationType::NEAR;
        case RelationType::DC: return RelationType::EC;
        case RelationType::EC: return RelationType::DC;
        case RelationType::PO: return RelationType::EQ;
        case RelationType::EQ: return RelationType::PO;
        default: return reverse(r);
    }
}

std::vector<Question> synthesize_extra_questions(const std::vector<GoldTriplet>& triplets,
                                                 const std::vector<GoldChain>& chains,
                                                 const RelationLexicon& lexicon, const AttributeLexicon& attributes) {
    auto mention_of = [&](const std::string& text) {
        auto words = split_words(text);
        return make_mention(words, 0, attributes);
    };
    auto vague = [&](const Mention& m) {
        return m.pronoun || (m.attributes.noun.empty() && m.attributes.letter.empty());
    };
    auto phrase = [&](const std::string& text, EntityId id) {
        auto m = mention_of(text);
        if (!vague(m)) return text;
        for (const auto& c : chains) {
            if (c.id != id) continue;
            for (const auto& gm : c.mentions)
                if (!vague(mention_of(gm.text))) return gm.text;
        }
        return text;
    };

    std::vector<Question> out;
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        const auto& t = triplets[i];
        if (!t.relation) throw std::invalid_argument("triplet " + std::to_string(i) + " has no relation");
        const bool reversed = i % 2 == 1;
        const auto r = reversed ? contrast(*t.relation) : *t.relation;
        auto trajector = phrase(t.trajector, t.trajector_id);
        auto landmark = phrase(t.landmark, t.landmark_id);
        auto tm = mention_of(trajector);
        auto lm = mention_of(landmark);

        Question q;
        q.id = "x" + std::to_string(i);
        q.mode = QuestionMode::YN;
        q.text = std::string(tm.cardinality == Cardinality::Singular ? "Is " : "Are ") + trajector + " " +
                 std::string(lexicon.preferred_expression(r)) + " " + landmark + "?";
        q.gold_yes = !reversed;
        q.hops = 1;
        q.relation = r;
        q.trajector = {quantifier_of(tm), {t.trajector_id}};
        q.landmark = {quantifier_of(lm), {t.landmark_id}};
        out.push_back(std::move(q));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stories

Story generate_story(const GenConfig& config, std::size_t index, std::vector<std::string>* warnings) {
    Rng rng(config.seed ^ static_cast<std::uint64_t>(index));
    Story story;
    story.id = "s" + std::to_string(index);
    auto scene = generate_scene(config, rng);
    story.stated = select_stated_facts(scene, config, rng);
    auto rendered = render_story(scene, story.stated, config, rng);
    auto batch = generate_questions(scene, story.stated, rendered, config, rng, story.id);
    story.sentences = std::move(rendered.sentences);
    story.gold_triplets = std::move(rendered.triplets);
    story.gold_coref = std::move(rendered.chains);
    story.questions = std::move(batch.questions);
    story.scene = std::move(scene);
    if (warnings)
        for (auto& w : batch.warnings) warnings->push_back(story.id + ": " + w);
    return story;
}

Dataset generate_dataset(const GenConfig& config, std::size_t stories, std::vector<std::string>* warnings) {
    config.validate();
    Dataset d;
    d.seed = config.seed;
    d.config = config;
    d.stories.reserve(stories);
    for (std::size_t i = 0; i < stories; ++i) d.stories.push_back(generate_story(config, i, warnings));
    return d;
}

}  // namespace sqa
