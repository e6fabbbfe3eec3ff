#include "sqa/pipeline.hpp"

#include <algorithm>

#include "sqa/json_io.hpp"
#include "sqa/random.hpp"

namespace sqa {

std::string_view to_string(PipelineMode m) { return m == PipelineMode::GoldTriplets ? "gold" : "parse"; }

std::optional<PipelineMode> pipeline_mode_from_string(std::string_view s) {
    if (s == "gold") return PipelineMode::GoldTriplets;
    if (s == "parse") return PipelineMode::FullParse;
    return std::nullopt;
}

namespace {

bool holds(const ClosureResult& closure, EntityId a, RelationType r, EntityId b) {
    return query(closure, a, r, b) == TruthValue::True;
}

bool some_or_all(Quantifier q, const std::vector<EntityId>& ids, auto&& pred) {
    if (ids.empty()) return false;
    if (q == Quantifier::All) return std::all_of(ids.begin(), ids.end(), pred);
    return std::any_of(ids.begin(), ids.end(), pred);
}

}  // namespace

bool answer_yn(const ClosureResult& closure, const ResolvedQuery& q) {
    return some_or_all(q.trajector_quantifier, q.trajectors, [&](EntityId t) {
        return some_or_all(q.landmark_quantifier, q.landmarks,
                           [&](EntityId l) { return holds(closure, t, q.relation, l); });
    });
}

std::vector<RelationType> answer_fr(const ClosureResult& closure, EntityId a, EntityId b,
                                    const std::vector<RelationType>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("answer_fr needs a non-empty candidate list");
    std::vector<RelationType> out;
    for (auto r : kAllRelations)
        if (std::find(candidates.begin(), candidates.end(), r) != candidates.end() && holds(closure, a, r, b))
            out.push_back(r);
    return out;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

void add_facts(std::vector<Fact>& out, const std::vector<EntityId>& subjects, RelationType r,
               const std::vector<EntityId>& objects, std::size_t sentence) {
    for (auto s : subjects)
        for (auto o : objects)
            if (s != o) out.push_back(Fact::stated(s, r, o, sentence));
}

template <typename T>
void drop_some(std::vector<T>& items, Rng* rng, double rate) {
    if (!rng || rate <= 0.0) return;
    std::vector<T> kept;
    for (auto& x : items)
        if (!rng->chance(rate)) kept.push_back(std::move(x));
    items = std::move(kept);
}

StoryFacts gold_facts(const Story& story, Rng* dropout, double rate) {
    auto members = [&](EntityId id) -> std::vector<EntityId> {
        if (id >= story.gold_coref.size()) {
            if (story.gold_coref.empty()) return {id};
            throw SchemaError("story " + story.id + ": triplet refers to unknown chain " + std::to_string(id));
        }
        const auto& c = story.gold_coref[id];
        if (!c.is_group()) return {id};
        CorefChain chain;
        chain.id = c.id;
        chain.cardinality = c.cardinality;
        chain.declared_count = c.cardinality == Cardinality::Plural ? c.declared_count : 0;
        chain.members = c.members;
        return expand_group(chain);
    };
    auto triplets = story.gold_triplets;
    drop_some(triplets, dropout, rate);
    StoryFacts out;
    for (const auto& t : triplets) {
        if (!t.relation) continue;
        add_facts(out.facts, members(t.trajector_id), *t.relation, members(t.landmark_id), t.sentence);
    }
    return out;
}

StoryFacts parsed_facts(const Story& story, const PipelineOptions& options, Rng* dropout) {
    ParserContext ctx{options.relations, options.attributes, options.parse_mode};
    auto extraction = extract_story(story.sentences, ctx);
    StoryFacts out;
    out.chains = link_story(extraction.mentions, options.link);
    out.mentions = std::move(extraction.mentions);
    auto chain_of = chain_of_mentions(out.chains, out.mentions.size());
    auto members = [&](std::size_t mention) -> std::vector<EntityId> {
        const auto& c = out.chains[chain_of[mention]];
        return c.is_group() ? expand_group(c) : std::vector<EntityId>{c.id};
    };
    drop_some(extraction.triplets, dropout, options.triplet_dropout);
    for (const auto& t : extraction.triplets) {
        if (!t.relation) continue;
        add_facts(out.facts, members(t.trajector_mention), *t.relation, members(t.landmark_mention), t.sentence);
    }
    return out;
}

}  // namespace

StoryFacts gold_story_facts(const Story& story) { return gold_facts(story, nullptr, 0.0); }

StoryFacts parsed_story_facts(const Story& story, const PipelineOptions& options) {
    return parsed_facts(story, options, nullptr);
}

// ---------------------------------------------------------------------------
// Running

namespace {

Prediction abstain(const Question& q, const std::string& why) {
    Prediction p;
    p.question_id = q.id;
    p.mode = q.mode;
    p.abstained = true;
    p.error = why;
    return p;
}

class StoryRunner {
public:
    StoryRunner(const Story& story, const PipelineOptions& options, const StoryFacts& facts,
                const ClosureResult& closure)
        : story_(story), options_(options), facts_(facts), closure_(closure) {}

    Prediction answer(const Question& q) {
        Prediction p;
        p.question_id = q.id;
        p.mode = q.mode;
        ResolvedQuery rq = options_.mode == PipelineMode::GoldTriplets ? gold_query(q) : parsed_query(q);
        if (q.mode == QuestionMode::YN) {
            p.yes = answer_yn(closure_, rq);
            if (options_.trace && p.yes) p.trace = witnesses(rq);
        } else {
            if (rq.trajectors.size() != 1 || rq.landmarks.size() != 1)
                throw NoMatchError("FR questions need two single entities");
            p.relations = answer_fr(closure_, rq.trajectors[0], rq.landmarks[0], candidates_);
            if (options_.trace)
                for (auto r : p.relations) p.trace.push_back(explain(closure_, {rq.trajectors[0], r, rq.landmarks[0]}));
        }
        return p;
    }

private:
    ResolvedQuery gold_query(const Question& q) {
        if (q.trajector.ids.empty() || q.landmark.ids.empty()) throw NoMatchError("question has no gold query");
        if (q.mode == QuestionMode::YN && !q.relation) throw NoMatchError("question has no gold relation");
        candidates_ = q.candidates;
        ResolvedQuery rq;
        rq.trajector_quantifier = q.trajector.quantifier;
        rq.trajectors = q.trajector.ids;
        rq.landmark_quantifier = q.landmark.quantifier;
        rq.landmarks = q.landmark.ids;
        if (q.relation) rq.relation = *q.relation;
        return rq;
    }

    ResolvedQuery parsed_query(const Question& q) {
        ParserContext ctx{options_.relations, options_.attributes, ParseMode::Strict};
        auto parsed = parse_question(q.text, ctx, q.candidates);
        auto t = resolve_question_entity(parsed.trajector, facts_.chains, facts_.mentions);
        auto l = resolve_question_entity(parsed.landmark, facts_.chains, facts_.mentions);
        candidates_ = parsed.candidates;
        ResolvedQuery rq;
        rq.trajector_quantifier = t.selector.quantifier;
        rq.trajectors = std::move(t.ids);
        rq.landmark_quantifier = l.selector.quantifier;
        rq.landmarks = std::move(l.ids);
        if (parsed.relation) rq.relation = *parsed.relation;
        return rq;
    }

    std::vector<DerivationTree> witnesses(const ResolvedQuery& rq) const {
        std::vector<DerivationTree> out;
        for (auto t : rq.trajectors)
            for (auto l : rq.landmarks)
                if (holds(closure_, t, rq.relation, l)) out.push_back(explain(closure_, {t, rq.relation, l}));
        return out;
    }

    const Story& story_;
    const PipelineOptions& options_;
    const StoryFacts& facts_;
    const ClosureResult& closure_;
    std::vector<RelationType> candidates_;
};

}  // namespace

std::vector<Prediction> run_pipeline(const Dataset& dataset, const PipelineOptions& options) {
    std::vector<Prediction> out;
    for (std::size_t si = 0; si < dataset.stories.size(); ++si) {
        const auto& story = dataset.stories[si];
        std::optional<Rng> dropout;
        if (options.triplet_dropout > 0.0) dropout.emplace(options.dropout_seed ^ static_cast<std::uint64_t>(si));
        Rng* drop = dropout ? &*dropout : nullptr;

        StoryFacts facts;
        ClosureResult result;
        std::string failure;
        try {
            facts = options.mode == PipelineMode::GoldTriplets ? gold_facts(story, drop, options.triplet_dropout)
                                                               : parsed_facts(story, options, drop);
            result = closure(facts.facts, options.closure);
            if (result.contradiction())
                failure = "contradiction: " + format_fact(result.contradiction()->positive) + " and its negation";
        } catch (const std::exception& e) {
            failure = e.what();
        }
        if (!failure.empty()) {
            for (const auto& q : story.questions) out.push_back(abstain(q, failure));
            continue;
        }

        StoryRunner runner(story, options, facts, result);
        for (const auto& q : story.questions) {
            try {
                out.push_back(runner.answer(q));
            } catch (const std::exception& e) {
                out.push_back(abstain(q, e.what()));
            }
        }
    }
    return out;
}

}  // namespace sqa
