#include <gtest/gtest.h>

#include <algorithm>

#include "sqa/forge.hpp"
#include "sqa/json_io.hpp"
#include "sqa/metrics.hpp"
#include "sqa/pipeline.hpp"

using namespace sqa;

namespace {

Question yn(std::string id, std::string text, bool gold, RelationType r, EntityId t, EntityId l) {
    Question q;
    q.id = std::move(id);
    q.mode = QuestionMode::YN;
    q.text = std::move(text);
    q.gold_yes = gold;
    q.relation = r;
    q.trajector = {Quantifier::Unique, {t}};
    q.landmark = {Quantifier::Unique, {l}};
    return q;
}

// Story: a grey car (chain 0) in front of a grey house (chain 1).
Dataset car_and_house() {
    Story s;
    s.id = "car";
    s.sentences = {"A grey car is in front of a grey house."};
    s.gold_triplets = {{"a grey car", "in front of", "a grey house", RelationType::FRONT, 0, 0, 1}};
    GoldChain car{0, {{"a grey car", 0, 0}}, Cardinality::Singular, 1, {}, std::nullopt};
    GoldChain house{1, {{"a grey house", 0, 1}}, Cardinality::Singular, 1, {}, std::nullopt};
    s.gold_coref = {car, house};
    s.questions.push_back(yn("q0", "Is the house behind the car?", true, RelationType::BEHIND, 1, 0));
    s.questions.push_back(yn("q1", "Is the car behind the house?", false, RelationType::BEHIND, 0, 1));
    s.questions.push_back(yn("q2", "Is the car left of the house?", false, RelationType::LEFT, 0, 1));
    Question fr;
    fr.id = "q3";
    fr.mode = QuestionMode::FR;
    fr.text = "What is the position of the house relative to the car?";
    fr.candidates = GenConfig{}.candidates;
    fr.gold_relations = {RelationType::BEHIND};
    fr.trajector = {Quantifier::Unique, {1}};
    fr.landmark = {Quantifier::Unique, {0}};
    s.questions.push_back(fr);
    Dataset d;
    d.stories.push_back(s);
    return d;
}

Dataset generated(std::size_t n, std::uint64_t seed = 11) {
    GenConfig c;
    c.seed = seed;
    return generate_dataset(c, n);
}

PipelineOptions mode(PipelineMode m) {
    PipelineOptions o;
    o.mode = m;
    return o;
}

}  // namespace

TEST(Answer, YesNoQuantifiers) {
    // 0,1 circles; 2,3 squares. 0 left of both squares, 1 left of square 2 only.
    std::vector<Fact> facts{Fact::stated(0, RelationType::LEFT, 2), Fact::stated(0, RelationType::LEFT, 3),
                            Fact::stated(1, RelationType::LEFT, 2)};
    auto c = closure(facts);
    ResolvedQuery q{Quantifier::All, {0, 1}, Quantifier::Any, {2, 3}, RelationType::LEFT};
    EXPECT_TRUE(answer_yn(c, q));
    q.landmark_quantifier = Quantifier::All;
    EXPECT_FALSE(answer_yn(c, q));
    q.trajector_quantifier = Quantifier::Any;
    EXPECT_TRUE(answer_yn(c, q));
    q.trajectors.clear();
    EXPECT_FALSE(answer_yn(c, q));
}

TEST(Answer, UnknownIsNo) {
    auto c = closure(std::vector<Fact>{Fact::stated(0, RelationType::LEFT, 1)});
    EXPECT_FALSE(answer_yn(c, {Quantifier::Unique, {0}, Quantifier::Unique, {1}, RelationType::ABOVE}));
    EXPECT_TRUE(answer_yn(c, {Quantifier::Unique, {1}, Quantifier::Unique, {0}, RelationType::RIGHT}));
}

TEST(Answer, FindRelationCanonicalOrder) {
    std::vector<Fact> facts{Fact::stated(0, RelationType::NEAR, 1), Fact::stated(0, RelationType::LEFT, 1),
                            Fact::stated(0, RelationType::DC, 1)};
    auto c = closure(facts);
    std::vector<RelationType> cands{RelationType::NEAR, RelationType::LEFT, RelationType::DC, RelationType::FAR};
    EXPECT_EQ(answer_fr(c, 0, 1, cands),
              (std::vector<RelationType>{RelationType::DC, RelationType::LEFT, RelationType::NEAR}));
    EXPECT_EQ(answer_fr(c, 1, 0, {RelationType::RIGHT}), (std::vector<RelationType>{RelationType::RIGHT}));
    EXPECT_THROW(answer_fr(c, 0, 1, {}), std::invalid_argument);
}

TEST(Pipeline, CarAndHouseBothModes) {
    auto d = car_and_house();
    for (auto m : {PipelineMode::GoldTriplets, PipelineMode::FullParse}) {
        auto preds = run_pipeline(d, mode(m));
        ASSERT_EQ(preds.size(), 4u);
        for (const auto& p : preds) EXPECT_FALSE(p.abstained) << p.error;
        EXPECT_TRUE(preds[0].yes);
        EXPECT_FALSE(preds[1].yes);
        EXPECT_FALSE(preds[2].yes);
        EXPECT_EQ(preds[3].relations, (std::vector<RelationType>{RelationType::BEHIND}));
        auto m_ = evaluate(preds, d);
        EXPECT_EQ(m_.yn_accuracy, 1.0);
        EXPECT_EQ(m_.fr_exact_accuracy, 1.0);
    }
}

TEST(Pipeline, TraceExplainsYes) {
    auto d = car_and_house();
    auto o = mode(PipelineMode::FullParse);
    o.trace = true;
    auto preds = run_pipeline(d, o);
    ASSERT_EQ(preds[0].trace.size(), 1u);
    EXPECT_EQ(preds[0].trace[0].rule, Rule::Inverse);
    EXPECT_TRUE(replay(preds[0].trace[0]).has_value());
    EXPECT_TRUE(preds[1].trace.empty());
    EXPECT_EQ(preds[3].trace.size(), 1u);
}

TEST(Pipeline, GeneratedCorpusIsSolvedInBothModes) {
    auto d = generated(40);
    for (auto m : {PipelineMode::GoldTriplets, PipelineMode::FullParse}) {
        auto preds = run_pipeline(d, mode(m));
        auto metrics = evaluate(preds, d);
        EXPECT_EQ(metrics.abstained, 0u);
        EXPECT_EQ(metrics.yn_accuracy, 1.0);
        EXPECT_EQ(metrics.fr_exact_accuracy, 1.0);
        EXPECT_EQ(metrics.macro_f1, 1.0);
    }
}

TEST(Pipeline, GoldAndParseAgree) {
    auto d = generated(30, 4);
    auto gold = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    auto parse = run_pipeline(d, mode(PipelineMode::FullParse));
    ASSERT_EQ(gold.size(), parse.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
        EXPECT_EQ(gold[i].yes, parse[i].yes) << gold[i].question_id;
        EXPECT_EQ(gold[i].relations, parse[i].relations) << gold[i].question_id;
    }
}

TEST(Pipeline, ParsedFactsMatchGoldFacts) {
    auto d = generated(20, 8);
    for (const auto& s : d.stories) {
        auto gold = gold_story_facts(s);
        auto parsed = parsed_story_facts(s, {});
        auto key = [](const std::vector<Fact>& fs) {
            std::vector<Triple> out;
            for (const auto& f : fs) out.push_back(f.triple);
            std::sort(out.begin(), out.end());
            return out;
        };
        EXPECT_EQ(key(gold.facts), key(parsed.facts)) << s.id;
    }
}

TEST(Pipeline, MalformedStoryAbstains) {
    auto d = car_and_house();
    d.stories[0].sentences = {"A grey car wobbles near a grey house."};
    auto preds = run_pipeline(d, mode(PipelineMode::FullParse));
    ASSERT_EQ(preds.size(), 4u);
    for (const auto& p : preds) {
        EXPECT_TRUE(p.abstained);
        EXPECT_FALSE(p.error.empty());
    }
    auto metrics = evaluate(preds, d);
    EXPECT_EQ(metrics.abstained, 4u);
    EXPECT_EQ(metrics.yn_correct, 2u);   // the two gold-No questions
}

TEST(Pipeline, ContradictionAbstains) {
    auto d = car_and_house();
    d.stories[0].sentences.push_back("The car is behind the house.");
    auto preds = run_pipeline(d, mode(PipelineMode::FullParse));
    for (const auto& p : preds) {
        EXPECT_TRUE(p.abstained);
        EXPECT_NE(p.error.find("contradiction"), std::string::npos);
    }
}

TEST(Pipeline, UnresolvableQuestionAbstainsAlone) {
    auto d = car_and_house();
    d.stories[0].questions[2].text = "Is the truck left of the house?";
    auto preds = run_pipeline(d, mode(PipelineMode::FullParse));
    EXPECT_FALSE(preds[0].abstained);
    EXPECT_TRUE(preds[2].abstained);
}

TEST(Pipeline, DropoutOnlyCausesFalseNo) {
    auto d = generated(60, 21);
    for (auto m : {PipelineMode::GoldTriplets, PipelineMode::FullParse}) {
        auto o = mode(m);
        o.triplet_dropout = 0.05;
        o.dropout_seed = 99;
        auto preds = run_pipeline(d, o);
        std::size_t i = 0, false_no = 0;
        for (const auto& s : d.stories)
            for (const auto& q : s.questions) {
                const auto& p = preds[i++];
                if (p.abstained) continue;
                if (q.mode == QuestionMode::YN && !q.quantified()) {
                    EXPECT_FALSE(p.yes && !q.gold_yes) << q.id;
                    false_no += (!p.yes && q.gold_yes) ? 1 : 0;
                }
                if (q.mode == QuestionMode::FR) {
                    for (auto r : p.relations)
                        EXPECT_TRUE(std::find(q.gold_relations.begin(), q.gold_relations.end(), r) !=
                                    q.gold_relations.end());
                }
            }
        EXPECT_GT(false_no, 0u);
    }
}

TEST(Pipeline, MoreFactsNeverRetractYes) {
    auto d = generated(20, 31);
    auto full = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    auto o = mode(PipelineMode::GoldTriplets);
    o.triplet_dropout = 0.2;
    auto thinned = run_pipeline(d, o);
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (thinned[i].abstained) continue;
        if (thinned[i].yes) {
            EXPECT_TRUE(full[i].yes) << full[i].question_id;
        }
    }
}

TEST(Pipeline, SentenceOrderDoesNotChangeGoldAnswers) {
    auto d = generated(15, 2);
    auto base = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    for (auto& s : d.stories) std::reverse(s.gold_triplets.begin(), s.gold_triplets.end());
    auto again = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_EQ(base[i].yes, again[i].yes);
        EXPECT_EQ(base[i].relations, again[i].relations);
    }
}

TEST(Pipeline, ModeNames) {
    EXPECT_EQ(pipeline_mode_from_string("gold"), PipelineMode::GoldTriplets);
    EXPECT_EQ(pipeline_mode_from_string("parse"), PipelineMode::FullParse);
    EXPECT_FALSE(pipeline_mode_from_string("other").has_value());
    EXPECT_EQ(to_string(PipelineMode::FullParse), "parse");
}

TEST(Metrics, EmptyFindRelationPrediction) {
    auto d = car_and_house();
    auto preds = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    preds[3].relations.clear();
    auto m = evaluate(preds, d);
    EXPECT_EQ(m.fr_exact_accuracy, 0.0);
    ASSERT_EQ(m.per_relation.size(), 1u);
    EXPECT_EQ(m.per_relation[0].relation, RelationType::BEHIND);
    EXPECT_EQ(m.per_relation[0].false_negatives, 1u);
    EXPECT_EQ(m.per_relation[0].precision, 0.0);
    EXPECT_EQ(m.macro_f1, 0.0);
}

TEST(Metrics, AlwaysNoBaseline) {
    auto d = car_and_house();
    auto preds = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    for (auto& p : preds) p.yes = false;
    auto m = evaluate(preds, d);
    EXPECT_EQ(m.yn_total, 3u);
    EXPECT_EQ(m.yn_correct, 2u);
    EXPECT_DOUBLE_EQ(*m.yn_accuracy, 2.0 / 3.0);
    EXPECT_EQ(m.gold_yes, 1u);
    EXPECT_EQ(m.gold_no, 2u);
    EXPECT_EQ(m.predicted_no, 3u);
}

TEST(Metrics, PartialRelationSet) {
    auto d = car_and_house();
    d.stories[0].questions[3].gold_relations = {RelationType::BEHIND, RelationType::FAR};
    auto preds = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    auto m = evaluate(preds, d);
    EXPECT_EQ(m.fr_exact_accuracy, 0.0);
    EXPECT_DOUBLE_EQ(*m.macro_precision, 0.5);   // BEHIND 1, FAR 0
    EXPECT_DOUBLE_EQ(*m.macro_recall, 0.5);
    EXPECT_DOUBLE_EQ(*m.macro_f1, 0.5);
}

TEST(Metrics, IdMismatch) {
    auto d = car_and_house();
    auto preds = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    auto missing = preds;
    missing.pop_back();
    EXPECT_THROW(evaluate(missing, d), IdMismatchError);
    auto extra = preds;
    extra.push_back(preds[0]);
    EXPECT_THROW(evaluate(extra, d), IdMismatchError);
    auto renamed = preds;
    renamed[1].question_id = "zz";
    EXPECT_THROW(evaluate(renamed, d), IdMismatchError);
    auto wrong_mode = preds;
    wrong_mode[0].mode = QuestionMode::FR;
    EXPECT_THROW(evaluate(wrong_mode, d), IdMismatchError);
}

TEST(Metrics, HopBuckets) {
    auto d = generated(30, 12);
    auto preds = run_pipeline(d, mode(PipelineMode::GoldTriplets));
    auto m = evaluate(preds, d);
    std::size_t yn = 0, fr = 0;
    for (const auto& b : m.by_hops) {
        yn += b.yn_total;
        fr += b.fr_total;
        EXPECT_EQ(b.yn_total, b.yn_correct);
    }
    EXPECT_EQ(yn, m.yn_total);
    EXPECT_EQ(fr, m.fr_total);
    EXPECT_GT(m.by_hops.size(), 1u);
    EXPECT_FALSE(format_table(m).empty());
    EXPECT_TRUE(to_json(m).contains("by_hops"));
    EXPECT_FALSE(to_json(m, false).contains("by_hops"));
}

TEST(Metrics, PredictionsJsonRoundTrip) {
    auto d = car_and_house();
    auto o = mode(PipelineMode::FullParse);
    o.trace = true;
    auto preds = run_pipeline(d, o);
    preds[2].abstained = true;
    preds[2].error = "because";
    auto back = predictions_from_json(predictions_to_json(preds));
    ASSERT_EQ(back.size(), preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
        EXPECT_EQ(back[i].question_id, preds[i].question_id);
        EXPECT_EQ(back[i].mode, preds[i].mode);
        EXPECT_EQ(back[i].yes, preds[i].yes);
        EXPECT_EQ(back[i].relations, preds[i].relations);
        EXPECT_EQ(back[i].abstained, preds[i].abstained);
        EXPECT_EQ(back[i].error, preds[i].error);
    }
    EXPECT_ANY_THROW(predictions_from_json(Json::parse(R"({"predictions": [{"id": 3}]})")));
}

TEST(Json, ClosureSerializationIsStable) {
    std::vector<Fact> facts{Fact::stated(0, RelationType::FRONT, 1)};
    auto j = to_json(closure(facts));
    EXPECT_EQ(j["positive"], 2);
    EXPECT_EQ(j["negative"], 2);
    EXPECT_EQ(serialize_closure(closure(facts)), j.dump());
}

TEST(Json, ConfigRoundTrip) {
    GenConfig c;
    c.seed = 77;
    c.blocks = {1, 4};
    c.candidates = {RelationType::LEFT, RelationType::NEAR};
    auto back = config_from_json(to_json(c));
    EXPECT_EQ(back, c);
    auto partial = config_from_json(Json::parse(R"({"seed": 5})"));
    EXPECT_EQ(partial.seed, 5u);
    EXPECT_EQ(partial.blocks, GenConfig{}.blocks);
    EXPECT_THROW(config_from_json(Json::parse(R"({"candidates": ["SIDEWAYS"]})")), SchemaError);
}

TEST(Json, SceneRoundTrip) {
    GenConfig c;
    auto scene = generate_scene(c);
    auto back = scene_from_json(to_json(scene));
    ASSERT_EQ(back.size(), scene.size());
    for (std::size_t i = 0; i < scene.size(); ++i) {
        EXPECT_EQ(back.entities[i].box, scene.entities[i].box);
        EXPECT_EQ(back.entities[i].parent, scene.entities[i].parent);
        EXPECT_EQ(back.entities[i].attributes, scene.entities[i].attributes);
    }
    auto broken = to_json(scene);
    broken["entities"][2]["parent"] = 2;
    EXPECT_THROW(scene_from_json(broken), SchemaError);
}
