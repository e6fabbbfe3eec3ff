#include "sqa/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

namespace sqa {

namespace {

double ratio(std::size_t num, std::size_t den) { return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }

bool contains(const std::vector<RelationType>& v, RelationType r) { return std::find(v.begin(), v.end(), r) != v.end(); }

}  // namespace

Metrics evaluate(const std::vector<Prediction>& predictions, const Dataset& dataset) {
    std::unordered_map<std::string, const Prediction*> by_id;
    for (const auto& p : predictions)
        if (!by_id.emplace(p.question_id, &p).second)
            throw IdMismatchError("duplicate prediction for question '" + p.question_id + "'");

    Metrics m;
    std::map<std::size_t, HopBucket> hops;
    std::array<RelationScore, kRelationCount> scores{};
    std::array<bool, kRelationCount> in_gold{}, seen{};
    std::size_t matched = 0;

    for (const auto& story : dataset.stories)
        for (const auto& q : story.questions) {
            auto it = by_id.find(q.id);
            if (it == by_id.end()) throw IdMismatchError("no prediction for question '" + q.id + "'");
            const auto& p = *it->second;
            ++matched;
            if (p.mode != q.mode) throw IdMismatchError("prediction for '" + q.id + "' has the wrong mode");
            if (p.abstained) ++m.abstained;
            auto& bucket = hops[q.hops];
            bucket.hops = q.hops;

            if (q.mode == QuestionMode::YN) {
                const bool yes = p.yes && !p.abstained;
                ++m.yn_total;
                ++bucket.yn_total;
                (yes ? m.predicted_yes : m.predicted_no)++;
                (q.gold_yes ? m.gold_yes : m.gold_no)++;
                if (yes == q.gold_yes) {
                    ++m.yn_correct;
                    ++bucket.yn_correct;
                }
            } else {
                ++m.fr_total;
                ++bucket.fr_total;
                std::vector<RelationType> predicted = p.abstained ? std::vector<RelationType>{} : p.relations;
                std::sort(predicted.begin(), predicted.end());
                predicted.erase(std::unique(predicted.begin(), predicted.end()), predicted.end());
                auto gold = q.gold_relations;
                std::sort(gold.begin(), gold.end());
                if (predicted == gold) {
                    ++m.fr_correct;
                    ++bucket.fr_correct;
                }
                for (auto r : kAllRelations) {
                    const bool pr = contains(predicted, r), gd = contains(gold, r);
                    auto& s = scores[index_of(r)];
                    if (pr && gd) ++s.true_positives;
                    else if (pr) ++s.false_positives;
                    else if (gd) ++s.false_negatives;
                    if (gd) in_gold[index_of(r)] = true;
                    if (pr || gd) seen[index_of(r)] = true;
                }
            }
        }
    if (matched != by_id.size()) throw IdMismatchError("predictions contain ids that are not in the dataset");

    if (m.yn_total) m.yn_accuracy = ratio(m.yn_correct, m.yn_total);
    if (m.fr_total) m.fr_exact_accuracy = ratio(m.fr_correct, m.fr_total);

    double sp = 0, sr = 0, sf = 0;
    std::size_t n = 0;
    for (auto r : kAllRelations) {
        if (!seen[index_of(r)]) continue;
        auto s = scores[index_of(r)];
        s.relation = r;
        s.precision = ratio(s.true_positives, s.true_positives + s.false_positives);
        s.recall = ratio(s.true_positives, s.true_positives + s.false_negatives);
        s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
        m.per_relation.push_back(s);
        if (in_gold[index_of(r)]) {
            sp += s.precision;
            sr += s.recall;
            sf += s.f1;
            ++n;
        }
    }
    if (n) {
        m.macro_precision = sp / static_cast<double>(n);
        m.macro_recall = sr / static_cast<double>(n);
        m.macro_f1 = sf / static_cast<double>(n);
    }
    for (auto& [h, b] : hops) m.by_hops.push_back(b);
    return m;
}

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string fmt(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
}

std::string fmt(double v) { return fmt(std::optional<double>(v)); }

}  // namespace

Json to_json(const Metrics& m, bool by_hops) {
    Json per = Json::array();
    for (const auto& s : m.per_relation)
        per.push_back(Json{{"relation", std::string(to_string(s.relation))},
                           {"tp", s.true_positives},
                           {"fp", s.false_positives},
                           {"fn", s.false_negatives},
                           {"precision", s.precision},
                           {"recall", s.recall},
                           {"f1", s.f1}});
    Json j{{"yn_total", m.yn_total},
           {"yn_correct", m.yn_correct},
           {"yn_accuracy", opt(m.yn_accuracy)},
           {"fr_total", m.fr_total},
           {"fr_correct", m.fr_correct},
           {"fr_exact_accuracy", opt(m.fr_exact_accuracy)},
           {"macro_precision", opt(m.macro_precision)},
           {"macro_recall", opt(m.macro_recall)},
           {"macro_f1", opt(m.macro_f1)},
           {"per_relation", per},
           {"counts",
            Json{{"predicted_yes", m.predicted_yes},
                 {"predicted_no", m.predicted_no},
                 {"gold_yes", m.gold_yes},
                 {"gold_no", m.gold_no},
                 {"abstained", m.abstained}}}};
    if (by_hops) {
        Json hops = Json::array();
        for (const auto& b : m.by_hops)
            hops.push_back(Json{{"hops", b.hops},
                                {"yn_total", b.yn_total},
                                {"yn_correct", b.yn_correct},
                                {"fr_total", b.fr_total},
                                {"fr_correct", b.fr_correct}});
        j["by_hops"] = std::move(hops);
    }
    if (m.mean_runtime_ms) j["mean_runtime_ms"] = *m.mean_runtime_ms;
    return j;
}

std::string format_table(const Metrics& m, bool by_hops) {
    std::string out;
    char line[160];
    auto put = [&](const char* f, auto... args) {
        std::snprintf(line, sizeof line, f, args...);
        out += line;
    };
    put("%-22s %10s %8s %8s\n", "metric", "value", "correct", "total");
    put("%-22s %10s %8zu %8zu\n", "yn_accuracy", fmt(m.yn_accuracy).c_str(), m.yn_correct, m.yn_total);
    put("%-22s %10s %8zu %8zu\n", "fr_exact_accuracy", fmt(m.fr_exact_accuracy).c_str(), m.fr_correct, m.fr_total);
    put("%-22s %10s\n", "macro_precision", fmt(m.macro_precision).c_str());
    put("%-22s %10s\n", "macro_recall", fmt(m.macro_recall).c_str());
    put("%-22s %10s\n", "macro_f1", fmt(m.macro_f1).c_str());
    put("yes/no predicted %zu/%zu, gold %zu/%zu, abstained %zu\n", m.predicted_yes, m.predicted_no, m.gold_yes,
        m.gold_no, m.abstained);
    if (m.mean_runtime_ms) put("mean runtime per question: %.4f ms\n", *m.mean_runtime_ms);
    if (!m.per_relation.empty()) {
        put("\n%-8s %8s %8s %8s %6s %6s %6s\n", "relation", "P", "R", "F1", "tp", "fp", "fn");
        for (const auto& s : m.per_relation)
            put("%-8s %8s %8s %8s %6zu %6zu %6zu\n", std::string(to_string(s.relation)).c_str(),
                fmt(s.precision).c_str(), fmt(s.recall).c_str(), fmt(s.f1).c_str(), s.true_positives,
                s.false_positives, s.false_negatives);
    }
    if (by_hops && !m.by_hops.empty()) {
        put("\n%-5s %14s %14s\n", "hops", "yn", "fr");
        for (const auto& b : m.by_hops) {
            char yn[32], fr[32];
            std::snprintf(yn, sizeof yn, "%zu/%zu", b.yn_correct, b.yn_total);
            std::snprintf(fr, sizeof fr, "%zu/%zu", b.fr_correct, b.fr_total);
            put("%-5zu %14s %14s\n", b.hops, yn, fr);
        }
    }
    return out;
}

Json predictions_to_json(const std::vector<Prediction>& predictions) {
    Json arr = Json::array();
    for (const auto& p : predictions) {
        Json j{{"question_id", p.question_id}, {"mode", std::string(to_string(p.mode))}};
        if (p.mode == QuestionMode::YN) {
            j["answer"] = p.yes ? "Yes" : "No";
        } else {
            Json rs = Json::array();
            for (auto r : p.relations) rs.push_back(std::string(to_string(r)));
            j["answer"] = std::move(rs);
        }
        j["abstained"] = p.abstained;
        if (!p.error.empty()) j["error"] = p.error;
        if (!p.trace.empty()) {
            Json trace = Json::array();
            for (const auto& t : p.trace) trace.push_back(to_json(t));
            j["trace"] = std::move(trace);
        }
        arr.push_back(std::move(j));
    }
    return Json{{"predictions", arr}};
}

std::vector<Prediction> predictions_from_json(const Json& j) {
    try {
        std::vector<Prediction> out;
        for (const auto& jp : j.at("predictions")) {
            Prediction p;
            p.question_id = jp.at("question_id").get<std::string>();
            auto mode = question_mode_from_string(jp.at("mode").get<std::string>());
            if (!mode) throw SchemaError("prediction " + p.question_id + ": unknown mode");
            p.mode = *mode;
            const auto& a = jp.at("answer");
            if (p.mode == QuestionMode::YN) {
                auto s = a.get<std::string>();
                if (s != "Yes" && s != "No") throw SchemaError("prediction " + p.question_id + ": answer must be Yes or No");
                p.yes = s == "Yes";
            } else {
                for (const auto& r : a) {
                    auto rel = relation_from_string(r.get<std::string>());
                    if (!rel) throw SchemaError("prediction " + p.question_id + ": unknown relation");
                    p.relations.push_back(*rel);
                }
            }
            p.abstained = jp.value("abstained", false);
            p.error = jp.value("error", "");
            out.push_back(std::move(p));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("predictions: ") + e.what());
    }
}

}  // namespace sqa
