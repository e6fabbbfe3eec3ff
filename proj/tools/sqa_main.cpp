#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <string>

#include <CLI11.hpp>

#include "sqa/forge.hpp"
#include "sqa/json_io.hpp"
#include "sqa/metrics.hpp"
#include "sqa/pipeline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kBudget = 3;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GenerateArgs {
    std::optional<std::uint64_t> seed;
    std::size_t stories = 100;
    std::string config;
    std::string out;
};

int run_generate(const GenerateArgs& a) {
    sqa::GenConfig config;
    if (!a.config.empty()) config = sqa::load_config(a.config);
    if (a.seed) config.seed = *a.seed;
    try {
        config.validate();
    } catch (const sqa::ConfigError& e) {
        throw sqa::SchemaError(std::string("config: ") + e.what());
    }
    std::vector<std::string> warnings;
    auto dataset = sqa::generate_dataset(config, a.stories, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    sqa::save_json(sqa::to_json(dataset), a.out);
    std::size_t questions = 0;
    for (const auto& s : dataset.stories) questions += s.questions.size();
    std::cout << "wrote " << dataset.stories.size() << " stories, " << questions << " questions to " << a.out << '\n';
    return kOk;
}

struct SolveArgs {
    std::string dataset;
    std::string mode = "gold";
    bool trace = false;
    bool lenient = false;
    std::string lexicon;
    std::string attributes;
    std::string out;
};

int run_solve(const SolveArgs& a) {
    auto mode = sqa::pipeline_mode_from_string(a.mode);
    if (!mode) throw UsageError("--mode must be gold or parse");
    auto dataset = sqa::load_dataset(a.dataset);

    std::optional<sqa::RelationLexicon> relations;
    std::optional<sqa::AttributeLexicon> attributes;
    sqa::PipelineOptions options;
    options.mode = *mode;
    options.trace = a.trace;
    options.parse_mode = a.lenient ? sqa::ParseMode::Lenient : sqa::ParseMode::Strict;
    try {
        if (!a.lexicon.empty()) {
            relations = sqa::RelationLexicon::load(a.lexicon);
            options.relations = &*relations;
        }
        if (!a.attributes.empty()) {
            attributes = sqa::AttributeLexicon::load(a.attributes);
            options.attributes = &*attributes;
        }
    } catch (const sqa::LexiconError& e) {
        throw sqa::SchemaError(e.what());
    }

    auto start = std::chrono::steady_clock::now();
    auto predictions = sqa::run_pipeline(dataset, options);
    auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    sqa::save_json(sqa::predictions_to_json(predictions), a.out);
    std::size_t abstained = 0;
    for (const auto& p : predictions) abstained += p.abstained;
    std::printf("answered %zu questions (%zu abstained) in %.3f s, %.4f ms per question\n", predictions.size(),
                abstained, seconds, predictions.empty() ? 0.0 : 1000.0 * seconds / static_cast<double>(predictions.size()));
    return kOk;
}

struct ClosureArgs {
    std::string facts;
    bool trace = false;
    std::string query;
};

class Names {
public:
    sqa::EntityId id(const std::string& name) {
        auto [it, fresh] = ids_.emplace(name, static_cast<sqa::EntityId>(names_.size()));
        if (fresh) names_.push_back(name);
        return it->second;
    }
    std::optional<sqa::EntityId> find(const std::string& name) const {
        auto it = ids_.find(name);
        return it == ids_.end() ? std::nullopt : std::optional<sqa::EntityId>(it->second);
    }
    const std::string& name(sqa::EntityId id) const { return names_.at(id); }

    std::string fact(const sqa::Triple& t, sqa::Polarity p) const {
        std::string s = p == sqa::Polarity::Negative ? "NOT " : "";
        return s + std::string(sqa::to_string(t.relation)) + "(" + name(t.subject) + "," + name(t.object) + ")";
    }

    sqa::Json tree(const sqa::DerivationTree& t) const {
        sqa::Json j{{"fact", fact(t.fact, t.polarity)}, {"rule", std::string(sqa::to_string(t.rule))}};
        if (t.rule == sqa::Rule::Stated) {
            j["sentence"] = t.sentence;
        } else {
            sqa::Json ps = sqa::Json::array();
            for (const auto& p : t.premises) ps.push_back(tree(p));
            j["premises"] = std::move(ps);
        }
        return j;
    }

private:
    std::map<std::string, sqa::EntityId> ids_;
    std::vector<std::string> names_;
};

std::string entity_name(const sqa::Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_unsigned()) return std::to_string(j.get<std::uint64_t>());
    throw sqa::SchemaError("entities must be strings or non-negative integers");
}

int run_closure(const ClosureArgs& a) {
    auto input = sqa::read_json(a.facts);
    if (!input.is_array()) throw sqa::SchemaError("facts file must hold a JSON array");
    Names names;
    std::vector<sqa::Fact> facts;
    try {
        for (const auto& jf : input) {
            auto rel_name = jf.at("relation").get<std::string>();
            auto rel = sqa::relation_from_string(rel_name);
            if (!rel) throw sqa::SchemaError("unknown relation '" + rel_name + "'");
            auto s = names.id(entity_name(jf.at("subject")));
            auto o = names.id(entity_name(jf.at("object")));
            if (s == o) throw sqa::SchemaError("fact relates '" + names.name(s) + "' to itself");
            facts.push_back(sqa::Fact::stated(s, *rel, o, jf.value("sentence", std::size_t{0})));
        }
    } catch (const nlohmann::json::exception& e) {
        throw sqa::SchemaError(std::string("facts: ") + e.what());
    }

    auto result = sqa::closure(facts);
    sqa::Json out;
    sqa::Json ents = sqa::Json::array();
    for (sqa::EntityId i = 0; i < result.entity_count(); ++i) ents.push_back(names.name(i));
    out["entities"] = ents;
    out["stated"] = result.stated_count();
    sqa::Json pos = sqa::Json::array(), neg = sqa::Json::array();
    for (const auto& t : result.positives()) {
        if (a.trace) pos.push_back(names.tree(sqa::explain(result, t)));
        else pos.push_back(names.fact(t, sqa::Polarity::Positive));
    }
    for (const auto& t : result.negatives()) {
        if (a.trace) neg.push_back(names.tree(sqa::explain(result, t, sqa::Polarity::Negative)));
        else neg.push_back(names.fact(t, sqa::Polarity::Negative));
    }
    out["positive"] = pos;
    out["negative"] = neg;
    out["contradiction"] = result.contradiction()
                               ? sqa::Json(names.fact(result.contradiction()->positive, sqa::Polarity::Positive))
                               : sqa::Json(nullptr);

    int code = result.contradiction() ? kBudget : kOk;
    if (!a.query.empty()) {
        static const std::regex pattern(R"(\s*([A-Za-z]+)\s*\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\s*)");
        std::smatch m;
        if (!std::regex_match(a.query, m, pattern)) throw UsageError("--query must look like REL(a,b)");
        auto rel = sqa::relation_from_string(m[1].str());
        if (!rel) throw UsageError("unknown relation '" + m[1].str() + "'");
        auto s = names.find(m[2].str());
        auto o = names.find(m[3].str());
        sqa::Json q{{"query", a.query}};
        if (!s || !o) {
            q["answer"] = "Unknown";
        } else if (result.contradiction()) {
            q["answer"] = "Contradiction";
        } else {
            auto v = sqa::query(result, *s, *rel, *o);
            q["answer"] = std::string(sqa::to_string(v));
            if (a.trace && v != sqa::TruthValue::Unknown) {
                auto polarity = v == sqa::TruthValue::True ? sqa::Polarity::Positive : sqa::Polarity::Negative;
                q["trace"] = names.tree(sqa::explain(result, {*s, *rel, *o}, polarity));
            }
        }
        out["query"] = std::move(q);
    }
    std::cout << out.dump(2) << '\n';
    return code;
}

struct EvalArgs {
    std::string pred;
    std::string dataset;
    bool by_hops = false;
    std::string report;
};

int run_eval(const EvalArgs& a) {
    auto dataset = sqa::load_dataset(a.dataset);
    auto predictions = sqa::predictions_from_json(sqa::read_json(a.pred));
    auto metrics = sqa::evaluate(predictions, dataset);
    sqa::save_json(sqa::to_json(metrics, a.by_hops), a.report);
    std::cout << sqa::format_table(metrics, a.by_hops);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic spatial question answering: generate, solve, reason, evaluate"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Generate a synthetic story/question dataset");
    g->add_option("--seed", gen.seed, "Base seed (overrides the config)");
    g->add_option("--stories", gen.stories, "Number of stories")->check(CLI::PositiveNumber);
    g->add_option("--config", gen.config, "Generator config JSON");
    g->add_option("--out", gen.out, "Output dataset path")->required();

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "Answer every question of a dataset");
    s->add_option("--dataset", solve.dataset, "Dataset JSON")->required();
    s->add_option("--mode", solve.mode, "gold (annotated triplets) or parse (read the text)");
    s->add_flag("--trace", solve.trace, "Attach derivation trees to positive answers");
    s->add_flag("--lenient", solve.lenient, "Skip ungrammatical sentences instead of failing the story");
    s->add_option("--lexicon", solve.lexicon, "Relation lexicon TSV");
    s->add_option("--attributes", solve.attributes, "Attribute lexicon JSON");
    s->add_option("--out", solve.out, "Predictions output path")->required();

    ClosureArgs cl;
    auto* c = app.add_subcommand("closure", "Compute the closure of a fact file");
    c->add_option("--facts", cl.facts, "JSON array of {subject, relation, object[, sentence]}")->required();
    c->add_flag("--trace", cl.trace, "Print derivation trees");
    c->add_option("--query", cl.query, "Query such as LEFT(a,b)");

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Score predictions against a dataset");
    e->add_option("--pred", ev.pred, "Predictions JSON")->required();
    e->add_option("--dataset", ev.dataset, "Dataset JSON")->required();
    e->add_flag("--by-hops", ev.by_hops, "Include the per-hop breakdown");
    e->add_option("--report", ev.report, "Report output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*g) return run_generate(gen);
        if (*s) return run_solve(solve);
        if (*c) return run_closure(cl);
        if (*e) return run_eval(ev);
    } catch (const UsageError& err) {
        std::cerr << "usage error: " << err.what() << '\n';
        return kUsage;
    } catch (const sqa::CapacityError& err) {
        std::cerr << "capacity exceeded: " << err.what() << '\n';
        return kBudget;
    } catch (const sqa::ContradictionError& err) {
        std::cerr << "contradiction: " << err.what() << '\n';
        return kBudget;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kData;
    }
    return kUsage;
}
