#include "sqa/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace sqa {

namespace {

RelationType relation_of(const Json& j) {
    auto name = j.get<std::string>();
    auto r = relation_from_string(name);
    if (!r) throw SchemaError("unknown relation '" + name + "'");
    return *r;
}

Json relation_list(const std::vector<RelationType>& rs) {
    Json out = Json::array();
    for (auto r : rs) out.push_back(std::string(to_string(r)));
    return out;
}

std::vector<RelationType> relations_from(const Json& j) {
    std::vector<RelationType> out;
    for (const auto& x : j) out.push_back(relation_of(x));
    return out;
}

Json range_json(const IntRange& r) { return Json::array({r.min, r.max}); }

IntRange range_from(const Json& j, const char* key) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(std::string(key) + " must be [min, max]");
    return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

std::string_view cardinality_name(Cardinality c) {
    switch (c) {
        case Cardinality::Singular: return "singular";
        case Cardinality::Plural: return "plural";
        case Cardinality::Group: return "group";
    }
    return "?";
}

Cardinality cardinality_from(const std::string& s) {
    if (s == "singular") return Cardinality::Singular;
    if (s == "plural") return Cardinality::Plural;
    if (s == "group") return Cardinality::Group;
    throw SchemaError("unknown cardinality '" + s + "'");
}

Quantifier quantifier_of_json(const Json& j) {
    auto name = j.get<std::string>();
    auto q = quantifier_from_string(name);
    if (!q) throw SchemaError("unknown quantifier '" + name + "'");
    return *q;
}

const Json& need(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing key '") + key + "'");
    return j.at(key);
}

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const SchemaError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string(what) + ": " + e.what());
    }
}

Json attributes_json(const Attributes& a) {
    Json j = Json::object();
    if (!a.size.empty()) j["size"] = a.size;
    if (!a.color.empty()) j["color"] = a.color;
    if (!a.noun.empty()) j["noun"] = a.noun;
    if (!a.letter.empty()) j["letter"] = a.letter;
    return j;
}

Attributes attributes_from(const Json& j) {
    Attributes a;
    a.size = j.value("size", "");
    a.color = j.value("color", "");
    a.noun = j.value("noun", "");
    a.letter = j.value("letter", "");
    return a;
}

}  // namespace

Json triple_json(const Triple& t) {
    return Json{{"subject", t.subject}, {"relation", std::string(to_string(t.relation))}, {"object", t.object}};
}

// ---------------------------------------------------------------------------
// Scene

Json to_json(const Scene& scene) {
    Json ents = Json::array();
    for (const auto& e : scene.entities) {
        Json box = Json::array();
        for (const auto& ax : e.box.axes) box.push_back(Json::array({ax.lo, ax.hi}));
        Json je{{"id", e.id}, {"attributes", attributes_json(e.attributes)}, {"box", box}};
        je["parent"] = e.parent ? Json(*e.parent) : Json(nullptr);
        ents.push_back(std::move(je));
    }
    return Json{{"near_threshold", scene.near_threshold}, {"far_threshold", scene.far_threshold}, {"entities", ents}};
}

Scene scene_from_json(const Json& j) {
    return guarded("scene", [&] {
        Scene s;
        s.near_threshold = need(j, "near_threshold").get<std::int64_t>();
        s.far_threshold = need(j, "far_threshold").get<std::int64_t>();
        for (const auto& je : need(j, "entities")) {
            SceneEntity e;
            e.id = need(je, "id").get<EntityId>();
            e.attributes = attributes_from(je.value("attributes", Json::object()));
            const auto& box = need(je, "box");
            if (!box.is_array() || box.size() != 3) throw SchemaError("box must have three intervals");
            for (std::size_t k = 0; k < 3; ++k) {
                if (!box[k].is_array() || box[k].size() != 2) throw SchemaError("interval must be [lo, hi]");
                e.box.axes[k] = {box[k][0].get<std::int64_t>(), box[k][1].get<std::int64_t>()};
            }
            if (je.contains("parent") && !je.at("parent").is_null()) e.parent = je.at("parent").get<EntityId>();
            s.entities.push_back(std::move(e));
        }
        try {
            s.validate();
        } catch (const SceneError& e) {
            throw SchemaError(std::string("invalid scene: ") + e.what());
        }
        return s;
    });
}

// ---------------------------------------------------------------------------
// Config

Json to_json(const GenConfig& c) {
    return Json{
        {"seed", c.seed},
        {"num_blocks", range_json(c.blocks)},
        {"objects_per_block", range_json(c.objects_per_block)},
        {"block_extent", range_json(c.block_extent)},
        {"object_extent", range_json(c.object_extent)},
        {"block_gap", range_json(c.block_gap)},
        {"sizes", c.sizes},
        {"colors", c.colors},
        {"shapes", c.shapes},
        {"near_threshold", c.near_threshold},
        {"far_threshold", c.far_threshold},
        {"density", c.density},
        {"tangent_probability", c.tangent_probability},
        {"group_probability", c.group_probability},
        {"conjunction_probability", c.conjunction_probability},
        {"pronoun_probability", c.pronoun_probability},
        {"yn_per_story", c.yn_per_story},
        {"fr_per_story", c.fr_per_story},
        {"quantified_per_story", c.quantified_per_story},
        {"hops", range_json(c.hops)},
        {"candidates", relation_list(c.candidates)},
        {"placement_attempts", c.placement_attempts},
    };
}

GenConfig config_from_json(const Json& j) {
    return guarded("config", [&] {
        if (!j.is_object()) throw SchemaError("config must be a JSON object");
        GenConfig c;
        static const std::set<std::string> known{
            "seed", "num_blocks", "objects_per_block", "block_extent", "object_extent", "block_gap", "sizes",
            "colors", "shapes", "near_threshold", "far_threshold", "density", "tangent_probability",
            "group_probability", "conjunction_probability", "pronoun_probability", "yn_per_story", "fr_per_story",
            "quantified_per_story", "hops", "candidates", "placement_attempts"};
        for (const auto& [key, value] : j.items())
            if (!known.count(key)) throw SchemaError("unknown config key '" + key + "'");

        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
        };
        auto range = [&](const char* key, IntRange& field) {
            if (j.contains(key)) field = range_from(j.at(key), key);
        };
        get("seed", c.seed);
        range("num_blocks", c.blocks);
        range("objects_per_block", c.objects_per_block);
        range("block_extent", c.block_extent);
        range("object_extent", c.object_extent);
        range("block_gap", c.block_gap);
        get("sizes", c.sizes);
        get("colors", c.colors);
        get("shapes", c.shapes);
        get("near_threshold", c.near_threshold);
        get("far_threshold", c.far_threshold);
        get("density", c.density);
        get("tangent_probability", c.tangent_probability);
        get("group_probability", c.group_probability);
        get("conjunction_probability", c.conjunction_probability);
        get("pronoun_probability", c.pronoun_probability);
        get("yn_per_story", c.yn_per_story);
        get("fr_per_story", c.fr_per_story);
        get("quantified_per_story", c.quantified_per_story);
        range("hops", c.hops);
        if (j.contains("candidates")) c.candidates = relations_from(j.at("candidates"));
        get("placement_attempts", c.placement_attempts);
        return c;
    });
}

GenConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json(path)); }

// ---------------------------------------------------------------------------
// Questions and stories

namespace {

Json selector_json(const SelectorQuery& s) {
    return Json{{"quantifier", std::string(to_string(s.quantifier))}, {"ids", s.ids}};
}

SelectorQuery selector_from(const Json& j) {
    SelectorQuery s;
    s.quantifier = quantifier_of_json(need(j, "quantifier"));
    s.ids = need(j, "ids").get<std::vector<EntityId>>();
    if (s.ids.empty()) throw SchemaError("selector ids must be non-empty");
    return s;
}

}  // namespace

Json to_json(const Question& q) {
    Json j{{"id", q.id}, {"mode", std::string(to_string(q.mode))}, {"text", q.text}};
    if (q.mode == QuestionMode::FR) {
        j["candidates"] = relation_list(q.candidates);
        j["gold"] = relation_list(q.gold_relations);
    } else {
        j["gold"] = q.gold_yes ? "Yes" : "No";
    }
    j["hops"] = q.hops;
    Json query{{"trajector", selector_json(q.trajector)}, {"landmark", selector_json(q.landmark)}};
    if (q.relation) query["relation"] = std::string(to_string(*q.relation));
    j["query"] = std::move(query);
    return j;
}

Question question_from_json(const Json& j) {
    return guarded("question", [&] {
        Question q;
        q.id = need(j, "id").get<std::string>();
        auto mode = need(j, "mode").get<std::string>();
        auto m = question_mode_from_string(mode);
        if (!m) throw SchemaError("question " + q.id + ": unknown mode '" + mode + "'");
        q.mode = *m;
        q.text = need(j, "text").get<std::string>();
        const auto& gold = need(j, "gold");
        if (q.mode == QuestionMode::FR) {
            q.candidates = relations_from(need(j, "candidates"));
            if (q.candidates.empty()) throw SchemaError("question " + q.id + ": empty candidate list");
            q.gold_relations = relations_from(gold);
            for (auto r : q.gold_relations)
                if (std::find(q.candidates.begin(), q.candidates.end(), r) == q.candidates.end())
                    throw SchemaError("question " + q.id + ": gold relation outside candidates");
        } else {
            auto g = gold.get<std::string>();
            if (g != "Yes" && g != "No") throw SchemaError("question " + q.id + ": YN gold must be Yes or No");
            q.gold_yes = g == "Yes";
        }
        q.hops = j.value("hops", std::size_t{1});
        if (q.hops < 1) throw SchemaError("question " + q.id + ": hops must be >= 1");
        if (j.contains("query")) {
            const auto& query = j.at("query");
            q.trajector = selector_from(need(query, "trajector"));
            q.landmark = selector_from(need(query, "landmark"));
            if (query.contains("relation")) q.relation = relation_of(query.at("relation"));
        }
        return q;
    });
}

namespace {

Json story_json(const Story& s) {
    Json triplets = Json::array();
    for (const auto& t : s.gold_triplets) {
        Json jt{{"trajector", t.trajector}, {"indicator", t.indicator}, {"landmark", t.landmark}};
        jt["relation"] = t.relation ? Json(std::string(to_string(*t.relation))) : Json(nullptr);
        jt["sentence"] = t.sentence;
        jt["trajector_id"] = t.trajector_id;
        jt["landmark_id"] = t.landmark_id;
        triplets.push_back(std::move(jt));
    }
    Json chains = Json::array();
    for (const auto& c : s.gold_coref) {
        Json mentions = Json::array();
        for (const auto& m : c.mentions)
            mentions.push_back(Json{{"text", m.text}, {"sentence", m.sentence}, {"index", m.index}});
        Json jc{{"id", c.id}, {"cardinality", std::string(cardinality_name(c.cardinality))},
                {"declared_count", c.declared_count}, {"mentions", mentions}, {"members", c.members}};
        jc["entity"] = c.scene_entity ? Json(*c.scene_entity) : Json(nullptr);
        chains.push_back(std::move(jc));
    }
    Json questions = Json::array();
    for (const auto& q : s.questions) questions.push_back(to_json(q));

    Json j{{"id", s.id}, {"sentences", s.sentences}, {"gold_triplets", triplets}, {"gold_coref", chains}};
    if (s.scene) j["scene"] = to_json(*s.scene);
    j["questions"] = std::move(questions);
    return j;
}

Story story_from(const Json& j) {
    Story s;
    s.id = need(j, "id").get<std::string>();
    s.sentences = need(j, "sentences").get<std::vector<std::string>>();
    if (j.contains("gold_triplets"))
        for (const auto& jt : j.at("gold_triplets")) {
            GoldTriplet t;
            t.trajector = need(jt, "trajector").get<std::string>();
            t.indicator = need(jt, "indicator").get<std::string>();
            t.landmark = need(jt, "landmark").get<std::string>();
            if (jt.contains("relation") && !jt.at("relation").is_null()) t.relation = relation_of(jt.at("relation"));
            t.sentence = jt.value("sentence", std::size_t{0});
            t.trajector_id = need(jt, "trajector_id").get<EntityId>();
            t.landmark_id = need(jt, "landmark_id").get<EntityId>();
            s.gold_triplets.push_back(std::move(t));
        }
    if (j.contains("gold_coref"))
        for (const auto& jc : j.at("gold_coref")) {
            GoldChain c;
            c.id = need(jc, "id").get<EntityId>();
            c.cardinality = cardinality_from(jc.value("cardinality", "singular"));
            c.declared_count = jc.value("declared_count", std::size_t{1});
            for (const auto& jm : jc.value("mentions", Json::array()))
                c.mentions.push_back({need(jm, "text").get<std::string>(), jm.value("sentence", std::size_t{0}),
                                      jm.value("index", std::size_t{0})});
            c.members = jc.value("members", std::vector<EntityId>{});
            if (jc.contains("entity") && !jc.at("entity").is_null()) c.scene_entity = jc.at("entity").get<EntityId>();
            if (c.id != s.gold_coref.size()) throw SchemaError("story " + s.id + ": gold chain ids must be 0..n-1");
            s.gold_coref.push_back(std::move(c));
        }
    if (j.contains("scene")) s.scene = scene_from_json(j.at("scene"));
    for (const auto& jq : need(j, "questions")) s.questions.push_back(question_from_json(jq));
    return s;
}

}  // namespace

Json to_json(const Dataset& d) {
    Json stories = Json::array();
    for (const auto& s : d.stories) stories.push_back(story_json(s));
    return Json{{"format_version", d.format_version}, {"seed", d.seed}, {"config", to_json(d.config)},
                {"stories", stories}};
}

Dataset dataset_from_json(const Json& j) {
    return guarded("dataset", [&] {
        Dataset d;
        d.format_version = need(j, "format_version").get<int>();
        if (d.format_version != 1)
            throw SchemaError("unsupported format_version " + std::to_string(d.format_version));
        d.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("config")) d.config = config_from_json(j.at("config"));
        std::set<std::string> ids;
        for (const auto& js : need(j, "stories")) {
            d.stories.push_back(story_from(js));
            for (const auto& q : d.stories.back().questions)
                if (!ids.insert(q.id).second) throw SchemaError("duplicate question id '" + q.id + "'");
        }
        return d;
    });
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

Dataset load_dataset(const std::filesystem::path& path) { return dataset_from_json(read_json(path)); }

void save_json(const Json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// Closure

Json to_json(const DerivationTree& tree) {
    Json j = triple_json(tree.fact);
    j["polarity"] = tree.polarity == Polarity::Positive ? "positive" : "negative";
    j["rule"] = std::string(to_string(tree.rule));
    if (tree.rule == Rule::Stated) {
        j["sentence"] = tree.sentence;
    } else {
        Json premises = Json::array();
        for (const auto& p : tree.premises) premises.push_back(to_json(p));
        j["premises"] = std::move(premises);
    }
    return j;
}

Json to_json(const ClosureResult& result) {
    const auto& entries = result.entries();
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(entries[a].polarity, entries[a].triple) < std::tie(entries[b].polarity, entries[b].triple);
    });
    Json facts = Json::array();
    for (auto i : order) {
        const auto& e = entries[i];
        Json f{{"fact", format_fact(e.triple, e.polarity)}, {"rule", std::string(to_string(e.rule))}, {"depth", e.depth}};
        if (e.rule == Rule::Stated) {
            f["sentence"] = e.sentence;
        } else {
            Json premises = Json::array();
            for (std::size_t k = 0; k < e.premise_count; ++k)
                premises.push_back(format_fact(entries[e.premises[k]].triple, entries[e.premises[k]].polarity));
            f["premises"] = std::move(premises);
        }
        facts.push_back(std::move(f));
    }
    Json j{{"entities", result.entity_count()},
           {"stated", result.stated_count()},
           {"positive", result.positive_count()},
           {"negative", result.negative_count()}};
    j["contradiction"] = result.contradiction() ? Json(format_fact(result.contradiction()->positive)) : Json(nullptr);
    j["facts"] = std::move(facts);
    return j;
}

std::string serialize_closure(const ClosureResult& result) { return to_json(result).dump(); }

}  // namespace sqa
