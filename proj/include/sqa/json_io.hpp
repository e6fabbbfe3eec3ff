#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "sqa/engine.hpp"
#include "sqa/forge.hpp"
#include "sqa/scene.hpp"

namespace sqa {

using Json = nlohmann::ordered_json;

// Malformed or schema-violating input data.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json to_json(const Scene& scene);
Scene scene_from_json(const Json& j);

Json to_json(const GenConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
GenConfig config_from_json(const Json& j);
GenConfig load_config(const std::filesystem::path& path);

Json to_json(const Question& q);
Question question_from_json(const Json& j);

Json to_json(const Dataset& dataset);
Dataset dataset_from_json(const Json& j);
Dataset load_dataset(const std::filesystem::path& path);
void save_json(const Json& j, const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

Json to_json(const DerivationTree& tree);
// Canonical form: facts sorted by (polarity, subject, relation, object) with
// rule, depth and premises.
Json to_json(const ClosureResult& result);
std::string serialize_closure(const ClosureResult& result);

Json triple_json(const Triple& t);

}  // namespace sqa
