#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqa/forge.hpp"
#include "sqa/json_io.hpp"
#include "sqa/pipeline.hpp"

namespace sqa {

class IdMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RelationScore {
    RelationType relation = RelationType::DC;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    // Precision is 0 when the relation was never predicted.
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct HopBucket {
    std::size_t hops = 1;
    std::size_t yn_total = 0;
    std::size_t yn_correct = 0;
    std::size_t fr_total = 0;
    std::size_t fr_correct = 0;
};

struct Metrics {
    std::size_t yn_total = 0;
    std::size_t yn_correct = 0;
    std::optional<double> yn_accuracy;         // abstentions count as No
    std::size_t fr_total = 0;
    std::size_t fr_correct = 0;
    std::optional<double> fr_exact_accuracy;   // predicted set equals gold set
    std::vector<RelationScore> per_relation;   // relations seen in gold or predictions
    // Unweighted means over the relations present in FR gold answers.
    std::optional<double> macro_precision;
    std::optional<double> macro_recall;
    std::optional<double> macro_f1;
    std::size_t predicted_yes = 0;
    std::size_t predicted_no = 0;
    std::size_t gold_yes = 0;
    std::size_t gold_no = 0;
    std::size_t abstained = 0;
    std::vector<HopBucket> by_hops;
    std::optional<double> mean_runtime_ms;     // per question, only when measured
};

// Throws IdMismatchError unless predictions and dataset questions match one to one.
Metrics evaluate(const std::vector<Prediction>& predictions, const Dataset& dataset);

Json to_json(const Metrics& metrics, bool by_hops = true);
std::string format_table(const Metrics& metrics, bool by_hops = true);

Json predictions_to_json(const std::vector<Prediction>& predictions);
std::vector<Prediction> predictions_from_json(const Json& j);

}  // namespace sqa
