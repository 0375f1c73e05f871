#pragma once

// Benchmark report serialization: a `key = value` text document with
// per-trial, per-class and confusion tables, and a JSON sidecar holding
// the same fields.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infsl/learn.hpp"

namespace infsl {

/// Ordered run description (dataset, graph and solver settings). Values are
/// written verbatim.
using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_report_text(const Metadata& meta, const TrialReport& report);
std::string format_report_json(const Metadata& meta, const TrialReport& report);

/// Writes `<stem>.txt` and `<stem>.json`, each atomically.
void write_report(const std::string& stem, const Metadata& meta, const TrialReport& report);

/// Lines `node_index,predicted_class[,true_class]`.
std::string format_predictions_csv(std::span<const int> predictions,
                                   std::span<const int> truth = {});

struct PredictionTable {
  std::vector<int> predictions;
  std::vector<int> truth;  ///< empty when the file had no third column
};

/// Reads the predictions CSV format. Node indices must run 0, 1, 2, ...
PredictionTable parse_predictions_csv(const std::string& content);

/// Report for a single scored prediction vector (one "trial").
TrialReport report_from_evaluation(Method method, int num_classes, const Evaluation& ev);

}  // namespace infsl
