#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adpi/ml/decision_tree.hpp"
#include "adpi/ml/metrics.hpp"
#include "adpi/payload_model.hpp"
#include "adpi/text_features.hpp"
#include "adpi/training.hpp"

namespace adpi::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kPayloadModelKind = "payload-logistic";
inline constexpr std::string_view kTreeModelKind = "encrypted-tree";

// Model documents are JSON. Doubles are written in the shortest decimal form
// that parses back to the identical bit pattern.

std::string featurizer_to_json(const PayloadFeaturizer& featurizer);
PayloadFeaturizer featurizer_from_json(std::string_view text);

std::string payload_model_to_json(const PayloadModel& model);
/// Throws ConfigError on a wrong kind/schema version or inconsistent
/// dimensions, DataError on malformed JSON.
PayloadModel payload_model_from_json(std::string_view text);

std::string tree_model_to_json(const ml::DecisionTreeModel& model);
ml::DecisionTreeModel tree_model_from_json(std::string_view text);

/// "payload-logistic", "encrypted-tree", or throws ConfigError.
std::string model_kind(std::string_view text);

std::string eval_report_to_json(const ml::EvalReport& report);
ml::EvalReport eval_report_from_json(std::string_view text);

std::string cv_result_to_json(const CrossValidationResult& cv);

/// threshold,x,y rows with a header naming the axes.
void write_curve_csv(std::ostream& out, std::span<const ml::CurvePoint> points,
                     std::string_view x_name, std::string_view y_name);

void write_learning_curve_csv(std::ostream& out,
                              std::span<const LearningCurvePoint> curve);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace adpi::io
