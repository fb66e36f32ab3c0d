#include "adpi/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "adpi/csv.hpp"
#include "adpi/errors.hpp"

namespace adpi::io {

namespace {

using json = nlohmann::json;

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
}

void check_header(const json& doc, std::string_view kind) {
  if (!doc.is_object()) throw ConfigError("model document must be a JSON object");
  if (doc.value("schema_version", -1) != kSchemaVersion) {
    throw ConfigError("unsupported model schema version");
  }
  if (doc.value("kind", std::string{}) != kind) {
    throw ConfigError("expected a '" + std::string(kind) + "' model, found '" +
                      doc.value("kind", std::string{"?"}) + "'");
  }
}

// Wraps nlohmann type/field errors in the project's error types.
template <typename Fn>
auto guarded(Fn fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model document: ") + e.what());
  }
}

json featurizer_json(const PayloadFeaturizer& f) {
  const auto& norm = f.normalization();
  return {{"vocabulary", f.tfidf().vocabulary()},
          {"idf", f.tfidf().idf()},
          {"l_min", norm.l_min},
          {"l_max", norm.l_max},
          {"n_docs", f.tfidf().n_docs()}};
}

PayloadFeaturizer featurizer_from(const json& j) {
  TfIdfModel tfidf(j.at("vocabulary").get<std::vector<std::string>>(),
                   j.at("idf").get<std::vector<double>>(),
                   j.at("n_docs").get<std::size_t>());
  NormalizationParams norm;
  norm.l_min = j.at("l_min").get<std::array<double, kLinguisticFeatureCount>>();
  norm.l_max = j.at("l_max").get<std::array<double, kLinguisticFeatureCount>>();
  for (std::size_t i = 0; i < kLinguisticFeatureCount; ++i) {
    if (norm.l_min[i] > norm.l_max[i]) throw ConfigError("l_min exceeds l_max");
  }
  return PayloadFeaturizer(std::move(tfidf), norm);
}

json curve_json(std::span<const ml::CurvePoint> points) {
  json arr = json::array();
  for (const auto& p : points) {
    arr.push_back({std::isfinite(p.threshold) ? json(p.threshold) : json(nullptr), p.x, p.y});
  }
  return arr;
}

std::vector<ml::CurvePoint> curve_from(const json& arr) {
  std::vector<ml::CurvePoint> out;
  for (const auto& p : arr) {
    out.push_back({p.at(0).is_null() ? std::numeric_limits<double>::infinity()
                                     : p.at(0).get<double>(),
                   p.at(1).get<double>(), p.at(2).get<double>()});
  }
  return out;
}

json report_json(const ml::EvalReport& r) {
  const auto& m = r.metrics;
  return {{"threshold", r.threshold},
          {"samples", r.confusion.total()},
          {"confusion",
           {{"tp", r.confusion.tp}, {"fp", r.confusion.fp},
            {"tn", r.confusion.tn}, {"fn", r.confusion.fn}}},
          {"metrics",
           {{"accuracy", m.accuracy},
            {"precision", m.precision},
            {"recall", m.recall},
            {"fpr", m.fpr},
            {"f1", m.f1}}},
          {"degenerate",
           {{"accuracy", m.accuracy_degenerate},
            {"precision", m.precision_degenerate},
            {"recall", m.recall_degenerate},
            {"fpr", m.fpr_degenerate},
            {"f1", m.f1_degenerate}}},
          {"auc", r.auc ? json(*r.auc) : json(nullptr)},
          {"roc", curve_json(r.roc_points)},
          {"pr", curve_json(r.pr_points)}};
}

const char* criterion_name(ml::SplitCriterion c) {
  return c == ml::SplitCriterion::gini ? "gini" : "entropy";
}

ml::SplitCriterion criterion_from(const std::string& name) {
  if (name == "gini") return ml::SplitCriterion::gini;
  if (name == "entropy") return ml::SplitCriterion::entropy;
  throw ConfigError("unknown split criterion '" + name + "'");
}

std::string dump(const json& doc) {
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

}  // namespace

std::string featurizer_to_json(const PayloadFeaturizer& featurizer) {
  return dump(featurizer_json(featurizer));
}

PayloadFeaturizer featurizer_from_json(std::string_view text) {
  const auto doc = parse_json(text);
  return guarded([&] { return featurizer_from(doc); });
}

std::string payload_model_to_json(const PayloadModel& model) {
  const auto& lr = model.logistic();
  json doc = {{"schema_version", kSchemaVersion},
              {"kind", kPayloadModelKind},
              {"dimension", model.dimension()},
              {"featurizer", featurizer_json(model.featurizer())},
              {"logistic",
               {{"weights", lr.weights}, {"bias", lr.bias}, {"lambda", lr.lambda}}}};
  return dump(doc);
}

PayloadModel payload_model_from_json(std::string_view text) {
  const auto doc = parse_json(text);
  check_header(doc, kPayloadModelKind);
  return guarded([&] {
    auto featurizer = featurizer_from(doc.at("featurizer"));
    ml::LogisticModel lr;
    const auto& l = doc.at("logistic");
    lr.weights = l.at("weights").get<std::vector<double>>();
    lr.bias = l.at("bias").get<double>();
    lr.lambda = l.at("lambda").get<double>();
    if (auto it = doc.find("dimension");
        it != doc.end() && it->get<std::size_t>() != featurizer.dimension()) {
      throw ConfigError("declared dimension does not match the featurizer");
    }
    return PayloadModel(std::move(featurizer), std::move(lr));
  });
}

std::string tree_model_to_json(const ml::DecisionTreeModel& model) {
  json nodes = json::array();
  for (const auto& n : model.nodes) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"label", n.label},
                     {"probability", n.probability},
                     {"samples", n.samples}});
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"kind", kTreeModelKind},
              {"n_features", model.n_features},
              {"hyper",
               {{"max_depth", model.hyper.max_depth ? json(*model.hyper.max_depth)
                                                    : json(nullptr)},
                {"min_samples_split", model.hyper.min_samples_split},
                {"min_gain", model.hyper.min_gain},
                {"criterion", criterion_name(model.hyper.criterion)}}},
              {"nodes", nodes}};
  return dump(doc);
}

ml::DecisionTreeModel tree_model_from_json(std::string_view text) {
  const auto doc = parse_json(text);
  check_header(doc, kTreeModelKind);
  auto model = guarded([&] {
    ml::DecisionTreeModel m;
    m.n_features = doc.at("n_features").get<std::size_t>();
    const auto& h = doc.at("hyper");
    if (!h.at("max_depth").is_null()) m.hyper.max_depth = h.at("max_depth").get<int>();
    else m.hyper.max_depth.reset();
    m.hyper.min_samples_split = h.at("min_samples_split").get<int>();
    m.hyper.min_gain = h.at("min_gain").get<double>();
    m.hyper.criterion = criterion_from(h.at("criterion").get<std::string>());
    for (const auto& n : doc.at("nodes")) {
      ml::TreeNode node;
      node.feature = n.at("feature").get<int>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
      node.label = n.at("label").get<int>();
      node.probability = n.at("probability").get<double>();
      node.samples = n.at("samples").get<std::size_t>();
      m.nodes.push_back(node);
    }
    return m;
  });
  model.validate();
  return model;
}

std::string model_kind(std::string_view text) {
  const auto doc = parse_json(text);
  if (!doc.is_object()) throw ConfigError("model document must be a JSON object");
  const auto kind = doc.value("kind", std::string{});
  if (kind != kPayloadModelKind && kind != kTreeModelKind) {
    throw ConfigError("unknown model kind '" + kind + "'");
  }
  return kind;
}

std::string eval_report_to_json(const ml::EvalReport& report) {
  return dump(report_json(report));
}

ml::EvalReport eval_report_from_json(std::string_view text) {
  const auto doc = parse_json(text);
  try {
    ml::EvalReport r;
    r.threshold = doc.at("threshold").get<double>();
    const auto& c = doc.at("confusion");
    r.confusion = {c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(),
                   c.at("tn").get<std::size_t>(), c.at("fn").get<std::size_t>()};
    const auto& m = doc.at("metrics");
    r.metrics.accuracy = m.at("accuracy").get<double>();
    r.metrics.precision = m.at("precision").get<double>();
    r.metrics.recall = m.at("recall").get<double>();
    r.metrics.fpr = m.at("fpr").get<double>();
    r.metrics.f1 = m.at("f1").get<double>();
    const auto& d = doc.at("degenerate");
    r.metrics.accuracy_degenerate = d.at("accuracy").get<bool>();
    r.metrics.precision_degenerate = d.at("precision").get<bool>();
    r.metrics.recall_degenerate = d.at("recall").get<bool>();
    r.metrics.fpr_degenerate = d.at("fpr").get<bool>();
    r.metrics.f1_degenerate = d.at("f1").get<bool>();
    if (!doc.at("auc").is_null()) r.auc = doc.at("auc").get<double>();
    r.roc_points = curve_from(doc.at("roc"));
    r.pr_points = curve_from(doc.at("pr"));
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string cv_result_to_json(const CrossValidationResult& cv) {
  json folds = json::array();
  for (const auto& f : cv.folds) {
    auto j = report_json(f);
    j.erase("roc");
    j.erase("pr");
    folds.push_back(std::move(j));
  }
  json doc = {{"k", cv.k},
              {"seed", cv.seed},
              {"mean_accuracy", cv.mean_accuracy},
              {"stddev_accuracy", cv.stddev_accuracy},
              {"pooled", report_json(cv.pooled)},
              {"folds", folds}};
  doc["pooled"].erase("roc");
  doc["pooled"].erase("pr");
  return dump(doc);
}

void write_curve_csv(std::ostream& out, std::span<const ml::CurvePoint> points,
                     std::string_view x_name, std::string_view y_name) {
  out << "threshold," << x_name << ',' << y_name << '\n';
  for (const auto& p : points) {
    out << csv::format_double(p.threshold) << ',' << csv::format_double(p.x) << ','
        << csv::format_double(p.y) << '\n';
  }
}

void write_learning_curve_csv(std::ostream& out,
                              std::span<const LearningCurvePoint> curve) {
  out << "fraction,train_size,train_accuracy,validation_accuracy\n";
  for (const auto& p : curve) {
    out << csv::format_double(p.fraction) << ',' << p.train_size << ','
        << csv::format_double(p.train_accuracy) << ','
        << csv::format_double(p.validation_accuracy) << '\n';
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace adpi::io
