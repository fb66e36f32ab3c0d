#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adpi/blacklist.hpp"
#include "adpi/csv.hpp"
#include "adpi/encrypted_features.hpp"
#include "adpi/engine.hpp"
#include "adpi/errors.hpp"
#include "adpi/model_io.hpp"
#include "adpi/sampler.hpp"
#include "adpi/synthetic.hpp"
#include "adpi/training.hpp"

namespace fs = std::filesystem;
using namespace adpi;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kConfig = 3 };

struct Options {
  std::uint64_t seed = 42;
  double lambda = 1.0;
  double learning_rate = 0.5;
  int max_iters = 5000;
  double tol = 1e-6;
  int k_folds = 5;
  int m = 100;
  int w_min = 5;
  int w_max = 15;
  int w_init = 5;
  int history = 10;
  double threshold = 0.5;
  bool strict = false;

  int max_depth = 12;
  int min_samples_split = 2;
  double min_gain = 1e-7;
  std::string criterion = "gini";

  bool alert_only = false;
  int block_min_hits = 0;
  bool check_both_endpoints = false;

  ReadMode read_mode() const { return strict ? ReadMode::strict : ReadMode::lenient; }

  ml::LogisticHyper logistic() const {
    ml::LogisticHyper h;
    h.lambda = lambda;
    h.learning_rate = learning_rate;
    h.max_iters = max_iters;
    h.tol = tol;
    h.seed = seed;
    return h;
  }

  ml::TreeHyper tree() const {
    ml::TreeHyper h;
    if (max_depth >= 0) h.max_depth = max_depth;
    else h.max_depth.reset();
    h.min_samples_split = min_samples_split;
    h.min_gain = min_gain;
    h.criterion = criterion == "entropy" ? ml::SplitCriterion::entropy : ml::SplitCriterion::gini;
    return h;
  }

  EngineConfig engine() const {
    EngineConfig c;
    c.sampler.epoch_packets = m;
    c.sampler.w_min = w_min;
    c.sampler.w_max = w_max;
    c.sampler.w_init = w_init;
    c.sampler.history_len = history;
    c.block_threshold = threshold;
    c.block_on_first_hit = !alert_only;
    c.block_min_hits = block_min_hits;
    c.check_both_endpoints = check_both_endpoints;
    return c;
  }
};

void require_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read '" + path + "'");
}

void require_output(const std::string& path) {
  const auto parent = fs::absolute(fs::path(path)).parent_path();
  if (!fs::is_directory(parent)) {
    throw DataError("output directory does not exist: '" + parent.string() + "'");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  return in;
}

template <typename T>
std::vector<T> take_records(ParsedStream<T> parsed, const std::string& path) {
  for (const auto& e : parsed.errors) {
    std::cerr << path << ": skipped line " << e.line << ": " << e.message << '\n';
  }
  return std::move(parsed.records);
}

std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

void print_cv(const CrossValidationResult& cv) {
  const auto& m = cv.pooled.metrics;
  std::cout << cv.k << "-fold cross-validation (seed " << cv.seed << ")\n"
            << "  accuracy  " << csv::format_double(m.accuracy) << "  (fold mean "
            << csv::format_double(cv.mean_accuracy) << ", stddev "
            << csv::format_double(cv.stddev_accuracy) << ")\n"
            << "  precision " << csv::format_double(m.precision) << '\n'
            << "  recall    " << csv::format_double(m.recall) << '\n'
            << "  fpr       " << csv::format_double(m.fpr) << '\n'
            << "  f1        " << csv::format_double(m.f1) << '\n'
            << "  auc       "
            << (cv.pooled.auc ? csv::format_double(*cv.pooled.auc) : std::string("n/a")) << '\n';
}

int train_payload(const Options& opt, const std::string& corpus_path,
                  const std::string& model_out, const std::string& report_out) {
  require_input(corpus_path);
  require_output(model_out);
  if (!report_out.empty()) require_output(report_out);
  auto in = open_input(corpus_path);
  const auto corpus = take_records(read_labeled_corpus(in, opt.read_mode()), corpus_path);
  if (corpus.empty()) throw DataError("'" + corpus_path + "' holds no labelled payloads");

  const auto cv = cross_validate_payload(corpus, opt.k_folds, opt.seed, opt.logistic(),
                                         opt.threshold);
  const auto model = train_payload_model(corpus, opt.logistic());
  io::write_file(model_out, io::payload_model_to_json(model));
  if (!report_out.empty()) io::write_file(report_out, io::cv_result_to_json(cv));
  print_cv(cv);
  std::cout << "model written to " << model_out << " (dimension " << model.dimension() << ")\n";
  return kOk;
}

int train_encrypted(const Options& opt, const std::string& flows_path,
                    const std::string& model_out, const std::string& report_out) {
  require_input(flows_path);
  require_output(model_out);
  if (!report_out.empty()) require_output(report_out);
  auto in = open_input(flows_path);
  const auto records = take_records(read_flow_csv(in, opt.read_mode()), flows_path);
  if (records.empty()) throw DataError("'" + flows_path + "' holds no flow records");

  const auto cv = cross_validate_encrypted(records, opt.k_folds, opt.seed, opt.tree());
  const auto tree = train_encrypted_model(records, opt.tree());
  io::write_file(model_out, io::tree_model_to_json(tree));
  if (!report_out.empty()) io::write_file(report_out, io::cv_result_to_json(cv));
  print_cv(cv);
  std::cout << "model written to " << model_out << " (" << tree.nodes.size() << " nodes, depth "
            << tree.depth() << ")\n";
  return kOk;
}

struct EvalPaths {
  std::string model;
  std::string data;
  std::string report;
  std::string roc;
  std::string pr;
  std::string learning_curve;
};

int eval(const Options& opt, EvalPaths p) {
  require_input(p.model);
  require_input(p.data);
  if (p.roc.empty()) p.roc = sibling(p.report, "_roc.csv");
  if (p.pr.empty()) p.pr = sibling(p.report, "_pr.csv");
  for (const auto* out : {&p.report, &p.roc, &p.pr, &p.learning_curve}) {
    if (!out->empty()) require_output(*out);
  }

  const auto text = io::read_file(p.model);
  const auto kind = io::model_kind(text);
  auto in = open_input(p.data);
  ml::EvalReport report;
  if (kind == io::kPayloadModelKind) {
    const auto model = io::payload_model_from_json(text);
    const auto samples = take_records(read_labeled_corpus(in, opt.read_mode()), p.data);
    if (samples.empty()) throw DataError("'" + p.data + "' holds no labelled payloads");
    report = evaluate_payload_model(model, samples, opt.threshold);
    if (!p.learning_curve.empty()) {
      const std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
      const auto curve =
          payload_learning_curve(samples, opt.k_folds, opt.seed, opt.logistic(), fractions);
      std::ofstream out(p.learning_curve);
      io::write_learning_curve_csv(out, curve);
    }
  } else {
    if (!p.learning_curve.empty()) {
      throw ConfigError("learning curves are only available for payload models");
    }
    const auto tree = io::tree_model_from_json(text);
    if (tree.n_features != kEncryptedFeatureCount) {
      throw ConfigError("tree expects " + std::to_string(tree.n_features) +
                        " features, flow records encode " +
                        std::to_string(kEncryptedFeatureCount));
    }
    const auto records = take_records(read_flow_csv(in, opt.read_mode()), p.data);
    if (records.empty()) throw DataError("'" + p.data + "' holds no flow records");
    report = evaluate_encrypted_model(tree, records);
  }

  io::write_file(p.report, io::eval_report_to_json(report));
  {
    std::ofstream roc(p.roc);
    io::write_curve_csv(roc, report.roc_points, "fpr", "tpr");
    std::ofstream pr(p.pr);
    io::write_curve_csv(pr, report.pr_points, "recall", "precision");
  }
  const auto& m = report.metrics;
  std::cout << "samples " << report.confusion.total() << "  accuracy "
            << csv::format_double(m.accuracy) << "  precision " << csv::format_double(m.precision)
            << "  recall " << csv::format_double(m.recall) << "  f1 "
            << csv::format_double(m.f1) << "  auc "
            << (report.auc ? csv::format_double(*report.auc) : std::string("n/a")) << '\n';
  return kOk;
}

struct ReplayPaths {
  std::string packets;
  std::string flows;
  std::string blacklist;
  std::string payload_model;
  std::string tree_model;
  std::string report;
  std::string actions;
};

template <typename T>
std::vector<T> collect(ParsedStream<T> parsed, const std::string& source, EngineReport& report) {
  for (auto& e : parsed.errors) report.input_errors.push_back({source, e.line, e.message});
  return std::move(parsed.records);
}

int replay(const Options& opt, const ReplayPaths& p) {
  for (const auto* in : {&p.packets, &p.flows, &p.blacklist, &p.payload_model, &p.tree_model}) {
    if (!in->empty()) require_input(*in);
  }
  require_output(p.report);
  if (!p.actions.empty()) require_output(p.actions);
  if (p.packets.empty() && p.flows.empty()) {
    throw ConfigError("replay needs --packets and/or --flows");
  }

  std::vector<InputError> errors;
  Blacklist blacklist;
  if (!p.blacklist.empty()) {
    auto in = open_input(p.blacklist);
    BlacklistLoadOptions bl_opts;
    bl_opts.source_name = p.blacklist;
    auto loaded = load_blacklist(in, bl_opts);
    if (opt.strict && loaded.skipped > 0) {
      const auto& e = loaded.skipped_lines.front();
      throw DataError(p.blacklist + ": line " + std::to_string(e.line) + ": " + e.message);
    }
    for (auto& e : loaded.skipped_lines) errors.push_back({"blacklist", e.line, e.message});
    blacklist = std::move(loaded.blacklist);
  }
  std::optional<PayloadModel> payload_model;
  if (!p.payload_model.empty()) {
    payload_model = io::payload_model_from_json(io::read_file(p.payload_model));
  }
  std::optional<ml::DecisionTreeModel> tree;
  if (!p.tree_model.empty()) tree = io::tree_model_from_json(io::read_file(p.tree_model));

  Engine engine(opt.engine(), std::move(blacklist), std::move(payload_model), std::move(tree));
  auto& report = engine.mutable_report();
  report.input_errors = std::move(errors);
  std::vector<PacketRecord> packets;
  if (!p.packets.empty()) {
    auto in = open_input(p.packets);
    packets = collect(read_packet_stream(in, opt.read_mode()), "packets", report);
  }
  std::vector<EncryptedFlowRecord> flows;
  if (!p.flows.empty()) {
    auto in = open_input(p.flows);
    flows = collect(read_flow_csv(in, opt.read_mode()), "flows", report);
  }

  const auto result = run_replay(engine, packets, flows);
  io::write_file(p.report, engine_report_to_json(result));
  if (!p.actions.empty()) {
    std::ofstream out(p.actions);
    write_action_log(out, result.actions);
  }
  std::cout << "flows " << result.flows_seen << "  packets " << result.packets_seen
            << "  sampled " << result.packets_sampled << "  blacklist blocks "
            << result.blacklist_blocks << "  classifier blocks " << result.classifier_blocks
            << "  alerts " << result.alerts << "  input errors " << result.input_errors.size()
            << '\n';
  return kOk;
}

bool is_number(std::string_view s) {
  s = csv::trim(s);
  if (s.empty()) return false;
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

int parse_int(std::string_view s, std::size_t line) {
  if (!is_number(s)) {
    throw DataError("line " + std::to_string(line) + ": not an integer: '" + std::string(s) +
                    "'");
  }
  return std::stoi(std::string(csv::trim(s)));
}

int sample_trace(const Options& opt, const std::string& input, const std::string& output) {
  if (input != "-") require_input(input);
  if (!output.empty()) require_output(output);
  std::ifstream file;
  if (input != "-") file = open_input(input);
  std::istream& in = input == "-" ? std::cin : file;

  AdaptiveSampler sampler(opt.engine().sampler);
  std::ostringstream out;
  out << "step,w,delta,predicted,window_delta\n";
  std::string line;
  std::size_t line_no = 0;
  int step = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    if (first_content) {
      first_content = false;
      if (!is_number(fields.front())) continue;  // header row
    }
    if (fields.size() > 2) {
      throw DataError("line " + std::to_string(line_no) + ": expected 'delta' or 'w,delta'");
    }
    StepTrace t;
    try {
      if (fields.size() == 2) {
        t = sampler.step(parse_int(fields[0], line_no), parse_int(fields[1], line_no));
      } else {
        t = sampler.step(parse_int(fields[0], line_no));
      }
    } catch (const ContractError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    out << ++step << ',' << t.window << ',' << t.malicious << ','
        << (t.predicted ? csv::format_double(*t.predicted) : std::string{}) << ','
        << (t.window_delta ? csv::format_double(*t.window_delta) : std::string{}) << '\n';
  }
  if (output.empty()) std::cout << out.str();
  else io::write_file(output, out.str());
  return kOk;
}

int synth_data(const Options& opt, const std::string& dir, std::size_t payloads,
               std::size_t flows) {
  if (!fs::is_directory(dir)) throw DataError("output directory does not exist: '" + dir + "'");
  const fs::path root(dir);
  {
    std::ofstream out(root / "payloads.jsonl");
    for (const auto& s : synth::payload_corpus(payloads, 0.3, opt.seed)) {
      out << to_json_line(s) << '\n';
    }
  }
  {
    std::ofstream out(root / "flows.csv");
    out << "src_ip,src_port,dst_ip,dst_port,proto,tls_version,ttl,duration,fwd_pkts,bwd_pkts,"
           "label\n";
    for (const auto& r : synth::flow_records(flows, 0.4, 0.02, opt.seed + 1)) {
      const auto src = r.flow.source();
      const auto dst = r.flow.destination();
      out << src.ip.to_string() << ',' << src.port << ',' << dst.ip.to_string() << ','
          << dst.port << ',' << r.flow.protocol().to_string() << ','
          << to_string(r.tls_version) << ',' << r.ttl << ',' << csv::format_double(r.duration)
          << ',' << r.fwd_packets << ',' << r.bwd_packets << ','
          << (r.label == Label::malicious ? 1 : 0) << '\n';
    }
  }
  const auto scenario = synth::replay_scenario(10, 300, 2, 3, 3, opt.seed + 2);
  {
    std::ofstream out(root / "packets.jsonl");
    for (const auto& p : scenario.packets) out << to_json_line(p) << '\n';
  }
  {
    std::ofstream out(root / "blacklist.txt");
    for (const auto& l : scenario.blacklist_lines) out << l << '\n';
  }
  std::cout << "wrote payloads.jsonl, flows.csv, packets.jsonl, blacklist.txt to " << dir
            << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive payload inspection: train, evaluate and replay"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option values", false);
  app.allow_config_extras(CLI::config_extras_mode::error);

  Options opt;
  app.add_option("--seed", opt.seed, "Seed for fold shuffling and synthetic data")
      ->capture_default_str();
  app.add_option("--lambda", opt.lambda, "L2 strength")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  app.add_option("--lr", opt.learning_rate, "Initial gradient step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iters", opt.max_iters, "Gradient descent iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", opt.tol, "Stop when the max gradient component falls below this")
      ->capture_default_str();
  app.add_option("--k-folds", opt.k_folds, "Cross-validation folds")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000));
  app.add_option("--m", opt.m, "Packets per sampling epoch")->capture_default_str();
  app.add_option("--w-min", opt.w_min, "Smallest sampling window")->capture_default_str();
  app.add_option("--w-max", opt.w_max, "Largest sampling window")->capture_default_str();
  app.add_option("--w-init", opt.w_init, "Initial sampling window")->capture_default_str();
  app.add_option("--history", opt.history, "Samples kept for prediction")->capture_default_str();
  app.add_option("--threshold", opt.threshold, "Malicious score threshold")
      ->capture_default_str();
  app.add_flag("--strict", opt.strict, "Abort on the first malformed input record");
  app.add_option("--max-depth", opt.max_depth, "Tree depth cap, negative for unlimited")
      ->capture_default_str();
  app.add_option("--min-samples-split", opt.min_samples_split, "Smallest node the tree splits")
      ->capture_default_str();
  app.add_option("--min-gain", opt.min_gain, "Smallest impurity decrease for a split")
      ->capture_default_str();
  app.add_option("--criterion", opt.criterion, "Split impurity")
      ->capture_default_str()
      ->check(CLI::IsMember({"gini", "entropy"}));
  app.add_flag("--alert-only", opt.alert_only, "Raise alerts instead of blocking on a hit");
  app.add_option("--block-min-hits", opt.block_min_hits,
                 "With --alert-only: block once a window collects this many hits")
      ->capture_default_str();
  app.add_flag("--check-both-endpoints", opt.check_both_endpoints,
               "Blacklist check on both endpoints of a new flow");

  auto* tp = app.add_subcommand("train-payload", "Fit the payload classifier on labelled JSONL");
  std::string tp_corpus, tp_out, tp_report;
  tp->add_option("corpus", tp_corpus, "Labelled payload JSONL")->required();
  tp->add_option("-o,--out", tp_out, "Model JSON to write")->required();
  tp->add_option("--report", tp_report, "Cross-validation report JSON to write");

  auto* te = app.add_subcommand("train-encrypted", "Fit the encrypted-flow decision tree");
  std::string te_flows, te_out, te_report;
  te->add_option("flows", te_flows, "Labelled flow CSV")->required();
  te->add_option("-o,--out", te_out, "Model JSON to write")->required();
  te->add_option("--report", te_report, "Cross-validation report JSON to write");

  auto* ev = app.add_subcommand("eval", "Evaluate a saved model on a labelled dataset");
  EvalPaths ep;
  ev->add_option("--model", ep.model, "Model JSON")->required();
  ev->add_option("--data", ep.data, "Labelled JSONL (payload) or CSV (flows)")->required();
  ev->add_option("--report", ep.report, "Evaluation report JSON to write")->required();
  ev->add_option("--roc", ep.roc, "ROC CSV (default <report>_roc.csv)");
  ev->add_option("--pr", ep.pr, "Precision-recall CSV (default <report>_pr.csv)");
  ev->add_option("--learning-curve", ep.learning_curve, "Learning-curve CSV (payload only)");

  auto* rp = app.add_subcommand("replay", "Replay packet and flow streams through the engine");
  ReplayPaths rpp;
  rp->add_option("--packets", rpp.packets, "Packet JSONL");
  rp->add_option("--flows", rpp.flows, "Encrypted flow CSV");
  rp->add_option("--blacklist", rpp.blacklist, "Blacklist text file");
  rp->add_option("--payload-model", rpp.payload_model, "Payload model JSON");
  rp->add_option("--tree-model", rpp.tree_model, "Decision tree JSON");
  rp->add_option("--report", rpp.report, "Report JSON to write")->required();
  rp->add_option("--actions", rpp.actions, "Action log CSV to write");

  auto* st = app.add_subcommand("sample-trace", "Run the window controller over a delta series");
  std::string st_in, st_out;
  st->add_option("input", st_in, "CSV of 'delta' or 'w,delta' rows, '-' for stdin")->required();
  st->add_option("-o,--out", st_out, "Trace CSV to write (default stdout)");

  auto* sy = app.add_subcommand("synth", "Write a synthetic demo dataset");
  std::string sy_dir;
  std::size_t sy_payloads = 600, sy_flows = 1000;
  sy->add_option("dir", sy_dir, "Existing output directory")->required();
  sy->add_option("--payloads", sy_payloads, "Labelled payloads to generate")
      ->capture_default_str();
  sy->add_option("--flow-records", sy_flows, "Flow records to generate")->capture_default_str();

  for (auto* sub : {tp, te, ev, rp, st, sy}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*tp) return train_payload(opt, tp_corpus, tp_out, tp_report);
    if (*te) return train_encrypted(opt, te_flows, te_out, te_report);
    if (*ev) return eval(opt, ep);
    if (*rp) return replay(opt, rpp);
    if (*st) return sample_trace(opt, st_in, st_out);
    if (*sy) return synth_data(opt, sy_dir, sy_payloads, sy_flows);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
