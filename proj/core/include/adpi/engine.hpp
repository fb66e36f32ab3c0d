#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "adpi/blacklist.hpp"
#include "adpi/encrypted_features.hpp"
#include "adpi/flow.hpp"
#include "adpi/ml/decision_tree.hpp"
#include "adpi/payload_model.hpp"
#include "adpi/sampler.hpp"

namespace adpi {

struct EngineConfig {
  SamplerConfig sampler;
  /// Payload score at or above which a sampled packet counts as malicious.
  double block_threshold = 0.5;
  /// Block a flow on its first malicious sampled packet.
  bool block_on_first_hit = true;
  /// With block_on_first_hit off: block once a single window collects this
  /// many malicious packets. 0 only raises alerts.
  int block_min_hits = 0;
  bool check_both_endpoints = false;

  /// Throws ConfigError on an invalid sampler config, a threshold outside
  /// (0, 1) or a negative hit count.
  void validate() const;
};

struct FlowState {
  FlowKey key;
  AdaptiveSampler sampler;
  int packets_seen_in_epoch = 0;
  int window_hits = 0;
  int epoch_index = 0;
  bool blocked = false;
  std::size_t packets_seen = 0;
  std::size_t packets_sampled = 0;

  int current_window() const { return sampler.current_window(); }
};

struct InputError {
  std::string source;
  std::size_t line = 0;
  std::string message;
};

struct EngineReport {
  std::size_t flows_seen = 0;
  std::size_t packets_seen = 0;
  std::size_t packets_sampled = 0;
  std::size_t packets_dropped = 0;
  std::size_t encrypted_flows = 0;
  std::size_t blacklist_checks = 0;
  std::size_t blacklist_blocks = 0;
  std::size_t classifier_blocks = 0;
  std::size_t alerts = 0;
  /// Alert and block verdicts in emission order.
  std::vector<Verdict> actions;
  std::vector<InputError> input_errors;
};

/// Two-stage inspection: blacklist check when a flow first appears, then
/// payload classification of the packets inside each flow's adaptive window.
/// Encrypted flows are classified from their metadata by the decision tree.
///
/// Single-threaded; an engine instance owns all per-flow state.
class Engine {
 public:
  /// Throws ConfigError on an invalid config or a tree whose feature count
  /// does not match the encrypted-flow encoding.
  Engine(EngineConfig config, Blacklist blacklist,
         std::optional<PayloadModel> payload_model,
         std::optional<ml::DecisionTreeModel> tree_model = std::nullopt);

  /// Handles one packet; returns an alert or block verdict if one was issued.
  std::optional<Verdict> process_packet(const PacketRecord& packet);

  /// Classifies one encrypted flow; block for the malicious class, pass
  /// otherwise. Throws ConfigError when no tree is loaded.
  Verdict process_encrypted_flow(const EncryptedFlowRecord& record) const;

  /// process_encrypted_flow wrapped with early detection and bookkeeping.
  std::optional<Verdict> ingest_encrypted_flow(const EncryptedFlowRecord& record);

  const EngineConfig& config() const { return config_; }
  const EngineReport& report() const { return report_; }
  EngineReport& mutable_report() { return report_; }
  const FlowState* flow_state(const FlowKey& key) const;
  bool has_payload_model() const { return payload_model_.has_value(); }
  bool has_tree_model() const { return tree_model_.has_value(); }

 private:
  FlowState& admit(const FlowKey& key, Ipv4Address observed_src,
                   std::optional<double> timestamp, bool& blocked_now);
  void emit(const Verdict& verdict);

  EngineConfig config_;
  Blacklist blacklist_;
  std::optional<PayloadModel> payload_model_;
  std::optional<ml::DecisionTreeModel> tree_model_;
  std::unordered_map<FlowKey, FlowState, FlowKeyHash> flows_;
  EngineReport report_;
};

/// Replays packets in timestamp order (stable for equal timestamps), then the
/// encrypted flows in input order, and returns the final report. Throws
/// ConfigError up front if a non-empty stream has no matching model.
EngineReport run_replay(Engine& engine, std::span<const PacketRecord> packets,
                        std::span<const EncryptedFlowRecord> flows);

std::string engine_report_to_json(const EngineReport& report);
/// ts,flow,kind,reason,score
void write_action_log(std::ostream& out, std::span<const Verdict> actions);

}  // namespace adpi
