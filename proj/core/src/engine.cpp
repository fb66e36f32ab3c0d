#include "adpi/engine.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "adpi/csv.hpp"
#include "adpi/errors.hpp"

namespace adpi {

void EngineConfig::validate() const {
  sampler.validate();
  if (!(block_threshold > 0.0 && block_threshold < 1.0)) {
    throw ConfigError("block threshold must lie in (0, 1)");
  }
  if (block_min_hits < 0) throw ConfigError("block_min_hits must be >= 0");
}

Engine::Engine(EngineConfig config, Blacklist blacklist,
               std::optional<PayloadModel> payload_model,
               std::optional<ml::DecisionTreeModel> tree_model)
    : config_(config),
      blacklist_(std::move(blacklist)),
      payload_model_(std::move(payload_model)),
      tree_model_(std::move(tree_model)) {
  config_.validate();
  if (tree_model_) {
    tree_model_->validate();
    if (tree_model_->n_features != kEncryptedFeatureCount) {
      throw ConfigError("tree expects " + std::to_string(tree_model_->n_features) +
                        " features, encrypted flows encode " +
                        std::to_string(kEncryptedFeatureCount));
    }
  }
}

const FlowState* Engine::flow_state(const FlowKey& key) const {
  auto it = flows_.find(key);
  return it == flows_.end() ? nullptr : &it->second;
}

void Engine::emit(const Verdict& verdict) { report_.actions.push_back(verdict); }

FlowState& Engine::admit(const FlowKey& key, Ipv4Address observed_src,
                         std::optional<double> timestamp, bool& blocked_now) {
  blocked_now = false;
  if (auto it = flows_.find(key); it != flows_.end()) return it->second;

  ++report_.flows_seen;
  ++report_.blacklist_checks;
  auto [it, inserted] =
      flows_.emplace(key, FlowState{.key = key, .sampler = AdaptiveSampler(config_.sampler)});
  if (check_flow(blacklist_, key, observed_src, config_.check_both_endpoints) ==
      EarlyVerdict::block) {
    it->second.blocked = true;
    blocked_now = true;
    ++report_.blacklist_blocks;
    emit(Verdict::from_blacklist(VerdictKind::block, key, timestamp));
  }
  return it->second;
}

std::optional<Verdict> Engine::process_packet(const PacketRecord& packet) {
  ++report_.packets_seen;
  bool blocked_now = false;
  FlowState& flow = admit(packet.flow, packet.flow.source().ip, packet.timestamp, blocked_now);
  ++flow.packets_seen;
  if (blocked_now) return report_.actions.back();
  if (flow.blocked) {
    ++report_.packets_dropped;
    return std::nullopt;
  }

  std::optional<Verdict> verdict;
  if (!packet.encrypted && flow.packets_seen_in_epoch < flow.current_window()) {
    if (!payload_model_) throw ConfigError("no payload classifier loaded");
    ++flow.packets_sampled;
    ++report_.packets_sampled;
    const double score = payload_model_->score(packet.payload);
    if (score >= config_.block_threshold) {
      ++flow.window_hits;
      const bool block =
          config_.block_on_first_hit ||
          (config_.block_min_hits > 0 && flow.window_hits >= config_.block_min_hits);
      if (block) {
        flow.blocked = true;
        ++report_.classifier_blocks;
      } else {
        ++report_.alerts;
      }
      verdict = Verdict::from_classifier(block ? VerdictKind::block : VerdictKind::alert,
                                         VerdictReason::payload_classifier, packet.flow,
                                         score, packet.timestamp);
      emit(*verdict);
    }
  }

  if (!flow.blocked && ++flow.packets_seen_in_epoch == config_.sampler.epoch_packets) {
    flow.sampler.step(flow.window_hits);
    flow.packets_seen_in_epoch = 0;
    flow.window_hits = 0;
    ++flow.epoch_index;
  }
  return verdict;
}

Verdict Engine::process_encrypted_flow(const EncryptedFlowRecord& record) const {
  if (!tree_model_) throw ConfigError("no encrypted-flow classifier loaded");
  const auto x = encode(record);
  const auto prediction = ml::dt_predict(*tree_model_, x);
  return Verdict::from_classifier(
      prediction.label == 1 ? VerdictKind::block : VerdictKind::pass,
      VerdictReason::encrypted_classifier, record.flow, prediction.probability);
}

std::optional<Verdict> Engine::ingest_encrypted_flow(const EncryptedFlowRecord& record) {
  ++report_.encrypted_flows;
  bool blocked_now = false;
  FlowState& flow = admit(record.flow, record.flow.source().ip, std::nullopt, blocked_now);
  if (blocked_now) return report_.actions.back();
  if (flow.blocked) return std::nullopt;
  auto verdict = process_encrypted_flow(record);
  if (verdict.kind() == VerdictKind::block) {
    flow.blocked = true;
    ++report_.classifier_blocks;
    emit(verdict);
  }
  return verdict;
}

EngineReport run_replay(Engine& engine, std::span<const PacketRecord> packets,
                        std::span<const EncryptedFlowRecord> flows) {
  const bool needs_payload =
      std::any_of(packets.begin(), packets.end(), [](const auto& p) { return !p.encrypted; });
  if (needs_payload && !engine.has_payload_model()) {
    throw ConfigError("packet stream given but no payload classifier loaded");
  }
  if (!flows.empty() && !engine.has_tree_model()) {
    throw ConfigError("encrypted flows given but no decision tree loaded");
  }
  std::vector<std::size_t> order(packets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return packets[a].timestamp < packets[b].timestamp;
  });
  for (auto i : order) engine.process_packet(packets[i]);
  for (const auto& record : flows) engine.ingest_encrypted_flow(record);
  return engine.report();
}

std::string engine_report_to_json(const EngineReport& report) {
  using json = nlohmann::json;
  json actions = json::array();
  for (const auto& v : report.actions) {
    actions.push_back({{"ts", v.timestamp() ? json(*v.timestamp()) : json(nullptr)},
                       {"flow", v.flow().to_string()},
                       {"kind", std::string(to_string(v.kind()))},
                       {"reason", std::string(to_string(v.reason()))},
                       {"score", v.score() ? json(*v.score()) : json(nullptr)}});
  }
  json errors = json::array();
  for (const auto& e : report.input_errors) {
    errors.push_back({{"source", e.source}, {"line", e.line}, {"message", e.message}});
  }
  json doc = {{"flows_seen", report.flows_seen},
              {"packets_seen", report.packets_seen},
              {"packets_sampled", report.packets_sampled},
              {"packets_dropped", report.packets_dropped},
              {"encrypted_flows", report.encrypted_flows},
              {"blacklist_checks", report.blacklist_checks},
              {"blacklist_blocks", report.blacklist_blocks},
              {"classifier_blocks", report.classifier_blocks},
              {"alerts", report.alerts},
              {"actions", actions},
              {"input_errors", errors}};
  return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

void write_action_log(std::ostream& out, std::span<const Verdict> actions) {
  out << "ts,flow,kind,reason,score\n";
  for (const auto& v : actions) {
    out << (v.timestamp() ? csv::format_double(*v.timestamp()) : std::string{}) << ','
        << csv::escape(v.flow().to_string()) << ',' << to_string(v.kind()) << ','
        << to_string(v.reason()) << ','
        << (v.score() ? csv::format_double(*v.score()) : std::string{}) << '\n';
  }
}

}  // namespace adpi
