#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "adpi/engine.hpp"
#include "adpi/errors.hpp"
#include "adpi/synthetic.hpp"
#include "adpi/training.hpp"

namespace adpi {
namespace {

const PayloadModel& shared_model() {
  static const PayloadModel model = [] {
    const auto corpus = synth::payload_corpus(400, 0.3, 1234);
    ml::LogisticHyper h;
    h.lambda = 0.1;
    return train_payload_model(corpus, h);
  }();
  return model;
}

Blacklist blacklist_of(std::vector<std::string> lines) {
  return load_blacklist(lines).blacklist;
}

FlowKey client_flow(const char* src, std::uint16_t port = 40000) {
  return FlowKey::canonicalize(Endpoint{Ipv4Address::parse(src), port},
                               Endpoint{Ipv4Address::parse("192.0.2.10"), 80},
                               Protocol::tcp());
}

std::vector<PacketRecord> benign_packets(const FlowKey& key, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PacketRecord> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({key, Direction::forward, i * 0.01, synth::benign_payload(rng), false});
  }
  return out;
}

ml::DecisionTreeModel ttl_tree() {
  ml::DecisionTreeModel t;
  t.n_features = kEncryptedFeatureCount;
  t.nodes = {ml::TreeNode{1, 50.0, 1, 2, 1, 0.5, 20},
             ml::TreeNode{-1, 0.0, -1, -1, 1, 0.9, 10},
             ml::TreeNode{-1, 0.0, -1, -1, 0, 0.1, 10}};
  return t;
}

EncryptedFlowRecord flow_with_ttl(int ttl) {
  EncryptedFlowRecord r;
  r.flow = client_flow("10.9.9.9", static_cast<std::uint16_t>(50000 + ttl));
  r.tls_version = TlsVersion::tls1_2;
  r.ttl = ttl;
  r.duration = 1.0;
  r.fwd_packets = 3;
  r.bwd_packets = 3;
  return r;
}

TEST(Engine, ModelScoresSyntheticPayloadsSensibly) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 200; ++i) {
    ASSERT_LT(shared_model().score(synth::benign_payload(rng)), 0.5);
    ASSERT_GE(shared_model().score(synth::attack_payload(rng)), 0.5);
  }
}

TEST(Engine, BlacklistedFirstPacketBlocks) {
  Engine e(EngineConfig{}, blacklist_of({"10.6.6.6"}), shared_model());
  const auto key = client_flow("10.6.6.6");
  const auto packets = benign_packets(key, 10, 1);
  const auto v = e.process_packet(packets[0]);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->kind(), VerdictKind::block);
  EXPECT_EQ(v->reason(), VerdictReason::blacklist);
  for (std::size_t i = 1; i < packets.size(); ++i) EXPECT_FALSE(e.process_packet(packets[i]));
  EXPECT_EQ(e.report().packets_sampled, 0u);
  EXPECT_EQ(e.report().packets_dropped, 9u);
  EXPECT_EQ(e.report().actions.size(), 1u);
}

TEST(Engine, HundredBenignPacketsSampleFive) {
  Engine e(EngineConfig{}, Blacklist{}, shared_model());
  const auto key = client_flow("10.0.0.1");
  for (const auto& p : benign_packets(key, 100, 2)) EXPECT_FALSE(e.process_packet(p));
  EXPECT_EQ(e.report().packets_sampled, 5u);
  const auto* st = e.flow_state(key);
  ASSERT_NE(st, nullptr);
  ASSERT_EQ(st->sampler.history().size(), 1u);
  EXPECT_EQ(st->sampler.history()[0], (Sample{5, 0}));
  EXPECT_EQ(st->epoch_index, 1);
  EXPECT_EQ(st->packets_seen_in_epoch, 0);
}

TEST(Engine, PlantedPayloadInsideWindowBlocks) {
  Engine e(EngineConfig{}, Blacklist{}, shared_model());
  const auto key = client_flow("10.0.0.2");
  auto packets = benign_packets(key, 100, 3);
  std::mt19937_64 rng(4);
  packets[2].payload = synth::attack_payload(rng);
  std::optional<Verdict> block;
  for (const auto& p : packets) {
    if (auto v = e.process_packet(p)) {
      ASSERT_FALSE(block.has_value()) << "action after block";
      block = v;
    }
  }
  ASSERT_TRUE(block.has_value());
  EXPECT_EQ(block->kind(), VerdictKind::block);
  EXPECT_EQ(block->reason(), VerdictReason::payload_classifier);
  EXPECT_GE(*block->score(), 0.5);
  EXPECT_EQ(*block->timestamp(), packets[2].timestamp);
  EXPECT_EQ(e.report().packets_dropped, 97u);
}

TEST(Engine, PayloadOutsideWindowIsNotInspected) {
  Engine e(EngineConfig{}, Blacklist{}, shared_model());
  const auto key = client_flow("10.0.0.3");
  auto packets = benign_packets(key, 100, 5);
  std::mt19937_64 rng(6);
  packets[50].payload = synth::attack_payload(rng);
  for (const auto& p : packets) EXPECT_FALSE(e.process_packet(p));
  EXPECT_TRUE(e.report().actions.empty());
}

TEST(Engine, EncryptedPacketsAreNotScored) {
  Engine e(EngineConfig{}, Blacklist{}, shared_model());
  auto packets = benign_packets(client_flow("10.0.0.4"), 10, 8);
  for (auto& p : packets) p.encrypted = true;
  for (const auto& p : packets) e.process_packet(p);
  EXPECT_EQ(e.report().packets_sampled, 0u);
}

TEST(Engine, HandBuiltTreeClassifiesEncryptedFlows) {
  Engine e(EngineConfig{}, Blacklist{}, std::nullopt, ttl_tree());
  const auto bad = e.process_encrypted_flow(flow_with_ttl(40));
  EXPECT_EQ(bad.kind(), VerdictKind::block);
  EXPECT_EQ(bad.reason(), VerdictReason::encrypted_classifier);
  EXPECT_DOUBLE_EQ(*bad.score(), 0.9);
  const auto good = e.process_encrypted_flow(flow_with_ttl(64));
  EXPECT_EQ(good.kind(), VerdictKind::pass);
  EXPECT_DOUBLE_EQ(*good.score(), 0.1);
}

TEST(Engine, MissingOrMismatchedTree) {
  Engine e(EngineConfig{}, Blacklist{}, shared_model());
  EXPECT_THROW(e.process_encrypted_flow(flow_with_ttl(40)), ConfigError);
  const std::vector<EncryptedFlowRecord> flows = {flow_with_ttl(40)};
  EXPECT_THROW(run_replay(e, {}, flows), ConfigError);
  auto wrong = ttl_tree();
  wrong.n_features = 3;
  EXPECT_THROW(Engine(EngineConfig{}, Blacklist{}, std::nullopt, wrong), ConfigError);
  Engine no_payload(EngineConfig{}, Blacklist{}, std::nullopt, ttl_tree());
  const auto packets = benign_packets(client_flow("10.0.0.5"), 1, 1);
  EXPECT_THROW(run_replay(no_payload, packets, {}), ConfigError);
}

TEST(Engine, ConfigValidation) {
  EngineConfig c;
  c.block_threshold = 1.0;
  EXPECT_THROW(Engine(c, Blacklist{}, std::nullopt), ConfigError);
  c.block_threshold = 0.0;
  EXPECT_THROW(Engine(c, Blacklist{}, std::nullopt), ConfigError);
}

TEST(Replay, EmptyStreams) {
  Engine e(EngineConfig{}, Blacklist{}, shared_model());
  const auto r = run_replay(e, {}, {});
  EXPECT_EQ(r.flows_seen, 0u);
  EXPECT_EQ(r.packets_seen, 0u);
  EXPECT_EQ(r.packets_sampled, 0u);
  EXPECT_EQ(r.blacklist_blocks + r.classifier_blocks + r.alerts, 0u);
  EXPECT_TRUE(r.actions.empty());
}

TEST(Replay, CountsFlowsAndPackets) {
  const auto s = synth::replay_scenario(3, 100, 0, 0, 0, 9);
  Engine e(EngineConfig{}, Blacklist{}, shared_model());
  const auto r = run_replay(e, s.packets, {});
  EXPECT_EQ(r.flows_seen, 3u);
  EXPECT_EQ(r.packets_seen, 300u);
  EXPECT_EQ(r.packets_sampled, 15u);
}

TEST(Replay, DeterministicReports) {
  const auto s = synth::replay_scenario(6, 250, 1, 2, 1, 10);
  auto run = [&] {
    Engine e(EngineConfig{}, load_blacklist(s.blacklist_lines).blacklist, shared_model(),
             ttl_tree());
    const std::vector<EncryptedFlowRecord> flows = {flow_with_ttl(40), flow_with_ttl(64)};
    const auto r = run_replay(e, s.packets, flows);
    std::ostringstream log;
    write_action_log(log, r.actions);
    return engine_report_to_json(r) + log.str();
  };
  EXPECT_EQ(run(), run());
}

TEST(Replay, CountersMatchActionLog) {
  const auto s = synth::replay_scenario(10, 300, 2, 3, 3, 11);
  Engine e(EngineConfig{}, load_blacklist(s.blacklist_lines).blacklist, shared_model(),
           ttl_tree());
  const std::vector<EncryptedFlowRecord> flows = {flow_with_ttl(30), flow_with_ttl(70)};
  const auto r = run_replay(e, s.packets, flows);
  std::map<std::string, std::size_t> recount;
  std::map<std::string, int> per_flow;
  for (const auto& v : r.actions) {
    recount[std::string(to_string(v.kind())) + "/" + std::string(to_string(v.reason()))]++;
    if (v.kind() == VerdictKind::block) ASSERT_EQ(++per_flow[v.flow().to_string()], 1);
  }
  EXPECT_EQ(r.blacklist_blocks, recount["block/blacklist"]);
  EXPECT_EQ(r.classifier_blocks,
            recount["block/payload_classifier"] + recount["block/encrypted_classifier"]);
  EXPECT_EQ(r.alerts, recount["alert/payload_classifier"]);
  EXPECT_EQ(r.blacklist_blocks, 2u);
  EXPECT_EQ(recount["block/payload_classifier"], 3u);
  EXPECT_EQ(recount["block/encrypted_classifier"], 1u);
  EXPECT_LE(r.packets_sampled, r.packets_seen);
}

TEST(Replay, AlertModeRecordsOfflineRecount) {
  EngineConfig cfg;
  cfg.block_on_first_hit = false;
  Engine e(cfg, Blacklist{}, shared_model());
  const auto key = client_flow("10.0.0.7");
  auto packets = benign_packets(key, 600, 12);
  std::mt19937_64 rng(13);
  for (int i : {0, 2, 3, 104, 150, 201, 202, 203, 204, 310, 311, 420, 599}) {
    packets[static_cast<std::size_t>(i)].payload = synth::attack_payload(rng);
  }
  for (const auto& p : packets) e.process_packet(p);

  const auto* st = e.flow_state(key);
  ASSERT_NE(st, nullptr);
  const auto history = st->sampler.history();
  ASSERT_EQ(history.size(), 6u);
  std::size_t alerts = 0;
  for (std::size_t epoch = 0; epoch < history.size(); ++epoch) {
    const int w = history[epoch].window;
    ASSERT_GE(w, cfg.sampler.w_min);
    ASSERT_LE(w, cfg.sampler.w_max);
    int hits = 0;
    for (int i = 0; i < w; ++i) {
      const auto& p = packets[epoch * 100 + static_cast<std::size_t>(i)];
      hits += shared_model().score(p.payload) >= cfg.block_threshold;
    }
    EXPECT_EQ(history[epoch].malicious, hits) << "epoch " << epoch;
    alerts += static_cast<std::size_t>(hits);
  }
  EXPECT_EQ(e.report().alerts, alerts);
  EXPECT_EQ(e.report().classifier_blocks, 0u);
}

TEST(Replay, CountBasedBlock) {
  EngineConfig cfg;
  cfg.block_on_first_hit = false;
  cfg.block_min_hits = 2;
  Engine e(cfg, Blacklist{}, shared_model());
  const auto key = client_flow("10.0.0.8");
  auto packets = benign_packets(key, 100, 14);
  std::mt19937_64 rng(15);
  packets[1].payload = synth::attack_payload(rng);
  packets[3].payload = synth::attack_payload(rng);
  std::vector<Verdict> got;
  for (const auto& p : packets) {
    if (auto v = e.process_packet(p)) got.push_back(*v);
  }
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].kind(), VerdictKind::alert);
  EXPECT_EQ(got[1].kind(), VerdictKind::block);
}

TEST(Replay, ActionLogFormat) {
  const auto key = client_flow("10.0.0.9");
  const std::vector<Verdict> actions = {
      Verdict::from_blacklist(VerdictKind::block, key, 1.5),
      Verdict::from_classifier(VerdictKind::alert, VerdictReason::payload_classifier, key,
                               0.75, 2.0)};
  std::ostringstream out;
  write_action_log(out, actions);
  EXPECT_EQ(out.str(),
            "ts,flow,kind,reason,score\n"
            "1.5,10.0.0.9:40000>192.0.2.10:80/tcp,block,blacklist,\n"
            "2,10.0.0.9:40000>192.0.2.10:80/tcp,alert,payload_classifier,0.75\n");
}

}  // namespace
}  // namespace adpi
