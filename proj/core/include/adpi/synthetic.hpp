#pragma once

// Seeded synthetic datasets for demos, tests and benchmarks.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "adpi/encrypted_features.hpp"
#include "adpi/flow.hpp"
#include "adpi/ml/sparse.hpp"

namespace adpi::synth {

std::string benign_payload(std::mt19937_64& rng);
std::string attack_payload(std::mt19937_64& rng);

/// `n` labelled payloads, roughly `malicious_fraction` of them attacks.
std::vector<LabeledPayload> payload_corpus(std::size_t n, double malicious_fraction,
                                           std::uint64_t seed);

/// Labelled encrypted-flow records; `noise` is the chance a record borrows
/// the other class's profile.
std::vector<EncryptedFlowRecord> flow_records(std::size_t n, double malicious_fraction,
                                              double noise, std::uint64_t seed);

struct Blobs {
  std::vector<ml::FeatureVector> X;
  std::vector<int> y;
};

/// Two 2D Gaussian clusters, keeping only points at least `margin` away from
/// the separating line x + y = 0 on their own side.
Blobs separable_blobs(std::size_t n, double margin, std::uint64_t seed);

struct ReplayScenario {
  std::vector<PacketRecord> packets;
  std::vector<std::string> blacklist_lines;
  std::vector<FlowKey> blacklisted_flows;
  std::vector<FlowKey> planted_flows;
  std::vector<FlowKey> benign_flows;
};

/// `flows` flows of `packets_per_flow` interleaved packets each. The first
/// `blacklisted` flows come from blacklisted sources; the next `planted`
/// carry one attack payload at packet index `plant_at`.
ReplayScenario replay_scenario(int flows, int packets_per_flow, int blacklisted,
                               int planted, int plant_at, std::uint64_t seed);

}  // namespace adpi::synth
