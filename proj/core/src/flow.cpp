#include "adpi/flow.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "adpi/errors.hpp"

namespace adpi {

namespace {

using json = nlohmann::json;

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::uint16_t checked_port(long port) {
  if (port < 0 || port > 65535) {
    throw ParseError("port out of range [0, 65535]: " + std::to_string(port));
  }
  return static_cast<std::uint16_t>(port);
}

long parse_port_text(std::string_view text) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("malformed port: '" + std::string(text) + "'");
  }
  return value;
}

Endpoint parse_endpoint(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw ParseError("endpoint missing ':port': '" + std::string(text) + "'");
  }
  return {Ipv4Address::parse(text.substr(0, colon)),
          checked_port(parse_port_text(text.substr(colon + 1)))};
}

long json_port(const json& obj, const char* field) {
  const auto& v = obj.at(field);
  if (!v.is_number_integer()) {
    throw DataError(std::string(field) + " must be an integer");
  }
  return v.get<long>();
}

Protocol json_protocol(const json& v) {
  if (v.is_string()) return Protocol::parse(v.get<std::string>());
  if (v.is_number_integer()) {
    auto code = v.get<long>();
    if (code < 0 || code > 255) throw ParseError("protocol code out of range");
    return Protocol{static_cast<std::uint8_t>(code)};
  }
  throw DataError("proto must be a string or an integer");
}

PacketRecord packet_from_json(const json& obj) {
  if (!obj.is_object()) throw DataError("expected a JSON object");
  PacketRecord packet;
  packet.flow = FlowKey::canonicalize(
      obj.at("src_ip").get<std::string>(), json_port(obj, "src_port"),
      obj.at("dst_ip").get<std::string>(), json_port(obj, "dst_port"),
      json_protocol(obj.at("proto")));
  packet.direction =
      packet.flow.source_is_low() ? Direction::forward : Direction::reverse;
  const auto& ts = obj.at("ts");
  if (!ts.is_number()) throw DataError("ts must be a number");
  packet.timestamp = ts.get<double>();
  if (!(packet.timestamp >= 0.0)) throw DataError("ts must be >= 0");
  if (auto it = obj.find("payload"); it != obj.end() && !it->is_null()) {
    packet.payload = it->get<std::string>();
  }
  if (auto it = obj.find("encrypted"); it != obj.end() && !it->is_null()) {
    packet.encrypted = it->get<bool>();
  }
  return packet;
}

LabeledPayload labeled_from_json(const json& obj) {
  if (!obj.is_object()) throw DataError("expected a JSON object");
  LabeledPayload sample;
  sample.payload = obj.at("payload").get<std::string>();
  const auto& label = obj.at("label");
  if (!label.is_number_integer()) throw DataError("label must be 0 or 1");
  auto value = label.get<long>();
  if (value != 0 && value != 1) throw DataError("label must be 0 or 1");
  sample.label = value == 1 ? Label::malicious : Label::benign;
  return sample;
}

template <typename T, typename Convert>
ParsedStream<T> read_jsonl(std::istream& in, ReadMode mode, Convert convert) {
  ParsedStream<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    try {
      out.records.push_back(convert(json::parse(line)));
    } catch (const std::exception& e) {
      std::string message = e.what();
      if (mode == ReadMode::strict) {
        throw DataError("line " + std::to_string(line_no) + ": " + message);
      }
      out.errors.push_back({line_no, std::move(message)});
    }
  }
  return out;
}

}  // namespace

Ipv4Address Ipv4Address::parse(std::string_view text) {
  if (text.find(':') != std::string_view::npos) {
    throw ParseError("IPv6 addresses are not supported: '" + std::string(text) + "'");
  }
  std::string buf(text);
  in_addr addr{};
  if (buf.empty() || inet_pton(AF_INET, buf.c_str(), &addr) != 1) {
    throw ParseError("malformed IPv4 address: '" + buf + "'");
  }
  return Ipv4Address{ntohl(addr.s_addr)};
}

std::string Ipv4Address::to_string() const {
  return std::to_string((value >> 24) & 0xff) + '.' +
         std::to_string((value >> 16) & 0xff) + '.' +
         std::to_string((value >> 8) & 0xff) + '.' + std::to_string(value & 0xff);
}

Protocol Protocol::parse(std::string_view text) {
  auto name = lower(text);
  if (name == "tcp") return tcp();
  if (name == "udp") return udp();
  unsigned code = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), code);
  if (name.empty() || ec != std::errc{} || ptr != name.data() + name.size() ||
      code > 255) {
    throw ParseError("malformed protocol: '" + std::string(text) + "'");
  }
  return Protocol{static_cast<std::uint8_t>(code)};
}

std::string Protocol::to_string() const {
  if (is_tcp()) return "tcp";
  if (is_udp()) return "udp";
  return std::to_string(code);
}

FlowKey FlowKey::canonicalize(Endpoint src, Endpoint dst, Protocol protocol) {
  FlowKey key;
  key.protocol_ = protocol;
  key.source_is_low_ = src <= dst;
  key.low_ = key.source_is_low_ ? src : dst;
  key.high_ = key.source_is_low_ ? dst : src;
  return key;
}

FlowKey FlowKey::canonicalize(std::string_view src_ip, long src_port,
                              std::string_view dst_ip, long dst_port,
                              Protocol protocol) {
  return canonicalize(Endpoint{Ipv4Address::parse(src_ip), checked_port(src_port)},
                      Endpoint{Ipv4Address::parse(dst_ip), checked_port(dst_port)},
                      protocol);
}

FlowKey FlowKey::reversed() const {
  return canonicalize(destination(), source(), protocol_);
}

std::string FlowKey::to_string() const {
  auto src = source();
  auto dst = destination();
  return src.ip.to_string() + ':' + std::to_string(src.port) + '>' +
         dst.ip.to_string() + ':' + std::to_string(dst.port) + '/' +
         protocol_.to_string();
}

FlowKey FlowKey::parse(std::string_view text) {
  auto arrow = text.find('>');
  auto slash = text.rfind('/');
  if (arrow == std::string_view::npos || slash == std::string_view::npos ||
      slash < arrow) {
    throw ParseError("malformed flow key: '" + std::string(text) + "'");
  }
  return canonicalize(parse_endpoint(text.substr(0, arrow)),
                      parse_endpoint(text.substr(arrow + 1, slash - arrow - 1)),
                      Protocol::parse(text.substr(slash + 1)));
}

std::size_t FlowKeyHash::operator()(const FlowKey& key) const noexcept {
  // FNV-1a over the canonical fields.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(key.low().ip.value);
  mix(key.low().port);
  mix(key.high().ip.value);
  mix(key.high().port);
  mix(key.protocol().code);
  return static_cast<std::size_t>(h);
}

std::ostream& operator<<(std::ostream& os, const FlowKey& key) {
  return os << key.to_string();
}

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::pass: return "pass";
    case VerdictKind::alert: return "alert";
    case VerdictKind::block: return "block";
  }
  return "unknown";
}

std::string_view to_string(VerdictReason reason) {
  switch (reason) {
    case VerdictReason::blacklist: return "blacklist";
    case VerdictReason::payload_classifier: return "payload_classifier";
    case VerdictReason::encrypted_classifier: return "encrypted_classifier";
  }
  return "unknown";
}

Verdict Verdict::from_blacklist(VerdictKind kind, const FlowKey& flow,
                                std::optional<double> timestamp) {
  return Verdict(kind, VerdictReason::blacklist, flow, std::nullopt, timestamp);
}

Verdict Verdict::from_classifier(VerdictKind kind, VerdictReason reason,
                                 const FlowKey& flow, double score,
                                 std::optional<double> timestamp) {
  if (reason == VerdictReason::blacklist) {
    throw ContractError("classifier verdict cannot carry the blacklist reason");
  }
  if (!(score >= 0.0 && score <= 1.0)) {
    throw ContractError("verdict score must lie in [0, 1]");
  }
  return Verdict(kind, reason, flow, score, timestamp);
}

ParsedStream<PacketRecord> read_packet_stream(std::istream& in, ReadMode mode) {
  return read_jsonl<PacketRecord>(in, mode, packet_from_json);
}

ParsedStream<LabeledPayload> read_labeled_corpus(std::istream& in, ReadMode mode) {
  return read_jsonl<LabeledPayload>(in, mode, labeled_from_json);
}

std::string to_json_line(const PacketRecord& packet) {
  auto src = packet.flow.source();
  auto dst = packet.flow.destination();
  json proto = packet.flow.protocol().is_tcp() || packet.flow.protocol().is_udp()
                   ? json(packet.flow.protocol().to_string())
                   : json(packet.flow.protocol().code);
  json obj = {{"src_ip", src.ip.to_string()}, {"src_port", src.port},
              {"dst_ip", dst.ip.to_string()}, {"dst_port", dst.port},
              {"proto", proto},               {"ts", packet.timestamp},
              {"payload", packet.payload},    {"encrypted", packet.encrypted}};
  return obj.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::string to_json_line(const LabeledPayload& sample) {
  json obj = {{"payload", sample.payload},
              {"label", static_cast<int>(sample.label)}};
  return obj.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace adpi
