#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adpi {

/// IPv4 address in host byte order.
struct Ipv4Address {
  std::uint32_t value = 0;

  /// Strict dotted-quad parse. IPv6 text is rejected with a dedicated message.
  static Ipv4Address parse(std::string_view text);
  std::string to_string() const;

  friend auto operator<=>(const Ipv4Address&, const Ipv4Address&) = default;
};

/// IP protocol number; TCP and UDP get names, everything else is carried as
/// its raw code.
struct Protocol {
  std::uint8_t code = 0;

  static constexpr Protocol tcp() { return {6}; }
  static constexpr Protocol udp() { return {17}; }

  bool is_tcp() const { return code == 6; }
  bool is_udp() const { return code == 17; }

  /// Accepts "tcp", "udp" (any case) or a decimal code in [0, 255].
  static Protocol parse(std::string_view text);
  std::string to_string() const;

  friend auto operator<=>(const Protocol&, const Protocol&) = default;
};

struct Endpoint {
  Ipv4Address ip;
  std::uint16_t port = 0;

  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

/// Canonical key of a bi-directional flow.
///
/// The two endpoints are stored ordered (ip first, then port) so that both
/// directions of a conversation produce the same key. Which endpoint was the
/// observed source is kept as a flag; it does not take part in equality or
/// hashing.
class FlowKey {
 public:
  FlowKey() = default;

  static FlowKey canonicalize(Endpoint src, Endpoint dst, Protocol protocol);
  /// Text front-end; throws ParseError on a malformed address or a port
  /// outside [0, 65535].
  static FlowKey canonicalize(std::string_view src_ip, long src_port,
                              std::string_view dst_ip, long dst_port,
                              Protocol protocol);

  const Endpoint& low() const { return low_; }
  const Endpoint& high() const { return high_; }
  Protocol protocol() const { return protocol_; }
  bool source_is_low() const { return source_is_low_; }

  Endpoint source() const { return source_is_low_ ? low_ : high_; }
  Endpoint destination() const { return source_is_low_ ? high_ : low_; }

  /// Same conversation seen from the other side.
  FlowKey reversed() const;

  /// "src_ip:port>dst_ip:port/proto", in observed direction.
  std::string to_string() const;
  static FlowKey parse(std::string_view text);

  friend bool operator==(const FlowKey& a, const FlowKey& b) {
    return a.low_ == b.low_ && a.high_ == b.high_ && a.protocol_ == b.protocol_;
  }

 private:
  Endpoint low_;
  Endpoint high_;
  Protocol protocol_;
  bool source_is_low_ = true;
};

struct FlowKeyHash {
  std::size_t operator()(const FlowKey& key) const noexcept;
};

std::ostream& operator<<(std::ostream& os, const FlowKey& key);

enum class Direction { forward, reverse };

struct PacketRecord {
  FlowKey flow;
  /// forward when the packet travels from the canonical low endpoint.
  Direction direction = Direction::forward;
  double timestamp = 0.0;
  std::string payload;
  bool encrypted = false;
};

enum class Label : int { benign = 0, malicious = 1 };

struct LabeledPayload {
  std::string payload;
  Label label = Label::benign;
};

enum class VerdictKind { pass, alert, block };
enum class VerdictReason { blacklist, payload_classifier, encrypted_classifier };

std::string_view to_string(VerdictKind kind);
std::string_view to_string(VerdictReason reason);

/// Outcome of inspecting a flow. A score is attached exactly when the
/// reason is one of the classifiers.
class Verdict {
 public:
  static Verdict from_blacklist(VerdictKind kind, const FlowKey& flow,
                                std::optional<double> timestamp = {});
  static Verdict from_classifier(VerdictKind kind, VerdictReason reason,
                                 const FlowKey& flow, double score,
                                 std::optional<double> timestamp = {});

  VerdictKind kind() const { return kind_; }
  VerdictReason reason() const { return reason_; }
  const FlowKey& flow() const { return flow_; }
  std::optional<double> score() const { return score_; }
  std::optional<double> timestamp() const { return timestamp_; }

 private:
  Verdict(VerdictKind kind, VerdictReason reason, const FlowKey& flow,
          std::optional<double> score, std::optional<double> timestamp)
      : kind_(kind), reason_(reason), flow_(flow), score_(score),
        timestamp_(timestamp) {}

  VerdictKind kind_;
  VerdictReason reason_;
  FlowKey flow_;
  std::optional<double> score_;
  std::optional<double> timestamp_;
};

/// A malformed line in a line-oriented input file.
struct RecordError {
  std::size_t line = 0;
  std::string message;
};

template <typename T>
struct ParsedStream {
  std::vector<T> records;
  std::vector<RecordError> errors;
};

enum class ReadMode { lenient, strict };

/// Packet stream, one JSON object per line:
/// {"src_ip","src_port","dst_ip","dst_port","proto","ts","payload","encrypted"}.
/// Blank lines are skipped. In strict mode the first malformed line throws
/// DataError; otherwise it is recorded and skipped.
ParsedStream<PacketRecord> read_packet_stream(std::istream& in,
                                              ReadMode mode = ReadMode::lenient);

/// Labeled corpus, one {"payload": str, "label": 0|1} object per line.
ParsedStream<LabeledPayload> read_labeled_corpus(std::istream& in,
                                                 ReadMode mode = ReadMode::lenient);

/// Inverse of read_packet_stream for a single record.
std::string to_json_line(const PacketRecord& packet);
std::string to_json_line(const LabeledPayload& sample);

}  // namespace adpi
