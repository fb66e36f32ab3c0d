#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adpi/flow.hpp"

namespace adpi {

enum class TlsVersion { ssl3, tls1_0, tls1_1, tls1_2, tls1_3, unknown };

/// Case-insensitive; accepts forms such as "TLS1.2", "tlsv1.2", "TLS1_2",
/// "SSLv3". Anything else maps to unknown.
TlsVersion parse_tls_version(std::string_view text);
std::string_view to_string(TlsVersion version);

/// Metadata of one encrypted flow.
struct EncryptedFlowRecord {
  FlowKey flow;
  TlsVersion tls_version = TlsVersion::unknown;
  int ttl = 0;
  double duration = 0.0;
  long fwd_packets = 0;
  long bwd_packets = 0;
  std::optional<Label> label;
};

/// Columns every flow CSV must declare; `label` is optional.
inline constexpr std::array<std::string_view, 10> kFlowCsvColumns = {
    "src_ip", "src_port", "dst_ip", "dst_port", "proto",
    "tls_version", "ttl", "duration", "fwd_pkts", "bwd_pkts"};

/// Maps header names to column positions. Throws DataError when a required
/// column is missing.
class FlowCsvHeader {
 public:
  static FlowCsvHeader parse(std::string_view header_line);

  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> label_column() const { return label_; }
  std::size_t width() const { return width_; }

 private:
  std::array<std::size_t, kFlowCsvColumns.size()> columns_{};
  std::optional<std::size_t> label_;
  std::size_t width_ = 0;
};

/// Throws DataError naming `row_number` for missing fields, unparsable
/// numbers, a TTL outside [0, 255] or a negative duration.
EncryptedFlowRecord parse_flow_csv(const FlowCsvHeader& header, std::string_view row,
                                   std::size_t row_number);

/// Whole-file reader; the first non-blank line is the header. Row numbers in
/// errors are file line numbers.
ParsedStream<EncryptedFlowRecord> read_flow_csv(std::istream& in,
                                                ReadMode mode = ReadMode::lenient);

inline constexpr std::size_t kEncryptedFeatureCount = 8;
inline constexpr double kMinRateDuration = 1e-3;

/// [tls ordinal (ssl3 = 0 .. tls1_3 = 4, unknown = -1), ttl, duration,
///  src_port, dst_port, src_port < 1024, dst_port < 1024,
///  (fwd + bwd) / max(duration, 1 ms)]
std::array<double, kEncryptedFeatureCount> encode(const EncryptedFlowRecord& record);

}  // namespace adpi
