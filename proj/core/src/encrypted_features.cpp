#include "adpi/encrypted_features.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>

#include "adpi/csv.hpp"
#include "adpi/errors.hpp"

namespace adpi {

namespace {

std::string normalized_token(std::string_view text) {
  std::string out;
  for (unsigned char c : text) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

[[noreturn]] void row_error(std::size_t row, const std::string& what) {
  throw DataError("row " + std::to_string(row) + ": " + what);
}

template <typename T>
T parse_number(std::string_view text, std::string_view column, std::size_t row) {
  text = csv::trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    row_error(row, "unparsable " + std::string(column) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::optional<Label> parse_label(std::string_view text, std::size_t row) {
  auto token = normalized_token(text);
  if (token.empty()) return std::nullopt;
  if (token == "0" || token == "benign" || token == "normal") return Label::benign;
  if (token == "1" || token == "botnet" || token == "malicious" || token == "malware") {
    return Label::malicious;
  }
  row_error(row, "unknown label '" + std::string(text) + "'");
}

}  // namespace

TlsVersion parse_tls_version(std::string_view text) {
  auto token = normalized_token(text);
  // Drop the "v" in spellings like "tlsv1.2" / "sslv3".
  if (token.size() > 3 && token[3] == 'v') token.erase(3, 1);
  if (token == "ssl3" || token == "ssl30") return TlsVersion::ssl3;
  if (token == "tls10" || token == "tls1") return TlsVersion::tls1_0;
  if (token == "tls11") return TlsVersion::tls1_1;
  if (token == "tls12") return TlsVersion::tls1_2;
  if (token == "tls13") return TlsVersion::tls1_3;
  return TlsVersion::unknown;
}

std::string_view to_string(TlsVersion version) {
  switch (version) {
    case TlsVersion::ssl3: return "SSL3";
    case TlsVersion::tls1_0: return "TLS1.0";
    case TlsVersion::tls1_1: return "TLS1.1";
    case TlsVersion::tls1_2: return "TLS1.2";
    case TlsVersion::tls1_3: return "TLS1.3";
    case TlsVersion::unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

FlowCsvHeader FlowCsvHeader::parse(std::string_view header_line) {
  const auto names = csv::split(header_line);
  FlowCsvHeader header;
  header.width_ = names.size();
  std::array<bool, kFlowCsvColumns.size()> found{};
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto name = normalized_token(names[i]);
    if (name == "label") {
      header.label_ = i;
      continue;
    }
    for (std::size_t c = 0; c < kFlowCsvColumns.size(); ++c) {
      if (!found[c] && name == normalized_token(kFlowCsvColumns[c])) {
        header.columns_[c] = i;
        found[c] = true;
      }
    }
  }
  for (std::size_t c = 0; c < kFlowCsvColumns.size(); ++c) {
    if (!found[c]) {
      throw DataError("flow CSV header is missing column '" +
                      std::string(kFlowCsvColumns[c]) + "'");
    }
  }
  return header;
}

std::size_t FlowCsvHeader::column(std::string_view name) const {
  for (std::size_t c = 0; c < kFlowCsvColumns.size(); ++c) {
    if (kFlowCsvColumns[c] == name) return columns_[c];
  }
  throw ContractError("unknown flow CSV column '" + std::string(name) + "'");
}

EncryptedFlowRecord parse_flow_csv(const FlowCsvHeader& header, std::string_view row,
                                   std::size_t row_number) {
  const auto fields = csv::split(row);
  auto field = [&](std::string_view name) -> std::string_view {
    const auto col = header.column(name);
    if (col >= fields.size()) row_error(row_number, "missing column '" + std::string(name) + "'");
    return csv::trim(fields[col]);
  };

  EncryptedFlowRecord record;
  try {
    record.flow = FlowKey::canonicalize(
        field("src_ip"), parse_number<long>(field("src_port"), "src_port", row_number),
        field("dst_ip"), parse_number<long>(field("dst_port"), "dst_port", row_number),
        Protocol::parse(field("proto")));
  } catch (const ParseError& e) {
    row_error(row_number, e.what());
  }
  record.tls_version = parse_tls_version(field("tls_version"));
  const long ttl = parse_number<long>(field("ttl"), "ttl", row_number);
  if (ttl < 0 || ttl > 255) row_error(row_number, "ttl " + std::to_string(ttl) + " outside [0, 255]");
  record.ttl = static_cast<int>(ttl);
  record.duration = parse_number<double>(field("duration"), "duration", row_number);
  if (!(record.duration >= 0.0) || !std::isfinite(record.duration)) {
    row_error(row_number, "duration must be a finite value >= 0");
  }
  record.fwd_packets = parse_number<long>(field("fwd_pkts"), "fwd_pkts", row_number);
  record.bwd_packets = parse_number<long>(field("bwd_pkts"), "bwd_pkts", row_number);
  if (record.fwd_packets < 0 || record.bwd_packets < 0) {
    row_error(row_number, "packet counts must be >= 0");
  }
  if (auto col = header.label_column(); col && *col < fields.size()) {
    record.label = parse_label(fields[*col], row_number);
  }
  return record;
}

ParsedStream<EncryptedFlowRecord> read_flow_csv(std::istream& in, ReadMode mode) {
  ParsedStream<EncryptedFlowRecord> out;
  std::optional<FlowCsvHeader> header;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    if (!header) {
      header = FlowCsvHeader::parse(line);
      continue;
    }
    try {
      out.records.push_back(parse_flow_csv(*header, line, line_no));
    } catch (const DataError& e) {
      if (mode == ReadMode::strict) throw;
      out.errors.push_back({line_no, e.what()});
    }
  }
  if (!header) throw DataError("flow CSV has no header row");
  return out;
}

std::array<double, kEncryptedFeatureCount> encode(const EncryptedFlowRecord& record) {
  const auto src = record.flow.source().port;
  const auto dst = record.flow.destination().port;
  const double ordinal = record.tls_version == TlsVersion::unknown
                             ? -1.0
                             : static_cast<double>(record.tls_version);
  const double packets = static_cast<double>(record.fwd_packets + record.bwd_packets);
  return {ordinal,
          static_cast<double>(record.ttl),
          record.duration,
          static_cast<double>(src),
          static_cast<double>(dst),
          src < 1024 ? 1.0 : 0.0,
          dst < 1024 ? 1.0 : 0.0,
          packets / std::max(record.duration, kMinRateDuration)};
}

}  // namespace adpi
