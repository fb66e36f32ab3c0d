#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "adpi/flow.hpp"

namespace adpi {

struct Ipv4Prefix {
  Ipv4Address network;  // host bits cleared
  int length = 32;

  /// "a.b.c.d" (length 32) or "a.b.c.d/len".
  static Ipv4Prefix parse(std::string_view text);
  bool contains(Ipv4Address addr) const;
  std::string to_string() const;

  friend bool operator==(const Ipv4Prefix&, const Ipv4Prefix&) = default;
};

std::uint32_t prefix_mask(int length);

/// Set of blocked IPv4 addresses and prefixes. Entries are bucketed by prefix
/// length, so a lookup costs one hash probe per distinct length in use.
class Blacklist {
 public:
  Blacklist() = default;
  explicit Blacklist(std::string source_name) : source_name_(std::move(source_name)) {}

  void insert(Ipv4Prefix prefix);
  bool contains(Ipv4Address addr) const;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const std::string& source_name() const { return source_name_; }
  std::vector<Ipv4Prefix> entries() const;

 private:
  std::array<std::unordered_set<std::uint32_t>, 33> by_length_;
  std::vector<int> lengths_in_use_;  // descending
  std::size_t size_ = 0;
  std::string source_name_;
};

struct BlacklistLoadOptions {
  /// When false, CIDR lines other than /32 count as malformed.
  bool allow_prefixes = true;
  std::string source_name;
};

struct BlacklistLoadResult {
  Blacklist blacklist;
  std::size_t skipped = 0;
  std::vector<RecordError> skipped_lines;
};

/// Parses one entry per line. '#' comments and blank lines are ignored,
/// malformed lines are counted and skipped.
BlacklistLoadResult load_blacklist(const std::vector<std::string>& lines,
                                   const BlacklistLoadOptions& options = {});
BlacklistLoadResult load_blacklist(std::istream& in,
                                   const BlacklistLoadOptions& options = {});

enum class EarlyVerdict { pass, block };

/// Early detection on flow creation: block iff the observed source (or,
/// with check_both_endpoints, either endpoint) is listed.
EarlyVerdict check_flow(const Blacklist& blacklist, const FlowKey& flow,
                        Ipv4Address observed_src, bool check_both_endpoints = false);

}  // namespace adpi
