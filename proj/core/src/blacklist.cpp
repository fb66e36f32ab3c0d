#include "adpi/blacklist.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <tuple>

#include "adpi/errors.hpp"

namespace adpi {

namespace {

std::string_view trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::uint32_t prefix_mask(int length) {
  if (length <= 0) return 0;
  if (length >= 32) return 0xffffffffu;
  return ~((1u << (32 - length)) - 1u);
}

Ipv4Prefix Ipv4Prefix::parse(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  Ipv4Prefix prefix;
  auto addr = Ipv4Address::parse(text.substr(0, slash));
  if (slash != std::string_view::npos) {
    auto len_text = text.substr(slash + 1);
    int length = -1;
    auto [ptr, ec] =
        std::from_chars(len_text.data(), len_text.data() + len_text.size(), length);
    if (len_text.empty() || ec != std::errc{} ||
        ptr != len_text.data() + len_text.size() || length < 0 || length > 32) {
      throw ParseError("malformed prefix length: '" + std::string(text) + "'");
    }
    prefix.length = length;
  }
  prefix.network = Ipv4Address{addr.value & prefix_mask(prefix.length)};
  return prefix;
}

bool Ipv4Prefix::contains(Ipv4Address addr) const {
  return (addr.value & prefix_mask(length)) == network.value;
}

std::string Ipv4Prefix::to_string() const {
  auto text = network.to_string();
  if (length != 32) text += '/' + std::to_string(length);
  return text;
}

void Blacklist::insert(Ipv4Prefix prefix) {
  auto network = prefix.network.value & prefix_mask(prefix.length);
  if (!by_length_[prefix.length].insert(network).second) return;
  ++size_;
  if (std::find(lengths_in_use_.begin(), lengths_in_use_.end(), prefix.length) ==
      lengths_in_use_.end()) {
    lengths_in_use_.push_back(prefix.length);
    std::sort(lengths_in_use_.begin(), lengths_in_use_.end(), std::greater<>());
  }
}

bool Blacklist::contains(Ipv4Address addr) const {
  for (int length : lengths_in_use_) {
    if (by_length_[length].count(addr.value & prefix_mask(length)) != 0) return true;
  }
  return false;
}

std::vector<Ipv4Prefix> Blacklist::entries() const {
  std::vector<Ipv4Prefix> out;
  out.reserve(size_);
  for (int length : lengths_in_use_) {
    for (auto network : by_length_[length]) {
      out.push_back({Ipv4Address{network}, length});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.network, a.length) < std::tie(b.network, b.length);
  });
  return out;
}

BlacklistLoadResult load_blacklist(const std::vector<std::string>& lines,
                                   const BlacklistLoadOptions& options) {
  BlacklistLoadResult result{Blacklist(options.source_name), 0, {}};
  std::size_t line_no = 0;
  for (const auto& raw : lines) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    // Trailing comments after an entry are allowed.
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    try {
      auto prefix = Ipv4Prefix::parse(line);
      if (!options.allow_prefixes && prefix.length != 32) {
        throw ParseError("prefix entries disabled: '" + std::string(line) + "'");
      }
      result.blacklist.insert(prefix);
    } catch (const ParseError& e) {
      ++result.skipped;
      result.skipped_lines.push_back({line_no, e.what()});
    }
  }
  return result;
}

BlacklistLoadResult load_blacklist(std::istream& in,
                                   const BlacklistLoadOptions& options) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  return load_blacklist(lines, options);
}

EarlyVerdict check_flow(const Blacklist& blacklist, const FlowKey& flow,
                        Ipv4Address observed_src, bool check_both_endpoints) {
  if (blacklist.contains(observed_src)) return EarlyVerdict::block;
  if (check_both_endpoints) {
    auto other = flow.low().ip == observed_src ? flow.high().ip : flow.low().ip;
    if (blacklist.contains(other)) return EarlyVerdict::block;
  }
  return EarlyVerdict::pass;
}

}  // namespace adpi
