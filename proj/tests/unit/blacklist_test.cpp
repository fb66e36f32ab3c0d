#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "adpi/blacklist.hpp"
#include "adpi/errors.hpp"
#include "oracles.hpp"

namespace adpi {
namespace {

FlowKey flow_from(const char* src) {
  return FlowKey::canonicalize(src, 40000, "192.0.2.1", 80, Protocol::tcp());
}

EarlyVerdict check_src(const Blacklist& bl, const char* src) {
  return check_flow(bl, flow_from(src), Ipv4Address::parse(src));
}

TEST(LoadBlacklist, AddressAndPrefix) {
  auto r = load_blacklist(std::vector<std::string>{"10.1.2.3", "192.168.0.0/16"});
  EXPECT_EQ(r.blacklist.size(), 2u);
  EXPECT_EQ(r.skipped, 0u);
}

TEST(LoadBlacklist, CommentsAndBlanksSkipped) {
  auto r = load_blacklist(std::vector<std::string>{"# comment", "", "10.1.2.3"});
  EXPECT_EQ(r.blacklist.size(), 1u);
  EXPECT_EQ(r.skipped, 0u);
}

TEST(LoadBlacklist, MalformedLineCounted) {
  auto r = load_blacklist(std::vector<std::string>{"10.1.2.999"});
  EXPECT_EQ(r.blacklist.size(), 0u);
  EXPECT_EQ(r.skipped, 1u);
  ASSERT_EQ(r.skipped_lines.size(), 1u);
  EXPECT_EQ(r.skipped_lines[0].line, 1u);
}

TEST(LoadBlacklist, TrailingCommentAndStream) {
  std::istringstream in("  10.0.0.1   # host\n10.0.0.0/33\n\n172.16.0.0/12\n");
  auto r = load_blacklist(in);
  EXPECT_EQ(r.blacklist.size(), 2u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.skipped_lines[0].line, 2u);
}

TEST(LoadBlacklist, PrefixesCanBeDisabled) {
  BlacklistLoadOptions opts;
  opts.allow_prefixes = false;
  auto r = load_blacklist(std::vector<std::string>{"10.0.0.0/8", "10.0.0.1"}, opts);
  EXPECT_EQ(r.blacklist.size(), 1u);
  EXPECT_EQ(r.skipped, 1u);
}

TEST(Ipv4Prefix, HostBitsCleared) {
  auto p = Ipv4Prefix::parse("192.168.44.7/16");
  EXPECT_EQ(p.to_string(), "192.168.0.0/16");
  EXPECT_EQ(Ipv4Prefix::parse("0.0.0.0/0").length, 0);
  EXPECT_THROW(Ipv4Prefix::parse("1.2.3.4/x"), ParseError);
}

TEST(CheckFlow, ExactMatchBlocks) {
  auto bl = load_blacklist(std::vector<std::string>{"10.1.2.3"}).blacklist;
  EXPECT_EQ(check_src(bl, "10.1.2.3"), EarlyVerdict::block);
  EXPECT_EQ(check_src(bl, "10.1.2.4"), EarlyVerdict::pass);
}

TEST(CheckFlow, PrefixMatchAgreesWithBitmaskOracle) {
  auto bl = load_blacklist(std::vector<std::string>{"192.168.0.0/16"}).blacklist;
  EXPECT_EQ(check_src(bl, "192.168.44.7"), EarlyVerdict::block);
  const auto net = Ipv4Address::parse("192.168.0.0").value;
  for (std::uint32_t hi = 0; hi < 256; ++hi) {
    for (std::uint32_t lo : {0u, 7u, 255u}) {
      const std::uint32_t base = (0xC0u << 24) | (hi << 16);
      for (std::uint32_t low16 : {lo, lo << 8}) {
        const Ipv4Address a{base | low16};
        ASSERT_EQ(bl.contains(a), oracle::bitwise_prefix_match(a.value, net, 16));
      }
    }
  }
  EXPECT_EQ(check_src(bl, "192.169.0.1"), EarlyVerdict::pass);
}

TEST(CheckFlow, OnlyObservedSourceByDefault) {
  auto bl = load_blacklist(std::vector<std::string>{"192.0.2.1"}).blacklist;
  auto key = flow_from("10.0.0.5");
  EXPECT_EQ(check_flow(bl, key, Ipv4Address::parse("10.0.0.5")), EarlyVerdict::pass);
  EXPECT_EQ(check_flow(bl, key, Ipv4Address::parse("10.0.0.5"), true), EarlyVerdict::block);
}

TEST(Blacklist, RandomPrefixesMatchLinearScan) {
  std::mt19937_64 rng(11);
  std::vector<Ipv4Prefix> prefixes;
  Blacklist bl;
  for (int i = 0; i < 60; ++i) {
    const int len = static_cast<int>(rng() % 33);
    Ipv4Prefix p{{static_cast<std::uint32_t>(rng()) & prefix_mask(len)}, len};
    if (len < 4) continue;
    prefixes.push_back(p);
    bl.insert(p);
  }
  for (int i = 0; i < 20000; ++i) {
    std::uint32_t addr = static_cast<std::uint32_t>(rng());
    if (i % 2 == 0) {
      const auto& p = prefixes[rng() % prefixes.size()];
      addr = p.network.value | (addr & ~prefix_mask(p.length));
    }
    bool expected = false;
    for (const auto& p : prefixes) {
      expected = expected || oracle::bitwise_prefix_match(addr, p.network.value, p.length);
    }
    ASSERT_EQ(bl.contains(Ipv4Address{addr}), expected) << Ipv4Address{addr}.to_string();
  }
}

}  // namespace
}  // namespace adpi
