#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace entanglemeter;

TEST(Partitions, CountsMatchStirlingAndBruteForce) {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 1; k <= n; ++k) {
      std::set<std::vector<std::vector<int>>> seen;
      std::size_t count = 0;
      for (const Partition& p : k_partitions(n, k)) {
        ++count;
        EXPECT_EQ(p.size(), k);
        EXPECT_EQ(p.sites(), n);
        seen.insert(p.blocks());
      }
      EXPECT_EQ(count, seen.size()) << "duplicates at n=" << n << " k=" << k;
      EXPECT_EQ(seen, oracle::partitions_by_surjections(n, k)) << "n=" << n << " k=" << k;
      EXPECT_EQ(count, stirling2(n, k));
      EXPECT_DOUBLE_EQ(static_cast<double>(stirling2(n, k)), oracle::stirling2_sum(n, k));
    }
  }
}

TEST(Partitions, KnownStirlingValues) {
  EXPECT_EQ(stirling2(4, 2), 7u);
  EXPECT_EQ(stirling2(5, 3), 25u);
  EXPECT_EQ(stirling2(9, 4), 7770u);
  EXPECT_EQ(stirling2(10, 5), 42525u);
  EXPECT_EQ(stirling2(20, 10), 5917584964655ull);
  EXPECT_THROW(stirling2(3, 4), std::invalid_argument);
  EXPECT_THROW(stirling2(21, 3), std::overflow_error);
}

TEST(Partitions, LexicographicRestrictedGrowthOrder) {
  std::vector<std::string> got;
  for (const Partition& p : k_partitions(4, 2)) got.push_back(p.to_string());
  const std::vector<std::string> want = {"1,2,3|4", "1,2,4|3", "1,2|3,4", "1,3,4|2", "1,3|2,4", "1,4|2,3", "1|2,3,4"};
  EXPECT_EQ(got, want);
}

TEST(Partitions, BipartitionCount) {
  for (int n = 2; n <= 10; ++n) {
    std::size_t count = 0;
    for (const Partition& p : bipartitions(n)) {
      ++count;
      EXPECT_EQ(p.size(), 2);
    }
    EXPECT_EQ(count, (std::size_t{1} << (n - 1)) - 1);
  }
}

TEST(Partitions, SingletonAndWholeSet) {
  std::size_t count = 0;
  for (const Partition& p : k_partitions(5, 5)) {
    ++count;
    EXPECT_EQ(p.to_string(), "1|2|3|4|5");
  }
  EXPECT_EQ(count, 1u);
  count = 0;
  for (const Partition& p : k_partitions(5, 1)) {
    ++count;
    EXPECT_EQ(p.to_string(), "1,2,3,4,5");
  }
  EXPECT_EQ(count, 1u);
}

TEST(Partitions, ParseRoundTripAndCanonicalForm) {
  const Partition p = Partition::parse("3,1|4|2");
  EXPECT_EQ(p.to_string(), "1,3|2|4");
  EXPECT_EQ(p.block(0), (std::vector<int>{0, 2}));
  EXPECT_EQ(p.mask(0), 0b0101u);
  EXPECT_EQ(Partition::parse(p.to_string()), p);
  EXPECT_EQ(Partition::from_labels({0, 1, 0, 2}), p);
}

TEST(Partitions, RejectsMalformedInput) {
  EXPECT_THROW(Partition::parse("1,2|2"), std::invalid_argument);
  EXPECT_THROW(Partition::parse("1|3"), std::invalid_argument);
  EXPECT_THROW(Partition::parse("1||2"), std::invalid_argument);
  EXPECT_THROW(Partition::parse("0|1"), std::invalid_argument);
  EXPECT_THROW(Partition::parse("a|1"), std::invalid_argument);
  EXPECT_THROW(Partition::parse(""), std::invalid_argument);
  EXPECT_THROW(k_partitions(3, 4), std::invalid_argument);
  EXPECT_THROW(k_partitions(3, 0), std::invalid_argument);
  EXPECT_THROW(bipartitions(1), std::invalid_argument);
}
