#include <gtest/gtest.h>

#include <random>

#include "cidiff/edit_script.hpp"
#include "cidiff/lcs.hpp"
#include "test_support.hpp"

using namespace cidiff;

namespace {

void expect_valid(const std::vector<LinePair>& pairs, const std::vector<std::uint32_t>& a,
                  const std::vector<std::uint32_t>& b) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    ASSERT_LT(pairs[i].ref, a.size());
    ASSERT_LT(pairs[i].mod, b.size());
    ASSERT_EQ(a[pairs[i].ref], b[pairs[i].mod]);
    if (i > 0) {
      ASSERT_GT(pairs[i].ref, pairs[i - 1].ref);
      ASSERT_GT(pairs[i].mod, pairs[i - 1].mod);
    }
  }
}

}  // namespace

TEST(LcsIds, EmptyAndIdentical) {
  const std::vector<std::uint32_t> none, some{1, 2, 3};
  EXPECT_TRUE(lcs_ids(none, none).empty());
  EXPECT_TRUE(lcs_ids(none, some).empty());
  EXPECT_TRUE(lcs_ids(some, none).empty());
  const auto pairs = lcs_ids(some, some);
  EXPECT_EQ(pairs, (std::vector<LinePair>{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(LcsIds, MatchesDynamicProgrammingOracle) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 400; ++round) {
    const auto alphabet = static_cast<std::uint32_t>(2 + rng() % 12);
    const auto a = test_support::random_ids(rng, 120, alphabet);
    const auto b = test_support::random_ids(rng, 120, alphabet);
    const auto pairs = lcs_ids(a, b);
    expect_valid(pairs, a, b);
    ASSERT_EQ(pairs.size(), test_support::lcs_length_dp(a, b)) << "round " << round;
  }
}

TEST(LcsIds, NearlyEqualSequences) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::uint32_t> a(300);
    for (auto& v : a) v = static_cast<std::uint32_t>(rng() % 50);
    auto b = a;
    for (int e = 0; e < 5; ++e) {
      const std::size_t at = rng() % b.size();
      if (rng() % 2) b.erase(b.begin() + static_cast<std::ptrdiff_t>(at));
      else b.insert(b.begin() + static_cast<std::ptrdiff_t>(at), 1000 + e);
    }
    const auto pairs = lcs_ids(a, b);
    expect_valid(pairs, a, b);
    ASSERT_EQ(pairs.size(), test_support::lcs_length_dp(a, b));
  }
}

TEST(LcsIds, ExpiredDeadlineThrows) {
  std::mt19937_64 rng(3);
  std::vector<std::uint32_t> a(2000), b(2000);
  for (auto& v : a) v = static_cast<std::uint32_t>(rng() % 100);
  for (auto& v : b) v = static_cast<std::uint32_t>(rng() % 100);
  const Deadline past = Deadline::after(std::chrono::nanoseconds(0));
  EXPECT_THROW(lcs_ids(a, b, past), TimeoutError);
}

TEST(InternLines, EqualIdsIffEqualText) {
  const Log a = make_log({"x", "y", "x", "z"});
  const Log b = make_log({"z", "w", "x"});
  const LineIds ids = intern_lines(a, b);
  EXPECT_EQ(ids.distinct, 4u);
  EXPECT_EQ(ids.ref[0], ids.ref[2]);
  EXPECT_EQ(ids.ref[0], ids.mod[2]);
  EXPECT_EQ(ids.ref[3], ids.mod[0]);
  EXPECT_NE(ids.ref[0], ids.ref[1]);
  EXPECT_NE(ids.mod[1], ids.ref[1]);
}

TEST(InternLines, ComparesStrippedText) {
  const Log a = make_log({"2024-01-01T00:00:00Z same"});
  const Log b = make_log({"2024-06-30T12:34:56Z same"});
  const LineIds ids = intern_lines(a, b);
  EXPECT_EQ(ids.ref[0], ids.mod[0]);
}

TEST(LcsLines, MovedDependencyKeepsLogback) {
  const Log pass = load_log(test_support::fixture("compile-failure/pass.log"));
  const Log fail = load_log(test_support::fixture("compile-failure/fail.log"));
  const LcsPairing lcs = lcs_lines(pass, fail);
  EXPECT_EQ(lcs.pairs, (std::vector<LinePair>{{0, 0}, {1, 1}, {3, 2}, {4, 4}}));
}

TEST(LcsLines, ReorderedGradleKeepsDatafixerupperAndCore) {
  const Log pass = load_log(test_support::fixture("gradle-reorder/pass.log"));
  const Log fail = load_log(test_support::fixture("gradle-reorder/fail.log"));
  const LcsPairing lcs = lcs_lines(pass, fail);
  EXPECT_EQ(lcs.pairs,
            (std::vector<LinePair>{{0, 0}, {3, 2}, {4, 3}, {5, 5}, {7, 7}, {11, 10}, {12, 11}}));
}

TEST(LcsDiff, IdenticalLogsHaveEmptyScript) {
  const Log pass = load_log(test_support::fixture("gradle-reorder/pass.log"));
  const EditScript script = lcs_diff(pass, pass);
  EXPECT_EQ(script.algorithm, "lcs");
  EXPECT_EQ(script_size(script), 0u);
  EXPECT_EQ(script.actions.size(), pass.size());
}

TEST(LcsDiff, CompileFailurePartition) {
  const Log pass = load_log(test_support::fixture("compile-failure/pass.log"));
  const Log fail = load_log(test_support::fixture("compile-failure/fail.log"));
  const EditScript script = lcs_diff(pass, fail);
  EXPECT_EQ(count_kind(script, ActionKind::unchanged), 4u);
  EXPECT_EQ(count_kind(script, ActionKind::added), 6u);
  EXPECT_EQ(count_kind(script, ActionKind::deleted), 4u);
  EXPECT_EQ(script_size(script), 10u);
  EXPECT_NO_THROW(check_coverage(script));
}
