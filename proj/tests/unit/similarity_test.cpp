#include <gtest/gtest.h>

#include <random>
#include <set>

#include "cidiff/log.hpp"
#include "cidiff/similarity.hpp"

using namespace cidiff;

namespace {

double jaccard_oracle(const std::string& a, const std::string& b) {
  auto grams = [](const std::string& s) {
    std::set<std::string> out;
    if (s.size() < 3) {
      out.insert(s);
    } else {
      for (std::size_t i = 0; i + 3 <= s.size(); ++i) out.insert(s.substr(i, 3));
    }
    return out;
  };
  const auto ga = grams(a), gb = grams(b);
  std::size_t common = 0;
  for (const auto& g : ga) common += gb.count(g);
  const std::size_t all = ga.size() + gb.size() - common;
  return all == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(all);
}

double logsim_text(const std::string& a, const std::string& b, SimilarityParams p = {}) {
  LoadOptions keep;
  keep.strip_timestamps = false;
  return logsim(LogLine(0, a, keep), LogLine(1, b, keep), p);
}

}  // namespace

TEST(Logsim, WorkedExample) {
  const std::string s = "2023-11-22 Build error, took 2.6 seconds";
  const std::string t = "2023-11-23 Build success, took 3.4 seconds";
  const auto u = tokenize(s), v = tokenize(t);
  const auto sims = token_similarities(u, v, SimilarityParams{});
  EXPECT_EQ(sims, (std::vector<double>{0.5, 1.0, 0.0, 1.0, 0.5, 1.0}));
  EXPECT_NEAR(logsim(u, v, SimilarityParams{}), 4.0 / 6.0, 1e-9);
  EXPECT_NEAR(logsim_text(s, t), 4.0 / 6.0, 1e-9);
}

TEST(Logsim, DifferentTokenCountsGiveZero) {
  EXPECT_EQ(logsim_text("Total time: 5 s", "Total time: 5"), 0.0);
  EXPECT_TRUE(token_similarities(tokenize("a b"), tokenize("a"), SimilarityParams{}).empty());
}

TEST(Logsim, NoIdenticalTokenGivesZero) {
  // Every position is similar by length, none identical.
  EXPECT_EQ(logsim_text("abc def", "xyz uvw"), 0.0);
  EXPECT_EQ(logsim_text("", ""), 0.0);
}

TEST(Logsim, IdenticalLinesScoreOne) {
  EXPECT_EQ(logsim_text("Tests SUCCESS", "Tests SUCCESS"), 1.0);
}

TEST(Logsim, UpdatedValuesFromCompileFailure) {
  EXPECT_NEAR(logsim_text("Total time: 5.170 s", "Total time: 5.361 s"), 0.875, 1e-12);
  EXPECT_NEAR(logsim_text("Final Memory: 19M/176M", "Final Memory: 19M/179M"), 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(logsim_text("Compiling package core: success", "Compiling package core: failure"),
              0.875, 1e-12);
}

TEST(TrigramSimilarity, MatchesSetOracle) {
  const std::vector<std::string> samples{"a",          "ab",          "abc",        "abcd",
                                         "bcde",       "guava-31.0",  "guava-32.0", "19M/176M",
                                         "19M/179M",   "aaaa",        "aaa",        "xyz",
                                         "5.170",      "5.361",       "error,",     "success,"};
  for (const auto& a : samples) {
    for (const auto& b : samples) {
      EXPECT_DOUBLE_EQ(trigram_similarity(a, b), jaccard_oracle(a, b)) << a << " / " << b;
    }
  }
}

TEST(TrigramSimilarity, RandomTokensMatchOracle) {
  std::mt19937_64 rng(7);
  auto word = [&] {
    std::string w(1 + rng() % 9, 'a');
    for (auto& c : w) c = static_cast<char>('a' + rng() % 3);
    return w;
  };
  for (int i = 0; i < 2000; ++i) {
    const std::string a = word(), b = word();
    ASSERT_DOUBLE_EQ(trigram_similarity(a, b), jaccard_oracle(a, b)) << a << " / " << b;
  }
}

TEST(TokenSimilarity, Rules) {
  const SimilarityParams p;
  EXPECT_EQ(token_similarity("took", "took", p), 1.0);
  EXPECT_EQ(token_similarity("2.6", "3.4", p), 0.5);
  EXPECT_EQ(token_similarity("error,", "success,", p), 0.0);
  // unequal length, trigram similarity 4/5
  EXPECT_EQ(token_similarity("abcdefg", "abcdef", p), 0.5);
  SimilarityParams strict;
  strict.token_threshold = 0.9;
  EXPECT_EQ(token_similarity("abcdefg", "abcdef", strict), 0.0);
}

TEST(TokenSimilarity, ShortVersionBumpIsNotSimilar) {
  EXPECT_DOUBLE_EQ(trigram_similarity("1.2", "1.2.1"), 1.0 / 3.0);
  EXPECT_EQ(token_similarity("1.2", "1.2.1", SimilarityParams{}), 0.0);
}

TEST(SimilarityParams, Validate) {
  EXPECT_NO_THROW(SimilarityParams{}.validate());
  EXPECT_NO_THROW((SimilarityParams{0.0, 1.0}.validate()));
  EXPECT_THROW((SimilarityParams{1.1, 0.6}.validate()), std::invalid_argument);
  EXPECT_THROW((SimilarityParams{0.5, -0.1}.validate()), std::invalid_argument);
}

TEST(Logsim, PropertiesOnRandomLines) {
  std::mt19937_64 rng(11);
  const std::vector<std::string> vocab{"Build", "took", "1.2", "3.4", "error", "ok", "a", "bb"};
  auto line = [&] {
    std::string s;
    const std::size_t n = 1 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) s += (i ? " " : "") + vocab[rng() % vocab.size()];
    return s;
  };
  for (int i = 0; i < 3000; ++i) {
    const std::string a = line(), b = line();
    const double ab = logsim_text(a, b);
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, 1.0);
    ASSERT_EQ(ab, logsim_text(b, a));
    ASSERT_EQ(logsim_text(a, a), 1.0);
  }
}
