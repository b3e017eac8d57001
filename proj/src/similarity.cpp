#include "cidiff/similarity.hpp"

#include <algorithm>
#include <string>

namespace cidiff {
namespace {

std::vector<std::string_view> trigrams(std::string_view token) {
  std::vector<std::string_view> out;
  if (token.size() < 3) {
    out.push_back(token);
    return out;
  }
  out.reserve(token.size() - 2);
  for (std::size_t i = 0; i + 3 <= token.size(); ++i) out.push_back(token.substr(i, 3));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void SimilarityParams::validate() const {
  if (!in_unit_interval(line_threshold)) {
    throw std::invalid_argument("line threshold must lie in [0, 1], got " +
                                std::to_string(line_threshold));
  }
  if (!in_unit_interval(token_threshold)) {
    throw std::invalid_argument("token threshold must lie in [0, 1], got " +
                                std::to_string(token_threshold));
  }
}

double trigram_similarity(std::string_view a, std::string_view b) {
  const auto ta = trigrams(a);
  const auto tb = trigrams(b);
  std::size_t common = 0;
  auto i = ta.begin();
  auto j = tb.begin();
  while (i != ta.end() && j != tb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t total = ta.size() + tb.size() - common;
  return total == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(total);
}

double token_similarity(std::string_view u, std::string_view v,
                        const SimilarityParams& params) {
  if (u == v) return 1.0;
  if (u.size() == v.size()) return 0.5;
  if (trigram_similarity(u, v) >= params.token_threshold) return 0.5;
  return 0.0;
}

std::vector<double> token_similarities(std::span<const std::string_view> u,
                                       std::span<const std::string_view> v,
                                       const SimilarityParams& params) {
  std::vector<double> out;
  if (u.size() != v.size()) return out;
  out.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out.push_back(token_similarity(u[i], v[i], params));
  return out;
}

double logsim(std::span<const std::string_view> u, std::span<const std::string_view> v,
              const SimilarityParams& params) {
  if (u.size() != v.size() || u.empty()) return 0.0;
  bool has_static_token = false;
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double sim = token_similarity(u[i], v[i], params);
    if (sim == 1.0) has_static_token = true;
    total += sim;
  }
  if (!has_static_token) return 0.0;
  return total / static_cast<double>(u.size());
}

double logsim(const LogLine& s, const LogLine& t, const SimilarityParams& params) {
  if (s.token_count() != t.token_count() || s.token_count() == 0) return 0.0;
  // Early exit before materialising the token views: most candidate pairs
  // in real logs share no token at all.
  bool anchored = false;
  for (std::size_t i = 0; i < s.token_count() && !anchored; ++i) {
    anchored = s.token(i) == t.token(i);
  }
  if (!anchored) return 0.0;
  const auto u = s.tokens();
  const auto v = t.tokens();
  return logsim(u, v, params);
}

}  // namespace cidiff
