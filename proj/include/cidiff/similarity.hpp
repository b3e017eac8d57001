#pragma once

#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "cidiff/log.hpp"

namespace cidiff {

/// Thresholds of the line similarity metric.
struct SimilarityParams {
  double line_threshold = 0.5;   // minimum logsim for two lines to be paired
  double token_threshold = 0.6;  // minimum trigram similarity for tokens of unequal length

  /// Throws std::invalid_argument unless both thresholds lie in [0, 1].
  void validate() const;

  friend bool operator==(const SimilarityParams&, const SimilarityParams&) = default;
};

/// Jaccard index of the distinct length-3 substrings of `a` and `b`. A token
/// shorter than three characters contributes itself as its only trigram.
double trigram_similarity(std::string_view a, std::string_view b);

/// 1 for identical tokens, 0.5 for tokens of equal length or whose trigram
/// similarity reaches the token threshold, 0 otherwise.
double token_similarity(std::string_view u, std::string_view v,
                        const SimilarityParams& params);

/// Per-position token similarities, empty when the token counts differ.
std::vector<double> token_similarities(std::span<const std::string_view> u,
                                       std::span<const std::string_view> v,
                                       const SimilarityParams& params);

/// Similarity of two token sequences: 0 when the counts differ or when no
/// position holds identical tokens, else the mean token similarity.
double logsim(std::span<const std::string_view> u, std::span<const std::string_view> v,
              const SimilarityParams& params);

double logsim(const LogLine& s, const LogLine& t, const SimilarityParams& params);

}  // namespace cidiff
