#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cidiff/action.hpp"
#include "cidiff/baselines.hpp"
#include "cidiff/deadline.hpp"
#include "cidiff/log.hpp"
#include "cidiff/similarity.hpp"

namespace cidiff {

/// A passing log followed by a failing one, with optional ground truth:
/// failing-log lines judged relevant to the failure.
struct RegressionCase {
  std::string id;
  Log passing;
  Log failing;
  std::optional<std::set<std::size_t>> annotations;
};

/// 100 * (m_cidiff - m_lcs) / (m_lcs + 1).
double percentage_difference(std::size_t m_cidiff, std::size_t m_lcs);

struct PrecisionRecall {
  double precision = 1.0;         // 1.0 for an empty output
  std::optional<double> recall;   // missing for an empty annotation set
};

PrecisionRecall precision_recall(const FlaggedLines& output,
                                 const std::set<std::size_t>& annotated);

/// What an algorithm produced for one case. Differencing algorithms fill
/// `script`; `flagged` is always the output used for precision/recall.
struct AlgorithmOutput {
  std::optional<EditScript> script;
  FlaggedLines flagged;
};

using AlgorithmFn = std::function<AlgorithmOutput(const Log& passing, const Log& failing,
                                                  const SimilarityParams& params,
                                                  const Deadline& deadline)>;

struct Algorithm {
  std::string name;
  AlgorithmFn run;
};

/// "cidiff", "lcs", "bigram" or "keyword". Throws std::invalid_argument for
/// any other name.
Algorithm builtin_algorithm(std::string_view name,
                            std::vector<std::string> keywords = default_keywords());

const std::vector<std::string>& builtin_algorithm_names();

struct AlgorithmMetrics {
  std::string algorithm;
  std::optional<std::size_t> script_size;
  std::optional<std::size_t> added_count;
  double runtime_ms = 0.0;  // -1.0 when timed out
  bool timed_out = false;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<std::string> error;
};

struct CaseMetrics {
  std::string id;
  std::vector<AlgorithmMetrics> algorithms;
  // CiDiff versus LCS-diff; set only when both ran to completion.
  std::optional<double> p_size;
  std::optional<double> p_added;

  const AlgorithmMetrics* find(std::string_view algorithm) const;
};

struct RunOptions {
  SimilarityParams params;
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};
  // Runs slower than this are measured once, faster ones three times.
  std::chrono::milliseconds repeat_below{std::chrono::minutes(1)};
};

/// Runs every algorithm on the case and records sizes, runtimes (median of
/// three when the first run is under `repeat_below`) and accuracy. A run past
/// the timeout marks the algorithm timed out with runtime -1.0. Failures are
/// recorded in the metrics, never thrown.
CaseMetrics run_case(const RegressionCase& c, const std::vector<Algorithm>& algorithms,
                     const RunOptions& options);

/// run_case over a corpus with up to `jobs` worker threads; results sorted by
/// case id.
std::vector<CaseMetrics> run_corpus(const std::vector<RegressionCase>& corpus,
                                    const std::vector<Algorithm>& algorithms,
                                    const RunOptions& options, unsigned jobs = 1);

/// Header: case_id,algorithm,script_size,added_count,runtime_ms,timed_out,
/// p_size,p_added,precision,recall. Missing values are empty, floats carry
/// six decimals; the percentage differences sit on the cidiff row.
void write_metrics_csv(std::ostream& out, const std::vector<CaseMetrics>& metrics);

struct Distribution {
  std::size_t count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Quartiles by linear interpolation between order statistics; nullopt for
/// an empty sample.
std::optional<Distribution> summarize(std::vector<double> values);

/// 0, step, 2 * step, ..., 1. Throws std::invalid_argument unless 1 / step
/// is a positive integer.
std::vector<double> threshold_grid(double step);

struct SweepCell {
  double line_threshold = 0.0;
  double token_threshold = 0.0;
  std::size_t cases = 0;
  std::optional<Distribution> precision;
  std::optional<Distribution> recall;
};

/// CiDiff precision/recall over every (line, token) threshold pair of the
/// grid, using only annotated cases. Cells are ordered by line threshold,
/// then token threshold.
std::vector<SweepCell> sweep_thresholds(const std::vector<RegressionCase>& corpus,
                                        double grid_step, unsigned jobs = 1);

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

struct Corpus {
  std::vector<RegressionCase> cases;
  std::vector<std::string> errors;  // one message per skipped directory
};

/// One case per subdirectory holding pass.log and fail.log, with optional
/// annotations.json (array of 0-based failing-log indices). Malformed cases
/// are skipped and reported. Throws IoError if `root` is not a directory.
Corpus load_corpus(const std::filesystem::path& root, const LoadOptions& options = {});

}  // namespace cidiff
