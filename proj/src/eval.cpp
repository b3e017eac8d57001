#include "cidiff/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cidiff/edit_script.hpp"
#include "cidiff/lcs.hpp"
#include "cidiff/seed.hpp"
#include "json.hpp"

namespace cidiff {

double percentage_difference(std::size_t m_cidiff, std::size_t m_lcs) {
  return 100.0 * (static_cast<double>(m_cidiff) - static_cast<double>(m_lcs)) /
         (static_cast<double>(m_lcs) + 1.0);
}

PrecisionRecall precision_recall(const FlaggedLines& output, const std::set<std::size_t>& annotated) {
  std::size_t hits = 0;
  for (std::size_t line : output) hits += annotated.count(line);
  PrecisionRecall pr;
  pr.precision = output.empty() ? 1.0 : static_cast<double>(hits) / static_cast<double>(output.size());
  if (!annotated.empty()) pr.recall = static_cast<double>(hits) / static_cast<double>(annotated.size());
  return pr;
}

const std::vector<std::string>& builtin_algorithm_names() {
  static const std::vector<std::string> names{"cidiff", "lcs", "bigram", "keyword"};
  return names;
}

Algorithm builtin_algorithm(std::string_view name, std::vector<std::string> keywords) {
  if (name == "cidiff") {
    return {"cidiff", [](const Log& p, const Log& f, const SimilarityParams& params, const Deadline& d) {
              AlgorithmOutput out;
              out.script = cidiff(p, f, params, d);
              out.flagged = diff_output_lines(*out.script);
              return out;
            }};
  }
  if (name == "lcs") {
    return {"lcs", [](const Log& p, const Log& f, const SimilarityParams&, const Deadline& d) {
              AlgorithmOutput out;
              out.script = lcs_diff(p, f, d);
              out.flagged = diff_output_lines(*out.script);
              return out;
            }};
  }
  if (name == "bigram") {
    return {"bigram", [](const Log& p, const Log& f, const SimilarityParams&, const Deadline&) {
              return AlgorithmOutput{std::nullopt, bigram_diff(p, f)};
            }};
  }
  if (name == "keyword") {
    if (keywords.empty()) throw std::invalid_argument("keyword list is empty");
    return {"keyword", [keywords = std::move(keywords)](const Log&, const Log& f,
                                                        const SimilarityParams&, const Deadline&) {
              return AlgorithmOutput{std::nullopt, keyword_search(f, keywords)};
            }};
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

const AlgorithmMetrics* CaseMetrics::find(std::string_view algorithm) const {
  for (const auto& m : algorithms) {
    if (m.algorithm == algorithm) return &m;
  }
  return nullptr;
}

namespace {

using Millis = std::chrono::duration<double, std::milli>;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

AlgorithmMetrics measure(const Algorithm& algorithm, const RegressionCase& c,
                         const RunOptions& options) {
  AlgorithmMetrics metrics;
  metrics.algorithm = algorithm.name;
  const double timeout_ms = Millis(options.timeout).count();
  std::optional<AlgorithmOutput> first;
  std::vector<double> times;

  auto run_once = [&] {
    const Deadline deadline = Deadline::after(options.timeout);
    const auto start = Deadline::Clock::now();
    AlgorithmOutput out = algorithm.run(c.passing, c.failing, options.params, deadline);
    const double ms = Millis(Deadline::Clock::now() - start).count();
    if (ms > timeout_ms) throw TimeoutError{};
    times.push_back(ms);
    if (!first) first = std::move(out);
  };

  try {
    run_once();
    if (times.front() < Millis(options.repeat_below).count()) {
      run_once();
      run_once();
    }
  } catch (const TimeoutError&) {
    metrics.timed_out = true;
    metrics.runtime_ms = -1.0;
    return metrics;
  } catch (const std::exception& e) {
    metrics.error = e.what();
    metrics.runtime_ms = -1.0;
    return metrics;
  }

  metrics.runtime_ms = median_of(times);
  if (first->script) {
    metrics.script_size = script_size(*first->script);
    metrics.added_count = added_count(*first->script);
  }
  if (c.annotations) {
    const PrecisionRecall pr = precision_recall(first->flagged, *c.annotations);
    metrics.precision = pr.precision;
    metrics.recall = pr.recall;
  }
  return metrics;
}

std::string format_double(std::optional<double> v) {
  if (!v) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", *v);
  return buf;
}

std::string format_count(std::optional<std::size_t> v) {
  return v ? std::to_string(*v) : std::string{};
}

template <class F>
void parallel_for(std::size_t count, unsigned jobs, F&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

}  // namespace

CaseMetrics run_case(const RegressionCase& c, const std::vector<Algorithm>& algorithms,
                     const RunOptions& options) {
  CaseMetrics metrics;
  metrics.id = c.id;
  for (const auto& algorithm : algorithms) metrics.algorithms.push_back(measure(algorithm, c, options));

  const AlgorithmMetrics* ci = metrics.find("cidiff");
  const AlgorithmMetrics* lcs = metrics.find("lcs");
  if (ci && lcs && ci->script_size && lcs->script_size) {
    metrics.p_size = percentage_difference(*ci->script_size, *lcs->script_size);
    metrics.p_added = percentage_difference(*ci->added_count, *lcs->added_count);
  }
  return metrics;
}

std::vector<CaseMetrics> run_corpus(const std::vector<RegressionCase>& corpus,
                                    const std::vector<Algorithm>& algorithms,
                                    const RunOptions& options, unsigned jobs) {
  std::vector<CaseMetrics> out(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) { out[i] = run_case(corpus[i], algorithms, options); });
  std::sort(out.begin(), out.end(), [](const CaseMetrics& a, const CaseMetrics& b) { return a.id < b.id; });
  return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<CaseMetrics>& metrics) {
  out << "case_id,algorithm,script_size,added_count,runtime_ms,timed_out,p_size,p_added,precision,recall\n";
  for (const auto& c : metrics) {
    for (const auto& m : c.algorithms) {
      const bool carries_p = m.algorithm == "cidiff";
      out << c.id << ',' << m.algorithm << ',' << format_count(m.script_size) << ','
          << format_count(m.added_count) << ','
          << (m.error ? std::string{} : format_double(m.runtime_ms)) << ','
          << (m.timed_out ? "true" : "false") << ','
          << (carries_p ? format_double(c.p_size) : std::string{}) << ','
          << (carries_p ? format_double(c.p_added) : std::string{}) << ','
          << format_double(m.precision) << ',' << format_double(m.recall) << '\n';
    }
  }
}

std::optional<Distribution> summarize(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return Distribution{values.size(), quantile(0.25), quantile(0.5), quantile(0.75)};
}

std::vector<double> threshold_grid(double step) {
  if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("grid step must lie in (0, 1]");
  const double steps = 1.0 / step;
  const long n = std::lround(steps);
  if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9) {
    throw std::invalid_argument("grid step must divide 1 evenly");
  }
  std::vector<double> grid;
  for (long i = 0; i <= n; ++i) grid.push_back(static_cast<double>(i) / static_cast<double>(n));
  return grid;
}

std::vector<SweepCell> sweep_thresholds(const std::vector<RegressionCase>& corpus,
                                        double grid_step, unsigned jobs) {
  const std::vector<double> grid = threshold_grid(grid_step);
  const std::size_t cells = grid.size() * grid.size();

  std::vector<const RegressionCase*> annotated;
  for (const auto& c : corpus) {
    if (c.annotations) annotated.push_back(&c);
  }

  // results[case][cell]; the LCS and line interning are shared by all cells.
  std::vector<std::vector<PrecisionRecall>> results(annotated.size());
  parallel_for(annotated.size(), jobs, [&](std::size_t ci) {
    const RegressionCase& c = *annotated[ci];
    const LineIds ids = intern_lines(c.passing, c.failing);
    const LcsPairing lcs{lcs_ids(ids.ref, ids.mod)};
    auto& row = results[ci];
    row.reserve(cells);
    for (double ls : grid) {
      for (double ts : grid) {
        const SimilarityParams params{ls, ts};
        const MatchResult m = match(c.passing, c.failing, ids, lcs, params);
        const EditScript script = build_script(c.passing, c.failing, m.initial, m.additional, params);
        row.push_back(precision_recall(diff_output_lines(script), *c.annotations));
      }
    }
  });

  std::vector<SweepCell> out;
  out.reserve(cells);
  for (std::size_t li = 0; li < grid.size(); ++li) {
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
      const std::size_t cell = li * grid.size() + ti;
      std::vector<double> precision, recall;
      for (const auto& row : results) {
        precision.push_back(row[cell].precision);
        if (row[cell].recall) recall.push_back(*row[cell].recall);
      }
      out.push_back(SweepCell{grid[li], grid[ti], annotated.size(), summarize(std::move(precision)),
                              summarize(std::move(recall))});
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
  out << "line_threshold,token_threshold,cases,precision_q1,precision_median,precision_q3,"
         "recall_q1,recall_median,recall_q3\n";
  auto dist = [](const std::optional<Distribution>& d) {
    if (!d) return std::string(",,");
    return format_double(d->q1) + ',' + format_double(d->median) + ',' + format_double(d->q3);
  };
  for (const auto& c : cells) {
    out << format_double(c.line_threshold) << ',' << format_double(c.token_threshold) << ','
        << c.cases << ',' << dist(c.precision) << ',' << dist(c.recall) << '\n';
  }
}

namespace {

std::set<std::size_t> read_annotations(const std::filesystem::path& path, std::size_t failing_lines) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path.string() + ": malformed JSON: " + e.what());
  }
  if (!doc.is_array()) throw IoError(path.string() + ": expected a JSON array of line indices");
  std::set<std::size_t> out;
  for (const auto& v : doc) {
    if (!v.is_number_unsigned()) throw IoError(path.string() + ": line indices must be non-negative integers");
    const auto line = v.get<std::size_t>();
    if (line >= failing_lines) {
      throw IoError(path.string() + ": line " + std::to_string(line) + " is outside the failing log");
    }
    out.insert(line);
  }
  return out;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& root, const LoadOptions& options) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IoError("corpus root " + root.string() + " is not a directory");

  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());

  Corpus corpus;
  for (const auto& dir : dirs) {
    const fs::path pass = dir / "pass.log";
    const fs::path fail = dir / "fail.log";
    const fs::path notes = dir / "annotations.json";
    if (!fs::is_regular_file(pass) || !fs::is_regular_file(fail)) {
      corpus.errors.push_back(dir.string() + ": missing pass.log or fail.log");
      continue;
    }
    try {
      RegressionCase c;
      c.id = dir.filename().string();
      c.passing = load_log(pass, options);
      c.failing = load_log(fail, options);
      if (fs::exists(notes)) c.annotations = read_annotations(notes, c.failing.size());
      corpus.cases.push_back(std::move(c));
    } catch (const std::exception& e) {
      corpus.errors.push_back(dir.string() + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace cidiff
