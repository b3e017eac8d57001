#include "cidiff/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "cidiff/baselines.hpp"
#include "cidiff/edit_script.hpp"
#include "cidiff/eval.hpp"
#include "cidiff/lcs.hpp"
#include "cidiff/synthetic.hpp"
#include "json.hpp"

namespace cidiff {

std::optional<std::chrono::milliseconds> parse_duration(std::string_view text) {
  const std::string owned(text);
  char* end = nullptr;
  const double value = std::strtod(owned.c_str(), &end);
  if (end == owned.c_str() || !(value >= 0.0) || value > 1e9) return std::nullopt;
  const std::string_view unit(end);
  double ms = 0.0;
  if (unit.empty() || unit == "s") ms = value * 1000.0;
  else if (unit == "ms") ms = value;
  else if (unit == "m" || unit == "min") ms = value * 60'000.0;
  else if (unit == "h") ms = value * 3'600'000.0;
  else return std::nullopt;
  return std::chrono::milliseconds(static_cast<long long>(ms + 0.5));
}

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct TimeoutValidator : CLI::Validator {
  TimeoutValidator() {
    name_ = "DURATION";
    func_ = [](const std::string& s) -> std::string {
      return parse_duration(s) ? std::string{} : "invalid duration '" + s + "'";
    };
  }
};

struct DiffConfig {
  std::string passing, failing;
  std::string algorithm = "cidiff";
  SimilarityParams params;
  std::string format = "text";
  std::string timeout;
  std::string keywords;
  bool keep_timestamps = false;
  std::string timestamp_regex;
};

LoadOptions load_options(bool keep_timestamps, const std::string& pattern) {
  LoadOptions opts;
  opts.strip_timestamps = !keep_timestamps;
  if (!pattern.empty()) opts.timestamp_pattern = std::regex(pattern);
  return opts;
}

void render_flagged(std::ostream& out, const FlaggedLines& flagged, const Log& failing,
                    const std::string& format) {
  if (format == "json") {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t i : flagged) doc.push_back(i);
    out << doc.dump() << '\n';
    return;
  }
  for (std::size_t i : flagged) out << "+ " << (i + 1) << ' ' << failing[i].raw() << '\n';
}

int cmd_diff(const DiffConfig& cfg, std::ostream& out, std::ostream& err) {
  LoadOptions opts;
  try {
    opts = load_options(cfg.keep_timestamps, cfg.timestamp_regex);
  } catch (const std::regex_error& e) {
    err << "error: invalid --timestamp-regex: " << e.what() << '\n';
    return kExitUsage;
  }
  std::vector<std::string> keywords = default_keywords();
  if (!cfg.keywords.empty()) keywords = split_commas(cfg.keywords);
  if (keywords.empty()) {
    err << "error: --keywords is empty\n";
    return kExitUsage;
  }
  Log passing, failing;
  try {
    passing = load_log(cfg.passing, opts);
    failing = load_log(cfg.failing, opts);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  Deadline deadline;
  if (!cfg.timeout.empty()) deadline = Deadline::after(*parse_duration(cfg.timeout));
  try {
    if (cfg.algorithm == "keyword") {
      render_flagged(out, keyword_search(failing, keywords), failing, cfg.format);
    } else if (cfg.algorithm == "bigram") {
      render_flagged(out, bigram_diff(passing, failing), failing, cfg.format);
    } else {
      EditScript script = cfg.algorithm == "lcs" ? lcs_diff(passing, failing, deadline)
                                                 : cidiff(passing, failing, cfg.params, deadline);
      if (deadline.expired()) throw TimeoutError{};
      if (cfg.format == "json") out << to_json(script) << '\n';
      else render_text(out, script, passing, failing);
    }
  } catch (const TimeoutError&) {
    err << "error: timed out after " << cfg.timeout << '\n';
    return kExitTimeout;
  }
  return kExitOk;
}

struct EvalConfig {
  std::string corpus;
  std::string output;
  std::string algorithms = "cidiff,lcs,bigram,keyword";
  SimilarityParams params;
  std::string timeout = "10m";
  std::string keywords;
  unsigned jobs = 1;
  bool keep_timestamps = false;
};

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string median_of(std::vector<double> values) {
  auto d = summarize(std::move(values));
  return d ? fixed(d->median) : std::string("n/a");
}

void print_summary(std::ostream& out, const std::vector<CaseMetrics>& metrics,
                   const std::vector<Algorithm>& algorithms) {
  out << "cases: " << metrics.size() << '\n';
  for (const auto& algo : algorithms) {
    std::vector<double> size, runtime, precision, recall;
    std::size_t timeouts = 0, errors = 0;
    for (const auto& c : metrics) {
      const AlgorithmMetrics* m = c.find(algo.name);
      if (!m) continue;
      if (m->timed_out) ++timeouts;
      if (m->error) ++errors;
      if (m->timed_out || m->error) continue;
      if (m->script_size) size.push_back(static_cast<double>(*m->script_size));
      runtime.push_back(m->runtime_ms);
      if (m->precision) precision.push_back(*m->precision);
      if (m->recall) recall.push_back(*m->recall);
    }
    out << algo.name << ": median size " << median_of(size) << ", median runtime "
        << median_of(runtime) << " ms, median precision " << median_of(precision)
        << ", median recall " << median_of(recall) << ", timeouts " << timeouts;
    if (errors) out << ", errors " << errors;
    out << '\n';
  }
  std::vector<double> p_size, p_added;
  for (const auto& c : metrics) {
    if (c.p_size) p_size.push_back(*c.p_size);
    if (c.p_added) p_added.push_back(*c.p_added);
  }
  if (!p_size.empty()) {
    out << "median p_size " << median_of(p_size) << "%, median p_added " << median_of(p_added)
        << "%\n";
  }
}

bool open_output(const std::string& path, std::ofstream& file, std::ostream& err) {
  file.open(path, std::ios::binary);
  if (!file) err << "error: cannot write " << path << '\n';
  return static_cast<bool>(file);
}

Corpus load_or_report(const std::string& root, const LoadOptions& opts, std::ostream& err) {
  Corpus corpus = load_corpus(root, opts);
  for (const auto& e : corpus.errors) err << "warning: " << e << '\n';
  return corpus;
}

int cmd_eval(const EvalConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> keywords = default_keywords();
  if (!cfg.keywords.empty()) keywords = split_commas(cfg.keywords);
  std::vector<Algorithm> algorithms;
  try {
    for (const auto& name : split_commas(cfg.algorithms)) {
      algorithms.push_back(builtin_algorithm(name, keywords));
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (algorithms.empty()) {
    err << "error: no algorithms selected\n";
    return kExitUsage;
  }
  Corpus corpus;
  try {
    corpus = load_or_report(cfg.corpus, load_options(cfg.keep_timestamps, {}), err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  RunOptions options;
  options.params = cfg.params;
  options.timeout = *parse_duration(cfg.timeout);
  const auto metrics = run_corpus(corpus.cases, algorithms, options, cfg.jobs);
  std::ofstream file;
  if (!open_output(cfg.output, file, err)) return kExitIo;
  write_metrics_csv(file, metrics);
  if (!file) {
    err << "error: cannot write " << cfg.output << '\n';
    return kExitIo;
  }
  print_summary(out, metrics, algorithms);
  return kExitOk;
}

struct GenConfig {
  std::string root;
  std::uint64_t seed = 1;
  std::size_t count = 10;
  std::size_t size = 1000;
  MutationRates rates{0.01, 0.01, 0.05, 0.005};
};

int cmd_gen(const GenConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.rates.validate();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    std::error_code ec;
    std::filesystem::create_directories(cfg.root, ec);
    if (!std::filesystem::is_directory(cfg.root)) throw IoError("cannot create " + cfg.root);
    for (std::size_t k = 0; k < cfg.count; ++k) {
      const RegressionCase c = generate_synthetic_case(cfg.seed + k, cfg.size, cfg.rates);
      write_case(std::filesystem::path(cfg.root) / c.id, c);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  out << "wrote " << cfg.count << " cases to " << cfg.root << '\n';
  return kExitOk;
}

struct SweepConfig {
  std::string corpus;
  std::string output;
  double step = 0.1;
  unsigned jobs = 1;
  bool keep_timestamps = false;
};

int cmd_sweep(const SweepConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    threshold_grid(cfg.step);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  Corpus corpus;
  try {
    corpus = load_or_report(cfg.corpus, load_options(cfg.keep_timestamps, {}), err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  const bool annotated = std::any_of(corpus.cases.begin(), corpus.cases.end(),
                                     [](const RegressionCase& c) { return c.annotations.has_value(); });
  if (!annotated) {
    err << "error: no case in " << cfg.corpus << " has annotations\n";
    return kExitIo;
  }
  const auto cells = sweep_thresholds(corpus.cases, cfg.step, cfg.jobs);
  std::ofstream file;
  if (!open_output(cfg.output, file, err)) return kExitIo;
  write_sweep_csv(file, cells);
  out << "wrote " << cells.size() << " cells to " << cfg.output << '\n';
  return kExitOk;
}

void add_threshold_options(CLI::App* cmd, SimilarityParams& params) {
  cmd->add_option("--line-sim", params.line_threshold, "line similarity threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--token-sim", params.token_threshold, "token similarity threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differencing of CI build logs", "cidiff"};
  app.require_subcommand(1);

  DiffConfig diff;
  auto* diff_cmd = app.add_subcommand("diff", "compare a passing and a failing log");
  diff_cmd->add_option("passing", diff.passing, "passing (reference) log")->required();
  diff_cmd->add_option("failing", diff.failing, "failing (modified) log")->required();
  diff_cmd->add_option("--algorithm", diff.algorithm, "cidiff, lcs, bigram or keyword")
      ->check(CLI::IsMember(builtin_algorithm_names()))
      ->capture_default_str();
  add_threshold_options(diff_cmd, diff.params);
  diff_cmd->add_option("--format", diff.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  diff_cmd->add_option("--timeout", diff.timeout, "time budget, e.g. 500ms, 30s, 10m")
      ->check(TimeoutValidator());
  diff_cmd->add_option("--keywords", diff.keywords, "comma-separated keywords for keyword search");
  diff_cmd->add_flag("--keep-timestamps", diff.keep_timestamps, "do not strip leading timestamps");
  diff_cmd->add_option("--timestamp-regex", diff.timestamp_regex,
                       "prefix pattern to strip instead of ISO-8601 timestamps");

  EvalConfig eval;
  auto* eval_cmd = app.add_subcommand("eval", "run algorithms over a corpus");
  eval_cmd->add_option("corpus", eval.corpus, "corpus root")->required();
  eval_cmd->add_option("-o,--output", eval.output, "metrics CSV path")->required();
  eval_cmd->add_option("--algorithms", eval.algorithms, "comma-separated algorithms")
      ->capture_default_str();
  add_threshold_options(eval_cmd, eval.params);
  eval_cmd->add_option("--timeout", eval.timeout, "per-run time budget")
      ->check(TimeoutValidator())
      ->capture_default_str();
  eval_cmd->add_option("--keywords", eval.keywords, "comma-separated keywords");
  eval_cmd->add_option("-j,--jobs", eval.jobs, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_flag("--keep-timestamps", eval.keep_timestamps, "do not strip leading timestamps");

  GenConfig gen;
  auto* gen_cmd = app.add_subcommand("gen", "write a synthetic corpus");
  gen_cmd->add_option("root", gen.root, "output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "seed of the first case")->capture_default_str();
  gen_cmd->add_option("--count", gen.count, "number of cases")->capture_default_str();
  gen_cmd->add_option("--size", gen.size, "passing log length")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--add-rate", gen.rates.add)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen_cmd->add_option("--remove-rate", gen.rates.remove)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_cmd->add_option("--update-rate", gen.rates.update)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen_cmd->add_option("--move-rate", gen.rates.move)->check(CLI::Range(0.0, 1.0))->capture_default_str();

  SweepConfig sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "tune thresholds on an annotated corpus");
  sweep_cmd->add_option("corpus", sweep.corpus, "corpus root")->required();
  sweep_cmd->add_option("-o,--output", sweep.output, "grid CSV path")->required();
  sweep_cmd->add_option("--step", sweep.step, "grid increment")->capture_default_str();
  sweep_cmd->add_option("-j,--jobs", sweep.jobs, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_flag("--keep-timestamps", sweep.keep_timestamps, "do not strip leading timestamps");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (diff_cmd->parsed()) return cmd_diff(diff, out, err);
  if (eval_cmd->parsed()) return cmd_eval(eval, out, err);
  if (gen_cmd->parsed()) return cmd_gen(gen, out, err);
  return cmd_sweep(sweep, out, err);
}

}  // namespace cidiff
