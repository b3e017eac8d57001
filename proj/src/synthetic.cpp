#include "cidiff/synthetic.hpp"

#include <array>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string_view>

#include "json.hpp"

namespace cidiff {

void MutationRates::validate() const {
  for (double r : {add, remove, update, move}) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("mutation rates must lie in [0, 1]");
  }
}

namespace {

// std distributions are implementation-defined; these draws only depend on
// the raw mt19937_64 output, so a seed gives the same case everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  template <class T, std::size_t N>
  const T& pick(const std::array<T, N>& pool) {
    return pool[below(N)];
  }

 private:
  std::mt19937_64 engine_;
};

enum class Field { pkg, mod, cls, ver, dur, hash, num, pct, mem };

// Identity fields name things and survive an update; the rest are values
// that change from one run to the next.
bool is_value(Field f) { return f != Field::pkg && f != Field::mod && f != Field::cls; }

struct Part {
  std::string literal;
  std::optional<Field> field;
};

std::vector<Part> parse_template(std::string_view text) {
  static constexpr std::array<std::pair<std::string_view, Field>, 9> kNames{{
      {"PKG", Field::pkg}, {"MOD", Field::mod}, {"CLS", Field::cls},
      {"VER", Field::ver}, {"DUR", Field::dur}, {"HASH", Field::hash},
      {"NUM", Field::num}, {"PCT", Field::pct}, {"MEM", Field::mem},
  }};
  std::vector<Part> parts;
  std::string literal;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const std::size_t close = text.find('}', i);
      const std::string_view name = text.substr(i + 1, close - i - 1);
      for (const auto& [n, f] : kNames) {
        if (n == name) {
          if (!literal.empty()) parts.push_back({std::move(literal), std::nullopt});
          literal.clear();
          parts.push_back({{}, f});
        }
      }
      i = close + 1;
    } else {
      literal.push_back(text[i++]);
    }
  }
  if (!literal.empty()) parts.push_back({std::move(literal), std::nullopt});
  return parts;
}

constexpr std::array<std::string_view, 24> kBuildTemplates{
    "Downloading {PKG}-{VER}.jar",
    "Downloaded from central: https://repo.maven.apache.org/maven2/org/{PKG}/{VER}/{PKG}-{VER}.pom "
    "({NUM} kB at {NUM} kB/s)",
    "[INFO] Compiling {NUM} source files to /home/runner/work/{MOD}/target/classes",
    "[INFO] Building {MOD} {VER}",
    "> Task :{MOD}:compileJava",
    "> Task :{MOD}:test UP-TO-DATE",
    "Tests run: {NUM}, Failures: 0, Errors: 0, Skipped: {NUM}, Time elapsed: {DUR} s - in org.{MOD}.{CLS}Test",
    "commit {HASH}",
    "Receiving objects: {PCT}% ({NUM}/{NUM}), done.",
    "npm WARN deprecated {PKG}@{VER}: this library is no longer supported",
    "added {NUM} packages in {DUR}s",
    "Total time: {DUR} s",
    "Final Memory: {MEM}M/{MEM}M",
    "##[group]Run {MOD}/setup-{PKG}@v{NUM}",
    "Cache restored from key: {MOD}-{HASH}",
    "[INFO] BUILD SUCCESS",
    "[INFO] ------------------------------------------------------------------------",
    "Step {NUM}/{NUM} : RUN make -j{NUM}",
    "ok   github.com/{MOD}/{PKG} {DUR}s",
    "Finished in {DUR} seconds (files took {DUR} seconds to load)",
    "{NUM} examples, 0 failures",
    "warning: unused variable `{CLS}` at src/{MOD}.rs:{NUM}",
    "Resolving deltas: {PCT}% ({NUM}/{NUM}), completed with {NUM} local objects.",
    "Post job cleanup.",
};

constexpr std::array<std::string_view, 12> kFailureTemplates{
    "core/{CLS}.java: unable to parse",
    "[ERROR] /home/runner/work/{MOD}/src/main/java/{CLS}.java:[{NUM},{NUM}] cannot find symbol",
    "FAILED: {CLS}Test > test{CLS} ({DUR}s)",
    "error[E0{NUM}]: mismatched types",
    "Error: Process completed with exit code {NUM}.",
    "expected {NUM} but got {NUM} in {CLS}Spec",
    "npm ERR! code ELIFECYCLE",
    "Segmentation fault (core dumped) while running {CLS}",
    "    at org.{MOD}.{CLS}.run({CLS}.java:{NUM})",
    "Could not resolve dependencies for project {MOD}:{PKG}:jar:{VER}",
    "thread 'main' panicked at src/{MOD}.rs:{NUM}",
    "The command '/bin/sh -c make' returned a non-zero code: {NUM}",
};

constexpr std::array<std::string_view, 16> kPackages{
    "guava", "jackson-core", "logback-classic", "scala-library", "commons-io", "junit",
    "slf4j-api", "netty", "gson", "lodash", "react", "serde", "tokio", "rspec", "hamcrest",
    "datafixerupper"};
constexpr std::array<std::string_view, 12> kModules{
    "core", "common", "api", "server", "client", "cli", "web", "model", "utils", "parser",
    "gateway", "storage"};
constexpr std::array<std::string_view, 12> kClasses{
    "Foo", "Parser", "Lexer", "Session", "Router", "Cache", "Scheduler", "Encoder", "Widget",
    "Account", "Ledger", "Index"};

std::string render_field(Field f, Rng& rng) {
  switch (f) {
    case Field::pkg: return std::string(rng.pick(kPackages));
    case Field::mod: return std::string(rng.pick(kModules));
    case Field::cls: return std::string(rng.pick(kClasses));
    case Field::ver:
      return std::to_string(rng.between(0, 40)) + '.' + std::to_string(rng.between(0, 20)) + '.' +
             std::to_string(rng.between(0, 30));
    case Field::dur: {
      const std::uint64_t ms = rng.between(1, 99999);
      std::string frac = std::to_string(ms % 1000);
      frac.insert(0, 3 - frac.size(), '0');
      return std::to_string(ms / 1000) + '.' + frac;
    }
    case Field::hash: {
      static constexpr std::string_view kHex = "0123456789abcdef";
      std::string h;
      for (int i = 0; i < 10; ++i) h.push_back(kHex[rng.below(16)]);
      return h;
    }
    case Field::num: return std::to_string(rng.between(1, 999));
    case Field::pct: return std::to_string(rng.between(0, 100));
    case Field::mem: return std::to_string(rng.between(10, 999));
  }
  return {};
}

struct TemplateLine {
  const std::vector<Part>* parts = nullptr;  // null for a blank line
  std::vector<std::string> values;           // one per field part

  std::string text() const {
    if (!parts) return {};
    std::string out;
    std::size_t v = 0;
    for (const auto& p : *parts) out += p.field ? values[v++] : p.literal;
    return out;
  }
};

TemplateLine instantiate(const std::vector<Part>& parts, Rng& rng) {
  TemplateLine line{&parts, {}};
  for (const auto& p : parts) {
    if (p.field) line.values.push_back(render_field(*p.field, rng));
  }
  return line;
}

// Fresh variable fields; identity fields stay. A few retries make a no-op
// update unlikely without looping forever on tiny value ranges.
TemplateLine update(const TemplateLine& line, Rng& rng) {
  if (!line.parts) return line;
  for (int attempt = 0; attempt < 4; ++attempt) {
    TemplateLine out = line;
    std::size_t v = 0;
    for (const auto& p : *line.parts) {
      if (!p.field) continue;
      if (is_value(*p.field)) out.values[v] = render_field(*p.field, rng);
      ++v;
    }
    if (out.values != line.values) return out;
  }
  return line;
}

const std::vector<std::vector<Part>>& parsed(bool failures) {
  static const auto build = [] {
    std::vector<std::vector<Part>> out;
    for (auto t : kBuildTemplates) out.push_back(parse_template(t));
    return out;
  }();
  static const auto failure = [] {
    std::vector<std::vector<Part>> out;
    for (auto t : kFailureTemplates) out.push_back(parse_template(t));
    return out;
  }();
  return failures ? failure : build;
}

struct Entry {
  std::string text;
  bool annotated = false;
};

}  // namespace

RegressionCase generate_synthetic_case(std::uint64_t seed, std::size_t size,
                                       const MutationRates& rates) {
  if (size == 0) throw std::invalid_argument("synthetic case size must be positive");
  rates.validate();
  Rng rng(seed);
  const auto& build = parsed(false);
  const auto& failure = parsed(true);

  std::vector<TemplateLine> passing;
  passing.reserve(size);
  while (passing.size() < size) {
    if (rng.chance(0.02)) {
      passing.push_back(TemplateLine{});
    } else if (passing.size() > 0 && rng.chance(0.05)) {
      // Build logs repeat themselves: status lines, separators, retries.
      const std::size_t back = std::min<std::size_t>(passing.size(), 50);
      passing.push_back(passing[passing.size() - 1 - rng.below(back)]);
    } else {
      passing.push_back(instantiate(build[rng.below(build.size())], rng));
    }
  }

  std::vector<Entry> failing;
  failing.reserve(size + size / 8);
  for (const auto& line : passing) {
    if (rng.chance(rates.remove)) {
      // dropped
    } else if (rng.chance(rates.update)) {
      failing.push_back({update(line, rng).text(), false});
    } else {
      failing.push_back({line.text(), false});
    }
    if (rng.chance(rates.add)) {
      const std::size_t block = rng.between(1, 3);
      for (std::size_t k = 0; k < block; ++k) {
        failing.push_back({instantiate(failure[rng.below(failure.size())], rng).text(), true});
      }
    }
  }

  for (std::size_t i = 0; i < failing.size();) {
    if (!rng.chance(rates.move)) {
      ++i;
      continue;
    }
    const std::size_t block = rng.between(1, 3);
    const std::size_t distance = rng.between(1, 6);
    if (i + block + distance > failing.size()) break;
    std::rotate(failing.begin() + static_cast<std::ptrdiff_t>(i),
                failing.begin() + static_cast<std::ptrdiff_t>(i + block),
                failing.begin() + static_cast<std::ptrdiff_t>(i + block + distance));
    i += block + distance;
  }

  std::vector<std::string> pass_text, fail_text;
  pass_text.reserve(passing.size());
  for (const auto& line : passing) pass_text.push_back(line.text());
  RegressionCase c;
  c.id = "synthetic-" + std::to_string(seed);
  std::set<std::size_t> annotations;
  fail_text.reserve(failing.size());
  for (const auto& e : failing) {
    if (e.annotated) annotations.insert(fail_text.size());
    fail_text.push_back(e.text);
  }
  c.passing = make_log(pass_text, c.id + "/pass.log");
  c.failing = make_log(fail_text, c.id + "/fail.log");
  c.annotations = std::move(annotations);
  return c;
}

std::string render_log(const Log& log) {
  std::string out;
  for (const auto& line : log.lines()) {
    out += line.raw();
    out += '\n';
  }
  return out;
}

void write_case(const std::filesystem::path& dir, const RegressionCase& c) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << content;
    if (!out) throw IoError("cannot write " + (dir / name).string());
  };
  write("pass.log", render_log(c.passing));
  write("fail.log", render_log(c.failing));
  if (c.annotations) {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t line : *c.annotations) doc.push_back(line);
    write("annotations.json", doc.dump() + "\n");
  }
}

}  // namespace cidiff
