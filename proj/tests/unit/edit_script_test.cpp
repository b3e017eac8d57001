#include <gtest/gtest.h>

#include <sstream>

#include "cidiff/edit_script.hpp"
#include "cidiff/lcs.hpp"
#include "cidiff/synthetic.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace cidiff;

namespace {

struct Fixture {
  Log pass, fail;
  explicit Fixture(const std::string& name)
      : pass(load_log(test_support::fixture(name + "/pass.log"))),
        fail(load_log(test_support::fixture(name + "/fail.log"))) {}
};

const Action* action_for_mod(const EditScript& s, std::size_t mod) {
  for (const auto& a : s.actions) {
    if (a.mod == mod) return &a;
  }
  return nullptr;
}

}  // namespace

TEST(Cidiff, CompileFailure) {
  const Fixture f("compile-failure");
  const EditScript script = cidiff::cidiff(f.pass, f.fail);
  EXPECT_EQ(script.algorithm, "cidiff");
  EXPECT_EQ(count_kind(script, ActionKind::unchanged), 4u);
  EXPECT_EQ(count_kind(script, ActionKind::updated), 1u);
  EXPECT_EQ(count_kind(script, ActionKind::moved_unchanged), 1u);
  EXPECT_EQ(count_kind(script, ActionKind::moved_updated), 0u);
  EXPECT_EQ(count_kind(script, ActionKind::added), 4u);
  EXPECT_EQ(count_kind(script, ActionKind::deleted), 2u);
  EXPECT_EQ(script_size(script), 8u);
  EXPECT_EQ(added_count(script), 4u);

  const Action* moved = action_for_mod(script, 3);
  ASSERT_NE(moved, nullptr);
  EXPECT_EQ(moved->kind, ActionKind::moved_unchanged);
  EXPECT_EQ(moved->ref, 2u);

  const Action* updated = action_for_mod(script, 5);
  ASSERT_NE(updated, nullptr);
  EXPECT_EQ(updated->kind, ActionKind::updated);
  EXPECT_EQ(updated->ref, 5u);
  EXPECT_EQ(updated->tokens_changed, (std::vector<std::size_t>{3}));

  // The timing lines sit after the unparseable one, which has no anchor
  // token in common with them, so extension never reaches them.
  for (std::size_t mod : {6u, 7u, 8u, 9u}) {
    ASSERT_NE(action_for_mod(script, mod), nullptr);
    EXPECT_EQ(action_for_mod(script, mod)->kind, ActionKind::added) << mod;
  }
}

TEST(Cidiff, GradleReorder) {
  const Fixture f("gradle-reorder");
  const EditScript script = cidiff::cidiff(f.pass, f.fail);
  EXPECT_EQ(count_kind(script, ActionKind::unchanged), 7u);
  EXPECT_EQ(count_kind(script, ActionKind::updated), 3u);
  EXPECT_EQ(count_kind(script, ActionKind::moved_unchanged), 2u);
  EXPECT_EQ(count_kind(script, ActionKind::deleted), 2u);
  EXPECT_EQ(count_kind(script, ActionKind::added), 1u);
  EXPECT_EQ(script_size(script), 8u);
  EXPECT_EQ(action_for_mod(script, 4)->ref, 6u);
  EXPECT_EQ(action_for_mod(script, 6)->ref, 9u);
  EXPECT_EQ(action_for_mod(script, 12)->tokens_changed, (std::vector<std::size_t>{1}));
}

TEST(Cidiff, IdenticalLogs) {
  const Fixture f("gradle-reorder");
  const EditScript script = cidiff::cidiff(f.pass, f.pass);
  EXPECT_EQ(script_size(script), 0u);
}

TEST(Cidiff, EmptyLogs) {
  const Log empty = make_log({});
  const Log some = make_log({"a", "b"});
  EXPECT_EQ(cidiff::cidiff(empty, empty).actions.size(), 0u);
  EXPECT_EQ(count_kind(cidiff::cidiff(empty, some), ActionKind::added), 2u);
  EXPECT_EQ(count_kind(cidiff::cidiff(some, empty), ActionKind::deleted), 2u);
}

TEST(Cidiff, RejectsInvalidThresholds) {
  const Log a = make_log({"a"});
  EXPECT_THROW(cidiff::cidiff(a, a, SimilarityParams{1.5, 0.6}), std::invalid_argument);
}

TEST(Cidiff, StricterLineThresholdPairsFewerLines) {
  const Fixture f("gradle-reorder");
  const EditScript loose = cidiff::cidiff(f.pass, f.fail, SimilarityParams{0.5, 0.6});
  const EditScript strict = cidiff::cidiff(f.pass, f.fail, SimilarityParams{0.95, 0.6});
  EXPECT_LT(count_kind(strict, ActionKind::updated), count_kind(loose, ActionKind::updated));
  EXPECT_GE(script_size(strict), script_size(loose));
}

TEST(EditScriptJson, RoundTrip) {
  const Fixture f("gradle-reorder");
  const EditScript script = cidiff::cidiff(f.pass, f.fail);
  const std::string text = to_json(script);
  const EditScript back = edit_script_from_json(text);
  EXPECT_EQ(back.algorithm, script.algorithm);
  EXPECT_EQ(back.params, script.params);
  EXPECT_EQ(back.reference_source, script.reference_source);
  EXPECT_EQ(back.reference_lines, script.reference_lines);
  EXPECT_EQ(back.modified_lines, script.modified_lines);
  EXPECT_EQ(back.actions, script.actions);
  EXPECT_EQ(to_json(back), text);
}

TEST(EditScriptJson, Shape) {
  const Fixture f("compile-failure");
  const auto doc = nlohmann::json::parse(to_json(cidiff::cidiff(f.pass, f.fail)));
  EXPECT_EQ(doc["reference"]["line_count"], 8);
  EXPECT_EQ(doc["modified"]["line_count"], 10);
  EXPECT_EQ(doc["params"]["line_threshold"], 0.5);
  for (const auto& a : doc["actions"]) {
    const std::string kind = a["kind"];
    EXPECT_EQ(a.contains("tokens_changed"), kind == "updated" || kind == "moved-updated");
    EXPECT_EQ(a["ref"].is_null(), kind == "added");
    EXPECT_EQ(a["mod"].is_null(), kind == "deleted");
  }
}

TEST(EditScriptJson, RejectsMalformedDocuments) {
  const Fixture f("compile-failure");
  const auto good = nlohmann::json::parse(to_json(cidiff::cidiff(f.pass, f.fail)));
  EXPECT_THROW(edit_script_from_json("not json"), std::invalid_argument);
  EXPECT_THROW(edit_script_from_json("{}"), std::invalid_argument);

  auto bad_kind = good;
  bad_kind["actions"][0]["kind"] = "renamed";
  EXPECT_THROW(edit_script_from_json(bad_kind.dump()), std::invalid_argument);

  auto missing = good;
  missing["actions"].erase(0);
  EXPECT_THROW(edit_script_from_json(missing.dump()), std::invalid_argument);

  auto duplicated = good;
  duplicated["actions"].push_back(good["actions"][0]);
  EXPECT_THROW(edit_script_from_json(duplicated.dump()), std::invalid_argument);

  auto out_of_range = good;
  out_of_range["actions"][0]["ref"] = 99;
  EXPECT_THROW(edit_script_from_json(out_of_range.dump()), std::invalid_argument);

  auto added_with_ref = good;
  for (auto& a : added_with_ref["actions"]) {
    if (a["kind"] == "added") {
      a["ref"] = 0;
      break;
    }
  }
  EXPECT_THROW(edit_script_from_json(added_with_ref.dump()), std::invalid_argument);
}

TEST(RenderText, MarkersAndLineNumbers) {
  const Fixture f("compile-failure");
  std::ostringstream out;
  render_text(out, cidiff::cidiff(f.pass, f.fail), f.pass, f.fail);
  const std::string text = out.str();
  EXPECT_NE(text.find("M   3  4  Downloading: com.github.gumtreediff:core:2.1.0\n"), std::string::npos);
  EXPECT_NE(text.find("U   6  6  Compiling package core: failure\n"), std::string::npos);
  EXPECT_NE(text.find("-   7     Total time: 5.170 s\n"), std::string::npos);
  EXPECT_NE(text.find("+     10  Error compiling project\n"), std::string::npos);
  EXPECT_NE(text.find("    1  1  Downloading: com.fasterxml.jackson:core:2.9.0\n"), std::string::npos);
}

TEST(CheckCoverage, DetectsGapsAndRepeats) {
  EditScript s;
  s.reference_lines = 1;
  s.modified_lines = 1;
  s.actions = {{ActionKind::unchanged, 0, 0, {}}};
  EXPECT_NO_THROW(check_coverage(s));
  s.actions.push_back({ActionKind::added, std::nullopt, 0, {}});
  EXPECT_THROW(check_coverage(s), std::invalid_argument);
  s.actions = {{ActionKind::deleted, 0, std::nullopt, {}}};
  EXPECT_THROW(check_coverage(s), std::invalid_argument);
}

TEST(ActionKind, WireNames) {
  for (auto k : {ActionKind::unchanged, ActionKind::updated, ActionKind::added, ActionKind::deleted,
                 ActionKind::moved_unchanged, ActionKind::moved_updated}) {
    EXPECT_EQ(parse_action_kind(to_string(k)), k);
  }
  EXPECT_EQ(to_string(ActionKind::moved_updated), "moved-updated");
  EXPECT_FALSE(parse_action_kind("moved_updated").has_value());
}

TEST(Cidiff, CoverageAndThresholdsOnGeneratedCases) {
  const SimilarityParams params;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const RegressionCase c =
        generate_synthetic_case(seed, 40 + seed * 7, MutationRates{0.03, 0.03, 0.1, 0.03});
    const EditScript script = cidiff::cidiff(c.passing, c.failing, params);
    ASSERT_NO_THROW(check_coverage(script)) << seed;
    for (const auto& a : script.actions) {
      if (!is_paired(a.kind)) continue;
      const LogLine& r = c.passing[*a.ref];
      const LogLine& m = c.failing[*a.mod];
      if (is_update(a.kind)) {
        ASSERT_NE(r.stripped(), m.stripped());
        ASSERT_GE(logsim(r, m, params), params.line_threshold);
        ASSERT_EQ(a.tokens_changed, changed_tokens(r, m));
      } else {
        ASSERT_EQ(r.stripped(), m.stripped());
      }
    }
  }
}
