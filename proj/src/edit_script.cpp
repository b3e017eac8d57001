#include "cidiff/edit_script.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace cidiff {
namespace {

constexpr std::array<std::pair<ActionKind, std::string_view>, 6> kKindNames{{
    {ActionKind::unchanged, "unchanged"},
    {ActionKind::updated, "updated"},
    {ActionKind::added, "added"},
    {ActionKind::deleted, "deleted"},
    {ActionKind::moved_unchanged, "moved-unchanged"},
    {ActionKind::moved_updated, "moved-updated"},
}};

std::string_view marker(ActionKind kind) {
  switch (kind) {
    case ActionKind::unchanged: return " ";
    case ActionKind::updated: return "U";
    case ActionKind::added: return "+";
    case ActionKind::deleted: return "-";
    case ActionKind::moved_unchanged: return "M";
    case ActionKind::moved_updated: return "MU";
  }
  return "?";
}

}  // namespace

std::string_view to_string(ActionKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ActionKind> parse_action_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::vector<Action> assemble_actions(std::size_t reference_lines, std::size_t modified_lines,
                                     std::vector<PairedLine> pairs) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pair_of_mod(modified_lines, kNone);
  std::vector<std::size_t> pair_of_ref(reference_lines, kNone);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    pair_of_mod[pairs[p].mod] = p;
    pair_of_ref[pairs[p].ref] = p;
  }

  // Deleted lines hang off the closest preceding non-moved pair, keyed by the
  // pair's modified line; kNone collects those before any such pair.
  std::vector<std::vector<std::size_t>> deleted_after(modified_lines);
  std::vector<std::size_t> leading_deleted;
  std::size_t anchor_mod = kNone;
  for (std::size_t i = 0; i < reference_lines; ++i) {
    const std::size_t p = pair_of_ref[i];
    if (p != kNone) {
      if (!is_moved(pairs[p].kind)) anchor_mod = pairs[p].mod;
      continue;
    }
    (anchor_mod == kNone ? leading_deleted : deleted_after[anchor_mod]).push_back(i);
  }

  std::vector<Action> actions;
  actions.reserve(reference_lines + modified_lines);
  auto emit_deleted = [&](const std::vector<std::size_t>& lines) {
    for (std::size_t i : lines) actions.push_back(Action{ActionKind::deleted, i, std::nullopt, {}});
  };
  emit_deleted(leading_deleted);
  for (std::size_t j = 0; j < modified_lines; ++j) {
    const std::size_t p = pair_of_mod[j];
    if (p == kNone) {
      actions.push_back(Action{ActionKind::added, std::nullopt, j, {}});
      continue;
    }
    PairedLine& pair = pairs[p];
    actions.push_back(Action{pair.kind, pair.ref, pair.mod, std::move(pair.tokens_changed)});
    emit_deleted(deleted_after[j]);
  }
  return actions;
}

std::vector<std::size_t> changed_tokens(const LogLine& a, const LogLine& b) {
  std::vector<std::size_t> out;
  const std::size_t n = std::min(a.token_count(), b.token_count());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.token(i) != b.token(i)) out.push_back(i);
  }
  for (std::size_t i = n; i < b.token_count(); ++i) out.push_back(i);
  return out;
}

EditScript build_script(const Log& reference, const Log& modified, const SeedSet& initial,
                        const SeedSet& additional, const SimilarityParams& params) {
  std::vector<PairedLine> pairs;
  auto collect = [&](const SeedSet& seeds, ActionKind same, ActionKind changed) {
    for (const auto& seed : seeds) {
      for (std::size_t i = 0; i < seed.size(); ++i) {
        const std::size_t r = seed.ref + i, m = seed.mod + i;
        if (seed.pairs[i].identical) {
          pairs.push_back({r, m, same, {}});
        } else {
          pairs.push_back({r, m, changed, changed_tokens(reference[r], modified[m])});
        }
      }
    }
  };
  collect(initial, ActionKind::unchanged, ActionKind::updated);
  collect(additional, ActionKind::moved_unchanged, ActionKind::moved_updated);

  EditScript script;
  script.algorithm = "cidiff";
  script.params = params;
  script.reference_source = reference.source();
  script.modified_source = modified.source();
  script.reference_lines = reference.size();
  script.modified_lines = modified.size();
  script.actions = assemble_actions(reference.size(), modified.size(), std::move(pairs));
  return script;
}

EditScript cidiff(const Log& reference, const Log& modified, const SimilarityParams& params,
                  const Deadline& deadline) {
  params.validate();
  const MatchResult m = match(reference, modified, params, deadline);
  return build_script(reference, modified, m.initial, m.additional, params);
}

std::size_t script_size(const EditScript& script) {
  return static_cast<std::size_t>(std::count_if(
      script.actions.begin(), script.actions.end(),
      [](const Action& a) { return a.kind != ActionKind::unchanged; }));
}

std::size_t count_kind(const EditScript& script, ActionKind kind) {
  return static_cast<std::size_t>(std::count_if(script.actions.begin(), script.actions.end(),
                                                [&](const Action& a) { return a.kind == kind; }));
}

std::size_t added_count(const EditScript& script) { return count_kind(script, ActionKind::added); }

void check_coverage(const EditScript& script) {
  std::vector<char> seen_ref(script.reference_lines, 0), seen_mod(script.modified_lines, 0);
  for (const auto& a : script.actions) {
    const bool wants_ref = a.kind != ActionKind::added;
    const bool wants_mod = a.kind != ActionKind::deleted;
    if (wants_ref != a.ref.has_value() || wants_mod != a.mod.has_value()) {
      throw std::invalid_argument(std::string("action '") + std::string(to_string(a.kind)) +
                                  "' carries the wrong line indices");
    }
    if (!is_update(a.kind) && !a.tokens_changed.empty()) {
      throw std::invalid_argument("tokens_changed on a non-update action");
    }
    if (a.ref) {
      if (*a.ref >= script.reference_lines || seen_ref[*a.ref]) {
        throw std::invalid_argument("reference line " + std::to_string(*a.ref) +
                                    " out of range or repeated");
      }
      seen_ref[*a.ref] = 1;
    }
    if (a.mod) {
      if (*a.mod >= script.modified_lines || seen_mod[*a.mod]) {
        throw std::invalid_argument("modified line " + std::to_string(*a.mod) +
                                    " out of range or repeated");
      }
      seen_mod[*a.mod] = 1;
    }
  }
  if (std::find(seen_ref.begin(), seen_ref.end(), 0) != seen_ref.end() ||
      std::find(seen_mod.begin(), seen_mod.end(), 0) != seen_mod.end()) {
    throw std::invalid_argument("edit script does not cover every line");
  }
}

std::string to_json(const EditScript& script, int indent) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["algorithm"] = script.algorithm;
  doc["params"] = {{"line_threshold", script.params.line_threshold},
                   {"token_threshold", script.params.token_threshold}};
  doc["reference"] = {{"source", script.reference_source}, {"line_count", script.reference_lines}};
  doc["modified"] = {{"source", script.modified_source}, {"line_count", script.modified_lines}};
  ordered_json actions = ordered_json::array();
  for (const auto& a : script.actions) {
    ordered_json item;
    item["kind"] = to_string(a.kind);
    item["ref"] = a.ref ? ordered_json(*a.ref) : ordered_json(nullptr);
    item["mod"] = a.mod ? ordered_json(*a.mod) : ordered_json(nullptr);
    if (is_update(a.kind)) item["tokens_changed"] = a.tokens_changed;
    actions.push_back(std::move(item));
  }
  doc["actions"] = std::move(actions);
  return doc.dump(indent);
}

namespace {

const nlohmann::json& require(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

std::optional<std::size_t> optional_index(const nlohmann::json& value, const char* key) {
  if (value.is_null()) return std::nullopt;
  if (!value.is_number_unsigned()) {
    throw std::invalid_argument(std::string("field '") + key + "' must be a non-negative integer or null");
  }
  return value.get<std::size_t>();
}

}  // namespace

EditScript edit_script_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  EditScript script;
  try {
    script.algorithm = require(doc, "algorithm").get<std::string>();
    const auto& params = require(doc, "params");
    script.params.line_threshold = require(params, "line_threshold").get<double>();
    script.params.token_threshold = require(params, "token_threshold").get<double>();
    const auto& ref = require(doc, "reference");
    script.reference_source = require(ref, "source").get<std::string>();
    script.reference_lines = require(ref, "line_count").get<std::size_t>();
    const auto& mod = require(doc, "modified");
    script.modified_source = require(mod, "source").get<std::string>();
    script.modified_lines = require(mod, "line_count").get<std::size_t>();
    const auto& actions = require(doc, "actions");
    if (!actions.is_array()) throw std::invalid_argument("'actions' must be an array");
    for (const auto& item : actions) {
      Action a;
      const auto kind_name = require(item, "kind").get<std::string>();
      const auto kind = parse_action_kind(kind_name);
      if (!kind) throw std::invalid_argument("unknown action kind '" + kind_name + "'");
      a.kind = *kind;
      a.ref = optional_index(require(item, "ref"), "ref");
      a.mod = optional_index(require(item, "mod"), "mod");
      if (item.contains("tokens_changed")) {
        if (!is_update(a.kind)) throw std::invalid_argument("tokens_changed on a non-update action");
        a.tokens_changed = item.at("tokens_changed").get<std::vector<std::size_t>>();
      } else if (is_update(a.kind)) {
        throw std::invalid_argument("update action without tokens_changed");
      }
      script.actions.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("schema violation: ") + e.what());
  }
  script.params.validate();
  check_coverage(script);
  return script;
}

void render_text(std::ostream& out, const EditScript& script, const Log& reference,
                 const Log& modified) {
  const std::size_t width =
      std::to_string(std::max<std::size_t>({script.reference_lines, script.modified_lines, 1})).size();
  auto text = [](const LogLine& line) {
    std::string_view raw = line.raw();
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    return raw;
  };
  for (const auto& a : script.actions) {
    out << std::left << std::setw(2) << marker(a.kind) << std::right << ' ';
    if (a.ref) {
      out << std::setw(static_cast<int>(width)) << *a.ref + 1;
    } else {
      out << std::string(width, ' ');
    }
    out << ' ';
    if (a.mod) {
      out << std::setw(static_cast<int>(width)) << *a.mod + 1;
    } else {
      out << std::string(width, ' ');
    }
    out << "  " << (a.mod ? text(modified[*a.mod]) : text(reference[*a.ref])) << '\n';
  }
}

}  // namespace cidiff
