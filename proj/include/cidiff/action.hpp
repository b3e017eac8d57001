#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cidiff/similarity.hpp"

namespace cidiff {

enum class ActionKind {
  unchanged,
  updated,
  added,
  deleted,
  moved_unchanged,
  moved_updated,
};

/// Wire name: "unchanged", "updated", "added", "deleted", "moved-unchanged",
/// "moved-updated".
std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view name);

inline bool is_paired(ActionKind kind) {
  return kind != ActionKind::added && kind != ActionKind::deleted;
}
inline bool is_moved(ActionKind kind) {
  return kind == ActionKind::moved_unchanged || kind == ActionKind::moved_updated;
}
inline bool is_update(ActionKind kind) {
  return kind == ActionKind::updated || kind == ActionKind::moved_updated;
}

struct Action {
  ActionKind kind = ActionKind::unchanged;
  std::optional<std::size_t> ref;
  std::optional<std::size_t> mod;
  /// Token positions whose text differs; only filled for update kinds.
  std::vector<std::size_t> tokens_changed;

  friend bool operator==(const Action&, const Action&) = default;
};

struct EditScript {
  std::string algorithm;
  SimilarityParams params;
  std::string reference_source;
  std::string modified_source;
  std::size_t reference_lines = 0;
  std::size_t modified_lines = 0;
  std::vector<Action> actions;
};

/// A matched line pair waiting to be serialised.
struct PairedLine {
  std::size_t ref;
  std::size_t mod;
  ActionKind kind;
  std::vector<std::size_t> tokens_changed;
};

/// Orders paired, added and deleted lines into a single action list: actions
/// follow the modified log, and each run of deleted reference lines is placed
/// right after the non-moved pair whose reference line precedes it.
std::vector<Action> assemble_actions(std::size_t reference_lines,
                                     std::size_t modified_lines,
                                     std::vector<PairedLine> pairs);

}  // namespace cidiff
