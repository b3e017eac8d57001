#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "cidiff/action.hpp"
#include "cidiff/deadline.hpp"
#include "cidiff/log.hpp"
#include "cidiff/seed.hpp"
#include "cidiff/similarity.hpp"

namespace cidiff {

/// Converts matcher output into actions. Initial-seed pairs become unchanged
/// or updated, additional-seed pairs moved-unchanged or moved-updated, and
/// uncovered lines deleted (reference) or added (modified).
EditScript build_script(const Log& reference, const Log& modified, const SeedSet& initial,
                        const SeedSet& additional, const SimilarityParams& params);

/// Seed-and-extend diff end to end.
EditScript cidiff(const Log& reference, const Log& modified, const SimilarityParams& params = {},
                  const Deadline& deadline = {});

/// Number of non-unchanged actions; a paired action counts once.
std::size_t script_size(const EditScript& script);

std::size_t added_count(const EditScript& script);
std::size_t count_kind(const EditScript& script, ActionKind kind);

/// Throws std::invalid_argument if some line of either log is missing from,
/// or repeated in, the script, or if an action carries the wrong indices.
void check_coverage(const EditScript& script);

/// Canonical JSON document (see README for the schema).
std::string to_json(const EditScript& script, int indent = 2);

/// Parses and validates a canonical JSON document. Throws
/// std::invalid_argument on schema violations.
EditScript edit_script_from_json(const std::string& text);

/// Annotated listing: one row per action with a marker (" ", "U", "+", "-",
/// "M", "MU"), 1-based reference and modified line numbers, and the text.
void render_text(std::ostream& out, const EditScript& script, const Log& reference,
                 const Log& modified);

/// Positions whose tokens differ between two lines of equal token count.
std::vector<std::size_t> changed_tokens(const LogLine& a, const LogLine& b);

}  // namespace cidiff
