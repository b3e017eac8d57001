#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "cidiff/eval.hpp"

namespace cidiff {

/// Per-line probabilities applied while deriving the failing log.
struct MutationRates {
  double add = 0.0;     // inject a block of 1-3 failure messages after the line
  double remove = 0.0;  // drop the line
  double update = 0.0;  // re-render the line's variable fields
  double move = 0.0;    // move a block of 1-3 lines a few lines further down

  void validate() const;
};

/// Deterministic passing/failing pair: the passing log has exactly `size`
/// lines drawn from build-tool templates (static words plus durations,
/// hashes, counters and versions). The failing log applies the mutations;
/// the indices of the injected failure messages become the annotations.
/// The case id is "synthetic-<seed>".
RegressionCase generate_synthetic_case(std::uint64_t seed, std::size_t size,
                                       const MutationRates& rates);

/// Raw lines joined by '\n', with a final newline for a non-empty log.
std::string render_log(const Log& log);

/// Writes pass.log, fail.log and, when annotated, annotations.json.
void write_case(const std::filesystem::path& dir, const RegressionCase& c);

}  // namespace cidiff
