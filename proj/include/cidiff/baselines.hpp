#pragma once

#include <set>
#include <string>
#include <vector>

#include "cidiff/action.hpp"
#include "cidiff/log.hpp"

namespace cidiff {

/// Failing-log lines an approach returns as relevant output (0-based).
using FlaggedLines = std::set<std::size_t>;

const std::vector<std::string>& default_keywords();

/// Lines whose stripped text contains any keyword, ignoring ASCII case.
/// Throws std::invalid_argument for an empty keyword list.
FlaggedLines keyword_search(const Log& failing, const std::vector<std::string>& keywords =
                                                    default_keywords());

/// Flags failing line j when the bigram (line j-1, line j) never occurs in the
/// passing log. Both logs are framed by START/END sentinels so the first and
/// last lines form bigrams too.
FlaggedLines bigram_diff(const Log& passing, const Log& failing);

/// Modified-log indices of the added actions.
FlaggedLines diff_output_lines(const EditScript& script);

}  // namespace cidiff
