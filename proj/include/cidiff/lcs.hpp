#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cidiff/action.hpp"
#include "cidiff/deadline.hpp"
#include "cidiff/log.hpp"

namespace cidiff {

struct LinePair {
  std::size_t ref;
  std::size_t mod;

  friend bool operator==(const LinePair&, const LinePair&) = default;
};

/// Pairs of identical lines, strictly increasing in both coordinates.
struct LcsPairing {
  std::vector<LinePair> pairs;
};

/// Dense integer ids for the stripped text of every line of both logs:
/// equal ids if and only if equal text.
struct LineIds {
  std::vector<std::uint32_t> ref;
  std::vector<std::uint32_t> mod;
  std::uint32_t distinct = 0;
};

LineIds intern_lines(const Log& reference, const Log& modified);

/// Longest common subsequence of two id sequences using Myers' linear-space
/// O((N+M)D) algorithm. Throws TimeoutError once `deadline` expires.
std::vector<LinePair> lcs_ids(std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b,
                              const Deadline& deadline = {});

LcsPairing lcs_lines(const Log& reference, const Log& modified,
                     const Deadline& deadline = {});

/// Classic line diff: LCS lines unchanged, the rest deleted or added.
EditScript lcs_diff(const Log& reference, const Log& modified,
                    const Deadline& deadline = {});

/// Builds the LCS-diff script from a pairing computed earlier.
EditScript lcs_diff(const Log& reference, const Log& modified, const LcsPairing& lcs);

}  // namespace cidiff
