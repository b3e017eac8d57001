#pragma once

#include <cstddef>
#include <vector>

#include "cidiff/deadline.hpp"
#include "cidiff/lcs.hpp"
#include "cidiff/log.hpp"
#include "cidiff/similarity.hpp"

namespace cidiff {

enum class SeedKind { initial, additional };

/// Per-pair bookkeeping inside a seed.
struct SeedPair {
  bool identical = true;  // equal stripped text, otherwise an update
  bool anchor = true;     // part of the seed's original core, never trimmed
};

/// A block of `size()` consecutive line pairs: reference lines
/// [ref, ref + size) matched one-to-one with modified lines [mod, mod + size).
struct Seed {
  std::size_t ref = 0;
  std::size_t mod = 0;
  SeedKind kind = SeedKind::initial;
  std::vector<SeedPair> pairs;

  std::size_t size() const { return pairs.size(); }
  std::size_t ref_end() const { return ref + pairs.size(); }
  std::size_t mod_end() const { return mod + pairs.size(); }
  bool covers_ref(std::size_t line) const { return line >= ref && line < ref_end(); }
  bool covers_mod(std::size_t line) const { return line >= mod && line < mod_end(); }

  /// Core block with every pair identical and anchored.
  static Seed core(std::size_t ref, std::size_t mod, std::size_t size, SeedKind kind);
};

using SeedSet = std::vector<Seed>;

/// (r1 + s1 = r2 and m1 + s1 = m2) or the same with the roles swapped.
bool adjacent(const Seed& a, const Seed& b);

/// Lines claimed by a seed set, one flag per line of each log.
struct Coverage {
  std::vector<char> ref;
  std::vector<char> mod;

  Coverage(std::size_t ref_lines, std::size_t mod_lines) : ref(ref_lines, 0), mod(mod_lines, 0) {}
  void add(const Seed& seed);
  void add(const SeedSet& seeds);
};

/// Each maximal run of LCS pairs consecutive in both logs becomes one seed.
SeedSet initial_seeds(const Log& reference, const Log& modified, const LcsPairing& lcs);

/// Grows every seed upward and downward one pair at a time while the next
/// pair is identical or reaches the line threshold. Lines of any seed core in
/// `seeds`, and lines flagged in `blocked`, stop the growth. Results may
/// overlap on extension pairs.
SeedSet extend_seeds(SeedSet seeds, const Log& reference, const Log& modified,
                     const SimilarityParams& params, const Coverage* blocked = nullptr,
                     const Deadline& deadline = {});

/// Greedy largest-first overlap removal followed by merging of adjacent seeds.
/// Ties on size go to the smaller reference start, then the smaller modified
/// start.
SeedSet remove_overlaps(SeedSet seeds);

/// Adjacent-seed merging on its own (part of remove_overlaps).
SeedSet merge_adjacent(SeedSet seeds);

/// Moved blocks: identical lines left uncovered by `taken` whose text occurs
/// equally often on both sides are paired in order of appearance, then
/// extended and de-overlapped like the initial seeds. Returns only the new
/// seeds.
SeedSet additional_seeds(const Log& reference, const Log& modified, const SeedSet& taken,
                         const SimilarityParams& params, const Deadline& deadline = {});

SeedSet additional_seeds(const Log& reference, const Log& modified, const LineIds& ids,
                         const SeedSet& taken, const SimilarityParams& params,
                         const Deadline& deadline = {});

struct MatchResult {
  SeedSet initial;
  SeedSet additional;
};

/// The whole seed-and-extend pipeline.
MatchResult match(const Log& reference, const Log& modified, const SimilarityParams& params,
                  const Deadline& deadline = {});

/// Same pipeline reusing a previously computed interning and LCS, which do
/// not depend on the thresholds.
MatchResult match(const Log& reference, const Log& modified, const LineIds& ids,
                  const LcsPairing& lcs, const SimilarityParams& params,
                  const Deadline& deadline = {});

}  // namespace cidiff
