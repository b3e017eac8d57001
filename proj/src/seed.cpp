#include "cidiff/seed.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace cidiff {

Seed Seed::core(std::size_t ref, std::size_t mod, std::size_t size, SeedKind kind) {
  Seed seed;
  seed.ref = ref;
  seed.mod = mod;
  seed.kind = kind;
  seed.pairs.assign(size, SeedPair{true, true});
  return seed;
}

bool adjacent(const Seed& a, const Seed& b) {
  return (a.ref_end() == b.ref && a.mod_end() == b.mod) ||
         (b.ref_end() == a.ref && b.mod_end() == a.mod);
}

void Coverage::add(const Seed& seed) {
  for (std::size_t i = 0; i < seed.size(); ++i) {
    ref[seed.ref + i] = 1;
    mod[seed.mod + i] = 1;
  }
}

void Coverage::add(const SeedSet& seeds) {
  for (const auto& s : seeds) add(s);
}

SeedSet initial_seeds(const Log& reference, const Log& modified, const LcsPairing& lcs) {
  SeedSet seeds;
  for (const auto& p : lcs.pairs) {
    if (p.ref >= reference.size() || p.mod >= modified.size()) {
      throw std::invalid_argument("LCS pair outside the logs");
    }
    if (!seeds.empty() && seeds.back().ref_end() == p.ref && seeds.back().mod_end() == p.mod) {
      seeds.back().pairs.push_back(SeedPair{true, true});
    } else {
      seeds.push_back(Seed::core(p.ref, p.mod, 1, SeedKind::initial));
    }
  }
  return seeds;
}

namespace {

// Identical lines always qualify; otherwise both lines need tokens, and the
// same number of them, and logsim must reach the line threshold.
bool extendable(const LogLine& a, const LogLine& b, const SimilarityParams& params,
                bool& identical) {
  identical = a.stripped() == b.stripped();
  if (identical) return true;
  if (a.token_count() == 0 || a.token_count() != b.token_count()) return false;
  return logsim(a, b, params) >= params.line_threshold;
}

}  // namespace

SeedSet extend_seeds(SeedSet seeds, const Log& reference, const Log& modified,
                     const SimilarityParams& params, const Coverage* blocked,
                     const Deadline& deadline) {
  Coverage cores(reference.size(), modified.size());
  for (const auto& seed : seeds) {
    for (std::size_t i = 0; i < seed.size(); ++i) {
      if (seed.pairs[i].anchor) {
        cores.ref[seed.ref + i] = 1;
        cores.mod[seed.mod + i] = 1;
      }
    }
  }
  auto is_blocked = [&](std::size_t r, std::size_t m) {
    return cores.ref[r] || cores.mod[m] || (blocked && (blocked->ref[r] || blocked->mod[m]));
  };

  std::size_t probes = 0;
  for (auto& seed : seeds) {
    std::vector<SeedPair> above;
    std::size_t r = seed.ref, m = seed.mod;
    while (r > 0 && m > 0 && !is_blocked(r - 1, m - 1)) {
      if ((++probes & 0xFFF) == 0) deadline.check();
      bool identical = false;
      if (!extendable(reference[r - 1], modified[m - 1], params, identical)) break;
      above.push_back(SeedPair{identical, false});
      --r;
      --m;
    }
    std::vector<SeedPair> below;
    std::size_t re = seed.ref_end(), me = seed.mod_end();
    while (re < reference.size() && me < modified.size() && !is_blocked(re, me)) {
      if ((++probes & 0xFFF) == 0) deadline.check();
      bool identical = false;
      if (!extendable(reference[re], modified[me], params, identical)) break;
      below.push_back(SeedPair{identical, false});
      ++re;
      ++me;
    }
    if (above.empty() && below.empty()) continue;
    std::vector<SeedPair> pairs;
    pairs.reserve(above.size() + seed.size() + below.size());
    pairs.insert(pairs.end(), above.rbegin(), above.rend());
    pairs.insert(pairs.end(), seed.pairs.begin(), seed.pairs.end());
    pairs.insert(pairs.end(), below.begin(), below.end());
    seed.ref = r;
    seed.mod = m;
    seed.pairs = std::move(pairs);
  }
  return seeds;
}

namespace {

// Cuts the extension ends of `seed` at the innermost pair touching a line
// already claimed in `taken`. Anchored pairs never conflict.
void trim_against(Seed& seed, const Coverage& taken) {
  auto conflicts = [&](std::size_t i) {
    return taken.ref[seed.ref + i] || taken.mod[seed.mod + i];
  };
  std::size_t first_anchor = seed.size(), last_anchor = 0;
  for (std::size_t i = 0; i < seed.size(); ++i) {
    if (seed.pairs[i].anchor) {
      first_anchor = std::min(first_anchor, i);
      last_anchor = i;
    }
  }
  if (first_anchor == seed.size()) throw std::logic_error("seed without anchored pairs");
  for (std::size_t i = first_anchor; i <= last_anchor; ++i) {
    if (conflicts(i)) throw std::logic_error("overlap inside a seed core");
  }
  std::size_t end = seed.size();
  for (std::size_t i = last_anchor + 1; i < seed.size(); ++i) {
    if (conflicts(i)) {
      end = i;
      break;
    }
  }
  std::size_t begin = 0;
  for (std::size_t i = first_anchor; i-- > 0;) {
    if (conflicts(i)) {
      begin = i + 1;
      break;
    }
  }
  if (begin == 0 && end == seed.size()) return;
  seed.pairs.erase(seed.pairs.begin() + static_cast<std::ptrdiff_t>(end), seed.pairs.end());
  seed.pairs.erase(seed.pairs.begin(), seed.pairs.begin() + static_cast<std::ptrdiff_t>(begin));
  seed.ref += begin;
  seed.mod += begin;
}

// Line -> seeds covering it, in compressed-row form.
class LineIndex {
 public:
  LineIndex(std::size_t lines, const SeedSet& seeds, bool reference_side) : start_(lines + 1, 0) {
    for (const auto& s : seeds) {
      const std::size_t from = reference_side ? s.ref : s.mod;
      for (std::size_t i = 0; i < s.size(); ++i) ++start_[from + i + 1];
    }
    for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
    entries_.resize(start_.back());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t id = 0; id < seeds.size(); ++id) {
      const auto& s = seeds[id];
      const std::size_t from = reference_side ? s.ref : s.mod;
      for (std::size_t i = 0; i < s.size(); ++i) entries_[fill[from + i]++] = id;
    }
  }

  template <class F>
  void for_each(std::size_t line, F&& f) const {
    for (std::size_t e = start_[line]; e < start_[line + 1]; ++e) f(entries_[e]);
  }

 private:
  std::vector<std::size_t> start_;
  std::vector<std::size_t> entries_;
};

}  // namespace

SeedSet merge_adjacent(SeedSet seeds) {
  if (seeds.size() < 2) return seeds;
  std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) {
    return std::tie(a.ref, a.mod) < std::tie(b.ref, b.mod);
  });
  std::unordered_map<std::size_t, std::size_t> by_ref;
  by_ref.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) by_ref.emplace(seeds[i].ref, i);

  std::vector<char> absorbed(seeds.size(), 0);
  SeedSet out;
  out.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (absorbed[i]) continue;
    Seed merged = std::move(seeds[i]);
    for (;;) {
      auto it = by_ref.find(merged.ref_end());
      if (it == by_ref.end() || absorbed[it->second] || it->second == i) break;
      Seed& next = seeds[it->second];
      if (next.mod != merged.mod_end()) break;
      merged.pairs.insert(merged.pairs.end(), next.pairs.begin(), next.pairs.end());
      absorbed[it->second] = 1;
    }
    out.push_back(std::move(merged));
  }
  return out;
}

SeedSet remove_overlaps(SeedSet seeds) {
  if (seeds.empty()) return seeds;
  std::size_t ref_lines = 0, mod_lines = 0;
  for (const auto& s : seeds) {
    ref_lines = std::max(ref_lines, s.ref_end());
    mod_lines = std::max(mod_lines, s.mod_end());
  }
  const LineIndex ref_index(ref_lines, seeds, true);
  const LineIndex mod_index(mod_lines, seeds, false);

  // Max-heap on (size, -ref, -mod); entries go stale when a seed shrinks.
  using Entry = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;
  auto worse = [&](const Entry& a, const Entry& b) {
    const auto& [sa, ia, ra, ma] = a;
    const auto& [sb, ib, rb, mb] = b;
    if (sa != sb) return sa < sb;
    if (ra != rb) return ra > rb;
    if (ma != mb) return ma > mb;
    return ia > ib;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> queue(worse);
  for (std::size_t id = 0; id < seeds.size(); ++id) {
    queue.emplace(seeds[id].size(), id, seeds[id].ref, seeds[id].mod);
  }

  Coverage taken(ref_lines, mod_lines);
  std::vector<char> done(seeds.size(), 0);
  std::vector<std::size_t> touched;
  while (!queue.empty()) {
    const auto [size, id, ref, mod] = queue.top();
    queue.pop();
    Seed& picked = seeds[id];
    if (done[id] || size != picked.size() || ref != picked.ref) continue;
    done[id] = 1;
    taken.add(picked);

    touched.clear();
    for (std::size_t i = 0; i < picked.size(); ++i) {
      ref_index.for_each(picked.ref + i, [&](std::size_t other) {
        if (!done[other]) touched.push_back(other);
      });
      mod_index.for_each(picked.mod + i, [&](std::size_t other) {
        if (!done[other]) touched.push_back(other);
      });
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t other : touched) {
      Seed& s = seeds[other];
      const std::size_t before = s.size();
      trim_against(s, taken);
      if (s.size() != before) queue.emplace(s.size(), other, s.ref, s.mod);
    }
  }
  return merge_adjacent(std::move(seeds));
}

SeedSet additional_seeds(const Log& reference, const Log& modified, const LineIds& ids,
                         const SeedSet& taken, const SimilarityParams& params,
                         const Deadline& deadline) {
  Coverage covered(reference.size(), modified.size());
  covered.add(taken);

  std::vector<std::size_t> ref_count(ids.distinct, 0), mod_count(ids.distinct, 0);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (!covered.ref[i]) ++ref_count[ids.ref[i]];
  }
  for (std::size_t j = 0; j < modified.size(); ++j) {
    if (!covered.mod[j]) ++mod_count[ids.mod[j]];
  }

  // k-th uncovered occurrence on one side pairs with the k-th on the other.
  std::vector<std::vector<std::size_t>> pending(ids.distinct);
  for (std::size_t j = 0; j < modified.size(); ++j) {
    const auto id = ids.mod[j];
    if (!covered.mod[j] && ref_count[id] == mod_count[id]) pending[id].push_back(j);
  }
  std::vector<std::size_t> next(ids.distinct, 0);
  SeedSet seeds;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto id = ids.ref[i];
    if (covered.ref[i] || ref_count[id] != mod_count[id]) continue;
    seeds.push_back(Seed::core(i, pending[id][next[id]++], 1, SeedKind::additional));
  }
  deadline.check();

  seeds = extend_seeds(std::move(seeds), reference, modified, params, &covered, deadline);
  return remove_overlaps(std::move(seeds));
}

SeedSet additional_seeds(const Log& reference, const Log& modified, const SeedSet& taken,
                         const SimilarityParams& params, const Deadline& deadline) {
  return additional_seeds(reference, modified, intern_lines(reference, modified), taken,
                          params, deadline);
}

MatchResult match(const Log& reference, const Log& modified, const LineIds& ids,
                  const LcsPairing& lcs, const SimilarityParams& params,
                  const Deadline& deadline) {
  MatchResult result;
  result.initial = initial_seeds(reference, modified, lcs);
  result.initial = extend_seeds(std::move(result.initial), reference, modified, params,
                                nullptr, deadline);
  result.initial = remove_overlaps(std::move(result.initial));
  result.additional = additional_seeds(reference, modified, ids, result.initial, params, deadline);
  return result;
}

MatchResult match(const Log& reference, const Log& modified, const SimilarityParams& params,
                  const Deadline& deadline) {
  const LineIds ids = intern_lines(reference, modified);
  const LcsPairing lcs{lcs_ids(ids.ref, ids.mod, deadline)};
  return match(reference, modified, ids, lcs, params, deadline);
}

}  // namespace cidiff
