#include "cidiff/lcs.hpp"

#include <string_view>
#include <unordered_map>

namespace cidiff {

LineIds intern_lines(const Log& reference, const Log& modified) {
  LineIds ids;
  std::unordered_map<std::string_view, std::uint32_t> table;
  table.reserve(reference.size() + modified.size());
  auto intern = [&](const Log& log, std::vector<std::uint32_t>& out) {
    out.reserve(log.size());
    for (const auto& line : log.lines()) {
      auto [it, inserted] = table.try_emplace(line.stripped(), ids.distinct);
      if (inserted) ++ids.distinct;
      out.push_back(it->second);
    }
  };
  intern(reference, ids.ref);
  intern(modified, ids.mod);
  return ids;
}

namespace {

// Myers' divide-and-conquer over the edit graph. Forward and backward
// furthest-reaching paths share two diagonal buffers sized for the whole
// problem; each call only reads entries it wrote itself.
class MyersLcs {
 public:
  MyersLcs(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
           const Deadline& deadline)
      : a_(a), b_(b), deadline_(deadline) {
    const std::size_t max_d = (a.size() + b.size() + 1) / 2 + 2;
    offset_ = static_cast<std::ptrdiff_t>(max_d) + 1;
    forward_.assign(2 * max_d + 4, 0);
    backward_.assign(2 * max_d + 4, 0);
  }

  std::vector<LinePair> run() {
    solve(0, a_.size(), 0, b_.size());
    return std::move(pairs_);
  }

 private:
  struct Snake {
    std::ptrdiff_t x0, y0, x1, y1;  // relative to the sub-problem origin
    std::ptrdiff_t edits;
  };

  std::ptrdiff_t& fwd(std::ptrdiff_t k) { return forward_[static_cast<std::size_t>(offset_ + k)]; }
  std::ptrdiff_t& bwd(std::ptrdiff_t k) { return backward_[static_cast<std::size_t>(offset_ + k)]; }

  void solve(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    while (a0 < a1 && b0 < b1 && a_[a0] == b_[b0]) {
      pairs_.push_back({a0, b0});
      ++a0;
      ++b0;
    }
    std::size_t tail_count = 0;
    while (a0 < a1 && b0 < b1 && a_[a1 - 1] == b_[b1 - 1]) {
      --a1;
      --b1;
      ++tail_count;
    }
    if (a0 < a1 && b0 < b1) {
      const Snake s = middle_snake(a0, a1, b0, b1);
      if (s.edits > 1) {
        solve(a0, a0 + static_cast<std::size_t>(s.x0), b0, b0 + static_cast<std::size_t>(s.y0));
        for (std::ptrdiff_t i = 0; i < s.x1 - s.x0; ++i) {
          pairs_.push_back({a0 + static_cast<std::size_t>(s.x0 + i),
                            b0 + static_cast<std::size_t>(s.y0 + i)});
        }
        solve(a0 + static_cast<std::size_t>(s.x1), a1, b0 + static_cast<std::size_t>(s.y1), b1);
      } else {
        // At most one insertion or deletion left: walk the two ranges.
        std::size_t i = a0, j = b0;
        while (i < a1 && j < b1) {
          if (a_[i] == b_[j]) {
            pairs_.push_back({i, j});
            ++i;
            ++j;
          } else if (a1 - i > b1 - j) {
            ++i;
          } else {
            ++j;
          }
        }
      }
    }
    for (std::size_t t = 0; t < tail_count; ++t) pairs_.push_back({a1 + t, b1 + t});
  }

  Snake middle_snake(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
    const auto n = static_cast<std::ptrdiff_t>(a1 - a0);
    const auto m = static_cast<std::ptrdiff_t>(b1 - b0);
    const std::ptrdiff_t delta = n - m;
    const bool odd = (delta & 1) != 0;
    const std::ptrdiff_t max_d = (n + m + 1) / 2 + 1;
    fwd(1) = 0;
    bwd(1) = 0;
    for (std::ptrdiff_t d = 0; d <= max_d; ++d) {
      deadline_.check();
      for (std::ptrdiff_t k = -d; k <= d; k += 2) {
        std::ptrdiff_t x = (k == -d || (k != d && fwd(k - 1) < fwd(k + 1))) ? fwd(k + 1)
                                                                           : fwd(k - 1) + 1;
        std::ptrdiff_t y = x - k;
        const std::ptrdiff_t sx = x, sy = y;
        while (x < n && y < m && a_[a0 + static_cast<std::size_t>(x)] == b_[b0 + static_cast<std::size_t>(y)]) {
          ++x;
          ++y;
        }
        fwd(k) = x;
        if (odd && k >= delta - (d - 1) && k <= delta + (d - 1) && fwd(k) + bwd(delta - k) >= n) {
          return {sx, sy, x, y, 2 * d - 1};
        }
      }
      for (std::ptrdiff_t k = -d; k <= d; k += 2) {
        std::ptrdiff_t x = (k == -d || (k != d && bwd(k - 1) < bwd(k + 1))) ? bwd(k + 1)
                                                                           : bwd(k - 1) + 1;
        std::ptrdiff_t y = x - k;
        const std::ptrdiff_t sx = x, sy = y;
        while (x < n && y < m &&
               a_[a1 - 1 - static_cast<std::size_t>(x)] == b_[b1 - 1 - static_cast<std::size_t>(y)]) {
          ++x;
          ++y;
        }
        bwd(k) = x;
        if (!odd && delta - k >= -d && delta - k <= d && bwd(k) + fwd(delta - k) >= n) {
          return {n - x, m - y, n - sx, m - sy, 2 * d};
        }
      }
    }
    // Unreachable: the paths always meet by d = ceil((n + m) / 2).
    return {0, 0, 0, 0, 0};
  }

  std::span<const std::uint32_t> a_;
  std::span<const std::uint32_t> b_;
  const Deadline& deadline_;
  std::ptrdiff_t offset_ = 0;
  std::vector<std::ptrdiff_t> forward_;
  std::vector<std::ptrdiff_t> backward_;
  std::vector<LinePair> pairs_;
};

}  // namespace

std::vector<LinePair> lcs_ids(std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b, const Deadline& deadline) {
  return MyersLcs(a, b, deadline).run();
}

LcsPairing lcs_lines(const Log& reference, const Log& modified, const Deadline& deadline) {
  const LineIds ids = intern_lines(reference, modified);
  return LcsPairing{lcs_ids(ids.ref, ids.mod, deadline)};
}

EditScript lcs_diff(const Log& reference, const Log& modified, const LcsPairing& lcs) {
  EditScript script;
  script.algorithm = "lcs";
  script.reference_source = reference.source();
  script.modified_source = modified.source();
  script.reference_lines = reference.size();
  script.modified_lines = modified.size();
  std::vector<PairedLine> pairs;
  pairs.reserve(lcs.pairs.size());
  for (const auto& p : lcs.pairs) pairs.push_back({p.ref, p.mod, ActionKind::unchanged, {}});
  script.actions = assemble_actions(reference.size(), modified.size(), std::move(pairs));
  return script;
}

EditScript lcs_diff(const Log& reference, const Log& modified, const Deadline& deadline) {
  return lcs_diff(reference, modified, lcs_lines(reference, modified, deadline));
}

}  // namespace cidiff
