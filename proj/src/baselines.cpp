#include "cidiff/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace cidiff {
namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool contains_ignore_case(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](char a, char b) { return lower(a) == lower(b); });
  return it != haystack.end();
}

// Sentinels are distinct from every real line: ids 0 and 1 are reserved and
// line texts map to ids >= 2.
struct BigramHash {
  std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const {
    return std::hash<std::size_t>{}(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
  }
};

}  // namespace

const std::vector<std::string>& default_keywords() {
  static const std::vector<std::string> keywords{"fail", "error", "exception", "panic"};
  return keywords;
}

FlaggedLines keyword_search(const Log& failing, const std::vector<std::string>& keywords) {
  if (keywords.empty()) throw std::invalid_argument("keyword list is empty");
  FlaggedLines out;
  for (const auto& line : failing.lines()) {
    const std::string_view text = line.stripped();
    if (std::any_of(keywords.begin(), keywords.end(),
                    [&](const std::string& k) { return contains_ignore_case(text, k); })) {
      out.insert(line.index());
    }
  }
  return out;
}

FlaggedLines bigram_diff(const Log& passing, const Log& failing) {
  constexpr std::size_t kStart = 0, kEnd = 1;
  std::unordered_map<std::string_view, std::size_t> ids;
  auto id_of = [&](std::string_view text) {
    return ids.try_emplace(text, ids.size() + 2).first->second;
  };

  std::unordered_set<std::pair<std::size_t, std::size_t>, BigramHash> seen;
  std::size_t prev = kStart;
  for (const auto& line : passing.lines()) {
    const std::size_t cur = id_of(line.stripped());
    seen.emplace(prev, cur);
    prev = cur;
  }
  seen.emplace(prev, kEnd);

  FlaggedLines out;
  prev = kStart;
  for (const auto& line : failing.lines()) {
    const std::size_t cur = id_of(line.stripped());
    if (!seen.contains({prev, cur})) out.insert(line.index());
    prev = cur;
  }
  return out;
}

FlaggedLines diff_output_lines(const EditScript& script) {
  FlaggedLines out;
  for (const auto& a : script.actions) {
    if (a.kind == ActionKind::added) out.insert(*a.mod);
  }
  return out;
}

}  // namespace cidiff
