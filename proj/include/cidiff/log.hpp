#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cidiff {

/// Failure to read a log or corpus file. The message carries the source label.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Removes a leading ISO-8601 timestamp (`YYYY-MM-DDThh:mm:ss`, optional
/// fractional seconds, optional `Z` or numeric offset) and the single space
/// that follows it. A line made of the timestamp alone becomes empty. Any
/// other input is returned unchanged.
std::string_view strip_timestamp(std::string_view line);

/// Same, with a caller-supplied prefix pattern; only a match anchored at the
/// first character is removed.
std::string_view strip_timestamp(std::string_view line, const std::regex& prefix);

/// Maximal runs of non-whitespace characters, in order.
std::vector<std::string_view> tokenize(std::string_view line);

/// Replaces every invalid UTF-8 sequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

struct LoadOptions {
  bool strip_timestamps = true;
  /// Overrides the built-in ISO-8601 matcher when set.
  std::optional<std::regex> timestamp_pattern;
};

/// One physical line of a log. `stripped()` and the tokens are views into the
/// line's own storage, stored as offsets so lines stay cheap to copy and move.
class LogLine {
 public:
  LogLine(std::size_t index, std::string raw, const LoadOptions& options = {});

  std::size_t index() const { return index_; }
  const std::string& raw() const { return raw_; }
  std::string_view stripped() const {
    return std::string_view(raw_).substr(stripped_begin_, stripped_size_);
  }

  std::size_t token_count() const { return tokens_.size(); }
  std::string_view token(std::size_t i) const {
    return stripped().substr(tokens_[i].begin, tokens_[i].size);
  }
  std::vector<std::string_view> tokens() const;

 private:
  struct Span {
    std::uint32_t begin;
    std::uint32_t size;
  };

  std::size_t index_;
  std::string raw_;
  std::size_t stripped_begin_ = 0;
  std::size_t stripped_size_ = 0;
  std::vector<Span> tokens_;
};

class Log {
 public:
  Log() = default;
  Log(std::vector<LogLine> lines, std::string source)
      : lines_(std::move(lines)), source_(std::move(source)) {}

  const std::vector<LogLine>& lines() const { return lines_; }
  const LogLine& operator[](std::size_t i) const { return lines_[i]; }
  std::size_t size() const { return lines_.size(); }
  bool empty() const { return lines_.empty(); }
  const std::string& source() const { return source_; }

 private:
  std::vector<LogLine> lines_;
  std::string source_;
};

/// Splits `text` on `\n` (a trailing `\r` is kept in `raw` but excluded from
/// `stripped`). A final newline does not start an extra line.
Log parse_log(std::string_view text, std::string source,
              const LoadOptions& options = {});

/// Reads and parses a file; throws IoError naming the path on failure.
Log load_log(const std::filesystem::path& path, const LoadOptions& options = {});

/// Convenience for tests and fixtures: one LogLine per element.
Log make_log(const std::vector<std::string>& lines, std::string source = "<memory>",
             const LoadOptions& options = {});

}  // namespace cidiff
