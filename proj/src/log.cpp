#include "cidiff/log.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace cidiff {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Matches `count` digits at `pos`, advancing it.
bool digits(std::string_view s, std::size_t& pos, std::size_t count) {
  if (pos + count > s.size()) return false;
  for (std::size_t i = 0; i < count; ++i) {
    if (!is_digit(s[pos + i])) return false;
  }
  pos += count;
  return true;
}

bool literal(std::string_view s, std::size_t& pos, char c) {
  if (pos >= s.size() || s[pos] != c) return false;
  ++pos;
  return true;
}

// Length of a leading ISO-8601 timestamp, or 0.
std::size_t iso_timestamp_length(std::string_view s) {
  std::size_t pos = 0;
  if (!(digits(s, pos, 4) && literal(s, pos, '-') && digits(s, pos, 2) &&
        literal(s, pos, '-') && digits(s, pos, 2) && literal(s, pos, 'T') &&
        digits(s, pos, 2) && literal(s, pos, ':') && digits(s, pos, 2) &&
        literal(s, pos, ':') && digits(s, pos, 2))) {
    return 0;
  }
  if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
    std::size_t frac = pos + 1;
    while (frac < s.size() && is_digit(s[frac])) ++frac;
    if (frac == pos + 1) return 0;
    pos = frac;
  }
  if (pos < s.size() && s[pos] == 'Z') {
    ++pos;
  } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    std::size_t offset = pos + 1;
    if (!digits(s, offset, 2)) return 0;
    if (offset < s.size() && s[offset] == ':') ++offset;
    if (!digits(s, offset, 2)) return 0;
    pos = offset;
  }
  return pos;
}

std::string_view drop_prefix(std::string_view line, std::size_t length) {
  if (length == 0) return line;
  if (length == line.size()) return line.substr(length);
  if (line[length] == ' ') return line.substr(length + 1);
  return line;
}

}  // namespace

std::string_view strip_timestamp(std::string_view line) {
  return drop_prefix(line, iso_timestamp_length(line));
}

std::string_view strip_timestamp(std::string_view line, const std::regex& prefix) {
  std::match_results<std::string_view::const_iterator> match;
  if (!std::regex_search(line.begin(), line.end(), match, prefix,
                         std::regex_constants::match_continuous)) {
    return line;
  }
  return drop_prefix(line, static_cast<std::size_t>(match.length(0)));
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string sanitize_utf8(std::string_view bytes) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(static_cast<char>(b0));
      ++i;
      continue;
    }
    std::size_t len = 0;
    unsigned char lo = 0x80, hi = 0xBF;
    if (b0 >= 0xC2 && b0 <= 0xDF) {
      len = 2;
    } else if (b0 >= 0xE0 && b0 <= 0xEF) {
      len = 3;
      if (b0 == 0xE0) lo = 0xA0;
      if (b0 == 0xED) hi = 0x9F;
    } else if (b0 >= 0xF0 && b0 <= 0xF4) {
      len = 4;
      if (b0 == 0xF0) lo = 0x90;
      if (b0 == 0xF4) hi = 0x8F;
    }
    std::size_t valid = 0;
    if (len > 0) {
      valid = 1;
      while (valid < len && i + valid < n) {
        const auto b = static_cast<unsigned char>(bytes[i + valid]);
        const unsigned char min = valid == 1 ? lo : 0x80;
        const unsigned char max = valid == 1 ? hi : 0xBF;
        if (b < min || b > max) break;
        ++valid;
      }
    }
    if (len > 0 && valid == len) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      // Maximal invalid subpart collapses into one replacement character.
      out.append(kReplacement);
      i += valid > 0 ? valid : 1;
    }
  }
  return out;
}

LogLine::LogLine(std::size_t index, std::string raw, const LoadOptions& options)
    : index_(index), raw_(std::move(raw)) {
  std::string_view content = raw_;
  if (!content.empty() && content.back() == '\r') content.remove_suffix(1);
  std::string_view stripped = content;
  if (options.strip_timestamps) {
    stripped = options.timestamp_pattern
                   ? strip_timestamp(content, *options.timestamp_pattern)
                   : strip_timestamp(content);
  }
  stripped_begin_ = static_cast<std::size_t>(stripped.data() - raw_.data());
  stripped_size_ = stripped.size();
  for (std::string_view tok : tokenize(stripped)) {
    tokens_.push_back({static_cast<std::uint32_t>(tok.data() - stripped.data()),
                       static_cast<std::uint32_t>(tok.size())});
  }
}

std::vector<std::string_view> LogLine::tokens() const {
  std::vector<std::string_view> out;
  out.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) out.push_back(token(i));
  return out;
}

Log parse_log(std::string_view text, std::string source, const LoadOptions& options) {
  const std::string clean = sanitize_utf8(text);
  std::string_view rest = clean;
  std::vector<LogLine> lines;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    const std::string_view line = rest.substr(0, nl);
    lines.emplace_back(lines.size(), std::string(line), options);
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  return Log(std::move(lines), std::move(source));
}

Log load_log(const std::filesystem::path& path, const LoadOptions& options) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    throw IoError("cannot read " + path.string() + ": is a directory");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return parse_log(buffer.str(), path.string(), options);
}

Log make_log(const std::vector<std::string>& lines, std::string source,
             const LoadOptions& options) {
  std::vector<LogLine> out;
  out.reserve(lines.size());
  for (const auto& line : lines) out.emplace_back(out.size(), line, options);
  return Log(std::move(out), std::move(source));
}

}  // namespace cidiff
