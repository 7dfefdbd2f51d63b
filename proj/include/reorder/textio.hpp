#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>

#include "reorder/types.hpp"

namespace reorder {

// Parse result carrying either a value or a message; no exceptions, since
// malformed text is routine input for the CLI.
template <typename T>
struct ParseOutcome {
  T value{};
  std::string error;

  bool ok() const { return error.empty(); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// U+2212 (minus sign) folded to ASCII '-', so patterns pasted from
// typeset text parse too.
inline std::string fold_minus(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x88 &&
        static_cast<unsigned char>(s[i + 2]) == 0x92) {
      out.push_back('-');
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

inline bool parse_token(std::string_view tok, bool allow_signed, Id& out, std::string& err) {
  if (tok.empty()) {
    err = "empty value";
    return false;
  }
  if (!allow_signed && tok.front() == '-') {
    err = "negative entry '" + std::string(tok) + "' needs a signed context";
    return false;
  }
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec == std::errc::result_out_of_range) {
    err = "value '" + std::string(tok) + "' out of range";
    return false;
  }
  if (ec != std::errc() || ptr != last) {
    err = "bad integer '" + std::string(tok) + "'";
    return false;
  }
  return true;
}

}  // namespace detail

// Hash grammar: entries joined by '#' with a '##' terminator ("1#2#2#0##");
// the empty pattern is "##". Plain grammar: integers separated by spaces,
// tabs or commas. Text containing '#' is parsed as the former, anything
// else as the latter. Negative entries (ASCII '-' or U+2212) are accepted
// only when allow_signed is set.
inline ParseOutcome<std::vector<Id>> parse_pattern(std::string_view text, bool allow_signed) {
  ParseOutcome<std::vector<Id>> res;
  const std::string folded = detail::fold_minus(detail::trim(text));
  std::string_view s = folded;

  if (s.find('#') != std::string_view::npos) {
    if (s.size() < 2 || s.substr(s.size() - 2) != "##") {
      res.error = "hash pattern must end with '##'";
      return res;
    }
    s.remove_suffix(2);
    if (s.empty()) return res;  // "##" is the empty pattern
    std::size_t start = 0;
    while (true) {
      const std::size_t sep = s.find('#', start);
      const std::string_view tok =
          sep == std::string_view::npos ? s.substr(start) : s.substr(start, sep - start);
      Id v = 0;
      if (!detail::parse_token(tok, allow_signed, v, res.error)) return res;
      res.value.push_back(v);
      if (sep == std::string_view::npos) break;
      start = sep + 1;
    }
    return res;
  }

  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    Id v = 0;
    if (!detail::parse_token(s.substr(i, j - i), allow_signed, v, res.error)) return res;
    res.value.push_back(v);
    i = j;
  }
  return res;
}

// Arrival sequences: plain grammar only, every id at least 1.
inline ParseOutcome<PacketIdSequence> parse_id_sequence(std::string_view text) {
  ParseOutcome<PacketIdSequence> res;
  auto parsed = parse_pattern(text, false);
  if (!parsed.ok()) {
    res.error = parsed.error;
    return res;
  }
  for (Id v : parsed.value) {
    if (v < 1) {
      res.error = "packet ids must be positive, got " + std::to_string(v);
      return res;
    }
  }
  res.value = std::move(parsed.value);
  return res;
}

inline std::string format_hash(const std::vector<Id>& vals) {
  std::string out;
  for (Id v : vals) {
    out += std::to_string(v);
    out += '#';
  }
  out += vals.empty() ? "##" : "#";
  return out;
}

inline std::string format_plain(const std::vector<Id>& vals) {
  std::string out;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(vals[i]);
  }
  return out;
}

}  // namespace reorder
