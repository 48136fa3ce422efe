#include "pixi/content/text.hpp"

#include <cstdint>

namespace pixi::content {

namespace {

struct CodePoint {
  char32_t value = 0;
  std::size_t offset = 0;
  std::size_t length = 1;
  bool valid = true;
};

// Decodes one UTF-8 sequence at `pos`. Malformed input yields a single
// invalid byte so callers can copy it through untouched.
CodePoint decode_at(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  CodePoint cp{b0, pos, 1, true};
  if (b0 < 0x80) return cp;

  std::size_t len = 0;
  char32_t value = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    value = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    value = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    value = b0 & 0x07;
  } else {
    cp.valid = false;
    return cp;
  }
  if (pos + len > s.size()) {
    cp.valid = false;
    return cp;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      cp.valid = false;
      return cp;
    }
    value = (value << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
  if (value < kMinForLength[len] || value > 0x10FFFF || (value >= 0xD800 && value <= 0xDFFF)) {
    cp.valid = false;
    return cp;
  }
  cp.value = value;
  cp.length = len;
  return cp;
}

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) {
    auto cp = decode_at(s, pos);
    pos += cp.length;
    out.push_back(cp);
  }
  return out;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

bool is_punctuation(const CodePoint& cp) {
  if (!cp.valid) return false;
  const char32_t c = cp.value;
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0x00A1: case 0x00A7: case 0x00AB: case 0x00B6: case 0x00B7: case 0x00BB:
    case 0x00BF: case 0x037E: case 0x0387:
      return true;
    default:
      break;
  }
  // General Punctuation, Supplemental Punctuation, CJK Symbols and Punctuation,
  // fullwidth ASCII punctuation.
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x2E00 && c <= 0x2E7F) || (c >= 0x3001 && c <= 0x3003) ||
         (c >= 0x3008 && c <= 0x3011) || (c >= 0xFF01 && c <= 0xFF0F) ||
         (c >= 0xFF1A && c <= 0xFF20);
}

// Appends the folded form of `c`. Covers ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic; everything else maps to itself.
void append_folded(std::string& out, char32_t c) {
  if (c >= 'A' && c <= 'Z') {
    out.push_back(static_cast<char>(c + 0x20));
    return;
  }
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
    return;
  }
  if (c == 0x00DF) {  // sharp s folds to "ss"
    out += "ss";
    return;
  }
  if (c == 0x00B5) c = 0x03BC;
  else if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) c += 0x20;
  else if (c >= 0x0100 && c <= 0x012F && (c % 2 == 0)) c += 1;
  else if (c >= 0x0132 && c <= 0x0137 && (c % 2 == 0)) c += 1;
  else if (c >= 0x0139 && c <= 0x0148 && (c % 2 == 1)) c += 1;
  else if (c >= 0x014A && c <= 0x0177 && (c % 2 == 0)) c += 1;
  else if (c == 0x0178) c = 0x00FF;
  else if (c >= 0x0179 && c <= 0x017E && (c % 2 == 1)) c += 1;
  else if (c == 0x017F) c = 's';
  else if (c >= 0x0391 && c <= 0x03AB && c != 0x03A2) c += 0x20;
  else if (c == 0x0386) c = 0x03AC;
  else if (c >= 0x0388 && c <= 0x038A) c += 0x25;
  else if (c == 0x038C) c = 0x03CC;
  else if (c == 0x038E || c == 0x038F) c += 0x3F;
  else if (c == 0x03C2) c = 0x03C3;
  else if (c >= 0x0400 && c <= 0x040F) c += 0x50;
  else if (c >= 0x0410 && c <= 0x042F) c += 0x20;
  append_utf8(out, c);
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_ascii_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !is_ascii_space(text[pos])) ++pos;
    if (pos > start) words.emplace_back(text.substr(start, pos - start));
  }
  return words;
}

std::string strip_punctuation(std::string_view raw) {
  const auto cps = decode(raw);
  std::size_t first = 0;
  std::size_t last = cps.size();
  while (first < last && is_punctuation(cps[first])) ++first;
  while (last > first && is_punctuation(cps[last - 1])) --last;
  if (first == last) return {};
  const std::size_t begin = cps[first].offset;
  const std::size_t end = cps[last - 1].offset + cps[last - 1].length;
  return std::string(raw.substr(begin, end - begin));
}

std::string remove_punctuation(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (const auto& cp : decode(raw)) {
    if (!is_punctuation(cp)) out.append(raw.substr(cp.offset, cp.length));
  }
  return out;
}

std::string case_fold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const auto& cp : decode(text)) {
    if (cp.valid) {
      append_folded(out, cp.value);
    } else {
      out.append(text.substr(cp.offset, cp.length));
    }
  }
  return out;
}

std::string normalize_word(std::string_view raw) { return case_fold(strip_punctuation(raw)); }

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < text.size(); ++n) pos += decode_at(text, pos).length;
  return n;
}

}  // namespace pixi::content
