#include "lad/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "lad/common.hpp"
#include "lad/io.hpp"

namespace lad {

namespace {

// Incremental UTF-8 decode; returns the codepoint and advances i. Invalid
// bytes decode to U+FFFD and advance by one so malformed input cannot loop.
char32_t next_codepoint(const std::string& s, std::size_t& i) {
  const auto byte = [&](std::size_t j) { return static_cast<unsigned char>(s[j]); };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + extra >= s.size()) {  // truncated sequence
    ++i;
    return 0xFFFD;
  }
  for (int j = 1; j <= extra; ++j) {
    const unsigned char bj = byte(i + j);
    if ((bj & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (bj & 0x3F);
  }
  i += 1 + extra;
  return cp;
}

bool is_space_cp(char32_t cp) {
  if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v')
    return true;
  if (cp == 0x00A0 || cp == 0x2028 || cp == 0x2029 || cp == 0x3000) return true;
  return cp >= 0x2000 && cp <= 0x200B;
}

bool is_punct_cp(char32_t cp) {
  if (cp < 0x80)
    return std::ispunct(static_cast<int>(cp)) != 0;
  if (cp >= 0x00A1 && cp <= 0x00BF) return true;   // Latin-1 punctuation/symbols
  if (cp == 0x00D7 || cp == 0x00F7) return true;
  if (cp >= 0x2010 && cp <= 0x205E) return true;   // general punctuation
  if (cp >= 0x3001 && cp <= 0x303F) return true;   // CJK punctuation
  if (cp >= 0xFF01 && cp <= 0xFF0F) return true;   // fullwidth forms
  if (cp >= 0xFF1A && cp <= 0xFF20) return true;
  if (cp >= 0xFF3B && cp <= 0xFF40) return true;
  if (cp >= 0xFF5B && cp <= 0xFF65) return true;
  return false;
}

bool is_emoji_cp(char32_t cp) {
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return true;  // emoji & pictographs
  if (cp >= 0x2600 && cp <= 0x27BF) return true;    // misc symbols, dingbats
  if (cp >= 0x2300 && cp <= 0x23FF) return true;    // technical (watch, etc.)
  if (cp >= 0xFE00 && cp <= 0xFE0F) return true;    // variation selectors
  if (cp == 0x200D || cp == 0x20E3) return true;    // ZWJ, combining keycap
  if (cp >= 0x2B00 && cp <= 0x2BFF) return true;
  return cp == 0x2139 || cp == 0x24C2 || (cp >= 0x2190 && cp <= 0x21FF);
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool has_ascii_vowel(const std::string& s, std::size_t end) {
  for (std::size_t i = 0; i < end && i < s.size(); ++i) {
    const char c = s[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return true;
  }
  return false;
}

bool ends_with(const std::string& s, const char* suffix) {
  const std::size_t n = std::char_traits<char>::length(suffix);
  return s.size() >= n && s.compare(s.size() - n, n, suffix) == 0;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = next_codepoint(text, i);
    if (is_space_cp(cp) || is_punct_cp(cp) || is_emoji_cp(cp) || cp == 0xFFFD) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    if (cp < 0x80) {
      current += static_cast<char>(std::tolower(static_cast<int>(cp)));
    } else {
      append_utf8(current, cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> filter_tokens(const std::vector<std::string>& tokens,
                                       const StopwordSet& stopwords) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& token : tokens) {
    bool letters_only = !token.empty();
    for (char c : token) {
      if (c < 'a' || c > 'z') {  // catches digits and any non-ASCII byte
        letters_only = false;
        break;
      }
    }
    if (!letters_only) continue;
    if (stopwords.count(token)) continue;
    kept.push_back(token);
  }
  return kept;
}

std::string suffix_stem(const std::string& token) {
  std::string w = token;
  // plural suffixes
  if (ends_with(w, "sses")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes") ||
             ends_with(w, "zes")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ies") && w.size() > 4) {
    w.erase(w.size() - 3);
    w += 'y';
  } else if (ends_with(w, "ss") || ends_with(w, "ous") || ends_with(w, "is")) {
    // keep: glass, famous, basis
  } else if (ends_with(w, "s") && w.size() >= 4) {
    w.pop_back();
  }
  // -ed / -ing suffixes; only strip when a vowel remains in the stem
  if (ends_with(w, "eed")) {
    if (w.size() >= 6) w.pop_back();
  } else if (ends_with(w, "ied") && w.size() >= 5) {
    w.erase(w.size() - 3);
    w += 'y';
  } else if (ends_with(w, "ed") && w.size() >= 5 && has_ascii_vowel(w, w.size() - 2)) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ing") && w.size() >= 6 && has_ascii_vowel(w, w.size() - 3)) {
    w.erase(w.size() - 3);
  }
  return w;
}

std::string identity_normalize(const std::string& token) { return token; }

Normalizer make_normalizer(const std::string& name) {
  if (name == "stem") return suffix_stem;
  if (name == "identity") return identity_normalize;
  throw DataError("unknown normalizer: " + name + " (expected 'stem' or 'identity')");
}

std::vector<std::string> normalize(const std::vector<std::string>& tokens,
                                   const Normalizer& normalizer) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) out.push_back(normalizer(token));
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  StopwordSet set;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    std::string word = line.substr(begin, end - begin + 1);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    set.insert(std::move(word));
  }
  return set;
}

}  // namespace lad
