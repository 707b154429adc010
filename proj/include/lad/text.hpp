#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

namespace lad {

using StopwordSet = std::unordered_set<std::string>;

// Splits arbitrary UTF-8 text into lowercased tokens. Whitespace and
// punctuation act as boundaries; punctuation and emoji codepoints are
// stripped. Digits and non-ASCII letters survive tokenization (they are
// handled by filter_tokens).
std::vector<std::string> tokenize(const std::string& text);

// Drops tokens that contain a digit, contain anything outside ASCII letters,
// or appear in the stopword set. The ASCII-letter rule is a deterministic
// stand-in for "non-English word" removal.
std::vector<std::string> filter_tokens(const std::vector<std::string>& tokens,
                                       const StopwordSet& stopwords);

// A normalizer maps one filtered token to its normalized form.
using Normalizer = std::function<std::string(const std::string&)>;

// Default normalizer: a small deterministic suffix stripper covering plural
// and -ed/-ing inflections, e.g. "tables" -> "table", "advertised" ->
// "advertis". Rule set (first match per group wins):
//   plurals:  -sses -> -ss; -ches/-shes/-xes/-zes -> drop "es";
//             -ies -> -y (len > 4); keep -ss/-ous/-is;
//             drop final -s (len >= 4)
//   verbs:    -eed -> -ee (len >= 6); -ied -> -y (len >= 5);
//             drop -ed (len >= 5); drop -ing (len >= 6)
// The -ed/-ing rules only fire when the remaining stem contains a vowel.
std::string suffix_stem(const std::string& token);

std::string identity_normalize(const std::string& token);

// Resolves a normalizer by name: "stem" (default) or "identity".
// Throws DataError for unknown names.
Normalizer make_normalizer(const std::string& name);

std::vector<std::string> normalize(const std::vector<std::string>& tokens,
                                   const Normalizer& normalizer);

// Loads a stopword file: UTF-8, one token per line, '#' starts a comment,
// blank lines ignored. Entries are lowercased.
StopwordSet load_stopwords(const std::filesystem::path& path);

}  // namespace lad
