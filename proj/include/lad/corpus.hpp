#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lad/text.hpp"

namespace lad {

// Bidirectional word <-> id map over the training corpus, with per-word
// document frequencies. ids[words[i]] == i always holds.
class Vocabulary {
 public:
  int add(const std::string& word);  // returns existing id if present
  std::optional<int> find(const std::string& word) const;
  const std::string& word(int id) const;
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<std::string>& words() const { return words_; }

  std::vector<int> doc_freq;  // per word id, documents containing it
  int total_docs = 0;         // documents with at least one token

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

// A review as an ordered bag of vocabulary ids. A review may legitimately be
// empty after filtering; it is kept so downstream indices stay aligned.
struct Review {
  std::string review_id;
  std::vector<int> tokens;
  std::string raw;
};

struct Corpus {
  std::vector<Review> reviews;
  Vocabulary vocabulary;
  std::string source;

  long long total_tokens() const;
  int documents_with_tokens() const;
};

struct PreprocessConfig {
  StopwordSet stopwords;
  Normalizer normalizer = suffix_stem;
  std::string normalizer_name = "stem";
  int min_doc_freq = 2;
};

struct PreprocessReport {
  int n_documents = 0;
  int n_empty_reviews = 0;              // empty after filtering and pruning
  std::vector<std::string> empty_review_ids;
  int vocab_before_pruning = 0;
  int vocab_after_pruning = 0;
  long long tokens_before_pruning = 0;
  long long tokens_after_pruning = 0;
};

struct RawDocument {
  std::string id;
  std::string text;
};

struct BuildResult {
  Corpus corpus;
  PreprocessReport report;
};

// Runs tokenize -> filter -> normalize per document, builds the vocabulary,
// prunes words with doc_freq < min_doc_freq from both the vocabulary and all
// reviews. Reviews that end up empty are retained and reported. Throws
// DataError when the input is empty or every review becomes empty.
BuildResult build_corpus(const std::vector<RawDocument>& documents,
                         const PreprocessConfig& config);

// Decodes a review back to its token strings.
std::vector<std::string> decode(const Review& review, const Vocabulary& vocabulary);

// Encodes pre-normalized tokens against an existing vocabulary; tokens not
// in the vocabulary are dropped.
std::vector<int> encode(const std::vector<std::string>& tokens, const Vocabulary& vocabulary);

// Full preprocessing of one raw text against an existing vocabulary
// (tokenize -> filter -> normalize -> encode).
std::vector<int> encode_text(const std::string& text, const PreprocessConfig& config,
                             const Vocabulary& vocabulary);

// Input readers. read_lines: one review per line, ids are 1-based line
// numbers. read_delimited: two columns (review_id, text) split on the first
// occurrence of the delimiter.
std::vector<RawDocument> read_lines(const std::filesystem::path& path);
std::vector<RawDocument> read_delimited(const std::filesystem::path& path, char delimiter);

// Versioned JSON serialization:
// {version, source, vocabulary:[words], reviews:[{id, tokens:[int]}]}.
// Document frequencies are recomputed on load.
std::string corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const std::string& json_text);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

std::string report_to_json(const PreprocessReport& report);

}  // namespace lad
