#include "lad/corpus.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "lad/common.hpp"
#include "lad/io.hpp"
#include "json.hpp"

namespace lad {

using nlohmann::ordered_json;

int Vocabulary::add(const std::string& word) {
  auto it = ids_.find(word);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  words_.push_back(word);
  ids_.emplace(word, id);
  doc_freq.push_back(0);
  return id;
}

std::optional<int> Vocabulary::find(const std::string& word) const {
  auto it = ids_.find(word);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::word(int id) const {
  internal_check(id >= 0 && id < size(), "Vocabulary::word: id out of range");
  return words_[static_cast<std::size_t>(id)];
}

long long Corpus::total_tokens() const {
  long long n = 0;
  for (const auto& r : reviews) n += static_cast<long long>(r.tokens.size());
  return n;
}

int Corpus::documents_with_tokens() const {
  int n = 0;
  for (const auto& r : reviews) n += r.tokens.empty() ? 0 : 1;
  return n;
}

namespace {

// Recomputes doc_freq and total_docs from the encoded reviews.
void recount_doc_freq(Corpus& corpus) {
  auto& vocab = corpus.vocabulary;
  vocab.doc_freq.assign(vocab.size(), 0);
  vocab.total_docs = 0;
  std::vector<int> seen(vocab.size(), -1);
  for (std::size_t d = 0; d < corpus.reviews.size(); ++d) {
    const auto& tokens = corpus.reviews[d].tokens;
    if (!tokens.empty()) ++vocab.total_docs;
    for (int id : tokens) {
      if (seen[id] != static_cast<int>(d)) {
        seen[id] = static_cast<int>(d);
        ++vocab.doc_freq[id];
      }
    }
  }
}

}  // namespace

BuildResult build_corpus(const std::vector<RawDocument>& documents,
                         const PreprocessConfig& config) {
  if (documents.empty()) throw DataError("build_corpus: no input documents");
  if (config.min_doc_freq < 1) throw DataError("build_corpus: min_doc_freq must be >= 1");

  BuildResult result;
  result.report.n_documents = static_cast<int>(documents.size());

  // First pass: full pipeline per document over a provisional vocabulary.
  Vocabulary provisional;
  std::vector<std::vector<int>> encoded(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    auto tokens = normalize(filter_tokens(tokenize(documents[d].text), config.stopwords),
                            config.normalizer);
    auto& ids = encoded[d];
    ids.reserve(tokens.size());
    for (const auto& token : tokens) {
      if (token.empty()) continue;  // a custom normalizer may erase a token
      ids.push_back(provisional.add(token));
    }
    result.report.tokens_before_pruning += static_cast<long long>(ids.size());
  }
  std::vector<int> df(provisional.size(), 0);
  {
    std::vector<int> seen(provisional.size(), -1);
    for (std::size_t d = 0; d < encoded.size(); ++d) {
      for (int id : encoded[d]) {
        if (seen[id] != static_cast<int>(d)) {
          seen[id] = static_cast<int>(d);
          ++df[id];
        }
      }
    }
  }
  result.report.vocab_before_pruning = provisional.size();

  // Second pass: drop words below min_doc_freq, re-encode densely.
  std::vector<int> remap(provisional.size(), -1);
  Corpus& corpus = result.corpus;
  for (int id = 0; id < provisional.size(); ++id) {
    if (df[id] >= config.min_doc_freq) remap[id] = corpus.vocabulary.add(provisional.word(id));
  }
  result.report.vocab_after_pruning = corpus.vocabulary.size();

  corpus.reviews.reserve(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    Review review;
    review.review_id = documents[d].id;
    review.raw = documents[d].text;
    for (int id : encoded[d]) {
      if (remap[id] >= 0) review.tokens.push_back(remap[id]);
    }
    result.report.tokens_after_pruning += static_cast<long long>(review.tokens.size());
    if (review.tokens.empty()) {
      ++result.report.n_empty_reviews;
      result.report.empty_review_ids.push_back(review.review_id);
    }
    corpus.reviews.push_back(std::move(review));
  }
  if (result.report.n_empty_reviews == result.report.n_documents)
    throw DataError("build_corpus: every review became empty after filtering");

  recount_doc_freq(corpus);
  return result;
}

std::vector<std::string> decode(const Review& review, const Vocabulary& vocabulary) {
  std::vector<std::string> out;
  out.reserve(review.tokens.size());
  for (int id : review.tokens) out.push_back(vocabulary.word(id));
  return out;
}

std::vector<int> encode(const std::vector<std::string>& tokens, const Vocabulary& vocabulary) {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (auto id = vocabulary.find(token)) ids.push_back(*id);
  }
  return ids;
}

std::vector<int> encode_text(const std::string& text, const PreprocessConfig& config,
                             const Vocabulary& vocabulary) {
  return encode(normalize(filter_tokens(tokenize(text), config.stopwords), config.normalizer),
                vocabulary);
}

std::vector<RawDocument> read_lines(const std::filesystem::path& path) {
  const std::string content = read_file(path);
  std::vector<RawDocument> docs;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    docs.push_back({std::to_string(lineno), line});
  }
  return docs;
}

std::vector<RawDocument> read_delimited(const std::filesystem::path& path, char delimiter) {
  const std::string content = read_file(path);
  std::vector<RawDocument> docs;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto pos = line.find(delimiter);
    if (pos == std::string::npos)
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected delimited columns (review_id, text)");
    docs.push_back({line.substr(0, pos), line.substr(pos + 1)});
  }
  return docs;
}

std::string corpus_to_json(const Corpus& corpus) {
  ordered_json j;
  j["version"] = 1;
  j["source"] = corpus.source;
  j["vocabulary"] = corpus.vocabulary.words();
  ordered_json reviews = ordered_json::array();
  for (const auto& r : corpus.reviews) {
    ordered_json jr;
    jr["id"] = r.review_id;
    jr["tokens"] = r.tokens;
    reviews.push_back(std::move(jr));
  }
  j["reviews"] = std::move(reviews);
  return j.dump(2) + "\n";
}

Corpus corpus_from_json(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corpus JSON parse error: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != 1) throw DataError("unsupported corpus file version");
    Corpus corpus;
    corpus.source = j.value("source", "");
    for (const auto& w : j.at("vocabulary")) corpus.vocabulary.add(w.get<std::string>());
    for (const auto& jr : j.at("reviews")) {
      Review r;
      r.review_id = jr.at("id").get<std::string>();
      for (const auto& t : jr.at("tokens")) {
        const int id = t.get<int>();
        if (id < 0 || id >= corpus.vocabulary.size())
          throw DataError("corpus JSON: token id out of range: " + std::to_string(id));
        r.tokens.push_back(id);
      }
      corpus.reviews.push_back(std::move(r));
    }
    recount_doc_freq(corpus);
    return corpus;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("corpus JSON: missing or mistyped field: ") + e.what());
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  atomic_write(path, corpus_to_json(corpus));
}

Corpus load_corpus(const std::filesystem::path& path) {
  return corpus_from_json(read_file(path));
}

std::string report_to_json(const PreprocessReport& report) {
  ordered_json j;
  j["n_documents"] = report.n_documents;
  j["n_empty_reviews"] = report.n_empty_reviews;
  j["empty_review_ids"] = report.empty_review_ids;
  j["vocab_before_pruning"] = report.vocab_before_pruning;
  j["vocab_after_pruning"] = report.vocab_after_pruning;
  j["tokens_before_pruning"] = report.tokens_before_pruning;
  j["tokens_after_pruning"] = report.tokens_after_pruning;
  return j.dump(2) + "\n";
}

}  // namespace lad
