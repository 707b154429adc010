#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lad/corpus.hpp"

namespace lad {

// Word-to-concept DAG with concept frequencies, the source of information
// content for Resnik similarity. Concepts may have several parents. Loaded
// frequencies get Laplace +1 smoothing so no concept has zero mass;
// cumulative frequencies count each descendant exactly once.
class Taxonomy {
 public:
  // TSV with three record kinds:
  //   C <tab> concept_id <tab> freq
  //   E <tab> child_id   <tab> parent_id
  //   W <tab> word       <tab> concept_id
  // '#' starts a comment. Validates acyclicity and referential integrity.
  static Taxonomy load(const std::filesystem::path& path);
  static Taxonomy parse(const std::string& tsv_text);

  // Programmatic construction (fixtures, tests). finalize() applies the +1
  // smoothing, checks the DAG and computes cumulative frequencies.
  void add_concept(const std::string& concept_id, long long freq);
  void add_edge(const std::string& child_id, const std::string& parent_id);
  void add_word(const std::string& word, const std::string& concept_id);
  void finalize();

  int concept_index(const std::string& concept_id) const;  // -1 when absent
  const std::string& concept_id(int index) const { return concept_ids_[index]; }
  int n_concepts() const { return static_cast<int>(concept_ids_.size()); }
  bool has_word(const std::string& word) const;
  const std::vector<int>& senses(const std::string& word) const;
  const std::vector<int>& parents(int c) const { return parents_[c]; }
  double cumulative_freq(int c) const { return cumulative_freq_[c]; }
  double total() const { return total_; }

  // IC(c) = -ln(cumulative_freq(c) / total). Roots that cover all mass have
  // IC 0. Throws DataError for unknown concepts.
  double information_content(int c) const;
  double information_content(const std::string& concept_id) const;

  // Ancestor set of a concept, including the concept itself.
  const std::vector<int>& ancestors(int c) const { return ancestors_[c]; }

 private:
  std::vector<std::string> concept_ids_;
  std::unordered_map<std::string, int> concept_index_;
  std::vector<long long> freq_;                 // smoothed at finalize()
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::unordered_map<std::string, std::vector<int>> word_senses_;
  std::vector<double> cumulative_freq_;
  std::vector<std::vector<int>> ancestors_;     // sorted, includes self
  double total_ = 0.0;
  bool finalized_ = false;
};

struct SimilarityScore {
  double value = 0.0;             // information content in nats, >= 0
  std::optional<int> lcs;         // maximally informative common subsumer
};

// Resnik similarity: the maximum, over sense pairs of the two words, of the
// information content of their maximally informative common subsumer.
// Unknown words or a missing common subsumer give value 0 and no lcs.
SimilarityScore resnik(const Taxonomy& taxonomy, const std::string& w1, const std::string& w2);

struct NearestWord {
  std::string word;
  SimilarityScore score;
};

// The vocabulary word most Resnik-similar to the target; ties break
// lexicographically. Returns nullopt when the best score is 0 (the target
// has no usable taxonomy connection to the vocabulary).
std::optional<NearestWord> nearest_in_vocab(const Taxonomy& taxonomy, const std::string& target,
                                            const Vocabulary& vocabulary);

}  // namespace lad
