#include "lad/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lad/common.hpp"
#include "lad/io.hpp"

namespace lad {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

Taxonomy Taxonomy::parse(const std::string& tsv_text) {
  Taxonomy tax;
  std::istringstream in(tsv_text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line);
    const auto fail = [&](const std::string& why) {
      throw DataError("taxonomy line " + std::to_string(lineno) + ": " + why);
    };
    if (fields.size() != 3) fail("expected 3 tab-separated fields");
    if (fields[0] == "C") {
      long long freq = 0;
      try {
        freq = std::stoll(fields[2]);
      } catch (const std::exception&) {
        fail("bad frequency: " + fields[2]);
      }
      if (freq < 0) fail("negative frequency");
      tax.add_concept(fields[1], freq);
    } else if (fields[0] == "E") {
      tax.add_edge(fields[1], fields[2]);
    } else if (fields[0] == "W") {
      tax.add_word(fields[1], fields[2]);
    } else {
      fail("unknown record kind '" + fields[0] + "' (expected C, E or W)");
    }
  }
  tax.finalize();
  return tax;
}

void Taxonomy::add_concept(const std::string& concept_id, long long freq) {
  internal_check(!finalized_, "Taxonomy: add_concept after finalize");
  if (concept_index_.count(concept_id))
    throw DataError("taxonomy: duplicate concept: " + concept_id);
  concept_index_.emplace(concept_id, static_cast<int>(concept_ids_.size()));
  concept_ids_.push_back(concept_id);
  freq_.push_back(freq);
  parents_.emplace_back();
  children_.emplace_back();
}

void Taxonomy::add_edge(const std::string& child_id, const std::string& parent_id) {
  internal_check(!finalized_, "Taxonomy: add_edge after finalize");
  const int child = concept_index(child_id);
  const int parent = concept_index(parent_id);
  if (child < 0) throw DataError("taxonomy edge: unknown child concept: " + child_id);
  if (parent < 0) throw DataError("taxonomy edge: unknown parent concept: " + parent_id);
  if (child == parent) throw DataError("taxonomy edge: self-loop on " + child_id);
  parents_[child].push_back(parent);
  children_[parent].push_back(child);
}

void Taxonomy::add_word(const std::string& word, const std::string& concept_id) {
  internal_check(!finalized_, "Taxonomy: add_word after finalize");
  const int c = concept_index(concept_id);
  if (c < 0) throw DataError("taxonomy word '" + word + "': unknown concept: " + concept_id);
  word_senses_[word].push_back(c);
}

void Taxonomy::finalize() {
  internal_check(!finalized_, "Taxonomy: finalize called twice");
  const int n = n_concepts();
  if (n == 0) throw DataError("taxonomy: no concepts");

  // Laplace smoothing: every concept gets +1 so IC is always finite.
  for (auto& f : freq_) f += 1;

  // Kahn topological order from the leaves up; it doubles as the cycle
  // check, and guarantees each concept is seen after all its descendants.
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> queue;
  std::vector<int> in_remaining(n);
  for (int c = 0; c < n; ++c) {
    in_remaining[c] = static_cast<int>(children_[c].size());
    if (in_remaining[c] == 0) queue.push_back(c);
  }
  std::vector<double> cumulative(n, 0.0);
  // In a DAG each descendant must count exactly once even when reachable
  // through several children, hence explicit descendant sets.
  std::vector<std::vector<int>> descendants(n);  // sorted, includes self
  while (!queue.empty()) {
    const int c = queue.back();
    queue.pop_back();
    std::vector<int> desc{c};
    for (int child : children_[c]) {
      std::vector<int> merged;
      std::set_union(desc.begin(), desc.end(), descendants[child].begin(),
                     descendants[child].end(), std::back_inserter(merged));
      desc = std::move(merged);
    }
    descendants[c] = std::move(desc);
    double sum = 0.0;
    for (int d : descendants[c]) sum += static_cast<double>(freq_[d]);
    cumulative[c] = sum;
    order.push_back(c);
    for (int parent : parents_[c]) {
      if (--in_remaining[parent] == 0) queue.push_back(parent);
    }
  }
  if (static_cast<int>(order.size()) != n)
    throw DataError("taxonomy: cycle detected among concepts");
  cumulative_freq_ = std::move(cumulative);

  total_ = 0.0;
  for (int c = 0; c < n; ++c) {
    if (parents_[c].empty()) total_ += cumulative_freq_[c];
  }
  internal_check(total_ > 0.0, "taxonomy: zero total mass");

  // Ancestor sets (including self) for subsumer queries; topological order
  // reversed gives parents before children.
  ancestors_.assign(n, {});
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int c = *it;
    std::vector<int> anc{c};
    for (int parent : parents_[c]) {
      std::vector<int> merged;
      std::set_union(anc.begin(), anc.end(), ancestors_[parent].begin(),
                     ancestors_[parent].end(), std::back_inserter(merged));
      anc = std::move(merged);
    }
    ancestors_[c] = std::move(anc);
  }

  for (auto& [word, senses] : word_senses_) {
    std::sort(senses.begin(), senses.end());
    senses.erase(std::unique(senses.begin(), senses.end()), senses.end());
  }
  finalized_ = true;
}

int Taxonomy::concept_index(const std::string& concept_id) const {
  auto it = concept_index_.find(concept_id);
  return it == concept_index_.end() ? -1 : it->second;
}

bool Taxonomy::has_word(const std::string& word) const { return word_senses_.count(word) > 0; }

const std::vector<int>& Taxonomy::senses(const std::string& word) const {
  static const std::vector<int> kEmpty;
  auto it = word_senses_.find(word);
  return it == word_senses_.end() ? kEmpty : it->second;
}

double Taxonomy::information_content(int c) const {
  internal_check(finalized_, "taxonomy: not finalized");
  if (c < 0 || c >= n_concepts())
    throw DataError("taxonomy: unknown concept index: " + std::to_string(c));
  return -std::log(cumulative_freq_[c] / total_);
}

double Taxonomy::information_content(const std::string& concept_id) const {
  const int c = concept_index(concept_id);
  if (c < 0) throw DataError("taxonomy: unknown concept: " + concept_id);
  return information_content(c);
}

SimilarityScore resnik(const Taxonomy& taxonomy, const std::string& w1, const std::string& w2) {
  SimilarityScore best;  // value 0, no lcs
  const auto& senses1 = taxonomy.senses(w1);
  const auto& senses2 = taxonomy.senses(w2);
  for (int c1 : senses1) {
    const auto& anc1 = taxonomy.ancestors(c1);
    for (int c2 : senses2) {
      const auto& anc2 = taxonomy.ancestors(c2);
      // both ancestor lists are sorted
      auto i1 = anc1.begin();
      auto i2 = anc2.begin();
      while (i1 != anc1.end() && i2 != anc2.end()) {
        if (*i1 < *i2) {
          ++i1;
        } else if (*i2 < *i1) {
          ++i2;
        } else {
          const double ic = taxonomy.information_content(*i1);
          if (!best.lcs || ic > best.value) {
            best.value = ic;
            best.lcs = *i1;
          }
          ++i1;
          ++i2;
        }
      }
    }
  }
  return best;
}

std::optional<NearestWord> nearest_in_vocab(const Taxonomy& taxonomy, const std::string& target,
                                            const Vocabulary& vocabulary) {
  if (vocabulary.size() == 0) throw DataError("nearest_in_vocab: empty vocabulary");
  std::optional<NearestWord> best;
  for (const auto& word : vocabulary.words()) {
    const SimilarityScore score = resnik(taxonomy, target, word);
    if (score.value <= 0.0) continue;
    if (!best || score.value > best->score.value ||
        (score.value == best->score.value && word < best->word)) {
      best = NearestWord{word, score};
    }
  }
  return best;
}

}  // namespace lad
