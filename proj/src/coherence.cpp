#include "lad/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "lad/common.hpp"
#include "lad/io.hpp"

namespace lad {

namespace {

// Sorted doc-id postings for each requested word, built in one corpus pass.
std::unordered_map<int, std::vector<int>> build_postings(const Corpus& corpus,
                                                         const std::vector<int>& word_ids) {
  std::unordered_map<int, std::vector<int>> postings;
  for (int w : word_ids) postings.emplace(w, std::vector<int>{});
  for (std::size_t d = 0; d < corpus.reviews.size(); ++d) {
    for (int w : corpus.reviews[d].tokens) {
      auto it = postings.find(w);
      if (it == postings.end()) continue;
      if (it->second.empty() || it->second.back() != static_cast<int>(d))
        it->second.push_back(static_cast<int>(d));
    }
  }
  return postings;
}

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

}  // namespace

CoherenceReport umass_coherence(const AspectModel& model, const Corpus& corpus, int top_m) {
  if (top_m < 2) throw DataError("umass_coherence: top_m must be >= 2");
  internal_check(model.V() == corpus.vocabulary.size(),
                 "umass_coherence: model and corpus vocabularies differ in size");

  CoherenceReport report;
  report.K = model.K;
  report.top_m = top_m;
  report.per_topic.resize(model.K);

  // Top words per topic, then postings for their union.
  std::vector<std::vector<int>> topic_words(model.K);
  std::vector<int> all_words;
  for (int k = 0; k < model.K; ++k) {
    for (const auto& wp : top_words(model, k, top_m)) {
      topic_words[k].push_back(wp.word);
      all_words.push_back(wp.word);
    }
  }
  std::sort(all_words.begin(), all_words.end());
  all_words.erase(std::unique(all_words.begin(), all_words.end()), all_words.end());
  const auto postings = build_postings(corpus, all_words);

  double total = 0.0;
  for (int k = 0; k < model.K; ++k) {
    const auto& words = topic_words[k];
    double score = 0.0;
    for (std::size_t m = 1; m < words.size(); ++m) {
      const auto& docs_m = postings.at(words[m]);
      for (std::size_t l = 0; l < m; ++l) {
        const auto& docs_l = postings.at(words[l]);
        const int d_l = static_cast<int>(docs_l.size());
        internal_check(d_l > 0, "umass_coherence: top word with zero document frequency");
        const int co = intersection_size(docs_m, docs_l);
        const double summand = std::log((co + 1.0) / d_l);
        // co <= D(v_l), so each summand is at most log(1 + 1/D(v_l))
        internal_check(summand <= std::log(1.0 + 1.0 / d_l) + 1e-12,
                       "umass_coherence: summand exceeds its bound");
        score += summand;
      }
    }
    report.per_topic[k] = score;
    total += score;
  }
  report.mean = total / model.K;
  return report;
}

std::vector<SweepEntry> sweep_k(const Corpus& corpus, const std::vector<int>& k_values,
                                const SweepConfig& config) {
  if (k_values.empty()) throw DataError("sweep_k: no K values given");
  for (int k : k_values) {
    if (k < 2) throw DataError("sweep_k: every K must be >= 2");
  }
  std::vector<SweepEntry> entries;
  entries.reserve(k_values.size());
  for (int k : k_values) {
    SweepEntry entry;
    entry.K = k;
    try {
      TrainConfig train_config = config.train;
      train_config.K = k;
      if (config.train.alpha < 0.0) train_config.alpha = -1.0;  // keep the 5.0/K rule per K
      train_config.seed = derive_seed(config.train.seed, static_cast<std::uint64_t>(k));
      const AspectModel model = train(corpus, train_config);
      const CoherenceReport report = umass_coherence(model, corpus, config.top_m);
      entry.mean_coherence = report.mean;
      const auto [mn, mx] = std::minmax_element(report.per_topic.begin(), report.per_topic.end());
      entry.per_topic_min = *mn;
      entry.per_topic_max = *mx;
      entry.ok = true;
    } catch (const std::exception& e) {
      entry.ok = false;
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string sweep_csv(const std::vector<SweepEntry>& entries) {
  std::ostringstream out;
  out << "K,mean_coherence,per_topic_min,per_topic_max\n";
  for (const auto& e : entries) {
    if (e.ok) {
      out << e.K << ',' << format_double(e.mean_coherence) << ','
          << format_double(e.per_topic_min) << ',' << format_double(e.per_topic_max) << '\n';
    } else {
      out << e.K << ",error," << csv_escape(e.error) << ",\n";
    }
  }
  return out.str();
}

}  // namespace lad
