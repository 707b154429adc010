#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "lad/corpus.hpp"
#include "lad/sampler.hpp"

namespace lad::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0; i < 10000; ++i) {
      auto candidate = base / ("lad_" + tag + "_" + std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("TempDir: could not create a scratch directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Hand-built corpus over a synthetic vocabulary w0..w{V-1}.
inline Corpus make_corpus(const std::vector<std::vector<int>>& docs, int V) {
  Corpus corpus;
  corpus.source = "fixture";
  for (int w = 0; w < V; ++w) corpus.vocabulary.add("w" + std::to_string(w));
  corpus.vocabulary.doc_freq.assign(V, 0);
  std::vector<int> seen(V, -1);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    Review r;
    r.review_id = std::to_string(d);
    r.tokens = docs[d];
    if (!r.tokens.empty()) ++corpus.vocabulary.total_docs;
    for (int w : r.tokens) {
      if (seen[w] != static_cast<int>(d)) {
        seen[w] = static_cast<int>(d);
        ++corpus.vocabulary.doc_freq[w];
      }
    }
    corpus.reviews.push_back(std::move(r));
  }
  return corpus;
}

// Independent route to the collapsed joint P(w, z): the sequential Polya-urn
// factorization. Every token, in corpus order, contributes
//   (n_dk_so_far + alpha) / (n_d_so_far + K*alpha)
// * (n_kw_so_far + beta)  / (n_k_so_far + V*beta)
// with document counts local to the document and word counts global. No
// lgamma anywhere, so it cross-checks the gamma-function implementation.
inline double urn_log_joint(const Corpus& corpus, const std::vector<std::vector<int>>& z,
                            int K, double alpha, double beta) {
  const int V = corpus.vocabulary.size();
  std::vector<int> n_kw(static_cast<std::size_t>(K) * V, 0);
  std::vector<int> n_k(K, 0);
  double lp = 0.0;
  for (std::size_t d = 0; d < corpus.reviews.size(); ++d) {
    std::vector<int> n_dk(K, 0);
    int n_d = 0;
    const auto& tokens = corpus.reviews[d].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const int k = z[d][i];
      const int w = tokens[i];
      lp += std::log((n_dk[k] + alpha) / (n_d + K * alpha));
      lp += std::log((n_kw[static_cast<std::size_t>(k) * V + w] + beta) / (n_k[k] + V * beta));
      ++n_dk[k];
      ++n_d;
      ++n_kw[static_cast<std::size_t>(k) * V + w];
      ++n_k[k];
    }
  }
  return lp;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

// Greedily pairs recovered phi rows with planted rows by smallest total
// variation; returns the matched distance per planted row.
inline std::vector<double> greedy_tv_match(const std::vector<std::vector<double>>& recovered,
                                           const std::vector<std::vector<double>>& planted) {
  const std::size_t K = planted.size();
  std::vector<bool> used_r(K, false);
  std::vector<bool> used_p(K, false);
  std::vector<double> matched(K, 0.0);
  for (std::size_t step = 0; step < K; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_r = 0;
    std::size_t best_p = 0;
    for (std::size_t r = 0; r < K; ++r) {
      if (used_r[r]) continue;
      for (std::size_t p = 0; p < K; ++p) {
        if (used_p[p]) continue;
        const double tv = total_variation(recovered[r], planted[p]);
        if (tv < best) {
          best = tv;
          best_r = r;
          best_p = p;
        }
      }
    }
    used_r[best_r] = true;
    used_p[best_p] = true;
    matched[best_p] = best;
  }
  return matched;
}

inline std::vector<std::vector<double>> phi_rows(const AspectModel& model) {
  std::vector<std::vector<double>> rows;
  rows.reserve(model.K);
  for (int k = 0; k < model.K; ++k) rows.push_back(phi_row(model, k));
  return rows;
}

// Empirical per-token assignment frequencies from a Gibbs chain:
// `sweeps` accumulation sweeps after `burn_in` initial ones.
inline std::vector<double> chain_token_marginals(const Corpus& corpus, const TrainConfig& config,
                                                 int sweeps, int burn_in) {
  GibbsSampler sampler(corpus, config);
  for (int t = 0; t < burn_in; ++t) sampler.sweep();
  const auto n_tokens = static_cast<std::size_t>(corpus.total_tokens());
  std::vector<double> counts(n_tokens * config.K, 0.0);
  for (int t = 0; t < sweeps; ++t) {
    sampler.sweep();
    std::size_t flat = 0;
    for (const auto& doc_z : sampler.state().z) {
      for (int k : doc_z) {
        counts[flat * config.K + k] += 1.0;
        ++flat;
      }
    }
  }
  for (double& c : counts) c /= sweeps;
  return counts;
}

inline std::filesystem::path test_data_dir() {
#ifdef LAD_TEST_DATA_DIR
  return std::filesystem::path(LAD_TEST_DATA_DIR);
#else
  return std::filesystem::current_path() / "data";
#endif
}

}  // namespace lad::testing
