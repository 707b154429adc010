#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lad/corpus.hpp"
#include "lad/rng.hpp"

namespace lad {

// Trained aspect model. n_kw / n_k hold topic-word and topic-total counts;
// they are doubles because training averages the counts accumulated from
// several post-burn-in Gibbs samples. phi is a derived view, never stored.
struct AspectModel {
  int K = 0;
  double alpha = 0.0;  // symmetric document-aspect prior
  double beta = 0.0;   // symmetric aspect-word prior
  std::uint64_t seed = 0;
  int iterations = 0;
  Vocabulary vocabulary;
  std::vector<double> n_kw;  // K x V, row-major
  std::vector<double> n_k;   // K

  int V() const { return vocabulary.size(); }
  double& at(int k, int w) { return n_kw[static_cast<std::size_t>(k) * V() + w]; }
  double at(int k, int w) const { return n_kw[static_cast<std::size_t>(k) * V() + w]; }
};

struct TrainConfig {
  int K = 30;
  double alpha = -1.0;  // < 0 means the 5.0/K default
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  int sample_lag = 10;
  std::uint64_t seed = 42;

  double effective_alpha() const { return alpha < 0.0 ? 5.0 / K : alpha; }
};

// Mutable Gibbs state over one corpus: integer counts plus the per-token
// assignment vector z. Recomputing every count table from z must reproduce
// the stored tables exactly; verify_consistency checks that.
struct TrainingState {
  int K = 0;
  int V = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::vector<int>> z;  // per document, per token position
  std::vector<int> n_dk;            // D x K, row-major
  std::vector<int> n_kw;            // K x V, row-major
  std::vector<int> n_k;             // K

  int dk(int d, int k) const { return n_dk[static_cast<std::size_t>(d) * K + k]; }
  int kw(int k, int w) const { return n_kw[static_cast<std::size_t>(k) * V + w]; }
};

// One collapsed Gibbs chain over a corpus. Strictly sequential; run several
// instances with different seeds for independent chains.
class GibbsSampler {
 public:
  GibbsSampler(const Corpus& corpus, const TrainConfig& config);

  // One full sweep: resamples every token of every document in order.
  void sweep();

  // Runs the configured schedule: burn-in sweeps, then count accumulation
  // every sample_lag sweeps; returns the model with averaged counts.
  AspectModel run();

  const TrainingState& state() const { return state_; }

  // Recomputes all count tables from z and compares; throws InternalError
  // on any mismatch.
  void verify_consistency() const;

  // Collapsed log joint ln P(w, z) of the current assignment, including the
  // Dirichlet normalization constants, so exp(log_joint) sums over all
  // assignments to the marginal likelihood P(w).
  double log_joint() const;

 private:
  const Corpus& corpus_;
  TrainConfig config_;
  TrainingState state_;
  Rng rng_;
  std::vector<double> cond_;  // scratch for the conditional
};

// The collapsed conditional p(z_{d,i} = k | z^{-di}, w), normalized. The
// token at position i of document d is excluded from the counts before
// evaluating p(k) proportional to
//   (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta).
std::vector<double> gibbs_conditional(const TrainingState& state, const Corpus& corpus,
                                      int d, int i);

// Trains a model on the corpus. K >= 2 required; a warning is printed when
// K exceeds the total token count. Deterministic given the seed.
AspectModel train(const Corpus& corpus, const TrainConfig& config);

// Collapsed log joint for an arbitrary state (used by the exact-posterior
// oracle as well as convergence monitoring).
double log_joint(const TrainingState& state);

// Row-stochastic posterior-mean estimate:
//   phi[k][w] = (n_kw + beta) / (n_k + V*beta).
std::vector<double> phi(const AspectModel& model);
std::vector<double> phi_row(const AspectModel& model, int k);

struct AspectDistribution {
  std::vector<double> probabilities;  // length K, sums to 1
  bool all_oov = false;               // review had no in-vocabulary token
};

struct FoldInConfig {
  int iterations = 200;
  std::uint64_t seed = 1;
};

// Fold-in inference for one unseen review: model counts stay frozen, only
// the review's own topic counts are resampled. Counts are averaged over the
// second half of the sweeps, then smoothed into
//   theta[k] = (n_dk + alpha) / (N_d + K*alpha).
// A review with no in-vocabulary tokens yields the uniform distribution and
// all_oov = true.
AspectDistribution fold_in(const AspectModel& model, const Review& review,
                           const FoldInConfig& config);

struct RankedAspect {
  int aspect = 0;
  double probability = 0.0;
};

// All aspects sorted by theta descending; ties break toward the smaller
// aspect id so rankings are deterministic.
std::vector<RankedAspect> predict_aspect(const AspectModel& model, const Review& review,
                                         const FoldInConfig& config = {});
std::vector<RankedAspect> rank_aspects(const AspectDistribution& distribution);

struct WordProb {
  int word = 0;
  double probability = 0.0;
};

// Top-m words of aspect k by phi descending, ties toward the smaller word id.
std::vector<WordProb> top_words(const AspectModel& model, int k, int top_m);

// Versioned JSON serialization with canonical sparse triplets:
// {version, K, alpha, beta, seed, iterations, vocabulary:[words],
//  n_k:[..], n_kw:[[k,w,count]..]} with triplets sorted by (k, w).
std::string model_to_json(const AspectModel& model);
AspectModel model_from_json(const std::string& json_text);
void save_model(const AspectModel& model, const std::filesystem::path& path);
AspectModel load_model(const std::filesystem::path& path);

// Top-words export: CSV with header aspect_id,rank,word,probability.
std::string top_words_csv(const AspectModel& model, int top_m);

}  // namespace lad
