#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lad/corpus.hpp"
#include "lad/sampler.hpp"

namespace lad {

// Which generative variant produced a synthetic corpus: one aspect drawn per
// review with every word sampled from it, or the standard per-word
// assignment.
enum class GenerativeMode { kPerReviewSingleAspect, kPerWordAspect };

std::string to_string(GenerativeMode mode);
GenerativeMode mode_from_string(const std::string& name);

struct GroundTruth {
  int K = 0;
  int V = 0;
  GenerativeMode mode = GenerativeMode::kPerWordAspect;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> phi_true;    // K rows over V words
  std::vector<std::vector<double>> theta_true;  // per document over K
  std::vector<std::vector<int>> assignments;    // per document, per token
};

struct GenerateConfig {
  int K = 2;
  int V = 10;
  int n_docs = 100;
  int doc_len = 20;
  double alpha = 1.0;  // concentration for theta draws
  double beta = 1.0;   // concentration for phi draws
  GenerativeMode mode = GenerativeMode::kPerWordAspect;
  std::uint64_t seed = 1;
  // When set, topic k only emits words in its V/K block (a Dirichlet is
  // drawn inside the block), giving planted topics with disjoint supports.
  bool disjoint_supports = false;
};

// Draws a symmetric Dirichlet vector; dim >= 2, concentration > 0.
std::vector<double> sample_dirichlet(int dim, double concentration, std::uint64_t seed);

struct SyntheticCorpus {
  Corpus corpus;
  GroundTruth truth;
};

// Samples a corpus with word strings "w0".."w{V-1}" and full ground truth.
// Deterministic given the seed.
SyntheticCorpus generate(const GenerateConfig& config);

// Exact collapsed posterior P(z | w) by enumeration of all K^N assignments.
// Guarded to K^N <= 10^6. Assignments are encoded base-K over the corpus
// tokens in document order, last token varying fastest.
struct ExactPosterior {
  int K = 0;
  int n_tokens = 0;
  std::vector<double> probabilities;  // size K^N, sums to 1

  // Topic of flat token t under assignment index a.
  int assignment_at(std::size_t a, int t) const;
  // Per-token marginals P(z_t = k), N x K row-major.
  std::vector<double> token_marginals() const;
};

ExactPosterior exact_posterior(const Corpus& corpus, int K, double alpha, double beta);

// Ground truth manifest: JSON with phi_true, theta_true, mode, seed and the
// planted assignments.
std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const std::string& json_text);
void save_truth(const GroundTruth& truth, const std::filesystem::path& path);

}  // namespace lad
