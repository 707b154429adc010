#include "lad/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lad/common.hpp"
#include "lad/io.hpp"
#include "json.hpp"

namespace lad {

using nlohmann::ordered_json;

std::string to_string(GenerativeMode mode) {
  return mode == GenerativeMode::kPerReviewSingleAspect ? "per_review_single_aspect"
                                                        : "per_word_aspect";
}

GenerativeMode mode_from_string(const std::string& name) {
  if (name == "per_review_single_aspect" || name == "per_review")
    return GenerativeMode::kPerReviewSingleAspect;
  if (name == "per_word_aspect" || name == "per_word") return GenerativeMode::kPerWordAspect;
  throw DataError("unknown generative mode: " + name);
}

std::vector<double> sample_dirichlet(int dim, double concentration, std::uint64_t seed) {
  if (dim < 2) throw DataError("sample_dirichlet: dim must be >= 2");
  if (concentration <= 0.0) throw DataError("sample_dirichlet: concentration must be positive");
  Rng rng(seed);
  std::vector<double> out(dim);
  rng.dirichlet(concentration, out);
  return out;
}

SyntheticCorpus generate(const GenerateConfig& config) {
  if (config.K < 2) throw DataError("generate: K must be >= 2");
  if (config.V < 2) throw DataError("generate: V must be >= 2");
  if (config.n_docs < 1 || config.doc_len < 1)
    throw DataError("generate: n_docs and doc_len must be positive");
  if (config.alpha <= 0.0 || config.beta <= 0.0)
    throw DataError("generate: concentrations must be positive");
  if (config.disjoint_supports && config.V % config.K != 0)
    throw DataError("generate: disjoint supports require K to divide V");

  Rng rng(config.seed);
  SyntheticCorpus result;
  GroundTruth& truth = result.truth;
  truth.K = config.K;
  truth.V = config.V;
  truth.mode = config.mode;
  truth.seed = config.seed;

  // Aspect-word distributions.
  truth.phi_true.assign(config.K, std::vector<double>(config.V, 0.0));
  if (config.disjoint_supports) {
    const int block = config.V / config.K;
    for (int k = 0; k < config.K; ++k) {
      std::vector<double> local(block);
      rng.dirichlet(config.beta, local);
      for (int b = 0; b < block; ++b) truth.phi_true[k][k * block + b] = local[b];
    }
  } else {
    for (int k = 0; k < config.K; ++k) rng.dirichlet(config.beta, truth.phi_true[k]);
  }

  Corpus& corpus = result.corpus;
  corpus.source = "synthetic:" + to_string(config.mode);
  for (int w = 0; w < config.V; ++w) corpus.vocabulary.add("w" + std::to_string(w));

  truth.theta_true.assign(config.n_docs, std::vector<double>(config.K, 0.0));
  truth.assignments.resize(config.n_docs);
  corpus.reviews.reserve(config.n_docs);
  for (int d = 0; d < config.n_docs; ++d) {
    rng.dirichlet(config.alpha, truth.theta_true[d]);
    Review review;
    review.review_id = std::to_string(d);
    review.tokens.reserve(config.doc_len);
    auto& z = truth.assignments[d];
    z.reserve(config.doc_len);
    if (config.mode == GenerativeMode::kPerReviewSingleAspect) {
      // one aspect per review; every word comes from it
      const int aspect = rng.categorical(truth.theta_true[d]);
      for (int i = 0; i < config.doc_len; ++i) {
        z.push_back(aspect);
        review.tokens.push_back(rng.categorical(truth.phi_true[aspect]));
      }
    } else {
      for (int i = 0; i < config.doc_len; ++i) {
        const int aspect = rng.categorical(truth.theta_true[d]);
        z.push_back(aspect);
        review.tokens.push_back(rng.categorical(truth.phi_true[aspect]));
      }
    }
    corpus.reviews.push_back(std::move(review));
  }

  // doc_freq / total_docs bookkeeping
  auto& vocab = corpus.vocabulary;
  vocab.doc_freq.assign(vocab.size(), 0);
  vocab.total_docs = 0;
  std::vector<int> seen(vocab.size(), -1);
  for (std::size_t d = 0; d < corpus.reviews.size(); ++d) {
    if (!corpus.reviews[d].tokens.empty()) ++vocab.total_docs;
    for (int w : corpus.reviews[d].tokens) {
      if (seen[w] != static_cast<int>(d)) {
        seen[w] = static_cast<int>(d);
        ++vocab.doc_freq[w];
      }
    }
  }
  return result;
}

int ExactPosterior::assignment_at(std::size_t a, int t) const {
  // base-K digits, last token varying fastest
  std::size_t div = 1;
  for (int j = n_tokens - 1; j > t; --j) div *= static_cast<std::size_t>(K);
  return static_cast<int>((a / div) % static_cast<std::size_t>(K));
}

std::vector<double> ExactPosterior::token_marginals() const {
  std::vector<double> marginals(static_cast<std::size_t>(n_tokens) * K, 0.0);
  for (std::size_t a = 0; a < probabilities.size(); ++a) {
    // walk the digits once instead of calling assignment_at per token
    std::size_t rest = a;
    for (int t = n_tokens - 1; t >= 0; --t) {
      const int k = static_cast<int>(rest % static_cast<std::size_t>(K));
      rest /= static_cast<std::size_t>(K);
      marginals[static_cast<std::size_t>(t) * K + k] += probabilities[a];
    }
  }
  return marginals;
}

ExactPosterior exact_posterior(const Corpus& corpus, int K, double alpha, double beta) {
  if (K < 2) throw DataError("exact_posterior: K must be >= 2");
  const long long n_tokens = corpus.total_tokens();
  if (n_tokens < 1) throw DataError("exact_posterior: corpus has no tokens");
  double combos = 1.0;
  for (long long t = 0; t < n_tokens; ++t) {
    combos *= K;
    if (combos > 1e6) throw DataError("exact_posterior: K^N exceeds the 10^6 guard");
  }
  const auto n_assignments = static_cast<std::size_t>(combos);

  // Flat token list (document id per token, in corpus order).
  std::vector<int> token_doc;
  std::vector<int> token_word;
  token_doc.reserve(static_cast<std::size_t>(n_tokens));
  for (std::size_t d = 0; d < corpus.reviews.size(); ++d) {
    for (int w : corpus.reviews[d].tokens) {
      token_doc.push_back(static_cast<int>(d));
      token_word.push_back(w);
    }
  }

  TrainingState state;
  state.K = K;
  state.V = corpus.vocabulary.size();
  state.alpha = alpha;
  state.beta = beta;
  state.z.resize(corpus.reviews.size());
  for (std::size_t d = 0; d < corpus.reviews.size(); ++d)
    state.z[d].assign(corpus.reviews[d].tokens.size(), 0);
  state.n_dk.assign(corpus.reviews.size() * static_cast<std::size_t>(K), 0);
  state.n_kw.assign(static_cast<std::size_t>(K) * state.V, 0);
  state.n_k.assign(K, 0);

  ExactPosterior posterior;
  posterior.K = K;
  posterior.n_tokens = static_cast<int>(n_tokens);
  posterior.probabilities.resize(n_assignments);

  std::vector<int> digits(static_cast<std::size_t>(n_tokens), 0);
  std::vector<double> log_p(n_assignments);
  double max_lp = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n_assignments; ++a) {
    // decode index a into per-token topics (last token fastest)
    std::size_t rest = a;
    for (long long t = n_tokens - 1; t >= 0; --t) {
      digits[static_cast<std::size_t>(t)] = static_cast<int>(rest % K);
      rest /= static_cast<std::size_t>(K);
    }
    // fill the state counts
    std::fill(state.n_dk.begin(), state.n_dk.end(), 0);
    std::fill(state.n_kw.begin(), state.n_kw.end(), 0);
    std::fill(state.n_k.begin(), state.n_k.end(), 0);
    std::vector<std::size_t> pos(corpus.reviews.size(), 0);
    for (std::size_t t = 0; t < digits.size(); ++t) {
      const int d = token_doc[t];
      const int w = token_word[t];
      const int k = digits[t];
      state.z[d][pos[d]++] = k;
      ++state.n_dk[static_cast<std::size_t>(d) * K + k];
      ++state.n_kw[static_cast<std::size_t>(k) * state.V + w];
      ++state.n_k[k];
    }
    log_p[a] = log_joint(state);
    max_lp = std::max(max_lp, log_p[a]);
  }
  double total = 0.0;
  for (std::size_t a = 0; a < n_assignments; ++a) {
    posterior.probabilities[a] = std::exp(log_p[a] - max_lp);
    total += posterior.probabilities[a];
  }
  for (double& p : posterior.probabilities) p /= total;
  return posterior;
}

std::string truth_to_json(const GroundTruth& truth) {
  ordered_json j;
  j["version"] = 1;
  j["K"] = truth.K;
  j["V"] = truth.V;
  j["mode"] = to_string(truth.mode);
  j["seed"] = truth.seed;
  j["phi_true"] = truth.phi_true;
  j["theta_true"] = truth.theta_true;
  j["assignments"] = truth.assignments;
  return j.dump(2) + "\n";
}

GroundTruth truth_from_json(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("ground truth JSON parse error: ") + e.what());
  }
  try {
    GroundTruth truth;
    truth.K = j.at("K").get<int>();
    truth.V = j.at("V").get<int>();
    truth.mode = mode_from_string(j.at("mode").get<std::string>());
    truth.seed = j.at("seed").get<std::uint64_t>();
    truth.phi_true = j.at("phi_true").get<std::vector<std::vector<double>>>();
    truth.theta_true = j.at("theta_true").get<std::vector<std::vector<double>>>();
    truth.assignments = j.at("assignments").get<std::vector<std::vector<int>>>();
    return truth;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("ground truth JSON: missing or mistyped field: ") + e.what());
  }
}

void save_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  atomic_write(path, truth_to_json(truth));
}

}  // namespace lad
