#include "lad/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include "lad/common.hpp"
#include "lad/io.hpp"
#include "json.hpp"

namespace lad {

using nlohmann::ordered_json;

namespace {

void validate_train_config(const Corpus& corpus, const TrainConfig& config) {
  if (corpus.reviews.empty()) throw DataError("train: corpus has no reviews");
  if (corpus.total_tokens() == 0) throw DataError("train: corpus has no tokens");
  if (config.K < 2) throw DataError("train: K must be >= 2");
  if (config.burn_in < 0) throw DataError("train: burn_in must be >= 0");
  if (config.iterations <= config.burn_in)
    throw DataError("train: iterations must exceed burn_in");
  if (config.sample_lag < 1) throw DataError("train: sample_lag must be >= 1");
  if (config.effective_alpha() <= 0.0 || config.beta <= 0.0)
    throw DataError("train: priors must be positive");
  if (config.K > corpus.total_tokens())
    std::cerr << "warning: K (" << config.K << ") exceeds the corpus token count ("
              << corpus.total_tokens() << ")\n";
}

}  // namespace

GibbsSampler::GibbsSampler(const Corpus& corpus, const TrainConfig& config)
    : corpus_(corpus), config_(config), rng_(config.seed) {
  validate_train_config(corpus, config);
  const int D = static_cast<int>(corpus.reviews.size());
  state_.K = config.K;
  state_.V = corpus.vocabulary.size();
  state_.alpha = config.effective_alpha();
  state_.beta = config.beta;
  state_.n_dk.assign(static_cast<std::size_t>(D) * state_.K, 0);
  state_.n_kw.assign(static_cast<std::size_t>(state_.K) * state_.V, 0);
  state_.n_k.assign(state_.K, 0);
  state_.z.resize(D);
  cond_.resize(state_.K);

  // Uniform random initial assignment.
  for (int d = 0; d < D; ++d) {
    const auto& tokens = corpus.reviews[d].tokens;
    state_.z[d].resize(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const int k = rng_.uniform_int(state_.K);
      state_.z[d][i] = k;
      ++state_.n_dk[static_cast<std::size_t>(d) * state_.K + k];
      ++state_.n_kw[static_cast<std::size_t>(k) * state_.V + tokens[i]];
      ++state_.n_k[k];
    }
  }
}

void GibbsSampler::sweep() {
  const int K = state_.K;
  const int V = state_.V;
  const double alpha = state_.alpha;
  const double beta = state_.beta;
  const double vbeta = V * beta;
  for (std::size_t d = 0; d < state_.z.size(); ++d) {
    const auto& tokens = corpus_.reviews[d].tokens;
    int* dk = &state_.n_dk[d * K];
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const int w = tokens[i];
      const int old_k = state_.z[d][i];
      // take the token out
      --dk[old_k];
      --state_.n_kw[static_cast<std::size_t>(old_k) * V + w];
      --state_.n_k[old_k];
      // collapsed conditional over k
      double total = 0.0;
      for (int k = 0; k < K; ++k) {
        const double p = (dk[k] + alpha) *
                         (state_.n_kw[static_cast<std::size_t>(k) * V + w] + beta) /
                         (state_.n_k[k] + vbeta);
        cond_[k] = p;
        total += p;
      }
      // inline CDF inversion (categorical over cond_)
      double target = rng_.uniform() * total;
      int new_k = K - 1;
      double acc = 0.0;
      for (int k = 0; k < K - 1; ++k) {
        acc += cond_[k];
        if (target < acc) {
          new_k = k;
          break;
        }
      }
      // put it back
      state_.z[d][i] = new_k;
      ++dk[new_k];
      ++state_.n_kw[static_cast<std::size_t>(new_k) * V + w];
      ++state_.n_k[new_k];
    }
  }
}

AspectModel GibbsSampler::run() {
  const int K = state_.K;
  const int V = state_.V;
  std::vector<double> acc_kw(static_cast<std::size_t>(K) * V, 0.0);
  std::vector<double> acc_k(K, 0.0);
  int n_samples = 0;

  for (int t = 1; t <= config_.iterations; ++t) {
    sweep();
#ifndef NDEBUG
    verify_consistency();
#endif
    if (t > config_.burn_in && (t - config_.burn_in) % config_.sample_lag == 0) {
      verify_consistency();
      for (std::size_t i = 0; i < acc_kw.size(); ++i) acc_kw[i] += state_.n_kw[i];
      for (int k = 0; k < K; ++k) acc_k[k] += state_.n_k[k];
      ++n_samples;
    }
  }
  if (n_samples == 0) {  // schedule yielded no sample point; use the final state
    verify_consistency();
    for (std::size_t i = 0; i < acc_kw.size(); ++i) acc_kw[i] += state_.n_kw[i];
    for (int k = 0; k < K; ++k) acc_k[k] += state_.n_k[k];
    n_samples = 1;
  }

  AspectModel model;
  model.K = K;
  model.alpha = state_.alpha;
  model.beta = state_.beta;
  model.seed = config_.seed;
  model.iterations = config_.iterations;
  model.vocabulary = corpus_.vocabulary;
  model.n_kw.resize(acc_kw.size());
  model.n_k.resize(K);
  for (std::size_t i = 0; i < acc_kw.size(); ++i) model.n_kw[i] = acc_kw[i] / n_samples;
  for (int k = 0; k < K; ++k) model.n_k[k] = acc_k[k] / n_samples;
  return model;
}

void GibbsSampler::verify_consistency() const {
  const int K = state_.K;
  const int V = state_.V;
  std::vector<int> n_dk(state_.n_dk.size(), 0);
  std::vector<int> n_kw(state_.n_kw.size(), 0);
  std::vector<int> n_k(K, 0);
  for (std::size_t d = 0; d < state_.z.size(); ++d) {
    const auto& tokens = corpus_.reviews[d].tokens;
    internal_check(tokens.size() == state_.z[d].size(), "gibbs: z length != document length");
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const int k = state_.z[d][i];
      internal_check(k >= 0 && k < K, "gibbs: assignment out of range");
      ++n_dk[d * K + k];
      ++n_kw[static_cast<std::size_t>(k) * V + tokens[i]];
      ++n_k[k];
    }
  }
  internal_check(n_dk == state_.n_dk, "gibbs: n_dk inconsistent with z");
  internal_check(n_kw == state_.n_kw, "gibbs: n_kw inconsistent with z");
  internal_check(n_k == state_.n_k, "gibbs: n_k inconsistent with z");
}

double GibbsSampler::log_joint() const { return lad::log_joint(state_); }

std::vector<double> gibbs_conditional(const TrainingState& state, const Corpus& corpus,
                                      int d, int i) {
  internal_check(d >= 0 && d < static_cast<int>(state.z.size()), "gibbs_conditional: bad doc");
  internal_check(i >= 0 && i < static_cast<int>(state.z[d].size()),
                 "gibbs_conditional: bad token position");
  const int K = state.K;
  const int V = state.V;
  const int w = corpus.reviews[d].tokens[i];
  const int cur = state.z[d][i];
  const double vbeta = V * state.beta;
  std::vector<double> p(K);
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    const int excl = (k == cur) ? 1 : 0;
    const double ndk = state.dk(d, k) - excl;
    const double nkw = state.kw(k, w) - excl;
    const double nk = state.n_k[k] - excl;
    internal_check(ndk >= 0 && nkw >= 0 && nk >= 0, "gibbs_conditional: negative count");
    p[k] = (ndk + state.alpha) * (nkw + state.beta) / (nk + vbeta);
    total += p[k];
  }
  internal_check(total > 0.0, "gibbs_conditional: zero total mass");
  for (double& v : p) v /= total;
  return p;
}

AspectModel train(const Corpus& corpus, const TrainConfig& config) {
  GibbsSampler sampler(corpus, config);
  return sampler.run();
}

double log_joint(const TrainingState& state) {
  const int K = state.K;
  const int V = state.V;
  const int D = static_cast<int>(state.z.size());
  const double alpha = state.alpha;
  const double beta = state.beta;
  double lp = 0.0;
  // Document side: ln Gamma(K*a) - ln Gamma(N_d + K*a)
  //                + sum_k [ln Gamma(n_dk + a) - ln Gamma(a)].
  // Zero counts contribute nothing to the inner sum, so it runs over
  // positive counts only; the topic side is symmetric.
  for (int d = 0; d < D; ++d) {
    int nd = 0;
    for (int k = 0; k < K; ++k) {
      const int c = state.dk(d, k);
      nd += c;
      if (c > 0) lp += std::lgamma(c + alpha) - std::lgamma(alpha);
    }
    lp += std::lgamma(K * alpha) - std::lgamma(nd + K * alpha);
  }
  for (int k = 0; k < K; ++k) {
    for (int w = 0; w < V; ++w) {
      const int c = state.kw(k, w);
      if (c > 0) lp += std::lgamma(c + beta) - std::lgamma(beta);
    }
    lp += std::lgamma(V * beta) - std::lgamma(state.n_k[k] + V * beta);
  }
  internal_check(std::isfinite(lp), "log_joint: non-finite result");
  return lp;
}

std::vector<double> phi(const AspectModel& model) {
  const int V = model.V();
  std::vector<double> out(static_cast<std::size_t>(model.K) * V);
  for (int k = 0; k < model.K; ++k) {
    const double denom = model.n_k[k] + V * model.beta;
    for (int w = 0; w < V; ++w)
      out[static_cast<std::size_t>(k) * V + w] = (model.at(k, w) + model.beta) / denom;
  }
  return out;
}

std::vector<double> phi_row(const AspectModel& model, int k) {
  internal_check(k >= 0 && k < model.K, "phi_row: aspect out of range");
  const int V = model.V();
  std::vector<double> row(V);
  const double denom = model.n_k[k] + V * model.beta;
  for (int w = 0; w < V; ++w) row[w] = (model.at(k, w) + model.beta) / denom;
  return row;
}

AspectDistribution fold_in(const AspectModel& model, const Review& review,
                           const FoldInConfig& config) {
  const int K = model.K;
  const int V = model.V();
  AspectDistribution result;
  result.probabilities.assign(K, 0.0);

  std::vector<int> tokens;
  tokens.reserve(review.tokens.size());
  for (int w : review.tokens) {
    if (w >= 0 && w < V) tokens.push_back(w);
  }
  if (tokens.empty()) {
    result.all_oov = true;
    for (double& p : result.probabilities) p = 1.0 / K;
    return result;
  }

  Rng rng(config.seed);
  const double vbeta = V * model.beta;
  std::vector<int> z(tokens.size());
  std::vector<int> n_dk(K, 0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const int k = rng.uniform_int(K);
    z[i] = k;
    ++n_dk[k];
  }

  const int iterations = std::max(1, config.iterations);
  const int burn_in = iterations / 2;  // counts averaged over the second half
  std::vector<double> acc(K, 0.0);
  int n_samples = 0;
  std::vector<double> cond(K);
  for (int t = 1; t <= iterations; ++t) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const int w = tokens[i];
      --n_dk[z[i]];
      double total = 0.0;
      for (int k = 0; k < K; ++k) {
        // model counts stay frozen; only the local document counts move
        const double p = (n_dk[k] + model.alpha) * (model.at(k, w) + model.beta) /
                         (model.n_k[k] + vbeta);
        cond[k] = p;
        total += p;
      }
      double target = rng.uniform() * total;
      int new_k = K - 1;
      double accum = 0.0;
      for (int k = 0; k < K - 1; ++k) {
        accum += cond[k];
        if (target < accum) {
          new_k = k;
          break;
        }
      }
      z[i] = new_k;
      ++n_dk[new_k];
    }
    if (t > burn_in) {
      for (int k = 0; k < K; ++k) acc[k] += n_dk[k];
      ++n_samples;
    }
  }

  const double nd = static_cast<double>(tokens.size());
  const double denom = nd + K * model.alpha;
  for (int k = 0; k < K; ++k)
    result.probabilities[k] = (acc[k] / n_samples + model.alpha) / denom;
  return result;
}

std::vector<RankedAspect> rank_aspects(const AspectDistribution& distribution) {
  std::vector<RankedAspect> ranked(distribution.probabilities.size());
  for (std::size_t k = 0; k < ranked.size(); ++k)
    ranked[k] = {static_cast<int>(k), distribution.probabilities[k]};
  std::stable_sort(ranked.begin(), ranked.end(), [](const RankedAspect& a, const RankedAspect& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.aspect < b.aspect;
  });
  return ranked;
}

std::vector<RankedAspect> predict_aspect(const AspectModel& model, const Review& review,
                                         const FoldInConfig& config) {
  return rank_aspects(fold_in(model, review, config));
}

std::vector<WordProb> top_words(const AspectModel& model, int k, int top_m) {
  internal_check(k >= 0 && k < model.K, "top_words: aspect out of range");
  const int V = model.V();
  const int m = std::min(top_m, V);
  std::vector<int> order(V);
  std::iota(order.begin(), order.end(), 0);
  const auto row = phi_row(model, k);
  std::partial_sort(order.begin(), order.begin() + m, order.end(), [&](int a, int b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return a < b;
  });
  std::vector<WordProb> out(m);
  for (int i = 0; i < m; ++i) out[i] = {order[i], row[order[i]]};
  return out;
}

std::string model_to_json(const AspectModel& model) {
  ordered_json j;
  j["version"] = 1;
  j["K"] = model.K;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["seed"] = model.seed;
  j["iterations"] = model.iterations;
  j["vocabulary"] = model.vocabulary.words();
  j["n_k"] = model.n_k;
  ordered_json triplets = ordered_json::array();
  const int V = model.V();
  for (int k = 0; k < model.K; ++k) {    // (k, w) ascending: canonical form
    for (int w = 0; w < V; ++w) {
      const double c = model.at(k, w);
      if (c != 0.0) triplets.push_back(ordered_json::array({k, w, c}));
    }
  }
  j["n_kw"] = std::move(triplets);
  return j.dump(2) + "\n";
}

AspectModel model_from_json(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON parse error: ") + e.what());
  }
  try {
    if (j.at("version").get<int>() != 1) throw DataError("unsupported model file version");
    AspectModel model;
    model.K = j.at("K").get<int>();
    model.alpha = j.at("alpha").get<double>();
    model.beta = j.at("beta").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.iterations = j.at("iterations").get<int>();
    for (const auto& w : j.at("vocabulary")) model.vocabulary.add(w.get<std::string>());
    const int V = model.vocabulary.size();
    if (model.K < 1) throw DataError("model JSON: K must be >= 1");
    model.n_k = j.at("n_k").get<std::vector<double>>();
    if (static_cast<int>(model.n_k.size()) != model.K)
      throw DataError("model JSON: n_k length != K");
    model.n_kw.assign(static_cast<std::size_t>(model.K) * V, 0.0);
    for (const auto& t : j.at("n_kw")) {
      if (!t.is_array() || t.size() != 3) throw DataError("model JSON: bad n_kw triplet");
      const int k = t[0].get<int>();
      const int w = t[1].get<int>();
      const double c = t[2].get<double>();
      if (k < 0 || k >= model.K || w < 0 || w >= V)
        throw DataError("model JSON: triplet index out of range");
      if (c < 0.0) throw DataError("model JSON: negative count");
      model.at(k, w) = c;
    }
    // topic totals must agree with the triplets
    for (int k = 0; k < model.K; ++k) {
      double sum = 0.0;
      for (int w = 0; w < V; ++w) sum += model.at(k, w);
      if (std::abs(sum - model.n_k[k]) > 1e-6 * std::max(1.0, model.n_k[k]))
        throw DataError("model JSON: n_k[" + std::to_string(k) + "] disagrees with n_kw");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON: missing or mistyped field: ") + e.what());
  }
}

void save_model(const AspectModel& model, const std::filesystem::path& path) {
  atomic_write(path, model_to_json(model));
}

AspectModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_file(path));
}

std::string top_words_csv(const AspectModel& model, int top_m) {
  std::ostringstream out;
  out << "aspect_id,rank,word,probability\n";
  for (int k = 0; k < model.K; ++k) {
    const auto words = top_words(model, k, top_m);
    for (std::size_t r = 0; r < words.size(); ++r) {
      out << k << ',' << (r + 1) << ',' << csv_escape(model.vocabulary.word(words[r].word))
          << ',' << format_double(words[r].probability) << '\n';
    }
  }
  return out.str();
}

}  // namespace lad
