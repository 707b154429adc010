#pragma once

#include <string>
#include <vector>

#include "lad/sampler.hpp"

namespace lad {

struct CoherenceReport {
  std::vector<double> per_topic;
  double mean = 0.0;
  int K = 0;
  int top_m = 0;
};

// UMass coherence of each topic over the training corpus:
//   C(t) = sum_{m=2..M} sum_{l<m} ln[(D(v_m, v_l) + 1) / D(v_l)]
// where v_1..v_M are the topic's top-M words by phi descending and D counts
// documents (whole reviews) containing a word or a word pair. Requires
// top_m >= 2.
CoherenceReport umass_coherence(const AspectModel& model, const Corpus& corpus, int top_m);

struct SweepEntry {
  int K = 0;
  double mean_coherence = 0.0;
  double per_topic_min = 0.0;
  double per_topic_max = 0.0;
  bool ok = false;
  std::string error;
};

struct SweepConfig {
  TrainConfig train;  // train.K is overridden per sweep value
  int top_m = 20;
};

// Trains one model per K (seed derived from the base seed and K) and scores
// it. Failures for individual K values are recorded in the entry rather than
// aborting the sweep.
std::vector<SweepEntry> sweep_k(const Corpus& corpus, const std::vector<int>& k_values,
                                const SweepConfig& config);

// CSV with header K,mean_coherence,per_topic_min,per_topic_max; failed
// entries carry the error message in place of numbers.
std::string sweep_csv(const std::vector<SweepEntry>& entries);

}  // namespace lad
