#pragma once

#include <vector>

namespace lad {

// Ranking outcome of one review: how many gold terms it carries and the
// 1-based ranks at which gold terms matched (unmatched terms contribute no
// entry; ranks may exceed the cutoff).
struct RankRecord {
  int gold_count = 0;
  std::vector<int> matched_ranks;
};

struct MetricSummary {
  double mrr = 0.0;
  double recall_at_k = 0.0;
  double ndcg_at_k = 0.0;
  double hit_at_k = 0.0;
  int n_reviews = 0;
};

// Per-review definitions, averaged over reviews:
//   RR        = 1 / min(matched ranks), 0 when nothing matched
//   hit@k     = 1 when any matched rank <= k
//   recall@k  = |matched ranks <= k| / gold_count
//   nDCG@k    = DCG/IDCG with binary gains; DCG sums 1/log2(i+1) over the
//               distinct matched positions i <= k, IDCG over positions
//               1..min(gold_count, k).
// Throws DataError when records is empty.
MetricSummary compute_metrics(const std::vector<RankRecord>& records, int k);

}  // namespace lad
