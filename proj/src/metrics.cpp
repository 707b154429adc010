#include "lad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lad/common.hpp"

namespace lad {

MetricSummary compute_metrics(const std::vector<RankRecord>& records, int k) {
  if (records.empty()) throw DataError("compute_metrics: no records");
  if (k < 1) throw DataError("compute_metrics: k must be >= 1");

  double mrr = 0.0;
  double recall = 0.0;
  double ndcg = 0.0;
  double hit = 0.0;
  for (const auto& record : records) {
    internal_check(record.gold_count > 0, "compute_metrics: record without gold terms");
    int best = 0;
    int matched_within_k = 0;
    std::set<int> positions_within_k;
    for (int rank : record.matched_ranks) {
      internal_check(rank >= 1, "compute_metrics: ranks are 1-based");
      if (best == 0 || rank < best) best = rank;
      if (rank <= k) {
        ++matched_within_k;
        positions_within_k.insert(rank);
      }
    }
    if (best > 0) mrr += 1.0 / best;
    if (!positions_within_k.empty()) hit += 1.0;
    recall += static_cast<double>(matched_within_k) / record.gold_count;
    double dcg = 0.0;
    for (int pos : positions_within_k) dcg += 1.0 / std::log2(pos + 1.0);
    double idcg = 0.0;
    for (int pos = 1; pos <= std::min(record.gold_count, k); ++pos)
      idcg += 1.0 / std::log2(pos + 1.0);
    ndcg += dcg / idcg;
  }

  MetricSummary summary;
  const double n = static_cast<double>(records.size());
  summary.mrr = mrr / n;
  summary.recall_at_k = recall / n;
  summary.ndcg_at_k = ndcg / n;
  summary.hit_at_k = hit / n;
  summary.n_reviews = static_cast<int>(records.size());
  return summary;
}

}  // namespace lad
