#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lad/metrics.hpp"
#include "lad/sampler.hpp"
#include "lad/semeval.hpp"
#include "lad/similarity.hpp"

namespace lad {

// A gold-labeled test review, encoded against the model vocabulary. Gold
// terms are normalized surface forms; reviews whose gold set is empty are
// excluded from evaluation but counted.
struct LabeledReview {
  Review review;
  std::vector<std::string> gold_terms;
  std::string raw;
};

// Builds LabeledReviews from SemEval sentences: review text is preprocessed
// and encoded against the model vocabulary, gold terms run through the same
// tokenize/filter/normalize pipeline (multi-token terms are rejoined with a
// single space; terms that filter away entirely are dropped).
std::vector<LabeledReview> make_labeled_reviews(const std::vector<SemEvalSentence>& sentences,
                                                const PreprocessConfig& config,
                                                const Vocabulary& vocabulary);

std::vector<LabeledReview> load_semeval(const std::filesystem::path& path,
                                        const PreprocessConfig& config,
                                        const Vocabulary& vocabulary);

// Deletes every token equal to any normalized gold term. Other tokens keep
// their order; the review may become empty.
Review mask(const LabeledReview& labeled, const Vocabulary& vocabulary);

// Which reviews get masked at a given fraction: the first
// round(fraction * |eligible|) ids of a seed-determined permutation, so the
// masked set at a smaller fraction is always a subset of the set at a
// larger one.
struct MaskingPlan {
  double fraction = 0.0;
  std::set<std::string> masked_ids;
  std::uint64_t seed = 0;
};

MaskingPlan make_masking_plan(const std::vector<LabeledReview>& testset, double fraction,
                              std::uint64_t seed);

// Precomputed top-k word sets per aspect, shared across match_rank calls.
class TopWordTable {
 public:
  TopWordTable(const AspectModel& model, int top_k);
  bool contains(int aspect, int word_id) const;
  int top_k() const { return top_k_; }

 private:
  int top_k_;
  std::vector<std::vector<int>> words_;  // per aspect, sorted word ids
};

enum class MatchVia { kNone, kExact, kSemantic };

struct MatchResult {
  int rank = 0;  // 1-based position in the aspect ranking
  MatchVia via = MatchVia::kNone;
};

// Rank of the first aspect whose top-k words contain the target. The target
// is the gold term itself when in-vocabulary; otherwise its nearest
// in-vocabulary neighbor by Resnik similarity (no taxonomy, or no neighbor,
// means an automatic miss).
std::optional<MatchResult> match_rank(const TopWordTable& top_words,
                                      const std::vector<RankedAspect>& ranking,
                                      const std::string& gold_term,
                                      const Vocabulary& vocabulary,
                                      const Taxonomy* taxonomy);

struct PerReviewOutcome {
  std::string review_id;
  bool masked = false;
  int gold_count = 0;
  std::optional<int> matched_rank;  // best (smallest) matched rank
  MatchVia via = MatchVia::kNone;   // how the best rank matched
};

struct EvalReport {
  double fraction = 0.0;
  MetricSummary all;     // averaged over every evaluated review
  MetricSummary masked;  // averaged over the masked subset only
  int n_reviews = 0;
  int n_masked = 0;
  std::vector<PerReviewOutcome> per_review;
};

struct EvalConfig {
  int top_k = 5;            // word-list size and metric cutoff
  int metric_k = 5;
  FoldInConfig fold_in;     // per-review seeds derived from fold_in.seed
  std::uint64_t mask_seed = 7;
};

// One full protocol pass at a fixed fraction: mask the planned reviews,
// infer a ranking for every review with nonempty gold terms, match every
// gold term, aggregate.
EvalReport evaluate_masked(const AspectModel& model, const std::vector<LabeledReview>& testset,
                           double fraction, const EvalConfig& config, const Taxonomy* taxonomy);

// Runs evaluate_masked for each fraction with one shared masking
// permutation, so the masked sets nest across fractions.
std::vector<EvalReport> sweep_masking(const AspectModel& model,
                                      const std::vector<LabeledReview>& testset,
                                      const std::vector<double>& fractions,
                                      const EvalConfig& config, const Taxonomy* taxonomy);

// fraction,all_mrr,all_recall_at_5,...,masked_*,n_reviews,n_masked rows.
std::string reports_csv(const std::vector<EvalReport>& reports);

// Per-review detail rows for error analysis.
std::string per_review_csv(const EvalReport& report);

}  // namespace lad
