#include "lad/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "lad/common.hpp"
#include "lad/io.hpp"

namespace lad {

namespace {

// A gold surface form through the training pipeline: tokenize, filter,
// normalize, rejoin with single spaces. Empty when everything filters away.
std::string normalize_gold_term(const std::string& term, const PreprocessConfig& config) {
  const auto tokens =
      normalize(filter_tokens(tokenize(term), config.stopwords), config.normalizer);
  std::string joined;
  for (const auto& t : tokens) {
    if (t.empty()) continue;
    if (!joined.empty()) joined += ' ';
    joined += t;
  }
  return joined;
}

const char* via_name(MatchVia via) {
  switch (via) {
    case MatchVia::kExact:
      return "exact";
    case MatchVia::kSemantic:
      return "semantic";
    default:
      return "none";
  }
}

}  // namespace

std::vector<LabeledReview> make_labeled_reviews(const std::vector<SemEvalSentence>& sentences,
                                                const PreprocessConfig& config,
                                                const Vocabulary& vocabulary) {
  std::vector<LabeledReview> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    LabeledReview labeled;
    labeled.raw = s.text;
    labeled.review.review_id = s.id;
    labeled.review.raw = s.text;
    labeled.review.tokens = encode_text(s.text, config, vocabulary);
    std::unordered_set<std::string> seen;
    for (const auto& term : s.aspect_terms) {
      const std::string normalized = normalize_gold_term(term, config);
      if (normalized.empty()) continue;
      if (seen.insert(normalized).second) labeled.gold_terms.push_back(normalized);
    }
    out.push_back(std::move(labeled));
  }
  return out;
}

std::vector<LabeledReview> load_semeval(const std::filesystem::path& path,
                                        const PreprocessConfig& config,
                                        const Vocabulary& vocabulary) {
  return make_labeled_reviews(load_semeval_xml(path), config, vocabulary);
}

Review mask(const LabeledReview& labeled, const Vocabulary& vocabulary) {
  std::unordered_set<int> gold_ids;
  for (const auto& term : labeled.gold_terms) {
    if (auto id = vocabulary.find(term)) gold_ids.insert(*id);
  }
  Review masked = labeled.review;
  if (gold_ids.empty()) return masked;
  std::erase_if(masked.tokens, [&](int id) { return gold_ids.count(id) > 0; });
  return masked;
}

MaskingPlan make_masking_plan(const std::vector<LabeledReview>& testset, double fraction,
                              std::uint64_t seed) {
  if (fraction < 0.0 || fraction > 1.0)
    throw DataError("make_masking_plan: fraction must lie in [0, 1]");
  std::vector<std::string> eligible;
  for (const auto& labeled : testset) {
    if (!labeled.gold_terms.empty()) eligible.push_back(labeled.review.review_id);
  }
  // Fisher-Yates permutation; a prefix of it is the masked set, so smaller
  // fractions always select subsets of larger ones.
  Rng rng(seed);
  for (std::size_t i = eligible.size(); i > 1; --i) {
    const int j = rng.uniform_int(static_cast<int>(i));
    std::swap(eligible[i - 1], eligible[static_cast<std::size_t>(j)]);
  }
  const auto n_masked = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(eligible.size())));
  MaskingPlan plan;
  plan.fraction = fraction;
  plan.seed = seed;
  plan.masked_ids.insert(eligible.begin(), eligible.begin() + n_masked);
  return plan;
}

TopWordTable::TopWordTable(const AspectModel& model, int top_k) : top_k_(top_k) {
  if (top_k < 1) throw DataError("TopWordTable: top_k must be >= 1");
  words_.resize(model.K);
  for (int k = 0; k < model.K; ++k) {
    for (const auto& wp : top_words(model, k, top_k)) words_[k].push_back(wp.word);
    std::sort(words_[k].begin(), words_[k].end());
  }
}

bool TopWordTable::contains(int aspect, int word_id) const {
  const auto& w = words_[aspect];
  return std::binary_search(w.begin(), w.end(), word_id);
}

std::optional<MatchResult> match_rank(const TopWordTable& top_words,
                                      const std::vector<RankedAspect>& ranking,
                                      const std::string& gold_term,
                                      const Vocabulary& vocabulary,
                                      const Taxonomy* taxonomy) {
  MatchVia via = MatchVia::kExact;
  std::optional<int> target = vocabulary.find(gold_term);
  if (!target) {
    if (!taxonomy) return std::nullopt;
    const auto nearest = nearest_in_vocab(*taxonomy, gold_term, vocabulary);
    if (!nearest) return std::nullopt;
    target = vocabulary.find(nearest->word);
    internal_check(target.has_value(), "match_rank: nearest word missing from vocabulary");
    via = MatchVia::kSemantic;
  }
  for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
    if (top_words.contains(ranking[pos].aspect, *target))
      return MatchResult{static_cast<int>(pos) + 1, via};
  }
  return std::nullopt;
}

EvalReport evaluate_masked(const AspectModel& model, const std::vector<LabeledReview>& testset,
                           double fraction, const EvalConfig& config, const Taxonomy* taxonomy) {
  const MaskingPlan plan = make_masking_plan(testset, fraction, config.mask_seed);
  const TopWordTable table(model, config.top_k);

  EvalReport report;
  report.fraction = fraction;
  std::vector<RankRecord> all_records;
  std::vector<RankRecord> masked_records;

  for (std::size_t idx = 0; idx < testset.size(); ++idx) {
    const auto& labeled = testset[idx];
    if (labeled.gold_terms.empty()) continue;  // nothing to score against
    const bool is_masked = plan.masked_ids.count(labeled.review.review_id) > 0;
    const Review review = is_masked ? mask(labeled, model.vocabulary) : labeled.review;

    FoldInConfig fold_config = config.fold_in;
    fold_config.seed = derive_seed(config.fold_in.seed, static_cast<std::uint64_t>(idx));
    const auto ranking = predict_aspect(model, review, fold_config);

    RankRecord record;
    record.gold_count = static_cast<int>(labeled.gold_terms.size());
    PerReviewOutcome outcome;
    outcome.review_id = labeled.review.review_id;
    outcome.masked = is_masked;
    outcome.gold_count = record.gold_count;
    for (const auto& term : labeled.gold_terms) {
      const auto match = match_rank(table, ranking, term, model.vocabulary, taxonomy);
      if (!match) continue;
      record.matched_ranks.push_back(match->rank);
      if (!outcome.matched_rank || match->rank < *outcome.matched_rank) {
        outcome.matched_rank = match->rank;
        outcome.via = match->via;
      }
    }
    all_records.push_back(record);
    if (is_masked) masked_records.push_back(record);
    report.per_review.push_back(std::move(outcome));
  }

  if (all_records.empty()) throw DataError("evaluate_masked: no review carries gold terms");
  report.n_reviews = static_cast<int>(all_records.size());
  report.n_masked = static_cast<int>(masked_records.size());
  report.all = compute_metrics(all_records, config.metric_k);
  report.masked = masked_records.empty() ? MetricSummary{}
                                         : compute_metrics(masked_records, config.metric_k);
  return report;
}

std::vector<EvalReport> sweep_masking(const AspectModel& model,
                                      const std::vector<LabeledReview>& testset,
                                      const std::vector<double>& fractions,
                                      const EvalConfig& config, const Taxonomy* taxonomy) {
  std::vector<EvalReport> reports;
  reports.reserve(fractions.size());
  for (double fraction : fractions)
    reports.push_back(evaluate_masked(model, testset, fraction, config, taxonomy));
  return reports;
}

std::string reports_csv(const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << "fraction,all_mrr,all_recall_at_5,all_ndcg_at_5,all_hit_at_5,"
         "masked_mrr,masked_recall_at_5,masked_ndcg_at_5,masked_hit_at_5,n_reviews,n_masked\n";
  for (const auto& r : reports) {
    out << format_double(r.fraction) << ',' << format_double(r.all.mrr) << ','
        << format_double(r.all.recall_at_k) << ',' << format_double(r.all.ndcg_at_k) << ','
        << format_double(r.all.hit_at_k) << ',' << format_double(r.masked.mrr) << ','
        << format_double(r.masked.recall_at_k) << ',' << format_double(r.masked.ndcg_at_k) << ','
        << format_double(r.masked.hit_at_k) << ',' << r.n_reviews << ',' << r.n_masked << '\n';
  }
  return out.str();
}

std::string per_review_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "review_id,masked,gold_count,matched_rank,matched_via\n";
  for (const auto& o : report.per_review) {
    out << csv_escape(o.review_id) << ',' << (o.masked ? 1 : 0) << ',' << o.gold_count << ',';
    if (o.matched_rank) out << *o.matched_rank;
    out << ',' << via_name(o.via) << '\n';
  }
  return out.str();
}

}  // namespace lad
