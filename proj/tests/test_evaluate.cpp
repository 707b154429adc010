#include <algorithm>

#include "doctest.h"
#include "lad/evaluate.hpp"
#include "support.hpp"

using namespace lad;

namespace {

AspectModel model_from_counts(int K, const std::vector<std::string>& words,
                              const std::vector<std::vector<double>>& n_kw) {
  AspectModel model;
  model.K = K;
  model.alpha = 0.5;
  model.beta = 0.01;
  for (const auto& w : words) model.vocabulary.add(w);
  model.vocabulary.doc_freq.assign(static_cast<std::size_t>(model.vocabulary.size()), 1);
  model.vocabulary.total_docs = 1;
  const int V = model.vocabulary.size();
  model.n_kw.assign(static_cast<std::size_t>(K) * V, 0.0);
  model.n_k.assign(K, 0.0);
  for (int k = 0; k < K; ++k) {
    for (int w = 0; w < V; ++w) {
      model.at(k, w) = n_kw[k][w];
      model.n_k[k] += n_kw[k][w];
    }
  }
  return model;
}

// Three aspects over six words; aspect 0 is about food words, aspect 1
// about service words, aspect 2 about ambience words.
AspectModel fixture_model() {
  return model_from_counts(3, {"menu", "food", "staff", "service", "music", "bar"},
                           {{40, 30, 2, 1, 1, 6},
                            {2, 1, 50, 40, 1, 1},
                            {1, 2, 1, 1, 30, 25}});
}

LabeledReview labeled(const std::string& id, const std::vector<int>& tokens,
                      const std::vector<std::string>& gold) {
  LabeledReview lr;
  lr.review.review_id = id;
  lr.review.tokens = tokens;
  lr.gold_terms = gold;
  return lr;
}

Taxonomy oov_taxonomy() {
  // "sushi" is out of vocabulary; its nearest in-vocabulary neighbors sit
  // under the "edible" subsumer.
  Taxonomy tax;
  tax.add_concept("root", 0);
  tax.add_concept("edible", 2);
  tax.add_concept("sushi", 3);
  tax.add_concept("menu", 5);
  tax.add_concept("food", 4);
  tax.add_concept("staffing", 11);
  tax.add_edge("edible", "root");
  tax.add_edge("sushi", "edible");
  tax.add_edge("menu", "edible");
  tax.add_edge("food", "edible");
  tax.add_edge("staffing", "root");
  tax.add_word("sushi", "sushi");
  tax.add_word("menu", "menu");
  tax.add_word("food", "food");
  tax.add_word("staff", "staffing");
  tax.finalize();
  return tax;
}

}  // namespace

TEST_SUITE("evaluate") {

TEST_CASE("mask removes exactly the gold tokens") {
  const auto model = fixture_model();
  // tokens: menu=0, food=1, bar=5
  const auto lr = labeled("r1", {0, 1, 5, 1}, {"menu"});
  const auto masked = mask(lr, model.vocabulary);
  CHECK(masked.tokens == std::vector<int>{1, 5, 1});
}

TEST_CASE("mask with multiple gold terms removes all of them") {
  const auto model = fixture_model();
  const auto lr = labeled("r1", {0, 1, 5, 2}, {"menu", "bar"});
  const auto masked = mask(lr, model.vocabulary);
  CHECK(masked.tokens == std::vector<int>{1, 2});
}

TEST_CASE("mask is a no-op when gold terms are absent from the tokens") {
  const auto model = fixture_model();
  const auto lr = labeled("r1", {1, 2}, {"wombat"});
  const auto masked = mask(lr, model.vocabulary);
  CHECK(masked.tokens == std::vector<int>{1, 2});
}

TEST_CASE("masking plan size and nesting") {
  std::vector<LabeledReview> testset;
  for (int i = 0; i < 10; ++i)
    testset.push_back(labeled("r" + std::to_string(i), {0}, {"menu"}));
  testset.push_back(labeled("nogold", {0}, {}));  // ineligible

  const auto p0 = make_masking_plan(testset, 0.0, 9);
  const auto p2 = make_masking_plan(testset, 0.2, 9);
  const auto p3 = make_masking_plan(testset, 0.3, 9);
  const auto p1 = make_masking_plan(testset, 1.0, 9);
  CHECK(p0.masked_ids.empty());
  CHECK(p2.masked_ids.size() == 2);
  CHECK(p3.masked_ids.size() == 3);
  CHECK(p1.masked_ids.size() == 10);
  CHECK(p1.masked_ids.count("nogold") == 0);
  CHECK(std::includes(p3.masked_ids.begin(), p3.masked_ids.end(), p2.masked_ids.begin(),
                      p2.masked_ids.end()));
  // deterministic under the same seed
  const auto p3_again = make_masking_plan(testset, 0.3, 9);
  CHECK(p3.masked_ids == p3_again.masked_ids);
  CHECK_THROWS_AS(make_masking_plan(testset, 1.5, 9), DataError);
}

TEST_CASE("match_rank finds the first aspect containing the target") {
  const auto model = fixture_model();
  const TopWordTable table(model, 2);  // aspect 0: {menu, food}; 1: {staff, service}; 2: {music, bar}
  const std::vector<RankedAspect> ranking{{1, 0.5}, {0, 0.3}, {2, 0.2}};
  const auto match = match_rank(table, ranking, "menu", model.vocabulary, nullptr);
  REQUIRE(match.has_value());
  CHECK(match->rank == 2);  // aspect 0 sits at position 2 of the ranking
  CHECK(match->via == MatchVia::kExact);

  const auto miss = match_rank(table, ranking, "wombat", model.vocabulary, nullptr);
  CHECK_FALSE(miss.has_value());
}

TEST_CASE("match_rank falls back to the taxonomy for OOV gold terms") {
  const auto model = fixture_model();
  const Taxonomy tax = oov_taxonomy();
  const TopWordTable table(model, 2);
  const std::vector<RankedAspect> ranking{{1, 0.5}, {2, 0.3}, {0, 0.2}};
  // sushi -> nearest in-vocab word under "edible" (food or menu, both in
  // aspect 0's top words); first aspect containing it is at position 3
  const auto match = match_rank(table, ranking, "sushi", model.vocabulary, &tax);
  REQUIRE(match.has_value());
  CHECK(match->rank == 3);
  CHECK(match->via == MatchVia::kSemantic);

  // without a taxonomy the same term is an automatic miss
  CHECK_FALSE(match_rank(table, ranking, "sushi", model.vocabulary, nullptr).has_value());
}

TEST_CASE("fraction 0 equals the unmasked evaluation and 1 masks everything") {
  const auto model = fixture_model();
  std::vector<LabeledReview> testset{
      labeled("a", {0, 1, 0}, {"menu"}),
      labeled("b", {2, 3, 2}, {"staff"}),
      labeled("c", {4, 5}, {"bar"}),
      labeled("d", {0, 3, 4}, {"menu", "music"}),
  };
  EvalConfig config;
  config.fold_in.iterations = 200;
  config.fold_in.seed = 5;
  config.mask_seed = 17;

  const auto r0 = evaluate_masked(model, testset, 0.0, config, nullptr);
  CHECK(r0.n_masked == 0);
  for (const auto& o : r0.per_review) CHECK_FALSE(o.masked);

  const auto r1 = evaluate_masked(model, testset, 1.0, config, nullptr);
  CHECK(r1.n_masked == 4);
  for (const auto& o : r1.per_review) CHECK(o.masked);

  // determinism of the full report
  const auto r0_again = evaluate_masked(model, testset, 0.0, config, nullptr);
  CHECK(r0.all.mrr == r0_again.all.mrr);
  CHECK(r0.all.ndcg_at_k == r0_again.all.ndcg_at_k);
}

TEST_CASE("sweep_masking produces one report per fraction with nested masking") {
  const auto model = fixture_model();
  std::vector<LabeledReview> testset;
  for (int i = 0; i < 10; ++i) {
    testset.push_back(labeled("r" + std::to_string(i), {0, 1, i % 6}, {"menu"}));
  }
  EvalConfig config;
  config.fold_in.iterations = 50;
  config.mask_seed = 3;
  const auto reports = sweep_masking(model, testset, {0.0, 0.2, 0.5, 1.0}, config, nullptr);
  REQUIRE(reports.size() == 4);
  CHECK(reports[0].n_masked == 0);
  CHECK(reports[1].n_masked == 2);
  CHECK(reports[2].n_masked == 5);
  CHECK(reports[3].n_masked == 10);
  std::set<std::string> masked_02;
  std::set<std::string> masked_05;
  for (const auto& o : reports[1].per_review)
    if (o.masked) masked_02.insert(o.review_id);
  for (const auto& o : reports[2].per_review)
    if (o.masked) masked_05.insert(o.review_id);
  CHECK(std::includes(masked_05.begin(), masked_05.end(), masked_02.begin(), masked_02.end()));
}

TEST_CASE("reviews without gold terms are excluded from scoring") {
  const auto model = fixture_model();
  std::vector<LabeledReview> testset{
      labeled("a", {0, 1}, {"menu"}),
      labeled("empty", {2, 3}, {}),
  };
  EvalConfig config;
  config.fold_in.iterations = 50;
  const auto report = evaluate_masked(model, testset, 0.0, config, nullptr);
  CHECK(report.n_reviews == 1);
  CHECK(report.per_review.size() == 1);
}

TEST_CASE("labeled reviews come out of SemEval sentences normalized") {
  const auto model = fixture_model();
  PreprocessConfig config;
  config.stopwords = {"the", "is", "and", "a", "with", "was", "were", "but"};
  const auto sentences =
      load_semeval_xml(lad::testing::test_data_dir() / "semeval2014_sample.xml");
  const auto testset = make_labeled_reviews(sentences, config, model.vocabulary);
  REQUIRE(testset.size() == 4);
  // "The menu is extensive and a bar with live music." -> menu, bar in gold
  CHECK(testset[0].gold_terms == std::vector<std::string>{"menu", "bar"});
  // tokens are encoded against the model vocabulary (extensive/live are OOV)
  CHECK(testset[0].review.tokens == std::vector<int>{0, 5, 4});
  CHECK(testset[2].gold_terms.empty());
}

TEST_CASE("gold terms run through the training normalizer") {
  const auto model = model_from_counts(2, {"table", "menu"}, {{5, 1}, {1, 5}});
  PreprocessConfig config;
  SemEvalSentence s;
  s.id = "x";
  s.text = "The Tables were tiny.";
  s.aspect_terms = {"Tables", "tables", "MENU items"};
  const auto testset = make_labeled_reviews({s}, config, model.vocabulary);
  REQUIRE(testset.size() == 1);
  // "Tables" and "tables" normalize to one gold term; the multi-word term
  // keeps both tokens joined by a space
  CHECK(testset[0].gold_terms == std::vector<std::string>{"table", "menu item"});
}

TEST_CASE("report CSVs carry the expected headers and rows") {
  const auto model = fixture_model();
  std::vector<LabeledReview> testset{labeled("a", {0, 1}, {"menu"}),
                                     labeled("b", {2, 3}, {"staff"})};
  EvalConfig config;
  config.fold_in.iterations = 40;
  const auto reports = sweep_masking(model, testset, {0.0, 1.0}, config, nullptr);
  const auto csv = reports_csv(reports);
  CHECK(csv.rfind("fraction,all_mrr,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const auto detail = per_review_csv(reports[0]);
  CHECK(detail.rfind("review_id,masked,gold_count,matched_rank,matched_via\n", 0) == 0);
  CHECK(std::count(detail.begin(), detail.end(), '\n') == 3);
}

}  // TEST_SUITE
