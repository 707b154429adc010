// lad: latent aspect detection toolkit.
//
// Subcommands: preprocess, train, select-k, infer, evaluate, simulate,
// export-top-words. Every command is deterministic given its inputs and
// seeds, writes outputs atomically, and never mutates its inputs.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 internal invariant failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lad/coherence.hpp"
#include "lad/common.hpp"
#include "lad/corpus.hpp"
#include "lad/evaluate.hpp"
#include "lad/io.hpp"
#include "lad/sampler.hpp"
#include "lad/similarity.hpp"
#include "lad/synthetic.hpp"
#include "lad/text.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::uint64_t seed = 42;
  fs::path out_dir = ".";
  bool quiet = false;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--seed", common.seed, "Base random seed");
  cmd->add_option("--out-dir", common.out_dir, "Directory for output files");
  cmd->add_flag("--quiet", common.quiet, "Suppress progress output");
  cmd->add_flag("--verbose", common.verbose, "Extra progress output");
  cmd->set_config("--config", "", "Read defaults from a key=value file");
}

void say(const CommonOptions& common, const std::string& message) {
  if (!common.quiet) std::cerr << message << "\n";
}

lad::PreprocessConfig make_preprocess_config(const std::string& stopword_path,
                                             const std::string& normalizer_name,
                                             int min_doc_freq) {
  lad::PreprocessConfig config;
  if (!stopword_path.empty()) config.stopwords = lad::load_stopwords(stopword_path);
  config.normalizer = lad::make_normalizer(normalizer_name);
  config.normalizer_name = normalizer_name;
  config.min_doc_freq = min_doc_freq;
  return config;
}

std::vector<int> parse_k_range(int k_min, int k_max, int k_step, const std::vector<int>& k_list) {
  if (!k_list.empty()) return k_list;
  if (k_min < 2 || k_max < k_min || k_step < 1)
    throw lad::DataError("select-k: bad K range (need 2 <= k-min <= k-max, k-step >= 1)");
  std::vector<int> values;
  for (int k = k_min; k <= k_max; k += k_step) values.push_back(k);
  return values;
}

int run(int argc, char** argv) {
  CLI::App app{"lad: unsupervised latent aspect detection over review corpora"};
  app.require_subcommand(1);

  // ---- preprocess ----------------------------------------------------
  auto* preprocess = app.add_subcommand(
      "preprocess", "Tokenize, filter and encode raw reviews into a corpus file");
  CommonOptions pre_common;
  std::string pre_input;
  std::string pre_format = "lines";
  std::string pre_delimiter = "\t";
  std::string pre_stopwords;
  std::string pre_normalizer = "stem";
  int pre_min_doc_freq = 2;
  std::string pre_out = "corpus.json";
  std::string pre_report = "";
  std::string pre_source = "";
  preprocess->add_option("--input", pre_input, "Input file")->required();
  preprocess->add_option("--format", pre_format, "Input layout: lines | table")
      ->check(CLI::IsMember({"lines", "table"}));
  preprocess->add_option("--delimiter", pre_delimiter, "Column delimiter for --format table");
  preprocess->add_option("--stopwords", pre_stopwords, "Stopword file, one word per line");
  preprocess->add_option("--normalizer", pre_normalizer, "Token normalizer: stem | identity");
  preprocess->add_option("--min-doc-freq", pre_min_doc_freq,
                         "Prune words appearing in fewer documents");
  preprocess->add_option("--out", pre_out, "Corpus JSON output");
  preprocess->add_option("--report", pre_report, "Preprocessing report JSON output");
  preprocess->add_option("--source", pre_source, "Provenance label stored in the corpus");
  add_common(preprocess, pre_common);

  // ---- train ---------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Train an aspect model by collapsed Gibbs sampling");
  CommonOptions train_common;
  std::string train_corpus;
  std::string train_out = "model.json";
  std::string train_top_words = "";
  int train_top_m = 20;
  lad::TrainConfig train_config;
  train_cmd->add_option("--corpus", train_corpus, "Corpus JSON from preprocess")->required();
  train_cmd->add_option("--k", train_config.K, "Number of aspects")->required();
  train_cmd->add_option("--alpha", train_config.alpha,
                        "Document-aspect prior (default 5.0/K)");
  train_cmd->add_option("--beta", train_config.beta, "Aspect-word prior");
  train_cmd->add_option("--iterations", train_config.iterations, "Gibbs sweeps");
  train_cmd->add_option("--burn-in", train_config.burn_in, "Sweeps before sampling starts");
  train_cmd->add_option("--sample-lag", train_config.sample_lag, "Sweeps between samples");
  train_cmd->add_option("--out", train_out, "Model JSON output");
  train_cmd->add_option("--top-words", train_top_words, "Optional top-words CSV output");
  train_cmd->add_option("--top-m", train_top_m, "Words per aspect in the CSV");
  add_common(train_cmd, train_common);

  // ---- select-k --------------------------------------------------------
  auto* select = app.add_subcommand(
      "select-k", "Sweep aspect counts and score each model by UMass coherence");
  CommonOptions select_common;
  std::string select_corpus;
  std::string select_out = "coherence.csv";
  int select_k_min = 5;
  int select_k_max = 100;
  int select_k_step = 5;
  std::vector<int> select_k_list;
  lad::SweepConfig select_config;
  select->add_option("--corpus", select_corpus, "Corpus JSON from preprocess")->required();
  select->add_option("--k-min", select_k_min, "Smallest K");
  select->add_option("--k-max", select_k_max, "Largest K");
  select->add_option("--k-step", select_k_step, "Step between K values");
  select->add_option("--k-list", select_k_list, "Explicit K values (overrides the range)");
  select->add_option("--alpha", select_config.train.alpha,
                     "Document-aspect prior (default 5.0/K per K)");
  select->add_option("--beta", select_config.train.beta, "Aspect-word prior");
  select->add_option("--iterations", select_config.train.iterations, "Gibbs sweeps per K");
  select->add_option("--burn-in", select_config.train.burn_in, "Burn-in sweeps per K");
  select->add_option("--sample-lag", select_config.train.sample_lag, "Sweeps between samples");
  select->add_option("--top-m", select_config.top_m, "Top words per topic for coherence");
  select->add_option("--out", select_out, "Coherence CSV output");
  add_common(select, select_common);

  // ---- infer -----------------------------------------------------------
  auto* infer = app.add_subcommand("infer", "Rank aspects for new review text");
  CommonOptions infer_common;
  std::string infer_model;
  std::string infer_text;
  std::string infer_input;
  std::string infer_stopwords;
  std::string infer_normalizer = "stem";
  int infer_iterations = 200;
  int infer_top_words = 5;
  infer->add_option("--model", infer_model, "Model JSON from train")->required();
  infer->add_option("--text", infer_text, "One review given inline");
  infer->add_option("--input", infer_input, "File with one review per line");
  infer->add_option("--stopwords", infer_stopwords, "Stopword file (same as training)");
  infer->add_option("--normalizer", infer_normalizer, "Normalizer used at training time");
  infer->add_option("--iterations", infer_iterations, "Fold-in sweeps");
  infer->add_option("--top-words", infer_top_words, "Words shown per aspect");
  add_common(infer, infer_common);

  // ---- evaluate ----------------------------------------------------------
  auto* evaluate = app.add_subcommand(
      "evaluate", "Masked-aspect evaluation of a model against SemEval XML test sets");
  CommonOptions eval_common;
  std::string eval_model;
  std::vector<std::string> eval_tests;
  std::string eval_taxonomy;
  std::string eval_stopwords;
  std::string eval_normalizer = "stem";
  std::vector<double> eval_fractions;
  int eval_top_k = 5;
  int eval_metric_k = 5;
  int eval_iterations = 200;
  evaluate->add_option("--model", eval_model, "Model JSON from train")->required();
  evaluate->add_option("--test", eval_tests, "SemEval ABSA XML file(s)")->required();
  evaluate->add_option("--taxonomy", eval_taxonomy, "Taxonomy TSV for OOV gold terms");
  evaluate->add_option("--stopwords", eval_stopwords, "Stopword file (same as training)");
  evaluate->add_option("--normalizer", eval_normalizer, "Normalizer used at training time");
  evaluate->add_option("--fractions", eval_fractions,
                       "Masking fractions (default 0.0 0.1 .. 1.0)");
  evaluate->add_option("--top-k", eval_top_k, "Aspect top-word list size for matching");
  evaluate->add_option("--metric-k", eval_metric_k, "Metric cutoff");
  evaluate->add_option("--iterations", eval_iterations, "Fold-in sweeps per review");
  add_common(evaluate, eval_common);

  // ---- simulate ----------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "Sample a synthetic corpus with known ground truth");
  CommonOptions sim_common;
  lad::GenerateConfig sim_config;
  std::string sim_mode = "per_word";
  std::string sim_out_corpus = "synthetic_corpus.json";
  std::string sim_out_truth = "synthetic_truth.json";
  simulate->add_option("--k", sim_config.K, "Number of aspects");
  simulate->add_option("--v", sim_config.V, "Vocabulary size");
  simulate->add_option("--docs", sim_config.n_docs, "Number of documents");
  simulate->add_option("--doc-len", sim_config.doc_len, "Tokens per document");
  simulate->add_option("--alpha", sim_config.alpha, "Theta concentration");
  simulate->add_option("--beta", sim_config.beta, "Phi concentration");
  simulate->add_option("--mode", sim_mode, "per_word | per_review")
      ->check(CLI::IsMember({"per_word", "per_review"}));
  simulate->add_flag("--disjoint-supports", sim_config.disjoint_supports,
                     "Give each aspect an exclusive word block");
  simulate->add_option("--out-corpus", sim_out_corpus, "Corpus JSON output");
  simulate->add_option("--out-truth", sim_out_truth, "Ground truth JSON output");
  add_common(simulate, sim_common);

  // ---- export-top-words ---------------------------------------------------
  auto* export_cmd = app.add_subcommand("export-top-words",
                                        "Write the top words per aspect as CSV");
  CommonOptions export_common;
  std::string export_model;
  std::string export_out = "top_words.csv";
  int export_top_m = 20;
  export_cmd->add_option("--model", export_model, "Model JSON from train")->required();
  export_cmd->add_option("--top-m", export_top_m, "Words per aspect");
  export_cmd->add_option("--out", export_out, "CSV output");
  add_common(export_cmd, export_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 1;
  }

  const auto out_path = [](const CommonOptions& common, const std::string& name) {
    const fs::path p(name);
    return p.is_absolute() ? p : common.out_dir / p;
  };

  if (*preprocess) {
    const auto docs = pre_format == "lines"
                          ? lad::read_lines(pre_input)
                          : lad::read_delimited(pre_input, pre_delimiter.empty()
                                                               ? '\t'
                                                               : pre_delimiter[0]);
    const auto config =
        make_preprocess_config(pre_stopwords, pre_normalizer, pre_min_doc_freq);
    auto result = lad::build_corpus(docs, config);
    result.corpus.source = pre_source.empty() ? pre_input : pre_source;
    lad::save_corpus(result.corpus, out_path(pre_common, pre_out));
    if (!pre_report.empty())
      lad::atomic_write(out_path(pre_common, pre_report), lad::report_to_json(result.report));
    say(pre_common, "preprocess: " + std::to_string(result.corpus.reviews.size()) +
                        " reviews, vocabulary " +
                        std::to_string(result.corpus.vocabulary.size()) + " (" +
                        std::to_string(result.report.n_empty_reviews) + " empty)");
    return 0;
  }

  if (*train_cmd) {
    const auto corpus = lad::load_corpus(train_corpus);
    train_config.seed = train_common.seed;
    const auto model = lad::train(corpus, train_config);
    lad::save_model(model, out_path(train_common, train_out));
    if (!train_top_words.empty())
      lad::atomic_write(out_path(train_common, train_top_words),
                        lad::top_words_csv(model, train_top_m));
    say(train_common, "train: K=" + std::to_string(model.K) + ", V=" +
                          std::to_string(model.V()) + ", " +
                          std::to_string(train_config.iterations) + " sweeps");
    return 0;
  }

  if (*select) {
    const auto corpus = lad::load_corpus(select_corpus);
    const auto k_values = parse_k_range(select_k_min, select_k_max, select_k_step, select_k_list);
    select_config.train.seed = select_common.seed;
    const auto entries = lad::sweep_k(corpus, k_values, select_config);
    lad::atomic_write(out_path(select_common, select_out), lad::sweep_csv(entries));
    for (const auto& entry : entries) {
      if (entry.ok) {
        say(select_common, "select-k: K=" + std::to_string(entry.K) + " coherence " +
                               lad::format_double(entry.mean_coherence));
      } else {
        say(select_common, "select-k: K=" + std::to_string(entry.K) + " FAILED: " + entry.error);
      }
    }
    return 0;
  }

  if (*infer) {
    if (infer_text.empty() == infer_input.empty())
      throw CLI::ValidationError("infer", "give exactly one of --text or --input");
    const auto model = lad::load_model(infer_model);
    const auto config = make_preprocess_config(infer_stopwords, infer_normalizer, 1);
    std::vector<std::pair<std::string, std::string>> inputs;
    if (!infer_text.empty()) {
      inputs.emplace_back("text", infer_text);
    } else {
      for (const auto& doc : lad::read_lines(infer_input)) inputs.emplace_back(doc.id, doc.text);
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      lad::Review review;
      review.review_id = inputs[i].first;
      review.tokens = lad::encode_text(inputs[i].second, config, model.vocabulary);
      lad::FoldInConfig fold{infer_iterations,
                             lad::derive_seed(infer_common.seed, static_cast<std::uint64_t>(i))};
      const auto dist = lad::fold_in(model, review, fold);
      const auto ranking = lad::rank_aspects(dist);
      std::cout << "# review " << review.review_id
                << (dist.all_oov ? " (no in-vocabulary tokens: uniform distribution)" : "")
                << "\n";
      std::cout << "aspect_id\ttheta\ttop_words\n";
      for (const auto& ranked : ranking) {
        std::cout << ranked.aspect << '\t' << lad::format_double(ranked.probability) << '\t';
        const auto words = lad::top_words(model, ranked.aspect, infer_top_words);
        for (std::size_t w = 0; w < words.size(); ++w) {
          if (w) std::cout << ' ';
          std::cout << model.vocabulary.word(words[w].word);
        }
        std::cout << '\n';
      }
    }
    return 0;
  }

  if (*evaluate) {
    const auto model = lad::load_model(eval_model);
    const auto config = make_preprocess_config(eval_stopwords, eval_normalizer, 1);
    std::optional<lad::Taxonomy> taxonomy;
    if (!eval_taxonomy.empty()) taxonomy = lad::Taxonomy::load(eval_taxonomy);
    if (eval_fractions.empty()) {
      for (int i = 0; i <= 10; ++i) eval_fractions.push_back(i / 10.0);
    }
    lad::EvalConfig eval_config;
    eval_config.top_k = eval_top_k;
    eval_config.metric_k = eval_metric_k;
    eval_config.fold_in.iterations = eval_iterations;
    eval_config.fold_in.seed = eval_common.seed;
    eval_config.mask_seed = lad::derive_seed(eval_common.seed, 0x6d61736bULL);  // "mask"
    for (const auto& test_path : eval_tests) {
      const auto testset = lad::load_semeval(test_path, config, model.vocabulary);
      const auto reports = lad::sweep_masking(model, testset, eval_fractions, eval_config,
                                              taxonomy ? &*taxonomy : nullptr);
      const auto stem = fs::path(test_path).stem().string();
      lad::atomic_write(out_path(eval_common, stem + "_metrics.csv"),
                        lad::reports_csv(reports));
      std::string detail;
      for (std::size_t i = 0; i < reports.size(); ++i) {
        detail += "# fraction " + lad::format_double(reports[i].fraction) + "\n";
        detail += lad::per_review_csv(reports[i]);
      }
      lad::atomic_write(out_path(eval_common, stem + "_per_review.csv"), detail);
      say(eval_common, "evaluate: " + stem + ": " + std::to_string(testset.size()) +
                           " sentences, " + std::to_string(reports.size()) + " fractions");
    }
    return 0;
  }

  if (*simulate) {
    sim_config.mode = lad::mode_from_string(sim_mode);
    sim_config.seed = sim_common.seed;
    const auto data = lad::generate(sim_config);
    lad::save_corpus(data.corpus, out_path(sim_common, sim_out_corpus));
    lad::save_truth(data.truth, out_path(sim_common, sim_out_truth));
    say(sim_common, "simulate: " + std::to_string(sim_config.n_docs) + " docs, mode " +
                        lad::to_string(sim_config.mode));
    return 0;
  }

  if (*export_cmd) {
    const auto model = lad::load_model(export_model);
    lad::atomic_write(out_path(export_common, export_out),
                      lad::top_words_csv(model, export_top_m));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const lad::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const lad::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
