#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "lad/io.hpp"
#include "support.hpp"

using lad::testing::TempDir;
using lad::testing::test_data_dir;

namespace {

#ifndef LAD_CLI_PATH
#error "LAD_CLI_PATH must point at the lad binary"
#endif

int run_cli(const std::string& args) {
  const std::string command = std::string(LAD_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) { return lad::read_file(p); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("preprocess writes a corpus and is byte-stable across reruns") {
  TempDir dir("cli_pre");
  const auto input = test_data_dir() / "reviews_sample.txt";
  const auto stopwords = test_data_dir() / "stopwords_test.txt";
  const auto corpus_a = dir.path() / "a.json";
  const auto corpus_b = dir.path() / "b.json";
  const std::string base = "preprocess --input " + input.string() + " --stopwords " +
                           stopwords.string() + " --min-doc-freq 2 --quiet --out ";
  CHECK(run_cli(base + corpus_a.string()) == 0);
  CHECK(run_cli(base + corpus_b.string()) == 0);
  CHECK(slurp(corpus_a) == slurp(corpus_b));
}

TEST_CASE("preprocess on a missing input exits 2 without partial output") {
  TempDir dir("cli_missing");
  const auto out = dir.path() / "never.json";
  CHECK(run_cli("preprocess --input /nonexistent/reviews.txt --quiet --out " + out.string()) ==
        2);
  CHECK_FALSE(std::filesystem::exists(out));
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("preprocess") == 1);        // missing --input
  CHECK(run_cli("definitely-not-a-command") == 1);
  CHECK(run_cli("train --corpus x.json") == 1);  // missing --k
}

TEST_CASE("train is deterministic given a seed and fails cleanly on bad input") {
  TempDir dir("cli_train");
  const auto corpus = dir.path() / "corpus.json";
  const auto input = test_data_dir() / "reviews_sample.txt";
  const auto stopwords = test_data_dir() / "stopwords_test.txt";
  REQUIRE(run_cli("preprocess --input " + input.string() + " --stopwords " +
                  stopwords.string() + " --quiet --out " + corpus.string()) == 0);

  const auto model_a = dir.path() / "a.json";
  const auto model_b = dir.path() / "b.json";
  const std::string base = "train --corpus " + corpus.string() +
                           " --k 3 --iterations 40 --burn-in 10 --sample-lag 5 --seed 11 "
                           "--quiet --out ";
  CHECK(run_cli(base + model_a.string()) == 0);
  CHECK(run_cli(base + model_b.string()) == 0);
  CHECK(slurp(model_a) == slurp(model_b));

  const auto missing_out = dir.path() / "never.json";
  CHECK(run_cli("train --corpus " + (dir.path() / "missing.json").string() +
                " --k 3 --quiet --out " + missing_out.string()) == 2);
  CHECK_FALSE(std::filesystem::exists(missing_out));
}

TEST_CASE("select-k writes one CSV row per K") {
  TempDir dir("cli_select");
  const auto corpus = dir.path() / "corpus.json";
  const auto input = test_data_dir() / "reviews_sample.txt";
  REQUIRE(run_cli("preprocess --input " + input.string() + " --min-doc-freq 2 --quiet --out " +
                  corpus.string()) == 0);
  const auto csv_path = dir.path() / "coherence.csv";
  CHECK(run_cli("select-k --corpus " + corpus.string() +
                " --k-list 2 3 --iterations 30 --burn-in 10 --top-m 5 --quiet --out " +
                csv_path.string()) == 0);
  const auto csv = slurp(csv_path);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);  // header + 2 rows
}

TEST_CASE("infer prints one row per aspect and flags all-OOV input") {
  TempDir dir("cli_infer");
  const auto corpus = dir.path() / "corpus.json";
  const auto model = dir.path() / "model.json";
  const auto input = test_data_dir() / "reviews_sample.txt";
  REQUIRE(run_cli("preprocess --input " + input.string() + " --quiet --out " + corpus.string()) ==
          0);
  REQUIRE(run_cli("train --corpus " + corpus.string() +
                  " --k 3 --iterations 40 --burn-in 10 --quiet --out " + model.string()) == 0);

  const auto out_file = dir.path() / "infer.txt";
  const std::string redirect = " > " + out_file.string();
  CHECK(std::system((std::string(LAD_CLI_PATH) + " infer --model " + model.string() +
                     " --text \"the menu and the food\" --quiet 2>/dev/null" + redirect)
                        .c_str()) == 0);
  const auto text = slurp(out_file);
  CHECK(text.find("aspect_id\ttheta\ttop_words") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') >= 4);  // header + 3 aspects

  CHECK(std::system((std::string(LAD_CLI_PATH) + " infer --model " + model.string() +
                     " --text \"zzzz qqqq\" --quiet 2>/dev/null" + redirect)
                        .c_str()) == 0);
  CHECK(slurp(out_file).find("no in-vocabulary tokens") != std::string::npos);

  CHECK(run_cli("infer --model " + model.string()) == 1);  // neither --text nor --input
}

TEST_CASE("evaluate emits metric and per-review CSVs per test file") {
  TempDir dir("cli_eval");
  const auto corpus = dir.path() / "corpus.json";
  const auto model = dir.path() / "model.json";
  const auto input = test_data_dir() / "reviews_sample.txt";
  const auto stopwords = test_data_dir() / "stopwords_test.txt";
  REQUIRE(run_cli("preprocess --input " + input.string() + " --stopwords " + stopwords.string() +
                  " --quiet --out " + corpus.string()) == 0);
  REQUIRE(run_cli("train --corpus " + corpus.string() +
                  " --k 3 --iterations 40 --burn-in 10 --quiet --out " + model.string()) == 0);

  const auto semeval = test_data_dir() / "semeval2014_sample.xml";
  const auto taxonomy = test_data_dir() / "taxonomy_toy.tsv";
  CHECK(run_cli("evaluate --model " + model.string() + " --test " + semeval.string() +
                " --taxonomy " + taxonomy.string() + " --stopwords " + stopwords.string() +
                " --fractions 0.0 0.5 1.0 --iterations 60 --quiet --out-dir " +
                dir.path().string()) == 0);
  const auto metrics = slurp(dir.path() / "semeval2014_sample_metrics.csv");
  CHECK(metrics.rfind("fraction,all_mrr,", 0) == 0);
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 4);
  CHECK(std::filesystem::exists(dir.path() / "semeval2014_sample_per_review.csv"));
}

TEST_CASE("simulate writes corpus and manifest deterministically") {
  TempDir dir("cli_sim");
  const std::string base = "simulate --k 2 --v 10 --docs 15 --doc-len 6 --mode per_review "
                           "--seed 5 --quiet --out-dir " +
                           dir.path().string();
  CHECK(run_cli(base + " --out-corpus c1.json --out-truth t1.json") == 0);
  CHECK(run_cli(base + " --out-corpus c2.json --out-truth t2.json") == 0);
  CHECK(slurp(dir.path() / "c1.json") == slurp(dir.path() / "c2.json"));
  CHECK(slurp(dir.path() / "t1.json") == slurp(dir.path() / "t2.json"));
  CHECK(slurp(dir.path() / "t1.json").find("per_review_single_aspect") != std::string::npos);
}

TEST_CASE("export-top-words dumps the CSV") {
  TempDir dir("cli_export");
  const auto corpus = dir.path() / "corpus.json";
  const auto model = dir.path() / "model.json";
  const auto input = test_data_dir() / "reviews_sample.txt";
  REQUIRE(run_cli("preprocess --input " + input.string() + " --quiet --out " + corpus.string()) ==
          0);
  REQUIRE(run_cli("train --corpus " + corpus.string() +
                  " --k 2 --iterations 30 --burn-in 10 --quiet --out " + model.string()) == 0);
  const auto csv_path = dir.path() / "top.csv";
  CHECK(run_cli("export-top-words --model " + model.string() + " --top-m 4 --out " +
                csv_path.string()) == 0);
  const auto csv = slurp(csv_path);
  CHECK(csv.rfind("aspect_id,rank,word,probability\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);  // header + 2*4
}

TEST_CASE("config file supplies defaults, flags take precedence") {
  TempDir dir("cli_config");
  const auto config_path = dir.path() / "lad.cfg";
  lad::atomic_write(config_path, "k=2\niterations=30\nburn-in=10\nquiet=true\n");
  const auto corpus = dir.path() / "corpus.json";
  const auto input = test_data_dir() / "reviews_sample.txt";
  REQUIRE(run_cli("preprocess --input " + input.string() + " --quiet --out " + corpus.string()) ==
          0);
  const auto model_cfg = dir.path() / "m_cfg.json";
  CHECK(run_cli("train --corpus " + corpus.string() + " --config " + config_path.string() +
                " --out " + model_cfg.string()) == 0);
  // flag overrides the config file's k=2
  const auto model_flag = dir.path() / "m_flag.json";
  CHECK(run_cli("train --corpus " + corpus.string() + " --config " + config_path.string() +
                " --k 4 --out " + model_flag.string()) == 0);
  CHECK(slurp(model_cfg).find("\"K\": 2") != std::string::npos);
  CHECK(slurp(model_flag).find("\"K\": 4") != std::string::npos);
}

}  // TEST_SUITE
