#include "ecocecs/experiment.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>

using namespace ecocecs;
namespace fs = std::filesystem;

namespace {

ExperimentConfig synthetic_config(const std::string& spec) {
  ExperimentConfig c;
  c.synthetic = parse_blob_spec(spec);
  return c;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

TEST_SUITE("cli_harness") {

TEST_CASE("config files and overrides") {
  const auto dir = testing::scratch_dir("config");
  testing::write_file(dir / "run.cfg",
                      "# comment\nsynthetic = classes=3,per_class=6,features=4,informative=2,spread=1,seed=2\n"
                      "learner = svm\nseed = 5\nencoders = ova, ecocecs-n3\n");
  const auto file = read_config_file(dir / "run.cfg");
  const ExperimentConfig c = make_config(file, {{"seed", "9"}, {"zscore", "true"}});
  CHECK(c.seed == 9);
  CHECK(c.learner == "svm");
  CHECK(c.zscore);
  CHECK(c.encoders == std::vector<std::string>{"ova", "ecocecs-n3"});
  REQUIRE(c.synthetic.has_value());
  CHECK(c.synthetic->classes == 3);
  CHECK(c.synthetic->seed == 2);
  CHECK(echo_config(c).find("seed=9\n") != std::string::npos);

  CHECK_THROWS_AS(make_config({{"colour", "red"}}, {}), ConfigError);
  CHECK_THROWS_AS(make_config({{"seed", "abc"}}, {}), ConfigError);
  CHECK_THROWS_AS(make_config({{"decoding", "fuzzy"}}, {}), ConfigError);
  testing::write_file(dir / "broken.cfg", "just words\n");
  CHECK_THROWS_AS(read_config_file(dir / "broken.cfg"), ConfigError);
}

TEST_CASE("blob spec parsing") {
  const BlobSpec s = parse_blob_spec("classes=4;per_class=9;features=7;informative=3;spread=0.5;seed=11");
  CHECK(s.classes == 4);
  CHECK(s.per_class == 9);
  CHECK(s.features == 7);
  CHECK(s.informative == 3);
  CHECK(s.spread == 0.5);
  CHECK(s.seed == 11);
  CHECK_THROWS_AS(parse_blob_spec("classes"), ConfigError);
  CHECK_THROWS_AS(parse_blob_spec("shape=round"), ConfigError);
}

TEST_CASE("validation errors") {
  ExperimentConfig none;
  CHECK_THROWS_AS(validate(none), ConfigError);
  ExperimentConfig c = synthetic_config("classes=3,per_class=5,features=4,informative=2,spread=1,seed=0");
  c.encoders = {"magic"};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.encoders = {"ova"};
  c.split = 1.5;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.split = 0.7;
  c.fs = "wilcoxon";
  c.k = 10;
  CHECK_THROWS_AS(cmd_eval(c), ConfigError);
}

TEST_CASE("encode on two classes gives one column with a one-step trace") {
  const auto dir = testing::scratch_dir("encode_r2");
  ExperimentConfig c = synthetic_config("classes=2,per_class=6,features=3,informative=2,spread=1,seed=1");
  c.out_dir = (dir / "out").string();
  const EncodeOutput out = cmd_encode(c);
  REQUIRE(out.matrices.size() == 1);
  CHECK(out.matrices[0].cols() == 1);
  CHECK(out.matrices[0].column_meta[0].trace.size() == 1);
  CHECK(fs::exists(dir / "out" / "config.txt"));
  CHECK(fs::exists(dir / "out" / "ecocecs-n2_matrix.csv"));
  CHECK(count_lines(testing::read_file(dir / "out" / "ecocecs-n2_trace.csv")) == 2);
}

TEST_CASE("overlapping six-class data shows accepted exchanges") {
  ExperimentConfig c = synthetic_config("classes=6,per_class=15,features=20,informative=5,spread=1,seed=39");
  c.seed = 39;
  const EncodeOutput out = cmd_encode(c);
  bool exchanged = false;
  for (const auto& meta : out.matrices[0].column_meta) {
    for (std::size_t i = 1; i < meta.trace.size(); ++i) CHECK(meta.trace[i] < meta.trace[i - 1]);
    exchanged = exchanged || meta.trace.size() >= 2;
  }
  CHECK(exchanged);
}

TEST_CASE("missing data path leaves nothing behind") {
  const auto dir = testing::scratch_dir("missing");
  ExperimentConfig c;
  c.data_path = (dir / "nope.csv").string();
  c.out_dir = (dir / "out").string();
  CHECK_THROWS_AS(cmd_encode(c), ConfigError);
  CHECK_THROWS_AS(cmd_eval(c), ConfigError);
  CHECK(fs::is_empty(dir));
}

TEST_CASE("eval with a csv dataset and an explicit test file") {
  const auto dir = testing::scratch_dir("eval_csv");
  const auto [train, test] = split_stratified(generate_blobs({3, 12, 5, 5, 0.2, 3}), 0.7, 0);
  write_csv(train, dir / "train.csv");
  write_csv(test, dir / "test.csv");
  ExperimentConfig c;
  c.data_path = (dir / "train.csv").string();
  c.test_path = (dir / "test.csv").string();
  c.encoders = {"ecocecs-n2", "ova", "ovo", "ordinal", "ecocecs-n3"};
  c.out_dir = (dir / "out").string();
  const EvalOutput out = cmd_eval(c);
  REQUIRE(out.reports.size() == 5);
  for (const auto& r : out.reports) CHECK(r.accuracy >= 0.95);
  CHECK(fs::exists(dir / "out" / "report.csv"));
  CHECK(fs::exists(dir / "out" / "ova_predictions.csv"));
  CHECK(fs::exists(dir / "out" / "ova_models.txt"));
  CHECK_FALSE(fs::exists(dir / "out" / "ova_trace.csv"));
}

TEST_CASE("sweep rows and validation") {
  ExperimentConfig c = synthetic_config("classes=3,per_class=10,features=40,informative=5,spread=1,seed=4");
  c.fs = "ttest";
  c.encoders = {"ecocecs-n2", "ova"};
  c.k_list = {1, 5, 10, 40};
  const auto rows = cmd_sweep(c);
  CHECK(rows.size() == 8);
  double at_one = 0.0;
  double at_five = 0.0;
  for (const auto& r : rows) {
    if (r.encoder == "ecocecs-n2" && r.k == 1) at_one = r.accuracy;
    if (r.encoder == "ecocecs-n2" && r.k == 5) at_five = r.accuracy;
  }
  CHECK(at_five >= at_one);

  c.k_list = {};
  CHECK_THROWS_AS(cmd_sweep(c), ConfigError);
  c.k_list = {5, 2};
  CHECK_THROWS_AS(cmd_sweep(c), ConfigError);
  c.k_list = {5, 41};
  CHECK_THROWS_AS(cmd_sweep(c), ConfigError);
}

TEST_CASE("complexity command") {
  ExperimentConfig c = synthetic_config("classes=3,per_class=8,features=3,informative=3,spread=0.01,seed=7");
  c.g1 = "c1";
  const ComplexityOutput out = cmd_complexity(c);
  CHECK(out.n3 == 0.0);
  CHECK(out.n2 < 0.2);
  c.g1 = "c9";
  CHECK_THROWS(cmd_complexity(c));
}

} // TEST_SUITE
