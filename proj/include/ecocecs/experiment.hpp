#ifndef ECOCECS_EXPERIMENT_HPP
#define ECOCECS_EXPERIMENT_HPP

// Experiment runner behind the command-line tool. Every command validates
// and computes everything in memory first and only then writes its output
// directory, so a failing run leaves no partial files behind.

#include "ecocecs/dataset.hpp"
#include "ecocecs/encoder.hpp"
#include "ecocecs/metrics.hpp"
#include "ecocecs/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecocecs {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string data_path;
  std::string test_path;
  std::string label_column;
  std::optional<BlobSpec> synthetic;
  std::string dataset_name;

  std::vector<std::string> encoders{"ecocecs-n2"};
  std::string learner = "gaussian_nb";
  std::string fs = "none";
  std::string fs_scope = "global";
  Eigen::Index k = 80;
  std::vector<Eigen::Index> k_list;
  std::uint64_t seed = 0;
  double beta = 1.0;
  double split = 0.7;
  std::string exchange_rule = "prose";
  int restarts = 1;
  bool zscore = false;
  bool normalized_decoding = true;
  double lambda = 1e-4;
  int epochs = 50;

  std::string g1;
  std::string g2;
  std::string out_dir;
};

/// Every key accepted by apply_setting (and as --key on the command line).
const std::vector<std::string>& config_keys();
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
/// Reads flat `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);
/// Settings from `file` applied first, then `overrides`.
ExperimentConfig make_config(const std::map<std::string, std::string>& file,
                             const std::map<std::string, std::string>& overrides);
/// Canonical key=value echo, one line per key in config_keys() order.
std::string echo_config(const ExperimentConfig& config);

BlobSpec parse_blob_spec(const std::string& text);
/// Checks enum values and numeric ranges that do not need the data.
void validate(const ExperimentConfig& config);

struct PreparedData {
  Dataset train;
  std::optional<Dataset> test;
  std::string name;
};

/// Loads the configured source. With `split` the data is split (or the
/// explicit test file loaded); z-scoring is fitted on the training side.
PreparedData prepare_data(const ExperimentConfig& config, bool split);

/// Builds the named encoder's matrix on a training set.
CodingMatrix build_matrix(const std::string& encoder, const Dataset& train, const ExperimentConfig& config);

struct EncodeOutput {
  std::vector<std::string> encoders;
  std::vector<CodingMatrix> matrices;
};

struct EvalOutput {
  std::vector<MethodResult> table;
  std::vector<EvalReport> reports;
};

struct SweepRow {
  Eigen::Index k = 0;
  std::string encoder;
  double accuracy = 0.0;
  double fscore = 0.0;
};

struct ComplexityOutput {
  double n2 = 0.0;
  double n3 = 0.0;
};

EncodeOutput cmd_encode(const ExperimentConfig& config);
EvalOutput cmd_eval(const ExperimentConfig& config);
std::vector<SweepRow> cmd_sweep(const ExperimentConfig& config);
ComplexityOutput cmd_complexity(const ExperimentConfig& config);

} // namespace ecocecs

#endif // ECOCECS_EXPERIMENT_HPP
