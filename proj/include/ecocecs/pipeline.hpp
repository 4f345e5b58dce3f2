#ifndef ECOCECS_PIPELINE_HPP
#define ECOCECS_PIPELINE_HPP

#include "ecocecs/dataset.hpp"
#include "ecocecs/dichotomizers.hpp"
#include "ecocecs/encoder.hpp"
#include "ecocecs/feature_selection.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ecocecs {

class PipelineError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FitOptions {
  LearnerKind learner = LearnerKind::GaussianNB;
  LearnerParams params;
  std::uint64_t seed = 0;
  /// Global feature subset (indices into the dataset); empty keeps all.
  std::vector<Eigen::Index> feature_subset;
  /// When set, each column additionally keeps its own top-k features,
  /// scored on that column's binary view.
  std::optional<Eigen::Index> per_column_k;
  FilterMethod per_column_filter = FilterMethod::Wilcoxon;
  /// Normalize decoding distances by each row's active-column count.
  bool normalized_decoding = true;
};

struct EcocModel {
  CodingMatrix matrix;
  std::vector<DichotomizerModel> column_models;
  std::vector<Eigen::Index> feature_subset;
  /// Per column, indices into the projected feature space; empty = all.
  std::vector<std::vector<Eigen::Index>> column_features;
  /// Training sample count of every column model.
  std::vector<Eigen::Index> column_train_size;
  bool normalized_decoding = true;
};

struct Decoding {
  ClassIndex row = 0;               // row of the coding matrix
  Eigen::VectorXi code;             // dichotomizer outputs
  Eigen::VectorXd distances;        // one per matrix row
};

EcocModel fit(const Dataset& d, const CodingMatrix& matrix, const FitOptions& options = {});

/// Loss distance of a hard code vector to every matrix row. Zero entries are
/// skipped; with `normalized` each row is divided by its non-zero count.
Eigen::VectorXd codeword_distances(const Eigen::MatrixXi& matrix,
                                   const Eigen::Ref<const Eigen::VectorXi>& code, bool normalized);

/// x lives in the projected feature space (feature_subset order).
Decoding decode_detailed(const EcocModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
std::string decode(const EcocModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Rows of `samples` are full-dimensional; each is projected first.
std::vector<Decoding> predict_batch_detailed(const EcocModel& model, const Eigen::MatrixXd& samples);
std::vector<std::string> predict_batch(const EcocModel& model, const Eigen::MatrixXd& samples);
std::vector<std::string> predict_batch(const EcocModel& model, const Dataset& d);

/// One `[column N]` section per dichotomizer followed by its key=value lines.
void write_models(const EcocModel& model, const std::filesystem::path& path);
/// sample,true_label,predicted,dist_<class>...
void write_predictions_csv(const EcocModel& model, const std::vector<Decoding>& decodings,
                           const std::vector<std::string>& true_labels,
                           const std::filesystem::path& path);

} // namespace ecocecs

#endif // ECOCECS_PIPELINE_HPP
