#ifndef ECOCECS_DATASET_HPP
#define ECOCECS_DATASET_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ecocecs {

using ClassIndex = int;
using ClassSet = std::vector<ClassIndex>;

class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Labeled sample matrix. Rows are samples, columns are features. Labels are
/// indices into class_names, which keeps first-appearance order.
class Dataset {
public:
  Dataset(Eigen::MatrixXd samples, std::vector<ClassIndex> labels,
          std::vector<std::string> class_names);

  /// Builds a dataset from string labels; class order is first appearance.
  static Dataset from_labels(Eigen::MatrixXd samples,
                             const std::vector<std::string>& labels);

  const Eigen::MatrixXd& samples() const { return samples_; }
  const std::vector<ClassIndex>& labels() const { return labels_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  Eigen::Index num_samples() const { return samples_.rows(); }
  Eigen::Index num_features() const { return samples_.cols(); }
  int num_classes() const { return static_cast<int>(class_names_.size()); }

  /// Samples per class, indexed by class.
  std::vector<Eigen::Index> class_counts() const;
  /// Row indices belonging to class c, ascending.
  std::vector<Eigen::Index> rows_of(ClassIndex c) const;
  ClassIndex class_index(const std::string& name) const;

  /// Copy restricted to the given rows (order kept). The class list is kept
  /// as is, so every class must keep at least one row.
  Dataset select_rows(const std::vector<Eigen::Index>& rows) const;
  /// Copy restricted to the given feature columns, in the given order.
  Dataset select_features(const std::vector<Eigen::Index>& features) const;
  /// Copy with a replaced sample matrix of the same shape.
  Dataset with_samples(Eigen::MatrixXd samples) const;

  /// Copy relabeled onto the class list `order`. Every class here must
  /// appear in `order`, and every class of `order` needs samples here.
  Dataset with_class_order(const std::vector<std::string>& order) const;

  void set_feature_names(std::vector<std::string> names);

private:
  Eigen::MatrixXd samples_;
  std::vector<ClassIndex> labels_;
  std::vector<std::string> class_names_;
  std::vector<std::string> feature_names_;
};

/// Two-group relabeling of a dataset: classes of g1 map to +1, g2 to -1,
/// everything else is dropped. Holds a pointer to the base dataset, which
/// must outlive the view.
class BinaryView {
public:
  BinaryView(const Dataset& base, ClassSet g1, ClassSet g2);

  const Dataset& base() const { return *base_; }
  const ClassSet& g1() const { return g1_; }
  const ClassSet& g2() const { return g2_; }

  /// Retained base rows, ascending.
  const std::vector<Eigen::Index>& rows() const { return rows_; }
  /// Polarity (+1/-1) per retained row.
  const std::vector<int>& polarity() const { return polarity_; }
  int polarity_of(ClassIndex c) const;

  Eigen::Index size() const { return static_cast<Eigen::Index>(rows_.size()); }
  /// Retained samples as a dense matrix.
  Eigen::MatrixXd samples() const;

private:
  const Dataset* base_;
  ClassSet g1_;
  ClassSet g2_;
  std::vector<Eigen::Index> rows_;
  std::vector<int> polarity_;
};

BinaryView binary_view(const Dataset& d, ClassSet g1, ClassSet g2);

/// Label column: a column name, or empty for the last column.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column = {});
void write_csv(const Dataset& d, const std::filesystem::path& path,
               const std::string& label_column = "label");

struct BlobSpec {
  int classes = 3;
  int per_class = 20;
  int features = 10;
  int informative = 5;
  double spread = 1.0;
  std::uint64_t seed = 0;
};

/// Isotropic Gaussian blobs. In every informative coordinate the class
/// means sit on the unit-spaced levels k - (R-1)/2, permuted per
/// coordinate; the remaining coordinates have mean 0. Noise std = spread.
Dataset generate_blobs(const BlobSpec& spec);

/// Per-class ceil(fraction * n_k) training rows (clamped to leave one test
/// row). Returns (train, test).
std::pair<Dataset, Dataset> split_stratified(const Dataset& d, double train_fraction,
                                             std::uint64_t seed);
/// Same split, as row indices into d.
std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>>
split_stratified_indices(const Dataset& d, double train_fraction, std::uint64_t seed);

/// Column-wise z-score statistics, fitted on one dataset and applied to others.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Dataset& d);
  Dataset apply(const Dataset& d) const;
};

} // namespace ecocecs

#endif // ECOCECS_DATASET_HPP
