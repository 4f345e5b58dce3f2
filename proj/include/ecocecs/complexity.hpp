#ifndef ECOCECS_COMPLEXITY_HPP
#define ECOCECS_COMPLEXITY_HPP

// Nearest-neighbour class-separability measures (N2, N3) and the centroid
// scores used to pick which classes to exchange during encoding.
//
// The templated kernels work on any dense Eigen expression whose rows are
// samples; the Dataset/BinaryView overloads are thin wrappers. All distances
// are plain Euclidean (not squared).

#include "ecocecs/dataset.hpp"

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ecocecs {

enum class Measure { N2, N3 };

std::string to_string(Measure m);
Measure parse_measure(const std::string& text);

struct ComplexityIndex {
  Measure kind = Measure::N2;
  double value = 0.0;
};

struct ClassCentroid {
  ClassIndex cls = 0;
  Eigen::VectorXd center;
};

class ComplexityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// intra is empty when the sample's group has no other member.
struct NnDistances {
  std::optional<double> intra;
  double inter = 0.0;
};

/// Symmetric matrix of Euclidean distances between the rows of x.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
pairwise_distances(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = x.rows();
  Mat dist = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar d = (x.row(i) - x.row(j)).norm();
      dist(i, j) = d;
      dist(j, i) = d;
    }
  }
  return dist;
}

/// Nearest same-label and different-label distances of sample i, read off a
/// precomputed distance matrix.
template <typename Derived>
NnDistances nn_distances_from(const Eigen::MatrixBase<Derived>& dist, std::span<const int> labels,
                              Eigen::Index i) {
  double intra = std::numeric_limits<double>::infinity();
  double inter = std::numeric_limits<double>::infinity();
  bool has_intra = false;
  bool has_inter = false;
  const int yi = labels[static_cast<std::size_t>(i)];
  for (Eigen::Index j = 0; j < dist.rows(); ++j) {
    if (j == i) {
      continue;
    }
    const double d = static_cast<double>(dist(i, j));
    if (labels[static_cast<std::size_t>(j)] == yi) {
      has_intra = true;
      intra = std::min(intra, d);
    } else {
      has_inter = true;
      inter = std::min(inter, d);
    }
  }
  if (!has_inter) {
    throw ComplexityError("nearest-neighbour distances need a sample of another class");
  }
  NnDistances out;
  out.inter = inter;
  if (has_intra) {
    out.intra = intra;
  }
  return out;
}

/// N2 over a distance matrix: sum of intra-class NN distances over sum of
/// inter-class NN distances. Samples whose label occurs once are left out of
/// both sums.
template <typename Derived>
double n2_from_distances(const Eigen::MatrixBase<Derived>& dist, std::span<const int> labels) {
  double intra_sum = 0.0;
  double inter_sum = 0.0;
  Eigen::Index used = 0;
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    const NnDistances nn = nn_distances_from(dist, labels, i);
    if (!nn.intra) {
      continue;
    }
    intra_sum += *nn.intra;
    inter_sum += nn.inter;
    ++used;
  }
  if (used == 0) {
    throw ComplexityError("N2 undefined: every label group is a singleton");
  }
  if (inter_sum == 0.0) {
    if (intra_sum == 0.0) {
      return 0.0;
    }
    throw ComplexityError("N2 undefined: degenerate geometry (all inter-class distances are zero)");
  }
  return intra_sum / inter_sum;
}

/// Number of leave-one-out 1-NN mistakes; distance ties go to the lowest index.
template <typename Derived>
Eigen::Index n3_errors_from_distances(const Eigen::MatrixBase<Derived>& dist,
                                      std::span<const int> labels) {
  const Eigen::Index n = dist.rows();
  if (n < 2) {
    throw ComplexityError("N3 needs at least 2 samples");
  }
  Eigen::Index errors = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      const double d = static_cast<double>(dist(i, j));
      if (best < 0 || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (labels[static_cast<std::size_t>(best)] != labels[static_cast<std::size_t>(i)]) {
      ++errors;
    }
  }
  return errors;
}

template <typename Derived>
double n3_from_distances(const Eigen::MatrixBase<Derived>& dist, std::span<const int> labels) {
  return static_cast<double>(n3_errors_from_distances(dist, labels)) /
         static_cast<double>(dist.rows());
}

/// N2 of the labeled point set x (rows are samples).
template <typename Derived>
double n2_index(const Eigen::MatrixBase<Derived>& x, std::span<const int> labels) {
  return n2_from_distances(pairwise_distances(x), labels);
}

/// N3 (leave-one-out 1-NN error rate) of the labeled point set x.
template <typename Derived>
double n3_index(const Eigen::MatrixBase<Derived>& x, std::span<const int> labels) {
  return n3_from_distances(pairwise_distances(x), labels);
}

/// i indexes the view's retained samples; groups are the two polarities.
NnDistances nn_distances(const BinaryView& v, Eigen::Index i);
/// i indexes the dataset's samples; groups are the classes.
NnDistances nn_distances(const Dataset& d, Eigen::Index i);

ComplexityIndex n2_index(const BinaryView& v);
ComplexityIndex n3_index(const BinaryView& v);
ComplexityIndex complexity_index(Measure m, const BinaryView& v);

/// Mean of each listed class's samples, in the order given.
std::vector<ClassCentroid> class_centroids(const Dataset& d, const ClassSet& group);

/// Ratio score of class k: summed centroid distances to the other classes of
/// its own group over summed distances to the classes of the other group.
/// Zero when k is alone in its group.
double group_complexity_ratio(const Dataset& d, const ClassSet& g1, const ClassSet& g2,
                              ClassIndex k);
/// Summed centroid distance from class k to the other classes of g.
double group_complexity_sum(const Dataset& d, const ClassSet& g, ClassIndex k);

/// Caches sample and centroid distances of one dataset so that repeated
/// index evaluations over different bipartitions stay cheap. Results match
/// the free functions above exactly.
class ComplexityEvaluator {
public:
  explicit ComplexityEvaluator(const Dataset& d);

  const Dataset& dataset() const { return *data_; }

  ComplexityIndex index(Measure m, const ClassSet& g1, const ClassSet& g2) const;
  double ratio_score(const ClassSet& g1, const ClassSet& g2, ClassIndex k) const;
  double sum_score(const ClassSet& g, ClassIndex k) const;
  double centroid_distance(ClassIndex a, ClassIndex b) const { return centroid_dist_(a, b); }

private:
  const Dataset* data_;
  Eigen::MatrixXd sample_dist_;
  Eigen::MatrixXd centroid_dist_;
};

} // namespace ecocecs

#endif // ECOCECS_COMPLEXITY_HPP
