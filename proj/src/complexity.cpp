#include "ecocecs/complexity.hpp"

#include <algorithm>

namespace ecocecs {

namespace {

template <typename Dist>
double ratio_score_impl(const ClassSet& g1, const ClassSet& g2, ClassIndex k, Dist dist) {
  const bool in_g1 = std::find(g1.begin(), g1.end(), k) != g1.end();
  const bool in_g2 = std::find(g2.begin(), g2.end(), k) != g2.end();
  if (in_g1 == in_g2) {
    throw ComplexityError("class must belong to exactly one of the two groups");
  }
  const ClassSet& own = in_g1 ? g1 : g2;
  const ClassSet& other = in_g1 ? g2 : g1;
  if (other.empty()) {
    throw ComplexityError("ratio score needs a non-empty opposite group");
  }
  double within = 0.0;
  for (ClassIndex l : own) {
    if (l != k) {
      within += dist(k, l);
    }
  }
  if (own.size() == 1) {
    return 0.0;
  }
  double across = 0.0;
  for (ClassIndex h : other) {
    across += dist(k, h);
  }
  if (across == 0.0) {
    throw ComplexityError("ratio score undefined: degenerate centroids (coincident across groups)");
  }
  return within / across;
}

template <typename Dist>
double sum_score_impl(const ClassSet& g, ClassIndex k, Dist dist) {
  if (std::find(g.begin(), g.end(), k) == g.end()) {
    throw ComplexityError("class is not a member of the group");
  }
  double total = 0.0;
  for (ClassIndex l : g) {
    if (l != k) {
      total += dist(k, l);
    }
  }
  return total;
}

Eigen::MatrixXd centroid_matrix(const Dataset& d) {
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(d.num_classes(), d.num_features());
  const auto counts = d.class_counts();
  for (Eigen::Index i = 0; i < d.num_samples(); ++i) {
    centers.row(d.labels()[static_cast<std::size_t>(i)]) += d.samples().row(i);
  }
  for (int c = 0; c < d.num_classes(); ++c) {
    centers.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
  }
  return centers;
}

} // namespace

std::string to_string(Measure m) { return m == Measure::N2 ? "N2" : "N3"; }

Measure parse_measure(const std::string& text) {
  if (text == "N2" || text == "n2") {
    return Measure::N2;
  }
  if (text == "N3" || text == "n3") {
    return Measure::N3;
  }
  throw ComplexityError("unknown measure '" + text + "' (expected N2 or N3)");
}

NnDistances nn_distances(const BinaryView& v, Eigen::Index i) {
  if (i < 0 || i >= v.size()) {
    throw ComplexityError("sample index out of range");
  }
  const Eigen::MatrixXd x = v.samples();
  const Eigen::MatrixXd dist = pairwise_distances(x);
  return nn_distances_from(dist, std::span<const int>(v.polarity()), i);
}

NnDistances nn_distances(const Dataset& d, Eigen::Index i) {
  if (i < 0 || i >= d.num_samples()) {
    throw ComplexityError("sample index out of range");
  }
  const Eigen::MatrixXd dist = pairwise_distances(d.samples());
  return nn_distances_from(dist, std::span<const int>(d.labels()), i);
}

ComplexityIndex n2_index(const BinaryView& v) {
  return {Measure::N2, n2_index(v.samples(), std::span<const int>(v.polarity()))};
}

ComplexityIndex n3_index(const BinaryView& v) {
  return {Measure::N3, n3_index(v.samples(), std::span<const int>(v.polarity()))};
}

ComplexityIndex complexity_index(Measure m, const BinaryView& v) {
  return m == Measure::N2 ? n2_index(v) : n3_index(v);
}

std::vector<ClassCentroid> class_centroids(const Dataset& d, const ClassSet& group) {
  if (group.empty()) {
    throw ComplexityError("centroids requested for an empty group");
  }
  std::vector<ClassCentroid> out;
  out.reserve(group.size());
  for (ClassIndex c : group) {
    const auto rows = d.rows_of(c);
    if (rows.empty()) {
      throw ComplexityError("class has no samples");
    }
    Eigen::VectorXd center = Eigen::VectorXd::Zero(d.num_features());
    for (Eigen::Index r : rows) {
      center += d.samples().row(r).transpose();
    }
    center /= static_cast<double>(rows.size());
    out.push_back({c, std::move(center)});
  }
  return out;
}

double group_complexity_ratio(const Dataset& d, const ClassSet& g1, const ClassSet& g2,
                              ClassIndex k) {
  const Eigen::MatrixXd centers = centroid_matrix(d);
  return ratio_score_impl(g1, g2, k, [&](ClassIndex a, ClassIndex b) {
    return (centers.row(a) - centers.row(b)).norm();
  });
}

double group_complexity_sum(const Dataset& d, const ClassSet& g, ClassIndex k) {
  const Eigen::MatrixXd centers = centroid_matrix(d);
  return sum_score_impl(g, k, [&](ClassIndex a, ClassIndex b) {
    return (centers.row(a) - centers.row(b)).norm();
  });
}

ComplexityEvaluator::ComplexityEvaluator(const Dataset& d)
    : data_(&d), sample_dist_(pairwise_distances(d.samples())) {
  const Eigen::MatrixXd centers = centroid_matrix(d);
  const int r = d.num_classes();
  centroid_dist_ = Eigen::MatrixXd::Zero(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      centroid_dist_(a, b) = (centers.row(a) - centers.row(b)).norm();
    }
  }
}

ComplexityIndex ComplexityEvaluator::index(Measure m, const ClassSet& g1, const ClassSet& g2) const {
  const BinaryView view(*data_, g1, g2);
  const auto& rows = view.rows();
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd dist(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      dist(i, j) = sample_dist_(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
    }
  }
  const std::span<const int> labels(view.polarity());
  const double value = m == Measure::N2 ? n2_from_distances(dist, labels) : n3_from_distances(dist, labels);
  return {m, value};
}

double ComplexityEvaluator::ratio_score(const ClassSet& g1, const ClassSet& g2, ClassIndex k) const {
  return ratio_score_impl(g1, g2, k, [&](ClassIndex a, ClassIndex b) { return centroid_dist_(a, b); });
}

double ComplexityEvaluator::sum_score(const ClassSet& g, ClassIndex k) const {
  return sum_score_impl(g, k, [&](ClassIndex a, ClassIndex b) { return centroid_dist_(a, b); });
}

} // namespace ecocecs
