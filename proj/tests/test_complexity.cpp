#include "ecocecs/complexity.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace ecocecs;

namespace {

std::vector<int> polarity_labels(const BinaryView& v) { return v.polarity(); }

Eigen::MatrixXd view_samples(const BinaryView& v) { return v.samples(); }

// Random rotation from the QR factor of a Gaussian matrix.
Eigen::MatrixXd random_rotation(Eigen::Index f, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(f, f);
  for (Eigen::Index i = 0; i < f; ++i)
    for (Eigen::Index j = 0; j < f; ++j) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ();
}

} // namespace

TEST_SUITE("complexity") {

TEST_CASE("nn_distances on a three-point line") {
  const Dataset d = testing::make_dataset({{0}, {1}, {3}}, {"A", "A", "B"});
  const NnDistances nn = nn_distances(d, 0);
  REQUIRE(nn.intra.has_value());
  CHECK(*nn.intra == 1.0);
  CHECK(nn.inter == 3.0);
  const auto pts = testing::points_of(d.samples());
  CHECK(*nn_distances(d, 1).intra == oracle::euclid(pts[1], pts[0]));
  CHECK(nn_distances(d, 1).inter == oracle::euclid(pts[1], pts[2]));
  CHECK(nn_distances(d, 2).inter == oracle::euclid(pts[2], pts[1]));
  CHECK_FALSE(nn_distances(d, 2).intra.has_value());
}

TEST_CASE("coincident same-class points have zero intra distance") {
  const Dataset d = testing::make_dataset({{2, 2}, {2, 2}, {5, 5}}, {"A", "A", "B"});
  CHECK(*nn_distances(d, 0).intra == 0.0);
}

TEST_CASE("n2 of two tight separated clusters is near zero") {
  const Dataset d = testing::make_dataset({{0.0}, {0.05}, {10.0}, {10.05}}, {"A", "A", "B", "B"});
  const BinaryView v = binary_view(d, {0}, {1});
  const double oracle_value = oracle::n2(testing::points_of(view_samples(v)), polarity_labels(v));
  CHECK(oracle_value == doctest::Approx(0.2 / 39.9));
  CHECK(n2_index(v).value == doctest::Approx(oracle_value).epsilon(1e-12));
  CHECK(n2_index(v).value < 0.02);
}

TEST_CASE("n2 rises when polarities are shuffled") {
  const Dataset d = generate_blobs({2, 20, 3, 3, 0.3, 7});
  const BinaryView v = binary_view(d, {0}, {1});
  const double separated = n2_index(v).value;

  std::vector<int> shuffled = polarity_labels(v);
  std::mt19937_64 rng(7);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const Eigen::MatrixXd x = view_samples(v);
  const double mixed = n2_index(x, std::span<const int>(shuffled));
  CHECK(mixed == doctest::Approx(oracle::n2(testing::points_of(x), shuffled)));
  CHECK(mixed >= separated);
}

TEST_CASE("square where every intra distance equals its inter distance has n2 exactly 1") {
  // Each corner has a same-label and an other-label neighbour along an edge.
  const Dataset d = testing::make_dataset({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {"A", "A", "B", "B"});
  CHECK(n2_index(binary_view(d, {0}, {1})).value == 1.0);
}

TEST_CASE("square with labels alternating around the perimeter") {
  // Same-label neighbours sit on the diagonal, so intra = sqrt(2) * inter.
  const Dataset d = testing::make_dataset({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {"A", "B", "A", "B"});
  const BinaryView v = binary_view(d, {0}, {1});
  CHECK(n2_index(v).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(n2_index(v).value == doctest::Approx(oracle::n2(testing::points_of(v.samples()), v.polarity())));
}

TEST_CASE("n2 excludes singleton groups and handles degenerate geometry") {
  // Sample 2 is alone in its group and contributes to neither sum.
  const Dataset d = testing::make_dataset({{0}, {1}, {5}}, {"A", "A", "B"});
  const BinaryView v = binary_view(d, {0}, {1});
  CHECK(n2_index(v).value == doctest::Approx(2.0 / 9.0));
  CHECK(n2_index(v).value == doctest::Approx(oracle::n2(testing::points_of(view_samples(v)), polarity_labels(v))));

  const Dataset coincident = testing::make_dataset({{1}, {1}, {1}, {1}}, {"A", "A", "B", "B"});
  CHECK(n2_index(binary_view(coincident, {0}, {1})).value == 0.0);

  const Dataset broken = testing::make_dataset({{0}, {0}, {1}, {1}}, {"A", "B", "A", "B"});
  CHECK_THROWS_WITH_AS(n2_index(binary_view(broken, {0}, {1})), doctest::Contains("degenerate geometry"),
                       ComplexityError);
}

TEST_CASE("n3 fixtures") {
  const Dataset far = generate_blobs({2, 8, 2, 2, 0.01, 3});
  const BinaryView v = binary_view(far, {0}, {1});
  CHECK(oracle::loo_1nn_mistakes(testing::points_of(view_samples(v)), polarity_labels(v)) == 0);
  CHECK(n3_index(v).value == 0.0);

  const Dataset twin = testing::make_dataset({{4, 4}, {4, 4}}, {"A", "B"});
  CHECK(n3_index(binary_view(twin, {0}, {1})).value == 1.0);
}

TEST_CASE("n3 matches the brute-force oracle on random sets") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const int f = 1 + static_cast<int>(rng() % 4);
    Eigen::MatrixXd x(n, f);
    std::uniform_int_distribution<int> grid(0, 4);  // coarse grid forces ties
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < f; ++j) x(i, j) = grid(rng);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (auto& l : labels) l = (rng() & 1u) ? 1 : -1;
    const Eigen::Index errors = n3_errors_from_distances(pairwise_distances(x), std::span<const int>(labels));
    CHECK(errors == oracle::loo_1nn_mistakes(testing::points_of(x), labels));
    const double rate = n3_index(x, std::span<const int>(labels));
    CHECK(rate * n == doctest::Approx(std::round(rate * n)));
  }
}

TEST_CASE("measures are invariant under reordering, rigid motion and scaling") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Dataset d = generate_blobs({3, 6, 4, 3, 1.0, seed});
    const BinaryView v = binary_view(d, {0, 2}, {1});
    const Eigen::MatrixXd x = view_samples(v);
    const std::vector<int> y = polarity_labels(v);
    const double n2 = n2_index(x, std::span<const int>(y));
    const double n3 = n3_index(x, std::span<const int>(y));

    const Eigen::MatrixXd q = random_rotation(x.cols(), rng);
    Eigen::RowVectorXd shift(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) shift(j) = static_cast<double>(rng() % 100) - 50.0;
    const Eigen::MatrixXd moved = (x * q).rowwise() + shift;
    CHECK(n2_index(moved, std::span<const int>(y)) == doctest::Approx(n2).epsilon(1e-9));
    CHECK(n3_index(moved, std::span<const int>(y)) == n3);

    const Eigen::MatrixXd scaled = 3.5 * x;
    CHECK(n2_index(scaled, std::span<const int>(y)) == doctest::Approx(n2).epsilon(1e-12));
    CHECK(n3_index(scaled, std::span<const int>(y)) == n3);

    // Reverse the sample order; no exact distance ties in continuous data.
    const Eigen::MatrixXd reversed = x.colwise().reverse();
    const std::vector<int> y_rev(y.rbegin(), y.rend());
    CHECK(n2_index(reversed, std::span<const int>(y_rev)) == doctest::Approx(n2).epsilon(1e-12));
    CHECK(n3_index(reversed, std::span<const int>(y_rev)) == n3);
  }
}

TEST_CASE("n2 is symmetric in polarity naming") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Dataset d = generate_blobs({4, 5, 3, 2, 1.0, seed});
    CHECK(n2_index(binary_view(d, {0, 1}, {2, 3})).value ==
          doctest::Approx(n2_index(binary_view(d, {2, 3}, {0, 1})).value).epsilon(1e-15));
    CHECK(n3_index(binary_view(d, {0, 3}, {1})).value == n3_index(binary_view(d, {1}, {0, 3})).value);
  }
}

TEST_CASE("class_centroids") {
  const Dataset d = testing::make_dataset({{0, 0}, {2, 2}, {7, 1}}, {"A", "A", "B"});
  const auto c = class_centroids(d, {0, 1});
  REQUIRE(c.size() == 2);
  CHECK(c[0].cls == 0);
  CHECK(c[0].center.isApprox(Eigen::Vector2d(1, 1)));
  CHECK(c[1].center == Eigen::Vector2d(7, 1));
  CHECK_THROWS_AS(class_centroids(d, {}), ComplexityError);
}

TEST_CASE("group_complexity_ratio fixtures") {
  const Dataset d = testing::make_dataset({{0, 0}, {0, 1}, {10, 0}}, {"A", "B", "C"});
  const double oracle_value = oracle::euclid({0, 0}, {0, 1}) / oracle::euclid({0, 0}, {10, 0});
  CHECK(group_complexity_ratio(d, {0, 1}, {2}, 0) == doctest::Approx(oracle_value).epsilon(1e-15));
  CHECK(group_complexity_ratio(d, {0, 1}, {2}, 0) == doctest::Approx(0.1));
  CHECK(group_complexity_ratio(d, {0, 1}, {2}, 2) == 0.0);

  // Equilateral triangle: same-group and cross-group distances are equal.
  const double h = std::sqrt(3.0) / 2.0;
  const Dataset tri = testing::make_dataset({{0, 0}, {1, 0}, {0.5, h}}, {"A", "B", "C"});
  CHECK(group_complexity_ratio(tri, {0, 1}, {2}, 0) == doctest::Approx(1.0));

  const Dataset degenerate = testing::make_dataset({{0, 0}, {1, 0}, {0, 0}}, {"A", "B", "C"});
  CHECK_THROWS_WITH_AS(group_complexity_ratio(degenerate, {0, 1}, {2}, 0),
                       doctest::Contains("degenerate centroids"), ComplexityError);
}

TEST_CASE("group_complexity_sum fixtures") {
  const Dataset d = testing::make_dataset({{0, 0}, {3, 0}, {0, 4}}, {"A", "B", "C"});
  CHECK(group_complexity_sum(d, {0, 1, 2}, 0) == doctest::Approx(7.0));
  CHECK(group_complexity_sum(d, {1}, 1) == 0.0);
  const Dataset dup = testing::make_dataset({{0, 0}, {0, 0}, {3, 4}}, {"A", "B", "C"});
  CHECK(group_complexity_sum(dup, {0, 1, 2}, 0) == doctest::Approx(5.0));
}

TEST_CASE("centroid scores depend only on centroids") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = generate_blobs({5, 4, 3, 3, 1.0, seed});
    Eigen::MatrixXd collapsed = d.samples();
    const auto centroids = class_centroids(d, {0, 1, 2, 3, 4});
    for (Eigen::Index i = 0; i < d.num_samples(); ++i) {
      collapsed.row(i) = centroids[static_cast<std::size_t>(d.labels()[static_cast<std::size_t>(i)])].center.transpose();
    }
    const Dataset c = d.with_samples(collapsed);
    for (ClassIndex k : {0, 1, 3}) {
      CHECK(group_complexity_ratio(c, {0, 1, 3}, {2, 4}, k) ==
            doctest::Approx(group_complexity_ratio(d, {0, 1, 3}, {2, 4}, k)).epsilon(1e-12));
      CHECK(group_complexity_sum(c, {0, 1, 3}, k) ==
            doctest::Approx(group_complexity_sum(d, {0, 1, 3}, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("evaluator agrees with the free functions") {
  const Dataset d = generate_blobs({5, 6, 4, 3, 1.0, 12});
  const ComplexityEvaluator eval(d);
  for (const auto& [g1, g2] : oracle::bipartitions(5)) {
    const BinaryView v = binary_view(d, g1, g2);
    CHECK(eval.index(Measure::N2, g1, g2).value == n2_index(v).value);
    CHECK(eval.index(Measure::N3, g1, g2).value == n3_index(v).value);
    for (ClassIndex k : g1) {
      CHECK(eval.ratio_score(g1, g2, k) == doctest::Approx(group_complexity_ratio(d, g1, g2, k)).epsilon(1e-14));
      CHECK(eval.sum_score(g1, k) == doctest::Approx(group_complexity_sum(d, g1, k)).epsilon(1e-14));
    }
  }
}

TEST_CASE("measure names round-trip") {
  CHECK(parse_measure(to_string(Measure::N2)) == Measure::N2);
  CHECK(parse_measure("n3") == Measure::N3);
  CHECK_THROWS(parse_measure("N4"));
}

} // TEST_SUITE
