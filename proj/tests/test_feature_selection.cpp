#include "ecocecs/feature_selection.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace ecocecs;

namespace {

const std::vector<double> kValues{5, 6, 7, 1, 2, 3};
const std::vector<int> kLabels{1, 1, 1, -1, -1, -1};

// Brute-force pair count: +1 above -1 scores one, ties one half.
double pair_auc(const std::vector<double>& v, const std::vector<int>& y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (y[i] != 1 || y[j] != -1) continue;
      pairs += 1.0;
      wins += v[i] > v[j] ? 1.0 : v[i] == v[j] ? 0.5 : 0.0;
    }
  }
  return wins / pairs;
}

} // namespace

TEST_SUITE("feature_selection") {

TEST_CASE("scores on the three-versus-three fixture") {
  CHECK(roc_score(kValues, kLabels) == 0.5);
  CHECK(ttest_score(kValues, kLabels) == doctest::Approx(4.0 / std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(ttest_score(kValues, kLabels) == doctest::Approx(4.898979).epsilon(1e-6));
  // Rank sum 15 against mean 10.5, variance 3*3*7/12.
  CHECK(wilcoxon_score(kValues, kLabels) == doctest::Approx(4.5 / std::sqrt(5.25)).epsilon(1e-12));
}

TEST_CASE("identical groups score zero under every method") {
  const std::vector<double> v{1, 2, 3, 1, 2, 3};
  for (FilterMethod m : {FilterMethod::Roc, FilterMethod::TTest, FilterMethod::Wilcoxon}) {
    CHECK(score_feature(v, kLabels, m).score == doctest::Approx(0.0));
  }
  const std::vector<double> constant(6, 4.0);
  for (FilterMethod m : {FilterMethod::Roc, FilterMethod::TTest, FilterMethod::Wilcoxon}) {
    CHECK(score_feature(constant, kLabels, m).score == 0.0);
  }
}

TEST_CASE("roc agrees with brute-force pair counting") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> grid(0, 5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(12);
    std::vector<int> y(12);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = grid(rng);
      y[i] = i % 3 == 0 ? 1 : -1;
    }
    CHECK(roc_score(v, y) == doctest::Approx(std::abs(pair_auc(v, y) - 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("midranks average ties") {
  const std::vector<double> v{3, 1, 3, 2};
  const Eigen::VectorXd r = midranks(v);
  CHECK(r(0) == 3.5);
  CHECK(r(1) == 1.0);
  CHECK(r(2) == 3.5);
  CHECK(r(3) == 2.0);
}

TEST_CASE("rank scores are invariant under monotone transforms; t under affine ones") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v(20);
    std::vector<int> y(20);
    for (std::size_t i = 0; i < v.size(); ++i) {
      y[i] = i < 8 ? 1 : -1;
      v[i] = n(rng) + (y[i] == 1 ? 0.7 : 0.0);
    }
    std::vector<double> mono(v.size());
    std::vector<double> affine(v.size());
    std::transform(v.begin(), v.end(), mono.begin(), [](double x) { return std::exp(x) + x * x * x; });
    std::transform(v.begin(), v.end(), affine.begin(), [](double x) { return 4.0 * x - 9.0; });
    CHECK(roc_score(mono, y) == roc_score(v, y));
    CHECK(wilcoxon_score(mono, y) == doctest::Approx(wilcoxon_score(v, y)).epsilon(1e-12));
    CHECK(ttest_score(affine, y) == doctest::Approx(ttest_score(v, y)).epsilon(1e-10));
  }
}

TEST_CASE("ttest needs two samples per group") {
  CHECK_THROWS_AS(ttest_score(std::vector<double>{1, 2, 3}, std::vector<int>{1, -1, -1}), SelectionError);
  CHECK_THROWS_AS(roc_score(std::vector<double>{1, 2}, std::vector<int>{1, 1}), SelectionError);
}

TEST_CASE("planted informative features are recovered") {
  const Dataset d = generate_blobs({4, 20, 100, 10, 1.0, 5});
  for (FilterMethod m : {FilterMethod::Roc, FilterMethod::TTest, FilterMethod::Wilcoxon}) {
    std::vector<Eigen::Index> got = select_top_k(d, 10, m);
    std::sort(got.begin(), got.end());
    std::vector<Eigen::Index> planted(10);
    std::iota(planted.begin(), planted.end(), 0);
    CHECK(got == planted);
  }
}

TEST_CASE("select_top_k edge cases") {
  const Dataset d = generate_blobs({3, 5, 6, 2, 1.0, 2});
  for (FilterMethod m : {FilterMethod::Roc, FilterMethod::TTest, FilterMethod::Wilcoxon}) {
    std::vector<Eigen::Index> all = select_top_k(d, 6, m);
    CHECK(std::set<Eigen::Index>(all.begin(), all.end()).size() == 6);
    CHECK(select_top_k(d, 3, m) == select_top_k(d, 3, m));
    CHECK_THROWS_AS(select_top_k(d, 0, m), SelectionError);
    CHECK_THROWS_AS(select_top_k(d, 7, m), SelectionError);
  }

  const Dataset one = testing::make_dataset({{1, 0, 5}, {1, 1, 5}, {1, 2, 5}, {1, 3, 5}}, {"A", "A", "B", "B"});
  for (FilterMethod m : {FilterMethod::Roc, FilterMethod::TTest, FilterMethod::Wilcoxon}) {
    CHECK(select_top_k(one, 1, m) == std::vector<Eigen::Index>{1});
  }
}

TEST_CASE("top_k breaks ties towards lower indices") {
  std::vector<FeatureScore> s{{0, 1.0, FilterMethod::Roc}, {1, 2.0, FilterMethod::Roc},
                              {2, 1.0, FilterMethod::Roc}, {3, 2.0, FilterMethod::Roc}};
  const auto ranked = top_k(s, 3);
  CHECK(ranked[0].feature == 1);
  CHECK(ranked[1].feature == 3);
  CHECK(ranked[2].feature == 0);
}

TEST_CASE("filter names") {
  CHECK(parse_filter("wilcoxon") == FilterMethod::Wilcoxon);
  CHECK(parse_filter(to_string(FilterMethod::TTest)) == FilterMethod::TTest);
  CHECK_THROWS(parse_filter("chi2"));
}

} // TEST_SUITE
