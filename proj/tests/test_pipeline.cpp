#include "ecocecs/pipeline.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace ecocecs;

namespace {

Eigen::Index nonzero_samples(const CodingMatrix& m, const Dataset& d, Eigen::Index col) {
  const auto counts = d.class_counts();
  Eigen::Index total = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (m.entries(r, col) != 0) total += counts[static_cast<std::size_t>(r)];
  }
  return total;
}

} // namespace

TEST_SUITE("ecoc_pipeline") {

TEST_CASE("ternary decoding fixture") {
  Eigen::MatrixXi m(3, 2);
  m << 1, 1, 1, -1, -1, 0;
  const Eigen::VectorXd dist = codeword_distances(m, Eigen::Vector2i(-1, 1), true);
  CHECK(dist(0) == 0.5);
  CHECK(dist(1) == 1.0);
  CHECK(dist(2) == 0.0);
  const Eigen::VectorXd raw = codeword_distances(m, Eigen::Vector2i(-1, 1), false);
  CHECK(raw(0) == 1.0);
  CHECK(raw(1) == 2.0);
  CHECK(raw(2) == 0.0);
}

TEST_CASE("normalization does not change the ranking for full-density codes") {
  std::mt19937_64 rng(4);
  for (int r = 2; r <= 7; ++r) {
    for (const CodingMatrix& m : {ova_matrix(r), ordinal_matrix(r)}) {
      for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXi s(m.cols());
        for (Eigen::Index j = 0; j < s.size(); ++j) s(j) = (rng() & 1u) ? 1 : -1;
        const Eigen::VectorXd a = codeword_distances(m.entries, s, true);
        const Eigen::VectorXd b = codeword_distances(m.entries, s, false);
        Eigen::Index ia = 0, ib = 0;
        a.minCoeff(&ia);
        b.minCoeff(&ib);
        CHECK(ia == ib);
      }
    }
  }
}

TEST_CASE("exact codewords decode to their own row") {
  for (int r = 2; r <= 6; ++r) {
    for (const CodingMatrix& m : {ova_matrix(r), ovo_matrix(r), ordinal_matrix(r)}) {
      for (Eigen::Index row = 0; row < m.rows(); ++row) {
        Eigen::VectorXi s = m.entries.row(row).transpose();
        for (Eigen::Index j = 0; j < s.size(); ++j) {
          if (s(j) == 0) s(j) = 1;
        }
        const Eigen::VectorXd d = codeword_distances(m.entries, s, true);
        CHECK(d(row) == 0.0);
        Eigen::Index best = 0;
        d.minCoeff(&best);
        CHECK(best == row);
      }
    }
  }
}

TEST_CASE("two classes: the pipeline is the single model") {
  const Dataset d = generate_blobs({2, 10, 3, 3, 1.5, 2});
  const CodingMatrix m = ecocecs_encode(d, {}, 0);
  const EcocModel model = fit(d, m);
  REQUIRE(model.column_models.size() == 1);
  const auto names = predict_batch(model, d);
  const int plus_row = m.entries(0, 0) == 1 ? 0 : 1;
  for (Eigen::Index i = 0; i < d.num_samples(); ++i) {
    const int s = predict(model.column_models[0], d.samples().row(i).transpose());
    const std::string expected = m.class_order[static_cast<std::size_t>(s == 1 ? plus_row : 1 - plus_row)];
    CHECK(names[static_cast<std::size_t>(i)] == expected);
  }
}

TEST_CASE("OVA trains every column on all samples") {
  const Dataset d = generate_blobs({3, 7, 3, 3, 1.0, 1});
  const EcocModel model = fit(d, ova_matrix(d.class_names()));
  CHECK(model.column_models.size() == 3);
  for (Eigen::Index n : model.column_train_size) CHECK(n == d.num_samples());
}

TEST_CASE("tree columns train only on their node's samples") {
  const Dataset d = generate_blobs({4, 6, 4, 3, 1.0, 3});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CodingMatrix m = ecocecs_encode(d, {}, seed);
    const EcocModel model = fit(d, m);
    REQUIRE(model.column_models.size() == 3);
    CHECK(model.column_train_size[0] == d.num_samples());
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(model.column_train_size[static_cast<std::size_t>(j)] == nonzero_samples(m, d, j));
    }
    Eigen::Index below_root = 0;
    for (Eigen::Index j = 1; j < 3; ++j) below_root += model.column_train_size[static_cast<std::size_t>(j)];
    CHECK(below_root < 2 * d.num_samples());
  }
}

TEST_CASE("separable training data is predicted perfectly") {
  const Dataset d = generate_blobs({5, 10, 6, 6, 0.1, 9});
  for (LearnerKind k : {LearnerKind::GaussianNB, LearnerKind::LinearHinge, LearnerKind::OneNN}) {
    FitOptions opts;
    opts.learner = k;
    const EcocModel model = fit(d, ecocecs_encode(d, {}, 4), opts);
    const auto pred = predict_batch(model, d);
    for (Eigen::Index i = 0; i < d.num_samples(); ++i) {
      CHECK(pred[static_cast<std::size_t>(i)] == d.class_names()[static_cast<std::size_t>(d.labels()[static_cast<std::size_t>(i)])]);
    }
  }
}

TEST_CASE("batch prediction edge cases") {
  const Dataset d = generate_blobs({3, 5, 4, 2, 1.0, 0});
  FitOptions opts;
  opts.feature_subset = {3, 0};
  const EcocModel model = fit(d, ovo_matrix(d.class_names()), opts);
  CHECK(predict_batch(model, Eigen::MatrixXd(0, 4)).empty());

  Eigen::MatrixXd dup(2, 4);
  dup.row(0) = d.samples().row(2);
  dup.row(1) = d.samples().row(2);
  const auto p = predict_batch(model, dup);
  CHECK(p[0] == p[1]);
  CHECK(std::find(d.class_names().begin(), d.class_names().end(), p[0]) != d.class_names().end());

  // decode works in the projected space.
  const Eigen::Vector2d projected(d.samples()(2, 3), d.samples()(2, 0));
  CHECK(decode(model, projected) == p[0]);
  CHECK_THROWS(decode(model, Eigen::VectorXd::Zero(4)));
  CHECK_THROWS(predict_batch(model, Eigen::MatrixXd::Zero(1, 3)));
}

TEST_CASE("per-column selection keeps its own feature lists") {
  const Dataset d = generate_blobs({4, 8, 12, 4, 1.0, 6});
  FitOptions opts;
  opts.per_column_k = 3;
  const EcocModel model = fit(d, ecocecs_encode(d, {}, 1), opts);
  for (const auto& cols : model.column_features) CHECK(cols.size() == 3);
  CHECK(predict_batch(model, d).size() == static_cast<std::size_t>(d.num_samples()));
}

TEST_CASE("fit rejects invalid input") {
  const Dataset d = generate_blobs({3, 4, 2, 2, 1.0, 0});
  CHECK_THROWS(fit(d, ova_matrix(4)));
  CodingMatrix bad = ova_matrix(d.class_names());
  bad.entries(0, 0) = -1;
  CHECK_THROWS(fit(d, bad));
  CHECK_THROWS(fit(d, ova_matrix(std::vector<std::string>{"x", "y", "z"})));
}

} // TEST_SUITE
