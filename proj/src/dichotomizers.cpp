#include "ecocecs/dichotomizers.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

namespace ecocecs {

namespace {

void check_training_set(const Eigen::MatrixXd& x, std::span<const int> y) {
  if (static_cast<Eigen::Index>(y.size()) != x.rows()) {
    throw LearnerError("target count does not match sample count");
  }
  bool pos = false;
  bool neg = false;
  for (int v : y) {
    if (v != 1 && v != -1) {
      throw LearnerError("targets must be +1 or -1");
    }
    pos = pos || v == 1;
    neg = neg || v == -1;
  }
  if (!pos || !neg) {
    throw LearnerError("training view contains a single polarity");
  }
}

template <typename Vec>
void write_array(std::ostream& out, const std::string& key, const Vec& v) {
  out << key << '=';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << (i ? " " : "") << detail::format_real(v(i));
  }
  out << '\n';
}

} // namespace

std::string to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::GaussianNB: return "gaussian_nb";
    case LearnerKind::LinearHinge: return "linear_hinge";
    case LearnerKind::OneNN: return "one_nn";
  }
  return "unknown";
}

LearnerKind parse_learner(const std::string& text) {
  if (text == "gaussian_nb" || text == "nb") {
    return LearnerKind::GaussianNB;
  }
  if (text == "linear_hinge" || text == "svm") {
    return LearnerKind::LinearHinge;
  }
  if (text == "one_nn" || text == "1nn") {
    return LearnerKind::OneNN;
  }
  throw LearnerError("unknown learner '" + text + "' (expected gaussian_nb, linear_hinge or one_nn)");
}

LearnerKind kind_of(const DichotomizerModel& m) {
  return static_cast<LearnerKind>(m.index());
}

Eigen::Index input_dimension(const DichotomizerModel& m) {
  return std::visit(
      [](const auto& model) -> Eigen::Index {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, GaussianNB>) {
          return model.mean.cols();
        } else if constexpr (std::is_same_v<T, LinearHinge>) {
          return model.weights.size();
        } else {
          return model.samples.cols();
        }
      },
      m);
}

GaussianNB fit_gaussian_nb(const Eigen::MatrixXd& x, std::span<const int> y) {
  check_training_set(x, y);
  const Eigen::Index f = x.cols();
  GaussianNB m;
  m.mean = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, f);
  m.variance = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, f);
  Eigen::Vector2d count = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int row = y[static_cast<std::size_t>(i)] > 0 ? 0 : 1;
    m.mean.row(row) += x.row(i);
    count(row) += 1.0;
  }
  m.mean.row(0) /= count(0);
  m.mean.row(1) /= count(1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const int row = y[static_cast<std::size_t>(i)] > 0 ? 0 : 1;
    m.variance.row(row) += (x.row(i) - m.mean.row(row)).array().square().matrix();
  }
  m.variance.row(0) /= count(0);
  m.variance.row(1) /= count(1);

  const Eigen::RowVectorXd overall = x.colwise().mean();
  const double max_var = ((x.rowwise() - overall).array().square().colwise().sum() /
                          static_cast<double>(x.rows()))
                             .maxCoeff();
  m.epsilon = std::max(1e-9 * max_var, 1e-12);
  m.variance.array() += m.epsilon;
  m.log_prior = (count / count.sum()).array().log();
  return m;
}

LinearHinge fit_linear_hinge(const Eigen::MatrixXd& x, std::span<const int> y,
                             const LearnerParams& params, std::uint64_t seed) {
  check_training_set(x, y);
  if (!(params.lambda > 0.0) || params.epochs < 1) {
    throw LearnerError("linear_hinge needs lambda > 0 and epochs >= 1");
  }
  const Eigen::Index n = x.rows();
  const Eigen::Index f = x.cols();
  // Train on centered inputs with a constant feature carrying the bias, then
  // fold the centering back into the bias.
  const Eigen::RowVectorXd center = x.colwise().mean();
  Eigen::MatrixXd z(n, f + 1);
  z.leftCols(f) = x.rowwise() - center;
  z.col(f).setOnes();

  const double lambda = params.lambda;
  const double radius = 1.0 / std::sqrt(lambda);
  const long total = static_cast<long>(params.epochs) * static_cast<long>(n);
  const long average_from = total / 2;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(f + 1);
  Eigen::VectorXd w_avg = Eigen::VectorXd::Zero(f + 1);
  long averaged = 0;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  long t = 0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double yi = y[static_cast<std::size_t>(i)];
      const double margin = yi * z.row(i).dot(w);
      w *= 1.0 - eta * lambda;
      if (margin < 1.0) {
        w += eta * yi * z.row(i).transpose();
      }
      const double norm = w.norm();
      if (norm > radius) {
        w *= radius / norm;
      }
      if (t > average_from) {
        ++averaged;
        w_avg += (w - w_avg) / static_cast<double>(averaged);
      }
    }
  }
  LinearHinge m;
  m.weights = w_avg.head(f);
  m.bias = w_avg(f) - center.dot(m.weights);
  m.lambda = lambda;
  m.epochs = params.epochs;
  if (!m.weights.allFinite() || !std::isfinite(m.bias)) {
    throw LearnerError("linear_hinge diverged");
  }
  return m;
}

DichotomizerModel train(LearnerKind kind, const Eigen::MatrixXd& x, std::span<const int> y,
                        const LearnerParams& params, std::uint64_t seed) {
  switch (kind) {
    case LearnerKind::GaussianNB:
      return fit_gaussian_nb(x, y);
    case LearnerKind::LinearHinge:
      return fit_linear_hinge(x, y, params, seed);
    case LearnerKind::OneNN:
      check_training_set(x, y);
      return OneNN{x, std::vector<int>(y.begin(), y.end())};
  }
  throw LearnerError("unknown learner kind");
}

DichotomizerModel train(LearnerKind kind, const BinaryView& view, const LearnerParams& params,
                        std::uint64_t seed) {
  return train(kind, view.samples(), std::span<const int>(view.polarity()), params, seed);
}

Eigen::Vector2d log_joint(const GaussianNB& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::Vector2d out;
  for (int row = 0; row < 2; ++row) {
    const Eigen::ArrayXd var = m.variance.row(row).transpose().array();
    const Eigen::ArrayXd diff = x.array() - m.mean.row(row).transpose().array();
    out(row) = m.log_prior(row) -
               0.5 * ((2.0 * std::numbers::pi * var).log() + diff.square() / var).sum();
  }
  return out;
}

double decision_value(const LinearHinge& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return m.weights.dot(x) + m.bias;
}

double hinge_objective(const LinearHinge& m, const Eigen::MatrixXd& x, std::span<const int> y) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double margin = y[static_cast<std::size_t>(i)] * (x.row(i).dot(m.weights) + m.bias);
    loss += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * m.lambda * m.weights.squaredNorm() + loss / static_cast<double>(x.rows());
}

int predict(const DichotomizerModel& m, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != input_dimension(m)) {
    throw LearnerError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                       std::to_string(input_dimension(m)));
  }
  return std::visit(
      [&](const auto& model) -> int {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, GaussianNB>) {
          const Eigen::Vector2d lj = log_joint(model, x);
          return lj(0) >= lj(1) ? 1 : -1;
        } else if constexpr (std::is_same_v<T, LinearHinge>) {
          return decision_value(model, x) >= 0.0 ? 1 : -1;
        } else {
          Eigen::Index best = 0;
          double best_d = std::numeric_limits<double>::infinity();
          for (Eigen::Index i = 0; i < model.samples.rows(); ++i) {
            const double d = (model.samples.row(i).transpose() - x).norm();
            if (d < best_d) {
              best = i;
              best_d = d;
            }
          }
          return model.polarity[static_cast<std::size_t>(best)];
        }
      },
      m);
}

void write_model(std::ostream& out, const DichotomizerModel& m) {
  out << "kind=" << to_string(kind_of(m)) << '\n';
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, GaussianNB>) {
          out << "epsilon=" << detail::format_real(model.epsilon) << '\n';
          write_array(out, "log_prior", model.log_prior);
          write_array(out, "mean_pos", model.mean.row(0));
          write_array(out, "mean_neg", model.mean.row(1));
          write_array(out, "var_pos", model.variance.row(0));
          write_array(out, "var_neg", model.variance.row(1));
        } else if constexpr (std::is_same_v<T, LinearHinge>) {
          out << "lambda=" << detail::format_real(model.lambda) << '\n';
          out << "epochs=" << model.epochs << '\n';
          out << "bias=" << detail::format_real(model.bias) << '\n';
          write_array(out, "weights", model.weights);
        } else {
          out << "samples=" << model.samples.rows() << '\n';
          out << "features=" << model.samples.cols() << '\n';
          out << "polarity=";
          for (std::size_t i = 0; i < model.polarity.size(); ++i) {
            out << (i ? " " : "") << model.polarity[i];
          }
          out << '\n';
          for (Eigen::Index i = 0; i < model.samples.rows(); ++i) {
            write_array(out, "sample_" + std::to_string(i), model.samples.row(i));
          }
        }
      },
      m);
}

} // namespace ecocecs
