#ifndef ECOCECS_DICHOTOMIZERS_HPP
#define ECOCECS_DICHOTOMIZERS_HPP

#include "ecocecs/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ecocecs {

enum class LearnerKind { GaussianNB, LinearHinge, OneNN };

std::string to_string(LearnerKind k);
LearnerKind parse_learner(const std::string& text);

class LearnerError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LearnerParams {
  double lambda = 1e-4;  // linear_hinge L2 strength
  int epochs = 50;       // linear_hinge passes over the data
};

/// Per-polarity Gaussian likelihoods with log priors. Row 0 is +1, row 1 is -1.
struct GaussianNB {
  Eigen::Matrix<double, 2, Eigen::Dynamic> mean;
  Eigen::Matrix<double, 2, Eigen::Dynamic> variance;
  Eigen::Vector2d log_prior;
  double epsilon = 0.0;
};

struct LinearHinge {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double lambda = 1e-4;
  int epochs = 50;
};

struct OneNN {
  Eigen::MatrixXd samples;
  std::vector<int> polarity;
};

using DichotomizerModel = std::variant<GaussianNB, LinearHinge, OneNN>;

LearnerKind kind_of(const DichotomizerModel& m);
Eigen::Index input_dimension(const DichotomizerModel& m);

/// Fits a model on the samples x (rows) with targets y in {-1,+1}.
DichotomizerModel train(LearnerKind kind, const Eigen::MatrixXd& x, std::span<const int> y,
                        const LearnerParams& params = {}, std::uint64_t seed = 0);
DichotomizerModel train(LearnerKind kind, const BinaryView& view, const LearnerParams& params = {},
                        std::uint64_t seed = 0);

GaussianNB fit_gaussian_nb(const Eigen::MatrixXd& x, std::span<const int> y);
LinearHinge fit_linear_hinge(const Eigen::MatrixXd& x, std::span<const int> y,
                             const LearnerParams& params, std::uint64_t seed);

/// Hard label in {-1,+1}. Ties (equal posteriors, zero margin) go to +1.
int predict(const DichotomizerModel& m, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Joint log density of x under each polarity, {+1, -1}.
Eigen::Vector2d log_joint(const GaussianNB& m, const Eigen::Ref<const Eigen::VectorXd>& x);
double decision_value(const LinearHinge& m, const Eigen::Ref<const Eigen::VectorXd>& x);
/// lambda/2 |w|^2 + mean(max(0, 1 - y (w.x + b))); the bias is not penalized.
double hinge_objective(const LinearHinge& m, const Eigen::MatrixXd& x, std::span<const int> y);

/// Flat key=value section for one model.
void write_model(std::ostream& out, const DichotomizerModel& m);

} // namespace ecocecs

#endif // ECOCECS_DICHOTOMIZERS_HPP
