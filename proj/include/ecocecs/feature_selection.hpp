#ifndef ECOCECS_FEATURE_SELECTION_HPP
#define ECOCECS_FEATURE_SELECTION_HPP

#include "ecocecs/dataset.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ecocecs {

enum class FilterMethod { Roc, TTest, Wilcoxon };

std::string to_string(FilterMethod m);
FilterMethod parse_filter(const std::string& text);

class SelectionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct FeatureScore {
  Eigen::Index feature = 0;
  double score = 0.0;
  FilterMethod method = FilterMethod::Roc;
};

/// Midranks (1-based, ties averaged) of the values.
Eigen::VectorXd midranks(std::span<const double> values);

/// |AUC - 0.5| with AUC = U / (n+ n-), ties counting one half.
double roc_score(std::span<const double> values, std::span<const int> labels);
/// |Welch t| between the +1 and -1 groups.
double ttest_score(std::span<const double> values, std::span<const int> labels);
/// |z| of the tie-corrected normal approximation to the rank-sum statistic.
double wilcoxon_score(std::span<const double> values, std::span<const int> labels);

FeatureScore score_feature(std::span<const double> values, std::span<const int> labels,
                           FilterMethod method, Eigen::Index feature = 0);

/// Per-feature scores over R one-vs-rest binarizations, aggregated by max.
std::vector<FeatureScore> score_features(const Dataset& d, FilterMethod method);
/// Per-feature scores for a two-group view.
std::vector<FeatureScore> score_features(const BinaryView& view, FilterMethod method);

/// k best features by score, ties to the lower index. Returned in rank order.
std::vector<FeatureScore> top_k(std::vector<FeatureScore> scores, Eigen::Index k);

std::vector<Eigen::Index> select_top_k(const Dataset& d, Eigen::Index k, FilterMethod method);
std::vector<Eigen::Index> select_top_k(const BinaryView& view, Eigen::Index k, FilterMethod method);

/// rank,feature,score,method
void write_selection_csv(const std::vector<FeatureScore>& ranked, const std::filesystem::path& path);

} // namespace ecocecs

#endif // ECOCECS_FEATURE_SELECTION_HPP
