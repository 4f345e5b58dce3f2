#include "ecocecs/feature_selection.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace ecocecs {

namespace {

struct GroupSizes {
  double pos = 0.0;
  double neg = 0.0;
};

GroupSizes check_binary(std::span<const double> values, std::span<const int> labels) {
  if (values.size() != labels.size()) {
    throw SelectionError("value count does not match label count");
  }
  GroupSizes g;
  for (int y : labels) {
    if (y == 1) {
      g.pos += 1.0;
    } else if (y == -1) {
      g.neg += 1.0;
    } else {
      throw SelectionError("labels must be +1 or -1");
    }
  }
  if (g.pos == 0.0 || g.neg == 0.0) {
    throw SelectionError("scoring needs both labels present");
  }
  return g;
}

// Rank sum of the +1 group.
double positive_rank_sum(std::span<const double> values, std::span<const int> labels) {
  const Eigen::VectorXd ranks = midranks(values);
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      sum += ranks(static_cast<Eigen::Index>(i));
    }
  }
  return sum;
}

std::vector<double> column(const Eigen::MatrixXd& x, Eigen::Index j) {
  std::vector<double> out(static_cast<std::size_t>(x.rows()));
  Eigen::Map<Eigen::VectorXd>(out.data(), x.rows()) = x.col(j);
  return out;
}

} // namespace

std::string to_string(FilterMethod m) {
  switch (m) {
    case FilterMethod::Roc: return "roc";
    case FilterMethod::TTest: return "ttest";
    case FilterMethod::Wilcoxon: return "wilcoxon";
  }
  return "unknown";
}

FilterMethod parse_filter(const std::string& text) {
  if (text == "roc") {
    return FilterMethod::Roc;
  }
  if (text == "ttest" || text == "t-test") {
    return FilterMethod::TTest;
  }
  if (text == "wilcoxon") {
    return FilterMethod::Wilcoxon;
  }
  throw SelectionError("unknown filter '" + text + "' (expected roc, ttest or wilcoxon)");
}

Eigen::VectorXd midranks(std::span<const double> values) {
  const auto n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Eigen::VectorXd ranks(static_cast<Eigen::Index>(n));
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      ranks(static_cast<Eigen::Index>(order[t])) = rank;
    }
    i = j + 1;
  }
  return ranks;
}

double roc_score(std::span<const double> values, std::span<const int> labels) {
  const GroupSizes g = check_binary(values, labels);
  const double u = positive_rank_sum(values, labels) - g.pos * (g.pos + 1.0) / 2.0;
  return std::abs(u / (g.pos * g.neg) - 0.5);
}

double ttest_score(std::span<const double> values, std::span<const int> labels) {
  const GroupSizes g = check_binary(values, labels);
  if (g.pos < 2.0 || g.neg < 2.0) {
    throw SelectionError("t-test needs at least 2 samples per group");
  }
  double mean_pos = 0.0;
  double mean_neg = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    (labels[i] == 1 ? mean_pos : mean_neg) += values[i];
  }
  mean_pos /= g.pos;
  mean_neg /= g.neg;
  double ss_pos = 0.0;
  double ss_neg = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (labels[i] == 1) {
      ss_pos += (values[i] - mean_pos) * (values[i] - mean_pos);
    } else {
      ss_neg += (values[i] - mean_neg) * (values[i] - mean_neg);
    }
  }
  const double gap = std::abs(mean_pos - mean_neg);
  double se = std::sqrt(ss_pos / (g.pos - 1.0) / g.pos + ss_neg / (g.neg - 1.0) / g.neg);
  if (gap == 0.0) {
    return 0.0;
  }
  // Constant groups with different means: floor the standard error so the
  // score stays finite and still grows with the gap.
  se = std::max(se, 1e-12 * (1.0 + std::abs(mean_pos) + std::abs(mean_neg)));
  return gap / se;
}

double wilcoxon_score(std::span<const double> values, std::span<const int> labels) {
  const GroupSizes g = check_binary(values, labels);
  const double n = g.pos + g.neg;
  const double w = positive_rank_sum(values, labels);
  const double expected = g.pos * (n + 1.0) / 2.0;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) {
      ++j;
    }
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double variance = g.pos * g.neg / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (variance <= 0.0) {
    return 0.0;
  }
  return std::abs(w - expected) / std::sqrt(variance);
}

FeatureScore score_feature(std::span<const double> values, std::span<const int> labels,
                           FilterMethod method, Eigen::Index feature) {
  double s = 0.0;
  switch (method) {
    case FilterMethod::Roc: s = roc_score(values, labels); break;
    case FilterMethod::TTest: s = ttest_score(values, labels); break;
    case FilterMethod::Wilcoxon: s = wilcoxon_score(values, labels); break;
  }
  return {feature, s, method};
}

std::vector<FeatureScore> score_features(const Dataset& d, FilterMethod method) {
  std::vector<FeatureScore> scores;
  std::vector<int> labels(static_cast<std::size_t>(d.num_samples()));
  for (Eigen::Index j = 0; j < d.num_features(); ++j) {
    const std::vector<double> values = column(d.samples(), j);
    FeatureScore best{j, 0.0, method};
    for (ClassIndex c = 0; c < d.num_classes(); ++c) {
      for (std::size_t i = 0; i < labels.size(); ++i) {
        labels[i] = d.labels()[i] == c ? 1 : -1;
      }
      best.score = std::max(best.score, score_feature(values, labels, method, j).score);
    }
    scores.push_back(best);
  }
  return scores;
}

std::vector<FeatureScore> score_features(const BinaryView& view, FilterMethod method) {
  const Eigen::MatrixXd x = view.samples();
  std::vector<FeatureScore> scores;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    scores.push_back(score_feature(column(x, j), view.polarity(), method, j));
  }
  return scores;
}

std::vector<FeatureScore> top_k(std::vector<FeatureScore> scores, Eigen::Index k) {
  if (k < 1 || k > static_cast<Eigen::Index>(scores.size())) {
    throw SelectionError("k=" + std::to_string(k) + " is outside [1, " +
                         std::to_string(scores.size()) + "]");
  }
  std::stable_sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    return a.feature < b.feature;
  });
  scores.resize(static_cast<std::size_t>(k));
  return scores;
}

std::vector<Eigen::Index> select_top_k(const Dataset& d, Eigen::Index k, FilterMethod method) {
  std::vector<Eigen::Index> out;
  for (const auto& s : top_k(score_features(d, method), k)) {
    out.push_back(s.feature);
  }
  return out;
}

std::vector<Eigen::Index> select_top_k(const BinaryView& view, Eigen::Index k, FilterMethod method) {
  std::vector<Eigen::Index> out;
  for (const auto& s : top_k(score_features(view, method), k)) {
    out.push_back(s.feature);
  }
  return out;
}

void write_selection_csv(const std::vector<FeatureScore>& ranked, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw SelectionError("cannot write '" + path.string() + "'");
  }
  out << "rank,feature,score,method\n";
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    out << r + 1 << ',' << ranked[r].feature << ',' << detail::format_real(ranked[r].score) << ','
        << to_string(ranked[r].method) << '\n';
  }
}

} // namespace ecocecs
