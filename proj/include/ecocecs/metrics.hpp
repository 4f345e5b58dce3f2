#ifndef ECOCECS_METRICS_HPP
#define ECOCECS_METRICS_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecocecs {

class MetricsError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One-vs-all confusion counts for a single class.
struct ClassCounts {
  std::string name;
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t positives() const { return tp + fn; }
  std::int64_t negatives() const { return tn + fp; }
  double accuracy() const;
  double precision() const;  // 0 when nothing was predicted positive
  double recall() const;     // 0 when the class is absent
  double fscore(double beta) const;
};

struct EvalReport {
  std::vector<ClassCounts> per_class;
  double beta = 1.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

/// Macro (class-averaged) accuracy, precision, recall and F-beta, each
/// class scored one-vs-all. Per-class 0/0 terms count as 0.
EvalReport evaluate(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                    const std::vector<std::string>& classes, double beta = 1.0);

/// class,tp,tn,fp,fn,positives,negatives,accuracy,precision,recall,fscore
void write_counts_csv(const EvalReport& report, const std::filesystem::path& path);

struct MethodResult {
  std::string method;
  std::vector<std::string> datasets;
  std::vector<double> accuracy;
  std::vector<double> fscore;
};

/// Method rows with Accuracy/Fscore pairs per dataset plus their averages.
void write_table_csv(const std::vector<MethodResult>& rows, const std::filesystem::path& path);

} // namespace ecocecs

#endif // ECOCECS_METRICS_HPP
