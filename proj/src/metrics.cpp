#include "ecocecs/metrics.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>

namespace ecocecs {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

double ClassCounts::accuracy() const {
  return ratio(static_cast<double>(tp + tn), static_cast<double>(positives() + negatives()));
}

double ClassCounts::precision() const {
  return ratio(static_cast<double>(tp), static_cast<double>(tp + fp));
}

double ClassCounts::recall() const {
  return ratio(static_cast<double>(tp), static_cast<double>(positives()));
}

double ClassCounts::fscore(double beta) const {
  const double p = precision();
  const double r = recall();
  const double b2 = beta * beta;
  return ratio((b2 + 1.0) * p * r, b2 * p + r);
}

EvalReport evaluate(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                    const std::vector<std::string>& classes, double beta) {
  if (truth.size() != predicted.size()) {
    throw MetricsError("true and predicted label sequences differ in length");
  }
  if (classes.empty()) {
    throw MetricsError("class set is empty");
  }
  if (!(beta > 0.0)) {
    throw MetricsError("beta must be positive");
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    index.emplace(classes[c], c);
  }
  auto lookup = [&](const std::string& name, const char* what) {
    auto it = index.find(name);
    if (it == index.end()) {
      throw MetricsError(std::string("unknown ") + what + " class '" + name + "'");
    }
    return it->second;
  };

  EvalReport report;
  report.beta = beta;
  for (const auto& name : classes) {
    report.per_class.push_back({name});
  }
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::size_t t = lookup(truth[i], "true");
    const std::size_t p = lookup(predicted[i], "predicted");
    for (std::size_t c = 0; c < classes.size(); ++c) {
      ClassCounts& k = report.per_class[c];
      const bool is_true = t == c;
      const bool is_pred = p == c;
      k.tp += is_true && is_pred;
      k.fn += is_true && !is_pred;
      k.fp += !is_true && is_pred;
      k.tn += !is_true && !is_pred;
    }
  }
  std::vector<double> acc, prec, rec, f;
  for (const ClassCounts& k : report.per_class) {
    acc.push_back(k.accuracy());
    prec.push_back(k.precision());
    rec.push_back(k.recall());
    f.push_back(k.fscore(beta));
  }
  report.accuracy = mean(acc);
  report.precision = mean(prec);
  report.recall = mean(rec);
  report.fscore = mean(f);
  return report;
}

void write_counts_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw MetricsError("cannot write '" + path.string() + "'");
  }
  using detail::format_real;
  out << "class,tp,tn,fp,fn,positives,negatives,accuracy,precision,recall,fscore\n";
  for (const ClassCounts& k : report.per_class) {
    out << k.name << ',' << k.tp << ',' << k.tn << ',' << k.fp << ',' << k.fn << ',' << k.positives()
        << ',' << k.negatives() << ',' << format_real(k.accuracy()) << ',' << format_real(k.precision())
        << ',' << format_real(k.recall()) << ',' << format_real(k.fscore(report.beta)) << '\n';
  }
  out << "macro,,,,,,," << format_real(report.accuracy) << ',' << format_real(report.precision) << ','
      << format_real(report.recall) << ',' << format_real(report.fscore) << '\n';
}

void write_table_csv(const std::vector<MethodResult>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw MetricsError("cannot write '" + path.string() + "'");
  }
  using detail::format_real;
  out << "Method";
  if (!rows.empty()) {
    for (const auto& ds : rows.front().datasets) {
      out << ',' << ds << " Accuracy," << ds << " Fscore";
    }
  }
  out << ",Average Accuracy,Average Fscore\n";
  for (const MethodResult& row : rows) {
    out << row.method;
    for (std::size_t d = 0; d < row.datasets.size(); ++d) {
      out << ',' << format_real(row.accuracy[d]) << ',' << format_real(row.fscore[d]);
    }
    out << ',' << format_real(mean(row.accuracy)) << ',' << format_real(mean(row.fscore)) << '\n';
  }
}

} // namespace ecocecs
