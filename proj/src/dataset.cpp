#include "ecocecs/dataset.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <unordered_map>

namespace ecocecs {

using detail::format_real;
using detail::parse_real;
using detail::split_csv;
using detail::trim;

Dataset::Dataset(Eigen::MatrixXd samples, std::vector<ClassIndex> labels,
                 std::vector<std::string> class_names)
    : samples_(std::move(samples)),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
  if (samples_.rows() < 2) {
    throw DataError("dataset needs at least 2 samples (N<2)");
  }
  if (samples_.cols() < 1) {
    throw DataError("dataset needs at least 1 feature (F<1)");
  }
  if (class_names_.size() < 2) {
    throw DataError("dataset needs at least 2 classes (R<2)");
  }
  if (static_cast<Eigen::Index>(labels_.size()) != samples_.rows()) {
    throw DataError("label count does not match sample count");
  }
  if (!samples_.allFinite()) {
    throw DataError("samples contain NaN or infinite values");
  }
  std::vector<Eigen::Index> counts(class_names_.size(), 0);
  for (ClassIndex c : labels_) {
    if (c < 0 || c >= num_classes()) {
      throw DataError("label index out of range");
    }
    ++counts[static_cast<std::size_t>(c)];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw DataError("class '" + class_names_[c] + "' has no samples");
    }
  }
}

Dataset Dataset::from_labels(Eigen::MatrixXd samples, const std::vector<std::string>& labels) {
  std::vector<std::string> names;
  std::unordered_map<std::string, ClassIndex> index;
  std::vector<ClassIndex> ids;
  ids.reserve(labels.size());
  for (const auto& name : labels) {
    auto [it, inserted] = index.emplace(name, static_cast<ClassIndex>(names.size()));
    if (inserted) {
      names.push_back(name);
    }
    ids.push_back(it->second);
  }
  return Dataset(std::move(samples), std::move(ids), std::move(names));
}

std::vector<Eigen::Index> Dataset::class_counts() const {
  std::vector<Eigen::Index> counts(class_names_.size(), 0);
  for (ClassIndex c : labels_) {
    ++counts[static_cast<std::size_t>(c)];
  }
  return counts;
}

std::vector<Eigen::Index> Dataset::rows_of(ClassIndex c) const {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < num_samples(); ++i) {
    if (labels_[static_cast<std::size_t>(i)] == c) {
      rows.push_back(i);
    }
  }
  return rows;
}

ClassIndex Dataset::class_index(const std::string& name) const {
  auto it = std::find(class_names_.begin(), class_names_.end(), name);
  if (it == class_names_.end()) {
    throw DataError("unknown class '" + name + "'");
  }
  return static_cast<ClassIndex>(it - class_names_.begin());
}

Dataset Dataset::select_rows(const std::vector<Eigen::Index>& rows) const {
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), num_features());
  std::vector<ClassIndex> labels;
  labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    sub.row(static_cast<Eigen::Index>(r)) = samples_.row(rows[r]);
    labels.push_back(labels_[static_cast<std::size_t>(rows[r])]);
  }
  Dataset out(std::move(sub), std::move(labels), class_names_);
  out.feature_names_ = feature_names_;
  return out;
}

Dataset Dataset::select_features(const std::vector<Eigen::Index>& features) const {
  Eigen::MatrixXd sub(num_samples(), static_cast<Eigen::Index>(features.size()));
  std::vector<std::string> names;
  for (std::size_t j = 0; j < features.size(); ++j) {
    if (features[j] < 0 || features[j] >= num_features()) {
      throw DataError("feature index out of range");
    }
    sub.col(static_cast<Eigen::Index>(j)) = samples_.col(features[j]);
    if (!feature_names_.empty()) {
      names.push_back(feature_names_[static_cast<std::size_t>(features[j])]);
    }
  }
  Dataset out(std::move(sub), labels_, class_names_);
  out.feature_names_ = std::move(names);
  return out;
}

Dataset Dataset::with_samples(Eigen::MatrixXd samples) const {
  if (samples.rows() != samples_.rows() || samples.cols() != samples_.cols()) {
    throw DataError("replacement sample matrix has a different shape");
  }
  Dataset out(std::move(samples), labels_, class_names_);
  out.feature_names_ = feature_names_;
  return out;
}

Dataset Dataset::with_class_order(const std::vector<std::string>& order) const {
  std::vector<ClassIndex> remap(class_names_.size());
  for (std::size_t c = 0; c < class_names_.size(); ++c) {
    auto it = std::find(order.begin(), order.end(), class_names_[c]);
    if (it == order.end()) {
      throw DataError("class '" + class_names_[c] + "' is not among the reference classes");
    }
    remap[c] = static_cast<ClassIndex>(it - order.begin());
  }
  std::vector<ClassIndex> labels;
  labels.reserve(labels_.size());
  for (ClassIndex c : labels_) {
    labels.push_back(remap[static_cast<std::size_t>(c)]);
  }
  Dataset out(samples_, std::move(labels), order);
  out.feature_names_ = feature_names_;
  return out;
}

void Dataset::set_feature_names(std::vector<std::string> names) {
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != num_features()) {
    throw DataError("feature name count does not match feature count");
  }
  feature_names_ = std::move(names);
}

BinaryView::BinaryView(const Dataset& base, ClassSet g1, ClassSet g2)
    : base_(&base), g1_(std::move(g1)), g2_(std::move(g2)) {
  if (g1_.empty() || g2_.empty()) {
    throw DataError("binary view needs two non-empty groups");
  }
  std::vector<int> polarity_by_class(static_cast<std::size_t>(base.num_classes()), 0);
  auto assign = [&](const ClassSet& group, int sign) {
    for (ClassIndex c : group) {
      if (c < 0 || c >= base.num_classes()) {
        throw DataError("binary view group references an unknown class");
      }
      auto& slot = polarity_by_class[static_cast<std::size_t>(c)];
      if (slot != 0) {
        throw DataError("binary view groups overlap or repeat class '" +
                        base.class_names()[static_cast<std::size_t>(c)] + "'");
      }
      slot = sign;
    }
  };
  assign(g1_, +1);
  assign(g2_, -1);
  for (Eigen::Index i = 0; i < base.num_samples(); ++i) {
    const int sign = polarity_by_class[static_cast<std::size_t>(base.labels()[static_cast<std::size_t>(i)])];
    if (sign != 0) {
      rows_.push_back(i);
      polarity_.push_back(sign);
    }
  }
}

int BinaryView::polarity_of(ClassIndex c) const {
  if (std::find(g1_.begin(), g1_.end(), c) != g1_.end()) {
    return +1;
  }
  if (std::find(g2_.begin(), g2_.end(), c) != g2_.end()) {
    return -1;
  }
  return 0;
}

Eigen::MatrixXd BinaryView::samples() const {
  Eigen::MatrixXd out(size(), base_->num_features());
  for (Eigen::Index r = 0; r < size(); ++r) {
    out.row(r) = base_->samples().row(rows_[static_cast<std::size_t>(r)]);
  }
  return out;
}

BinaryView binary_view(const Dataset& d, ClassSet g1, ClassSet g2) {
  return BinaryView(d, std::move(g1), std::move(g2));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("'" + path.string() + "' is empty (header row required)");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  std::vector<std::string> header = split_csv(line);
  for (auto& h : header) {
    h = trim(h);
  }
  if (header.size() < 2) {
    throw DataError("header needs at least one feature column and a label column");
  }
  std::size_t label_at = header.size() - 1;
  if (!label_column.empty()) {
    auto it = std::find(header.begin(), header.end(), label_column);
    if (it == header.end()) {
      throw DataError("label column '" + label_column + "' not found in header");
    }
    label_at = static_cast<std::size_t>(it - header.begin());
  }

  std::vector<std::string> feature_names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_at) {
      feature_names.push_back(header[j]);
    }
  }
  const std::size_t num_features = feature_names.size();

  std::vector<double> values;
  std::vector<std::string> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (trim(line).empty()) {
      continue;
    }
    std::vector<std::string> cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " cells, found " +
                      std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      std::string cell = trim(cells[j]);
      if (j == label_at) {
        if (cell.empty()) {
          throw DataError("row " + std::to_string(line_no) + ": empty label");
        }
        labels.push_back(std::move(cell));
        continue;
      }
      double v = 0.0;
      if (!parse_real(cell, v)) {
        throw DataError("row " + std::to_string(line_no) + ", column '" + header[j] +
                        "': cannot parse '" + cell + "' as a finite real");
      }
      values.push_back(v);
    }
  }

  const auto n = static_cast<Eigen::Index>(labels.size());
  if (n < 2) {
    throw DataError("'" + path.string() + "' has fewer than 2 samples (N<2)");
  }
  Eigen::MatrixXd samples(n, static_cast<Eigen::Index>(num_features));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) {
      samples(i, j) = values[static_cast<std::size_t>(i) * num_features + static_cast<std::size_t>(j)];
    }
  }
  std::vector<std::string> distinct = labels;
  std::sort(distinct.begin(), distinct.end());
  if (std::unique(distinct.begin(), distinct.end()) - distinct.begin() < 2) {
    throw DataError("'" + path.string() + "' contains a single class (R<2)");
  }
  Dataset d = Dataset::from_labels(std::move(samples), labels);
  d.set_feature_names(std::move(feature_names));
  return d;
}

void write_csv(const Dataset& d, const std::filesystem::path& path, const std::string& label_column) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write '" + path.string() + "'");
  }
  for (Eigen::Index j = 0; j < d.num_features(); ++j) {
    if (d.feature_names().empty()) {
      out << 'f' << j;
    } else {
      out << d.feature_names()[static_cast<std::size_t>(j)];
    }
    out << ',';
  }
  out << label_column << '\n';
  for (Eigen::Index i = 0; i < d.num_samples(); ++i) {
    for (Eigen::Index j = 0; j < d.num_features(); ++j) {
      out << format_real(d.samples()(i, j)) << ',';
    }
    out << d.class_names()[static_cast<std::size_t>(d.labels()[static_cast<std::size_t>(i)])] << '\n';
  }
}

Dataset generate_blobs(const BlobSpec& spec) {
  if (spec.classes < 2 || spec.per_class < 2 || spec.features < 1 || spec.informative < 0 ||
      spec.informative > spec.features) {
    throw DataError("invalid blob dimensions (need R>=2, per_class>=2, F>=1, 0<=informative<=F)");
  }
  if (!(spec.spread > 0.0) || !std::isfinite(spec.spread)) {
    throw DataError("blob spread must be a positive finite number");
  }
  std::mt19937_64 rng(spec.seed);
  const int r = spec.classes;
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(r, spec.features);
  std::vector<int> level(static_cast<std::size_t>(r));
  for (int j = 0; j < spec.informative; ++j) {
    std::iota(level.begin(), level.end(), 0);
    std::shuffle(level.begin(), level.end(), rng);
    for (int k = 0; k < r; ++k) {
      means(k, j) = level[static_cast<std::size_t>(k)] - 0.5 * (r - 1);
    }
  }
  std::normal_distribution<double> noise(0.0, spec.spread);
  const Eigen::Index n = static_cast<Eigen::Index>(r) * spec.per_class;
  Eigen::MatrixXd samples(n, spec.features);
  std::vector<ClassIndex> labels(static_cast<std::size_t>(n));
  std::vector<std::string> names;
  for (int k = 0; k < r; ++k) {
    names.push_back("c" + std::to_string(k + 1));
    for (int s = 0; s < spec.per_class; ++s) {
      const Eigen::Index i = static_cast<Eigen::Index>(k) * spec.per_class + s;
      for (int j = 0; j < spec.features; ++j) {
        samples(i, j) = means(k, j) + noise(rng);
      }
      labels[static_cast<std::size_t>(i)] = k;
    }
  }
  return Dataset(std::move(samples), std::move(labels), std::move(names));
}

std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>>
split_stratified_indices(const Dataset& d, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError("train fraction must lie in (0,1)");
  }
  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> test;
  for (ClassIndex c = 0; c < d.num_classes(); ++c) {
    std::vector<Eigen::Index> rows = d.rows_of(c);
    const auto n = static_cast<long>(rows.size());
    if (n < 2) {
      throw DataError("class '" + d.class_names()[static_cast<std::size_t>(c)] +
                      "' has a single sample and cannot be split");
    }
    // The epsilon keeps products like 0.7 * 10 from rounding up past 7.
    long n_train = static_cast<long>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
    n_train = std::clamp(n_train, 1L, n - 1);
    std::shuffle(rows.begin(), rows.end(), rng);
    train.insert(train.end(), rows.begin(), rows.begin() + n_train);
    test.insert(test.end(), rows.begin() + n_train, rows.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split_stratified(const Dataset& d, double train_fraction,
                                             std::uint64_t seed) {
  auto [train, test] = split_stratified_indices(d, train_fraction, seed);
  return {d.select_rows(train), d.select_rows(test)};
}

Standardizer Standardizer::fit(const Dataset& d) {
  Standardizer s;
  const Eigen::MatrixXd& x = d.samples();
  s.mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - s.mean;
  const double denom = static_cast<double>(std::max<Eigen::Index>(x.rows() - 1, 1));
  s.scale = (centered.colwise().squaredNorm() / denom).cwiseSqrt();
  for (Eigen::Index j = 0; j < s.scale.size(); ++j) {
    if (s.scale(j) <= 0.0) {
      s.scale(j) = 1.0;
    }
  }
  return s;
}

Dataset Standardizer::apply(const Dataset& d) const {
  if (d.num_features() != mean.size()) {
    throw DataError("standardizer feature count mismatch");
  }
  Eigen::MatrixXd z = (d.samples().rowwise() - mean).array().rowwise() / scale.array();
  return d.with_samples(std::move(z));
}

} // namespace ecocecs
