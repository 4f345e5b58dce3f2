#include "ecocecs/pipeline.hpp"

#include "text_util.hpp"

#include <fstream>
#include <numeric>

namespace ecocecs {

namespace {

Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& x, const std::vector<Eigen::Index>& features) {
  if (features.empty()) {
    return x;
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(features.size()));
  for (std::size_t j = 0; j < features.size(); ++j) {
    out(static_cast<Eigen::Index>(j)) = x(features[j]);
  }
  return out;
}

} // namespace

EcocModel fit(const Dataset& d, const CodingMatrix& matrix, const FitOptions& options) {
  const auto problems = check_invariants(matrix);
  if (!problems.empty()) {
    throw PipelineError("invalid coding matrix: " + problems.front());
  }
  EcocModel model;
  model.matrix = matrix;
  model.normalized_decoding = options.normalized_decoding;
  model.feature_subset = options.feature_subset;
  if (model.feature_subset.empty()) {
    model.feature_subset.resize(static_cast<std::size_t>(d.num_features()));
    std::iota(model.feature_subset.begin(), model.feature_subset.end(), 0);
  }
  const Dataset projected = d.select_features(model.feature_subset);

  std::vector<ClassIndex> class_of_row;
  for (const auto& name : matrix.class_order) {
    class_of_row.push_back(d.class_index(name));
  }
  for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
    ClassSet pos;
    ClassSet neg;
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
      const int v = matrix.entries(r, j);
      if (v > 0) {
        pos.push_back(class_of_row[static_cast<std::size_t>(r)]);
      } else if (v < 0) {
        neg.push_back(class_of_row[static_cast<std::size_t>(r)]);
      }
    }
    const BinaryView view(projected, pos, neg);
    const std::uint64_t column_seed = mix_seed(options.seed, static_cast<std::uint64_t>(j));
    std::vector<Eigen::Index> features;
    Eigen::MatrixXd x = view.samples();
    if (options.per_column_k) {
      features = select_top_k(view, *options.per_column_k, options.per_column_filter);
      Eigen::MatrixXd reduced(x.rows(), static_cast<Eigen::Index>(features.size()));
      for (std::size_t f = 0; f < features.size(); ++f) {
        reduced.col(static_cast<Eigen::Index>(f)) = x.col(features[f]);
      }
      x = std::move(reduced);
    }
    model.column_models.push_back(
        train(options.learner, x, std::span<const int>(view.polarity()), options.params, column_seed));
    model.column_features.push_back(std::move(features));
    model.column_train_size.push_back(view.size());
  }
  return model;
}

Eigen::VectorXd codeword_distances(const Eigen::MatrixXi& matrix,
                                   const Eigen::Ref<const Eigen::VectorXi>& code, bool normalized) {
  if (code.size() != matrix.cols()) {
    throw PipelineError("code vector length does not match matrix columns");
  }
  Eigen::VectorXd dist(matrix.rows());
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    double total = 0.0;
    Eigen::Index active = 0;
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      const int m = matrix(r, j);
      if (m == 0) {
        continue;
      }
      ++active;
      total += (1.0 - m * code(j)) / 2.0;
    }
    dist(r) = normalized && active > 0 ? total / static_cast<double>(active) : total;
  }
  return dist;
}

Decoding decode_detailed(const EcocModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != static_cast<Eigen::Index>(model.feature_subset.size())) {
    throw PipelineError("sample has " + std::to_string(x.size()) + " features, model expects " +
                        std::to_string(model.feature_subset.size()));
  }
  Decoding out;
  out.code.resize(static_cast<Eigen::Index>(model.column_models.size()));
  for (std::size_t j = 0; j < model.column_models.size(); ++j) {
    out.code(static_cast<Eigen::Index>(j)) = predict(model.column_models[j], project(x, model.column_features[j]));
  }
  out.distances = codeword_distances(model.matrix.entries, out.code, model.normalized_decoding);
  Eigen::Index best = 0;
  for (Eigen::Index r = 1; r < out.distances.size(); ++r) {
    if (out.distances(r) < out.distances(best)) {
      best = r;
    }
  }
  out.row = static_cast<ClassIndex>(best);
  return out;
}

std::string decode(const EcocModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model.matrix.class_order[static_cast<std::size_t>(decode_detailed(model, x).row)];
}

std::vector<Decoding> predict_batch_detailed(const EcocModel& model, const Eigen::MatrixXd& samples) {
  std::vector<Decoding> out;
  out.reserve(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index i = 0; i < samples.rows(); ++i) {
    const Eigen::VectorXd row = samples.row(i).transpose();
    for (Eigen::Index f : model.feature_subset) {
      if (f >= row.size()) {
        throw PipelineError("sample has fewer features than the model's feature subset requires");
      }
    }
    out.push_back(decode_detailed(model, project(row, model.feature_subset)));
  }
  return out;
}

std::vector<std::string> predict_batch(const EcocModel& model, const Eigen::MatrixXd& samples) {
  std::vector<std::string> out;
  for (const Decoding& dec : predict_batch_detailed(model, samples)) {
    out.push_back(model.matrix.class_order[static_cast<std::size_t>(dec.row)]);
  }
  return out;
}

std::vector<std::string> predict_batch(const EcocModel& model, const Dataset& d) {
  return predict_batch(model, d.samples());
}

void write_models(const EcocModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw PipelineError("cannot write '" + path.string() + "'");
  }
  for (std::size_t j = 0; j < model.column_models.size(); ++j) {
    out << "[column " << j + 1 << "]\n";
    out << "train_samples=" << model.column_train_size[j] << '\n';
    if (!model.column_features[j].empty()) {
      out << "features=";
      for (std::size_t f = 0; f < model.column_features[j].size(); ++f) {
        out << (f ? " " : "") << model.feature_subset[static_cast<std::size_t>(model.column_features[j][f])];
      }
      out << '\n';
    }
    write_model(out, model.column_models[j]);
    out << '\n';
  }
}

void write_predictions_csv(const EcocModel& model, const std::vector<Decoding>& decodings,
                           const std::vector<std::string>& true_labels,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw PipelineError("cannot write '" + path.string() + "'");
  }
  out << "sample,true_label,predicted";
  for (const auto& name : model.matrix.class_order) {
    out << ",dist_" << name;
  }
  out << '\n';
  for (std::size_t i = 0; i < decodings.size(); ++i) {
    out << i << ',' << (i < true_labels.size() ? true_labels[i] : std::string()) << ','
        << model.matrix.class_order[static_cast<std::size_t>(decodings[i].row)];
    for (Eigen::Index r = 0; r < decodings[i].distances.size(); ++r) {
      out << ',' << detail::format_real(decodings[i].distances(r));
    }
    out << '\n';
  }
}

} // namespace ecocecs
