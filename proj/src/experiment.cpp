#include "ecocecs/experiment.hpp"

#include "ecocecs/complexity.hpp"
#include "ecocecs/feature_selection.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace ecocecs {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kEncoders{"ecocecs-n2", "ecocecs-n3", "ova", "ovo", "ordinal"};

bool is_tree_encoder(const std::string& e) { return e.rfind("ecocecs-", 0) == 0; }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (auto& item : detail::split_csv(text)) {
    item = detail::trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
  const std::string v = detail::trim(value);
  Int out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": '" + value + "' is not an integer");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  if (!detail::parse_real(detail::trim(value), out)) {
    throw ConfigError(key + ": '" + value + "' is not a finite number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = detail::trim(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "0" || v == "false" || v == "no" || v == "off") {
    return false;
  }
  throw ConfigError(key + ": '" + value + "' is not a boolean");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += (i ? "," : "") + items[i];
  }
  return out;
}

std::string blob_text(const BlobSpec& b) {
  std::ostringstream out;
  out << "classes=" << b.classes << ";per_class=" << b.per_class << ";features=" << b.features
      << ";informative=" << b.informative << ";spread=" << detail::format_real(b.spread)
      << ";seed=" << b.seed;
  return out.str();
}

ClassSet parse_group(const Dataset& d, const std::string& text) {
  ClassSet out;
  for (const auto& name : split_list(text)) {
    out.push_back(d.class_index(name));
  }
  return out;
}

std::uint64_t encoder_seed(const ExperimentConfig& c) { return mix_seed(c.seed, 1); }
std::uint64_t learner_seed(const ExperimentConfig& c) { return mix_seed(c.seed, 2); }

FitOptions fit_options(const ExperimentConfig& c, const std::vector<Eigen::Index>& features) {
  FitOptions o;
  o.learner = parse_learner(c.learner);
  o.params.lambda = c.lambda;
  o.params.epochs = c.epochs;
  o.seed = learner_seed(c);
  o.normalized_decoding = c.normalized_decoding;
  if (c.fs != "none" && c.fs_scope == "per-dichotomy") {
    o.per_column_k = c.k;
    o.per_column_filter = parse_filter(c.fs);
  } else {
    o.feature_subset = features;
  }
  return o;
}

std::vector<std::string> label_names(const Dataset& d) {
  std::vector<std::string> out;
  for (ClassIndex c : d.labels()) {
    out.push_back(d.class_names()[static_cast<std::size_t>(c)]);
  }
  return out;
}

void check_k(const ExperimentConfig& c, const Dataset& d) {
  if (c.fs != "none" && (c.k < 1 || c.k > d.num_features())) {
    throw ConfigError("k=" + std::to_string(c.k) + " must lie in [1, " + std::to_string(d.num_features()) +
                      "] for this dataset");
  }
}

// Writes into a staging directory next to the target and moves the files
// over only once every writer succeeded.
void write_outputs(const std::string& out_dir, const std::function<void(const fs::path&)>& writer) {
  if (out_dir.empty()) {
    return;
  }
  const fs::path target(out_dir);
  const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
  const fs::path staging = parent / ("." + target.filename().string() + ".staging");
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    writer(staging);
  } catch (...) {
    fs::remove_all(staging);
    throw;
  }
  fs::create_directories(target);
  for (const auto& entry : fs::directory_iterator(staging)) {
    fs::rename(entry.path(), target / entry.path().filename());
  }
  fs::remove_all(staging);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write '" + path.string() + "'");
  }
  out << text;
}

struct Selection {
  std::vector<Eigen::Index> features;
  std::vector<FeatureScore> ranked;
};

Selection global_selection(const ExperimentConfig& c, const Dataset& train, Eigen::Index k) {
  Selection s;
  if (c.fs == "none" || c.fs_scope == "per-dichotomy") {
    return s;
  }
  s.ranked = top_k(score_features(train, parse_filter(c.fs)), k);
  for (const auto& f : s.ranked) {
    s.features.push_back(f.feature);
  }
  return s;
}

} // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "data",  "test-data", "label-column", "synthetic", "name",          "encoders", "learner",
      "fs",    "fs-scope",  "k",            "k-list",    "seed",          "beta",     "split",
      "exchange-rule",      "restarts",     "zscore",    "decoding",      "lambda",   "epochs",
      "g1",    "g2",        "out"};
  return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& key_in, const std::string& value) {
  const std::string key = key_in == "encoder" ? "encoders" : key_in;
  const std::string v = detail::trim(value);
  if (key == "data") {
    c.data_path = v;
  } else if (key == "test-data") {
    c.test_path = v;
  } else if (key == "label-column") {
    c.label_column = v;
  } else if (key == "synthetic") {
    c.synthetic = v.empty() ? std::nullopt : std::optional<BlobSpec>(parse_blob_spec(v));
  } else if (key == "name") {
    c.dataset_name = v;
  } else if (key == "encoders") {
    c.encoders = split_list(v);
  } else if (key == "learner") {
    c.learner = v;
  } else if (key == "fs") {
    c.fs = v;
  } else if (key == "fs-scope") {
    c.fs_scope = v;
  } else if (key == "k") {
    c.k = parse_int<Eigen::Index>(key, v);
  } else if (key == "k-list") {
    c.k_list.clear();
    for (const auto& item : split_list(v)) {
      c.k_list.push_back(parse_int<Eigen::Index>(key, item));
    }
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "beta") {
    c.beta = parse_double(key, v);
  } else if (key == "split") {
    c.split = parse_double(key, v);
  } else if (key == "exchange-rule") {
    c.exchange_rule = v;
  } else if (key == "restarts") {
    c.restarts = parse_int<int>(key, v);
  } else if (key == "zscore") {
    c.zscore = parse_bool(key, v);
  } else if (key == "decoding") {
    if (v != "normalized" && v != "unnormalized") {
      throw ConfigError("decoding: expected normalized or unnormalized, got '" + v + "'");
    }
    c.normalized_decoding = v == "normalized";
  } else if (key == "lambda") {
    c.lambda = parse_double(key, v);
  } else if (key == "epochs") {
    c.epochs = parse_int<int>(key, v);
  } else if (key == "g1") {
    c.g1 = v;
  } else if (key == "g2") {
    c.g2 = v;
  } else if (key == "out") {
    c.out_dir = v;
  } else {
    throw ConfigError("unknown setting '" + key_in + "'");
  }
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = detail::trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    out[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

ExperimentConfig make_config(const std::map<std::string, std::string>& file,
                             const std::map<std::string, std::string>& overrides) {
  ExperimentConfig c;
  for (const auto& [k, v] : file) {
    apply_setting(c, k, v);
  }
  for (const auto& [k, v] : overrides) {
    apply_setting(c, k, v);
  }
  return c;
}

std::string echo_config(const ExperimentConfig& c) {
  std::ostringstream out;
  std::vector<std::string> ks;
  for (auto k : c.k_list) {
    ks.push_back(std::to_string(k));
  }
  out << "data=" << c.data_path << '\n'
      << "test-data=" << c.test_path << '\n'
      << "label-column=" << c.label_column << '\n'
      << "synthetic=" << (c.synthetic ? blob_text(*c.synthetic) : std::string()) << '\n'
      << "name=" << c.dataset_name << '\n'
      << "encoders=" << join(c.encoders) << '\n'
      << "learner=" << c.learner << '\n'
      << "fs=" << c.fs << '\n'
      << "fs-scope=" << c.fs_scope << '\n'
      << "k=" << c.k << '\n'
      << "k-list=" << join(ks) << '\n'
      << "seed=" << c.seed << '\n'
      << "beta=" << detail::format_real(c.beta) << '\n'
      << "split=" << detail::format_real(c.split) << '\n'
      << "exchange-rule=" << c.exchange_rule << '\n'
      << "restarts=" << c.restarts << '\n'
      << "zscore=" << (c.zscore ? "true" : "false") << '\n'
      << "decoding=" << (c.normalized_decoding ? "normalized" : "unnormalized") << '\n'
      << "lambda=" << detail::format_real(c.lambda) << '\n'
      << "epochs=" << c.epochs << '\n'
      << "g1=" << c.g1 << '\n'
      << "g2=" << c.g2 << '\n'
      << "out=" << c.out_dir << '\n';
  return out.str();
}

BlobSpec parse_blob_spec(const std::string& text) {
  BlobSpec b;
  std::string normalized = text;
  std::replace(normalized.begin(), normalized.end(), ';', ',');
  for (const auto& item : split_list(normalized)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("synthetic: expected key=value, got '" + item + "'");
    }
    const std::string key = detail::trim(item.substr(0, eq));
    const std::string value = detail::trim(item.substr(eq + 1));
    if (key == "classes" || key == "R") {
      b.classes = parse_int<int>("synthetic." + key, value);
    } else if (key == "per_class") {
      b.per_class = parse_int<int>("synthetic." + key, value);
    } else if (key == "features" || key == "F") {
      b.features = parse_int<int>("synthetic." + key, value);
    } else if (key == "informative") {
      b.informative = parse_int<int>("synthetic." + key, value);
    } else if (key == "spread") {
      b.spread = parse_double("synthetic." + key, value);
    } else if (key == "seed") {
      b.seed = parse_int<std::uint64_t>("synthetic." + key, value);
    } else {
      throw ConfigError("synthetic: unknown field '" + key + "'");
    }
  }
  return b;
}

void validate(const ExperimentConfig& c) {
  if (c.data_path.empty() && !c.synthetic) {
    throw ConfigError("no dataset: pass --data <file.csv> or --synthetic <spec>");
  }
  if (!c.data_path.empty() && c.synthetic) {
    throw ConfigError("--data and --synthetic are mutually exclusive");
  }
  if (!c.data_path.empty() && !fs::exists(c.data_path)) {
    throw ConfigError("dataset file '" + c.data_path + "' does not exist");
  }
  if (!c.test_path.empty() && !fs::exists(c.test_path)) {
    throw ConfigError("test file '" + c.test_path + "' does not exist");
  }
  if (c.encoders.empty()) {
    throw ConfigError("no encoder given");
  }
  for (const auto& e : c.encoders) {
    if (std::find(kEncoders.begin(), kEncoders.end(), e) == kEncoders.end()) {
      throw ConfigError("unknown encoder '" + e + "' (expected one of " + join(kEncoders) + ")");
    }
  }
  try {
    parse_learner(c.learner);
    parse_exchange_rule(c.exchange_rule);
    if (c.fs != "none") {
      parse_filter(c.fs);
    }
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (c.fs_scope != "global" && c.fs_scope != "per-dichotomy") {
    throw ConfigError("fs-scope must be global or per-dichotomy");
  }
  if (c.fs != "none" && c.k < 1) {
    throw ConfigError("k must be at least 1");
  }
  if (!(c.split > 0.0 && c.split < 1.0)) {
    throw ConfigError("split must lie in (0,1)");
  }
  if (!(c.beta > 0.0)) {
    throw ConfigError("beta must be positive");
  }
  if (c.restarts < 1) {
    throw ConfigError("restarts must be at least 1");
  }
  if (!(c.lambda > 0.0) || c.epochs < 1) {
    throw ConfigError("lambda must be positive and epochs at least 1");
  }
}

PreparedData prepare_data(const ExperimentConfig& c, bool split) {
  std::optional<Dataset> full;
  std::string name = c.dataset_name;
  if (c.synthetic) {
    full = generate_blobs(*c.synthetic);
    if (name.empty()) {
      name = "synthetic";
    }
  } else {
    full = load_csv(c.data_path, c.label_column);
    if (name.empty()) {
      name = fs::path(c.data_path).stem().string();
    }
  }
  if (!split) {
    Dataset d = c.zscore ? Standardizer::fit(*full).apply(*full) : *full;
    return {std::move(d), std::nullopt, name};
  }
  std::optional<Dataset> train;
  std::optional<Dataset> test;
  if (!c.test_path.empty()) {
    train = *full;
    test = load_csv(c.test_path, c.label_column).with_class_order(full->class_names());
    if (test->num_features() != train->num_features()) {
      throw ConfigError("test file has a different feature count than the training data");
    }
  } else {
    auto parts = split_stratified(*full, c.split, c.seed);
    train = std::move(parts.first);
    test = std::move(parts.second);
  }
  if (c.zscore) {
    const Standardizer z = Standardizer::fit(*train);
    train = z.apply(*train);
    test = z.apply(*test);
  }
  return {std::move(*train), std::move(*test), name};
}

CodingMatrix build_matrix(const std::string& encoder, const Dataset& train, const ExperimentConfig& c) {
  if (is_tree_encoder(encoder)) {
    SearchOptions o;
    o.measure = encoder == "ecocecs-n2" ? Measure::N2 : Measure::N3;
    o.rule = parse_exchange_rule(c.exchange_rule);
    o.restarts = c.restarts;
    return ecocecs_encode(train, o, encoder_seed(c));
  }
  if (encoder == "ova") {
    return ova_matrix(train.class_names());
  }
  if (encoder == "ovo") {
    return ovo_matrix(train.class_names());
  }
  if (encoder == "ordinal") {
    return ordinal_matrix(train.class_names());
  }
  throw ConfigError("unknown encoder '" + encoder + "'");
}

EncodeOutput cmd_encode(const ExperimentConfig& c) {
  validate(c);
  const PreparedData data = prepare_data(c, false);
  check_k(c, data.train);
  const Selection sel = global_selection(c, data.train, c.k);
  const Dataset reduced = sel.features.empty() ? data.train : data.train.select_features(sel.features);
  EncodeOutput out;
  for (const auto& e : c.encoders) {
    out.encoders.push_back(e);
    out.matrices.push_back(build_matrix(e, reduced, c));
  }
  write_outputs(c.out_dir, [&](const fs::path& dir) {
    write_text(dir / "config.txt", echo_config(c));
    if (!sel.ranked.empty()) {
      write_selection_csv(sel.ranked, dir / "features.csv");
    }
    for (std::size_t i = 0; i < out.encoders.size(); ++i) {
      const std::string& e = out.encoders[i];
      write_matrix_csv(out.matrices[i], dir / (e + "_matrix.csv"));
      write_matrix_meta_csv(out.matrices[i], dir / (e + "_matrix_meta.csv"));
      if (is_tree_encoder(e)) {
        write_trace_csv(out.matrices[i], dir / (e + "_trace.csv"));
      }
    }
  });
  return out;
}

EvalOutput cmd_eval(const ExperimentConfig& c) {
  validate(c);
  const PreparedData data = prepare_data(c, true);
  check_k(c, data.train);
  const Selection sel = global_selection(c, data.train, c.k);
  const Dataset reduced = sel.features.empty() ? data.train : data.train.select_features(sel.features);
  const std::vector<std::string> truth = label_names(*data.test);

  struct Run {
    std::string encoder;
    CodingMatrix matrix;
    EcocModel model;
    std::vector<Decoding> decodings;
  };
  std::vector<Run> runs;
  EvalOutput out;
  for (const auto& e : c.encoders) {
    CodingMatrix matrix = build_matrix(e, reduced, c);
    EcocModel model = fit(data.train, matrix, fit_options(c, sel.features));
    std::vector<Decoding> decodings = predict_batch_detailed(model, data.test->samples());
    std::vector<std::string> predicted;
    for (const auto& d : decodings) {
      predicted.push_back(model.matrix.class_order[static_cast<std::size_t>(d.row)]);
    }
    EvalReport report = evaluate(truth, predicted, data.train.class_names(), c.beta);
    out.table.push_back({e, {data.name}, {report.accuracy}, {report.fscore}});
    out.reports.push_back(std::move(report));
    runs.push_back({e, std::move(matrix), std::move(model), std::move(decodings)});
  }
  write_outputs(c.out_dir, [&](const fs::path& dir) {
    write_text(dir / "config.txt", echo_config(c));
    if (!sel.ranked.empty()) {
      write_selection_csv(sel.ranked, dir / "features.csv");
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const Run& r = runs[i];
      write_matrix_csv(r.matrix, dir / (r.encoder + "_matrix.csv"));
      write_matrix_meta_csv(r.matrix, dir / (r.encoder + "_matrix_meta.csv"));
      if (is_tree_encoder(r.encoder)) {
        write_trace_csv(r.matrix, dir / (r.encoder + "_trace.csv"));
      }
      write_models(r.model, dir / (r.encoder + "_models.txt"));
      write_predictions_csv(r.model, r.decodings, truth, dir / (r.encoder + "_predictions.csv"));
      write_counts_csv(out.reports[i], dir / (r.encoder + "_counts.csv"));
    }
    write_table_csv(out.table, dir / "report.csv");
  });
  return out;
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig& c) {
  validate(c);
  if (c.k_list.empty()) {
    throw ConfigError("sweep needs a non-empty k-list");
  }
  if (c.fs == "none") {
    throw ConfigError("sweep needs a feature-selection method (fs = roc, ttest or wilcoxon)");
  }
  if (!std::is_sorted(c.k_list.begin(), c.k_list.end()) ||
      std::adjacent_find(c.k_list.begin(), c.k_list.end()) != c.k_list.end()) {
    throw ConfigError("k-list must be strictly ascending");
  }
  const PreparedData data = prepare_data(c, true);
  for (Eigen::Index k : c.k_list) {
    if (k < 1 || k > data.train.num_features()) {
      throw ConfigError("k-list entry " + std::to_string(k) + " must lie in [1, " +
                        std::to_string(data.train.num_features()) + "]");
    }
  }
  const std::vector<std::string> truth = label_names(*data.test);
  const bool global = c.fs_scope == "global";
  const std::vector<FeatureScore> scores =
      global ? score_features(data.train, parse_filter(c.fs)) : std::vector<FeatureScore>{};

  std::vector<SweepRow> rows;
  for (Eigen::Index k : c.k_list) {
    ExperimentConfig ck = c;
    ck.k = k;
    std::vector<Eigen::Index> features;
    if (global) {
      for (const auto& f : top_k(scores, k)) {
        features.push_back(f.feature);
      }
    }
    const Dataset reduced = features.empty() ? data.train : data.train.select_features(features);
    for (const auto& e : c.encoders) {
      const CodingMatrix matrix = build_matrix(e, reduced, ck);
      const EcocModel model = fit(data.train, matrix, fit_options(ck, features));
      const EvalReport report = evaluate(truth, predict_batch(model, *data.test), data.train.class_names(), c.beta);
      rows.push_back({k, e, report.accuracy, report.fscore});
    }
  }
  write_outputs(c.out_dir, [&](const fs::path& dir) {
    write_text(dir / "config.txt", echo_config(c));
    std::ofstream out(dir / "sweep.csv");
    out << "k,encoder,accuracy,fscore\n";
    for (const auto& r : rows) {
      out << r.k << ',' << r.encoder << ',' << detail::format_real(r.accuracy) << ','
          << detail::format_real(r.fscore) << '\n';
    }
  });
  return rows;
}

ComplexityOutput cmd_complexity(const ExperimentConfig& c) {
  if (c.data_path.empty() && !c.synthetic) {
    throw ConfigError("no dataset: pass --data <file.csv> or --synthetic <spec>");
  }
  if (!c.data_path.empty() && !fs::exists(c.data_path)) {
    throw ConfigError("dataset file '" + c.data_path + "' does not exist");
  }
  if (c.g1.empty()) {
    throw ConfigError("complexity needs --g1 (comma-separated class names)");
  }
  const PreparedData data = prepare_data(c, false);
  const Dataset& d = data.train;
  const ClassSet g1 = parse_group(d, c.g1);
  ClassSet g2;
  if (c.g2.empty()) {
    for (ClassIndex k = 0; k < d.num_classes(); ++k) {
      if (std::find(g1.begin(), g1.end(), k) == g1.end()) {
        g2.push_back(k);
      }
    }
  } else {
    g2 = parse_group(d, c.g2);
  }
  const BinaryView view(d, g1, g2);
  ComplexityOutput out{n2_index(view).value, n3_index(view).value};
  write_outputs(c.out_dir, [&](const fs::path& dir) {
    write_text(dir / "config.txt", echo_config(c));
    write_text(dir / "complexity.csv", "measure,value\nN2," + detail::format_real(out.n2) + "\nN3," +
                                           detail::format_real(out.n3) + "\n");
  });
  return out;
}

} // namespace ecocecs
