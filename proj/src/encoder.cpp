#include "ecocecs/encoder.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace ecocecs {

namespace {

ClassSet sorted(ClassSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

// Picks the class with the extreme score, first (lowest index) on ties.
template <typename Score>
ClassIndex pick(const ClassSet& group, Score score, bool take_min) {
  ClassIndex best = group.front();
  double best_score = score(best);
  for (ClassIndex c : group) {
    const double s = score(c);
    if (take_min ? s < best_score : s > best_score) {
      best = c;
      best_score = s;
    }
  }
  return best;
}

void emit_columns(const ComplexityEvaluator& eval, const ClassSet& classes,
                  const SearchOptions& options, std::uint64_t seed, int& next_node,
                  std::vector<Eigen::VectorXi>& columns, std::vector<ColumnMeta>& meta) {
  const int node_id = next_node++;
  const PartitionState state = local_search_split(eval, classes, options, seed);
  Eigen::VectorXi col = Eigen::VectorXi::Zero(eval.dataset().num_classes());
  for (ClassIndex c : state.g1) {
    col(c) = +1;
  }
  for (ClassIndex c : state.g2) {
    col(c) = -1;
  }
  columns.push_back(std::move(col));
  meta.push_back({node_id, to_string(options.measure), state.index.value, state.trace});
  for (const ClassSet* child : {&state.g1, &state.g2}) {
    if (child->size() >= 2) {
      const auto salt = static_cast<std::uint64_t>(next_node);
      emit_columns(eval, *child, options, mix_seed(seed, salt), next_node, columns, meta);
    }
  }
}

std::vector<std::string> default_names(int num_classes) {
  std::vector<std::string> names;
  for (int k = 0; k < num_classes; ++k) {
    names.push_back("c" + std::to_string(k + 1));
  }
  return names;
}

CodingMatrix baseline(const std::vector<std::string>& order, Eigen::MatrixXi entries,
                      const std::string& source) {
  CodingMatrix m;
  m.entries = std::move(entries);
  m.class_order = order;
  for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
    m.column_meta.push_back({static_cast<int>(j), source, std::numeric_limits<double>::quiet_NaN(), {}});
  }
  return m;
}

void require_classes(const std::vector<std::string>& order) {
  if (order.size() < 2) {
    throw EncoderError("coding matrix needs at least 2 classes (R<2)");
  }
}

} // namespace

std::string to_string(ExchangeRule r) { return r == ExchangeRule::Prose ? "prose" : "pseudocode"; }

ExchangeRule parse_exchange_rule(const std::string& text) {
  if (text == "prose") {
    return ExchangeRule::Prose;
  }
  if (text == "pseudocode") {
    return ExchangeRule::Pseudocode;
  }
  throw EncoderError("unknown exchange rule '" + text + "' (expected prose or pseudocode)");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::pair<ClassSet, ClassSet> random_balanced_split(const ClassSet& classes, std::uint64_t seed) {
  if (classes.size() < 2) {
    throw EncoderError("a split needs at least 2 classes");
  }
  ClassSet shuffled = classes;
  std::mt19937_64 rng(seed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto first = static_cast<std::ptrdiff_t>((shuffled.size() + 1) / 2);
  return {sorted({shuffled.begin(), shuffled.begin() + first}),
          sorted({shuffled.begin() + first, shuffled.end()})};
}

std::pair<ClassIndex, ClassIndex> exchange_candidates(const ComplexityEvaluator& eval,
                                                      const ClassSet& g1, const ClassSet& g2,
                                                      Measure measure, ExchangeRule rule) {
  if (measure == Measure::N2) {
    const bool take_min = rule == ExchangeRule::Prose;
    return {pick(g1, [&](ClassIndex k) { return eval.ratio_score(g1, g2, k); }, take_min),
            pick(g2, [&](ClassIndex k) { return eval.ratio_score(g1, g2, k); }, take_min)};
  }
  return {pick(g1, [&](ClassIndex k) { return eval.sum_score(g1, k); }, false),
          pick(g2, [&](ClassIndex k) { return eval.sum_score(g2, k); }, false)};
}

std::pair<ClassSet, ClassSet> exchange(const ClassSet& g1, const ClassSet& g2, ClassIndex a,
                                       ClassIndex b) {
  ClassSet n1 = g1;
  ClassSet n2 = g2;
  std::replace(n1.begin(), n1.end(), a, b);
  std::replace(n2.begin(), n2.end(), b, a);
  return {sorted(std::move(n1)), sorted(std::move(n2))};
}

PartitionState local_search_from(const ComplexityEvaluator& eval, ClassSet g1, ClassSet g2,
                                 Measure measure, ExchangeRule rule) {
  PartitionState state;
  state.g1 = sorted(std::move(g1));
  state.g2 = sorted(std::move(g2));
  state.index = eval.index(measure, state.g1, state.g2);
  state.trace.push_back(state.index.value);
  // Each accepted step strictly lowers the index over a finite set of splits.
  while (true) {
    const auto [a, b] = exchange_candidates(eval, state.g1, state.g2, measure, rule);
    auto [n1, n2] = exchange(state.g1, state.g2, a, b);
    const ComplexityIndex candidate = eval.index(measure, n1, n2);
    if (!(candidate.value < state.index.value)) {
      break;
    }
    state.g1 = std::move(n1);
    state.g2 = std::move(n2);
    state.index = candidate;
    state.trace.push_back(candidate.value);
  }
  return state;
}

PartitionState local_search_split(const ComplexityEvaluator& eval, const ClassSet& classes,
                                  const SearchOptions& options, std::uint64_t seed) {
  if (classes.size() < 2) {
    throw EncoderError("local search needs at least 2 classes");
  }
  if (options.restarts < 1) {
    throw EncoderError("restarts must be at least 1");
  }
  PartitionState best;
  for (int r = 0; r < options.restarts; ++r) {
    const std::uint64_t run_seed = r == 0 ? seed : mix_seed(seed, 0x5245535452ULL + static_cast<std::uint64_t>(r));
    auto [g1, g2] = random_balanced_split(classes, run_seed);
    PartitionState state = local_search_from(eval, std::move(g1), std::move(g2), options.measure, options.rule);
    if (r == 0 || state.index.value < best.index.value) {
      best = std::move(state);
    }
  }
  return best;
}

PartitionState local_search_split(const Dataset& d, const ClassSet& classes,
                                  const SearchOptions& options, std::uint64_t seed) {
  const ComplexityEvaluator eval(d);
  return local_search_split(eval, classes, options, seed);
}

bool is_local_minimum(const ComplexityEvaluator& eval, const PartitionState& state,
                      Measure measure, ExchangeRule rule) {
  const auto [a, b] = exchange_candidates(eval, state.g1, state.g2, measure, rule);
  const auto [n1, n2] = exchange(state.g1, state.g2, a, b);
  return !(eval.index(measure, n1, n2).value < state.index.value);
}

ClassSet CodingMatrix::positive_classes(Eigen::Index col) const {
  ClassSet out;
  for (Eigen::Index r = 0; r < rows(); ++r) {
    if (entries(r, col) > 0) {
      out.push_back(static_cast<ClassIndex>(r));
    }
  }
  return out;
}

ClassSet CodingMatrix::negative_classes(Eigen::Index col) const {
  ClassSet out;
  for (Eigen::Index r = 0; r < rows(); ++r) {
    if (entries(r, col) < 0) {
      out.push_back(static_cast<ClassIndex>(r));
    }
  }
  return out;
}

std::vector<std::string> check_invariants(const CodingMatrix& m) {
  std::vector<std::string> problems;
  if (static_cast<Eigen::Index>(m.class_order.size()) != m.rows()) {
    problems.push_back("class_order length differs from row count");
  }
  if (static_cast<Eigen::Index>(m.column_meta.size()) != m.cols()) {
    problems.push_back("column_meta length differs from column count");
  }
  if (m.cols() == 0) {
    problems.push_back("matrix has no columns");
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    bool pos = false;
    bool neg = false;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const int v = m.entries(r, j);
      if (v != -1 && v != 0 && v != 1) {
        problems.push_back("entry (" + std::to_string(r) + "," + std::to_string(j) + ") outside {-1,0,1}");
      }
      pos = pos || v == 1;
      neg = neg || v == -1;
    }
    if (!pos || !neg) {
      problems.push_back("column " + std::to_string(j) + " lacks a +1 or a -1");
    }
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if ((m.entries.row(r).array() == 0).all()) {
      problems.push_back("row " + std::to_string(r) + " is all zeros");
    }
    for (Eigen::Index s = r + 1; s < m.rows(); ++s) {
      if (m.entries.row(r) == m.entries.row(s)) {
        problems.push_back("rows " + std::to_string(r) + " and " + std::to_string(s) + " are identical");
      }
    }
  }
  return problems;
}

std::vector<std::string> check_tree_consistency(const CodingMatrix& m) {
  std::vector<std::string> problems;
  if (m.cols() != m.rows() - 1) {
    problems.push_back("tree code has " + std::to_string(m.cols()) + " columns, expected " +
                       std::to_string(m.rows() - 1));
  }
  auto node_of = [&](Eigen::Index j) {
    std::set<ClassIndex> node;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m.entries(r, j) != 0) {
        node.insert(static_cast<ClassIndex>(r));
      }
    }
    return node;
  };
  if (m.cols() > 0 && static_cast<Eigen::Index>(node_of(0).size()) != m.rows()) {
    problems.push_back("root column does not cover every class");
  }
  // Every non-root node must be one side of some earlier column, and each
  // side may be claimed by at most one child.
  std::set<std::pair<Eigen::Index, int>> claimed;
  for (Eigen::Index j = 1; j < m.cols(); ++j) {
    const auto node = node_of(j);
    bool found = false;
    for (Eigen::Index p = 0; p < j && !found; ++p) {
      for (int sign : {+1, -1}) {
        const ClassSet side = sign > 0 ? m.positive_classes(p) : m.negative_classes(p);
        if (std::set<ClassIndex>(side.begin(), side.end()) == node && !claimed.count({p, sign})) {
          claimed.insert({p, sign});
          found = true;
          break;
        }
      }
    }
    if (!found) {
      problems.push_back("column " + std::to_string(j) + " does not split a side of an earlier column");
    }
  }
  return problems;
}

CodingMatrix ecocecs_encode(const Dataset& d, const SearchOptions& options, std::uint64_t seed) {
  const ComplexityEvaluator eval(d);
  ClassSet all(static_cast<std::size_t>(d.num_classes()));
  std::iota(all.begin(), all.end(), 0);
  std::vector<Eigen::VectorXi> columns;
  CodingMatrix m;
  int next_node = 0;
  emit_columns(eval, all, options, seed, next_node, columns, m.column_meta);
  m.entries.resize(d.num_classes(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    m.entries.col(static_cast<Eigen::Index>(j)) = columns[j];
  }
  m.class_order = d.class_names();
  return m;
}

CodingMatrix ova_matrix(const std::vector<std::string>& class_order) {
  require_classes(class_order);
  const auto r = static_cast<Eigen::Index>(class_order.size());
  Eigen::MatrixXi e = Eigen::MatrixXi::Constant(r, r, -1);
  e.diagonal().setOnes();
  return baseline(class_order, std::move(e), "ova");
}

CodingMatrix ovo_matrix(const std::vector<std::string>& class_order) {
  require_classes(class_order);
  const auto r = static_cast<Eigen::Index>(class_order.size());
  Eigen::MatrixXi e = Eigen::MatrixXi::Zero(r, r * (r - 1) / 2);
  Eigen::Index j = 0;
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = a + 1; b < r; ++b, ++j) {
      e(a, j) = 1;
      e(b, j) = -1;
    }
  }
  return baseline(class_order, std::move(e), "ovo");
}

CodingMatrix ordinal_matrix(const std::vector<std::string>& class_order) {
  require_classes(class_order);
  const auto r = static_cast<Eigen::Index>(class_order.size());
  Eigen::MatrixXi e(r, r - 1);
  for (Eigen::Index j = 0; j < r - 1; ++j) {
    for (Eigen::Index k = 0; k < r; ++k) {
      e(k, j) = k <= j ? -1 : 1;
    }
  }
  return baseline(class_order, std::move(e), "ordinal");
}

CodingMatrix ova_matrix(int num_classes) { return ova_matrix(default_names(std::max(num_classes, 0))); }
CodingMatrix ovo_matrix(int num_classes) { return ovo_matrix(default_names(std::max(num_classes, 0))); }
CodingMatrix ordinal_matrix(int num_classes) { return ordinal_matrix(default_names(std::max(num_classes, 0))); }

void write_matrix_csv(const CodingMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw EncoderError("cannot write '" + path.string() + "'");
  }
  out << "class";
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out << ",c" << j + 1;
  }
  out << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << m.class_order[static_cast<std::size_t>(r)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << ',' << m.entries(r, j);
    }
    out << '\n';
  }
}

void write_matrix_meta_csv(const CodingMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw EncoderError("cannot write '" + path.string() + "'");
  }
  out << "column,node_id,measure,final_index\n";
  for (std::size_t j = 0; j < m.column_meta.size(); ++j) {
    const ColumnMeta& meta = m.column_meta[j];
    out << 'c' << j + 1 << ',' << meta.node_id << ',' << meta.source << ','
        << (std::isnan(meta.final_index) ? std::string() : detail::format_real(meta.final_index)) << '\n';
  }
}

void write_trace_csv(const CodingMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw EncoderError("cannot write '" + path.string() + "'");
  }
  out << "node_id,step,index\n";
  for (const ColumnMeta& meta : m.column_meta) {
    for (std::size_t step = 0; step < meta.trace.size(); ++step) {
      out << meta.node_id << ',' << step << ',' << detail::format_real(meta.trace[step]) << '\n';
    }
  }
}

CodingMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw EncoderError("cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw EncoderError("'" + path.string() + "' is empty");
  }
  const auto header = detail::split_csv(detail::trim(line));
  const auto cols = static_cast<Eigen::Index>(header.size()) - 1;
  std::vector<std::vector<int>> rows;
  CodingMatrix m;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) {
      continue;
    }
    const auto cells = detail::split_csv(line);
    if (static_cast<Eigen::Index>(cells.size()) != cols + 1) {
      throw EncoderError("matrix row '" + cells.front() + "' has the wrong number of entries");
    }
    m.class_order.push_back(detail::trim(cells[0]));
    std::vector<int> row;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      const std::string cell = detail::trim(cells[j]);
      if (cell != "-1" && cell != "0" && cell != "1" && cell != "+1") {
        throw EncoderError("matrix entry '" + cell + "' is not in {-1,0,1}");
      }
      row.push_back(std::stoi(cell));
    }
    rows.push_back(std::move(row));
  }
  m.entries.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m.entries(static_cast<Eigen::Index>(r), j) = rows[r][static_cast<std::size_t>(j)];
    }
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    m.column_meta.push_back({static_cast<int>(j), "file", std::numeric_limits<double>::quiet_NaN(), {}});
  }
  return m;
}

} // namespace ecocecs
