#ifndef ECOCECS_ENCODER_HPP
#define ECOCECS_ENCODER_HPP

#include "ecocecs/complexity.hpp"
#include "ecocecs/dataset.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace ecocecs {

/// Which class of each group is exchanged. Prose: argmin of the ratio score
/// under N2, argmax of the sum score under N3. Pseudocode: argmax for both.
enum class ExchangeRule { Prose, Pseudocode };

std::string to_string(ExchangeRule r);
ExchangeRule parse_exchange_rule(const std::string& text);

class EncoderError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SearchOptions {
  Measure measure = Measure::N2;
  ExchangeRule rule = ExchangeRule::Prose;
  int restarts = 1;
};

/// Two-group split of a class subset. trace holds every accepted index
/// value, starting with the initial split's.
struct PartitionState {
  ClassSet g1;
  ClassSet g2;
  ComplexityIndex index;
  std::vector<double> trace;
};

/// Deterministic 64-bit mixing of (seed, salt); used for child and restart seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

/// Random split into sizes ceil(n/2) and floor(n/2), each group sorted.
std::pair<ClassSet, ClassSet> random_balanced_split(const ClassSet& classes, std::uint64_t seed);

/// The class to exchange out of each group, ties to the lowest class index.
std::pair<ClassIndex, ClassIndex> exchange_candidates(const ComplexityEvaluator& eval,
                                                      const ClassSet& g1, const ClassSet& g2,
                                                      Measure measure, ExchangeRule rule);

/// g1/g2 with a and b swapped; both groups returned sorted.
std::pair<ClassSet, ClassSet> exchange(const ClassSet& g1, const ClassSet& g2, ClassIndex a,
                                       ClassIndex b);

/// Exchange search from a given starting split. Stops at the first exchange
/// that does not strictly lower the index.
PartitionState local_search_from(const ComplexityEvaluator& eval, ClassSet g1, ClassSet g2,
                                 Measure measure, ExchangeRule rule = ExchangeRule::Prose);

/// Exchange search from a seeded random balanced split. With restarts > 1
/// the best of that many seeded runs is kept (first one wins ties).
PartitionState local_search_split(const ComplexityEvaluator& eval, const ClassSet& classes,
                                  const SearchOptions& options, std::uint64_t seed);
PartitionState local_search_split(const Dataset& d, const ClassSet& classes,
                                  const SearchOptions& options, std::uint64_t seed);

/// True when the prescribed exchange from `state` does not strictly lower its index.
bool is_local_minimum(const ComplexityEvaluator& eval, const PartitionState& state,
                      Measure measure, ExchangeRule rule = ExchangeRule::Prose);

struct ColumnMeta {
  int node_id = 0;
  std::string source;   // "N2", "N3", "ova", "ovo", "ordinal"
  double final_index = 0.0;
  std::vector<double> trace;
};

/// Ternary class-by-dichotomy matrix with one row per class.
struct CodingMatrix {
  Eigen::MatrixXi entries;
  std::vector<std::string> class_order;
  std::vector<ColumnMeta> column_meta;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }

  ClassSet positive_classes(Eigen::Index col) const;
  ClassSet negative_classes(Eigen::Index col) const;
};

/// Violations of the general matrix invariants (values in {-1,0,1}, both
/// signs in every column, unique non-zero rows). Empty when valid.
std::vector<std::string> check_invariants(const CodingMatrix& m);
/// Violations specific to tree codes: R-1 columns, root covers every class,
/// each other column's node is the +1 or -1 side of an earlier column.
std::vector<std::string> check_tree_consistency(const CodingMatrix& m);

/// Recursive tree encoder: split, emit a column, recurse into groups with
/// two or more classes. Columns come out in pre-order.
CodingMatrix ecocecs_encode(const Dataset& d, const SearchOptions& options, std::uint64_t seed);

CodingMatrix ova_matrix(const std::vector<std::string>& class_order);
CodingMatrix ovo_matrix(const std::vector<std::string>& class_order);
CodingMatrix ordinal_matrix(const std::vector<std::string>& class_order);
CodingMatrix ova_matrix(int num_classes);
CodingMatrix ovo_matrix(int num_classes);
CodingMatrix ordinal_matrix(int num_classes);

void write_matrix_csv(const CodingMatrix& m, const std::filesystem::path& path);
void write_matrix_meta_csv(const CodingMatrix& m, const std::filesystem::path& path);
/// Per-node accepted index values: node_id,step,index.
void write_trace_csv(const CodingMatrix& m, const std::filesystem::path& path);
CodingMatrix read_matrix_csv(const std::filesystem::path& path);

} // namespace ecocecs

#endif // ECOCECS_ENCODER_HPP
