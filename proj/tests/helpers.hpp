#ifndef ECOCECS_TESTS_HELPERS_HPP
#define ECOCECS_TESTS_HELPERS_HPP

#include "ecocecs/dataset.hpp"
#include "oracles.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testing {

inline std::vector<oracle::Point> points_of(const Eigen::MatrixXd& x) {
  std::vector<oracle::Point> out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    oracle::Point p;
    for (Eigen::Index j = 0; j < x.cols(); ++j) p.push_back(x(i, j));
    out.push_back(std::move(p));
  }
  return out;
}

/// Dataset from rows of coordinates and string labels.
inline ecocecs::Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                                     const std::vector<std::string>& labels) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return ecocecs::Dataset::from_labels(std::move(x), labels);
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ecocecs_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace testing

#endif // ECOCECS_TESTS_HELPERS_HPP
