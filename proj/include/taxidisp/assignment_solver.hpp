#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace taxidisp {

enum class Sense { Minimize, Maximize };

/// Dense row-major weight matrix for a rectangular assignment problem.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols, Sense sense = Sense::Minimize,
               double fill = 0.0);
  WeightMatrix(std::vector<std::vector<double>> values, Sense sense = Sense::Minimize);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Sense sense() const { return sense_; }

  double& operator()(std::size_t r, std::size_t c) { return w_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return w_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Sense sense_ = Sense::Minimize;
  std::vector<double> w_;
};

/// Pairs are (row, col), sorted by row then col.
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  double total = 0.0;
};

/// Optimal matching of size min(rows, cols).
///
/// Weights are mapped onto an int64 grid of step 2^-k, with k chosen from the
/// largest magnitude so that all potentials stay far from overflow, and the
/// problem is solved exactly on that grid by shortest augmenting paths
/// (Kuhn-Munkres with Jonker-Volgenant style column potentials, smaller
/// side as the augmenting side). Among all optimal matchings the one whose
/// sorted pair list is lexicographically smallest is returned. `total` is
/// the sum of the original weights over the returned pairs.
///
/// Throws std::invalid_argument on non-finite weights.
Matching solve(const WeightMatrix& m);

/// Exhaustive oracle with the same optimality and tie-break contract as
/// solve(). Throws std::invalid_argument when min(rows, cols) > 9.
Matching brute_force(const WeightMatrix& m);

inline constexpr std::size_t kBruteForceLimit = 9;

}  // namespace taxidisp
