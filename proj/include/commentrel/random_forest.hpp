#ifndef COMMENTREL_RANDOM_FOREST_HPP
#define COMMENTREL_RANDOM_FOREST_HPP

// Building blocks of the forest learner, exposed so the split search can be
// checked against an exhaustive re-evaluation.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "commentrel/corpus.hpp"
#include "commentrel/sparse_matrix.hpp"

namespace commentrel::forest {

/// Column-major view of a training matrix: per feature, the (row, value)
/// pairs of its stored entries in row order.
class FeatureColumns {
 public:
  explicit FeatureColumns(const SparseMatrix& x);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return col_ptr_.size() - 1; }
  std::span<const std::uint32_t> rows_of(std::size_t f) const {
    return {row_idx_.data() + col_ptr_[f], col_ptr_[f + 1] - col_ptr_[f]};
  }
  std::span<const double> values_of(std::size_t f) const {
    return {values_.data() + col_ptr_[f], col_ptr_[f + 1] - col_ptr_[f]};
  }

 private:
  std::size_t rows_;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::uint32_t> row_idx_;
  std::vector<double> values_;
};

/// Entropy in bits of a two-class weighted count.
double entropy(double not_useful, double useful);

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();

  bool valid() const { return feature >= 0; }
};

/// Node-local state for the split search. `member[r]` is the node id owning
/// training row r; `weight[r]` its bootstrap multiplicity.
struct NodeSamples {
  std::span<const std::uint32_t> rows;  // rows of the node, weight > 0
  std::span<const std::int32_t> member;
  std::int32_t node = 0;
  std::span<const double> weight;
  std::span<const Label> labels;
};

/// Best information-gain split of the node over `candidates`, examined in
/// the given order; thresholds are midpoints between consecutive distinct
/// values and a later candidate must be strictly better to win. Features
/// that are constant within the node yield no candidate.
Split best_split(const FeatureColumns& columns, const NodeSamples& node,
                 std::span<const std::size_t> candidates);

/// Gain of one (feature, threshold) pair, evaluated directly.
double split_gain(const FeatureColumns& columns, const NodeSamples& node,
                  std::size_t feature, double threshold);

/// Uniform integer in [0, bound) from a 64-bit Mersenne twister, identical
/// on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace commentrel::forest

#endif  // COMMENTREL_RANDOM_FOREST_HPP
