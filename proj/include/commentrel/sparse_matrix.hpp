#ifndef COMMENTREL_SPARSE_MATRIX_HPP
#define COMMENTREL_SPARSE_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace commentrel {

/// Compressed sparse row matrix of doubles. Column indices inside a row are
/// strictly increasing and explicit zeros are never stored.
class SparseMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  /// Duplicate (row, col) pairs are summed; zero results are dropped.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix from_dense(const std::vector<std::vector<double>>& dense);

  std::size_t rows() const { return row_ptr_.size() - 1; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::uint32_t> row_indices(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<double> row_values(std::size_t r) {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  double at(std::size_t r, std::size_t c) const;
  double row_dot(std::size_t r, std::span<const double> dense) const;
  double row_norm(std::size_t r) const;

  std::vector<std::vector<double>> to_dense() const;
  std::vector<Triplet> triplets() const;

  /// Rows in the given order (indices may repeat).
  SparseMatrix select_rows(std::span<const std::size_t> rows) const;

  /// Columns in the given order; every id must be < cols().
  SparseMatrix select_columns(std::span<const std::size_t> columns) const;

  /// Column-wise sums and per-column count of stored entries.
  std::vector<double> column_sums() const;
  std::vector<std::size_t> column_nnz() const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> values_;
};

// Text triplet format:
//   %commentrel-matrix 1 <rows> <cols> <nnz>
//   <row> <col> <value>     (one line per stored entry, row-major, %.17g)
void write_triplets(std::ostream& out, const SparseMatrix& m);
SparseMatrix read_triplets(std::istream& in);

}  // namespace commentrel

#endif  // COMMENTREL_SPARSE_MATRIX_HPP
