#include "commentrel/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "commentrel/error.hpp"

namespace commentrel {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : cols_(cols), row_ptr_(rows + 1, 0) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  if (cols > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::DimensionMismatch, "too many columns");
  }
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw Error(ErrorKind::ColumnOutOfRange,
                  "triplet (" + std::to_string(t.row) + ", " +
                      std::to_string(t.col) + ") outside " +
                      std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });
  SparseMatrix m(rows, cols);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  std::size_t i = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const std::size_t c = triplets[i].col;
      double sum = 0.0;
      while (i < triplets.size() && triplets[i].row == r &&
             triplets[i].col == c) {
        sum += triplets[i].value;
        ++i;
      }
      if (sum != 0.0) {
        m.col_idx_.push_back(static_cast<std::uint32_t>(c));
        m.values_.push_back(sum);
      }
    }
    m.row_ptr_[r + 1] = m.values_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(
    const std::vector<std::vector<double>>& dense) {
  const std::size_t rows = dense.size();
  const std::size_t cols = rows ? dense.front().size() : 0;
  std::vector<Triplet> triplets;
  for (std::size_t r = 0; r < rows; ++r) {
    if (dense[r].size() != cols) {
      throw Error(ErrorKind::DimensionMismatch, "ragged dense matrix");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (dense[r][c] != 0.0) triplets.push_back({r, c, dense[r][c]});
    }
  }
  return from_triplets(rows, cols, std::move(triplets));
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  const auto idx = row_indices(r);
  const auto it = std::lower_bound(idx.begin(), idx.end(), c);
  if (it == idx.end() || *it != c) return 0.0;
  return row_values(r)[static_cast<std::size_t>(it - idx.begin())];
}

double SparseMatrix::row_dot(std::size_t r, std::span<const double> dense) const {
  const auto idx = row_indices(r);
  const auto val = row_values(r);
  double sum = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) sum += val[k] * dense[idx[k]];
  return sum;
}

double SparseMatrix::row_norm(std::size_t r) const {
  double sq = 0.0;
  for (double v : row_values(r)) sq += v * v;
  return std::sqrt(sq);
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
  std::vector<std::vector<double>> dense(rows(), std::vector<double>(cols_, 0.0));
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto idx = row_indices(r);
    const auto val = row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) dense[r][idx[k]] = val[k];
  }
  return dense;
}

std::vector<SparseMatrix::Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto idx = row_indices(r);
    const auto val = row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) out.push_back({r, idx[k], val[k]});
  }
  return out;
}

SparseMatrix SparseMatrix::select_rows(std::span<const std::size_t> rows) const {
  SparseMatrix m(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto idx = row_indices(rows[i]);
    const auto val = row_values(rows[i]);
    m.col_idx_.insert(m.col_idx_.end(), idx.begin(), idx.end());
    m.values_.insert(m.values_.end(), val.begin(), val.end());
    m.row_ptr_[i + 1] = m.values_.size();
  }
  return m;
}

SparseMatrix SparseMatrix::select_columns(
    std::span<const std::size_t> columns) const {
  constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> remap(cols_, kAbsent);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] >= cols_) {
      throw Error(ErrorKind::ColumnOutOfRange,
                  "column " + std::to_string(columns[j]) + " of a " +
                      std::to_string(cols_) + "-column matrix");
    }
    remap[columns[j]] = j;
  }
  std::vector<Triplet> out;
  for (std::size_t r = 0; r < rows(); ++r) {
    const auto idx = row_indices(r);
    const auto val = row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (remap[idx[k]] != kAbsent) out.push_back({r, remap[idx[k]], val[k]});
    }
  }
  return from_triplets(rows(), columns.size(), std::move(out));
}

std::vector<double> SparseMatrix::column_sums() const {
  std::vector<double> sums(cols_, 0.0);
  for (std::size_t k = 0; k < values_.size(); ++k) sums[col_idx_[k]] += values_[k];
  return sums;
}

std::vector<std::size_t> SparseMatrix::column_nnz() const {
  std::vector<std::size_t> counts(cols_, 0);
  for (auto c : col_idx_) ++counts[c];
  return counts;
}

void write_triplets(std::ostream& out, const SparseMatrix& m) {
  out << "%commentrel-matrix 1 " << m.rows() << ' ' << m.cols() << ' '
      << m.nnz() << '\n';
  char buf[64];
  for (const auto& t : m.triplets()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.value);
    out << t.row << ' ' << t.col << ' ' << buf << '\n';
  }
}

SparseMatrix read_triplets(std::istream& in) {
  std::string magic;
  int version = 0;
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(in >> magic >> version >> rows >> cols >> nnz) ||
      magic != "%commentrel-matrix") {
    throw Error(ErrorKind::Format, "bad matrix header");
  }
  if (version != 1) {
    throw Error(ErrorKind::Format,
                "unsupported matrix version " + std::to_string(version));
  }
  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(nnz);
  for (std::size_t i = 0; i < nnz; ++i) {
    SparseMatrix::Triplet t{};
    if (!(in >> t.row >> t.col >> t.value)) {
      throw Error(ErrorKind::Format, "truncated matrix body");
    }
    triplets.push_back(t);
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

}  // namespace commentrel
