#ifndef COMMENTREL_TRAINING_CHECKS_HPP
#define COMMENTREL_TRAINING_CHECKS_HPP

#include <string>
#include <vector>

#include "commentrel/corpus.hpp"
#include "commentrel/error.hpp"
#include "commentrel/sparse_matrix.hpp"

namespace commentrel::detail {

inline void check_training_input(const SparseMatrix& x, const std::vector<Label>& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) +
                    " labels");
  }
  if (x.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "no features");
  bool useful = false, not_useful = false;
  for (auto l : y) (l == Label::Useful ? useful : not_useful) = true;
  if (!useful || !not_useful) {
    throw Error(ErrorKind::SingleClassCorpus, "training data holds a single class");
  }
}

}  // namespace commentrel::detail

#endif  // COMMENTREL_TRAINING_CHECKS_HPP
