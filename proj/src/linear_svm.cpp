#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "commentrel/classifiers.hpp"
#include "commentrel/error.hpp"
#include "training_checks.hpp"

namespace commentrel {

namespace {

constexpr double kTau = 1e-12;

// Rows of the linear Gram matrix x_i . x_t, computed on demand and kept in a
// bounded FIFO cache.
class GramRows {
 public:
  GramRows(const SparseMatrix& x, std::size_t byte_budget)
      : x_(x), scratch_(x.cols(), 0.0) {
    const std::size_t row_bytes = std::max<std::size_t>(1, x.rows() * sizeof(double));
    capacity_ = std::max<std::size_t>(2, byte_budget / row_bytes);
  }

  const std::vector<double>& row(std::size_t i) {
    if (auto it = cache_.find(i); it != cache_.end()) return it->second;
    if (cache_.size() >= capacity_) {
      cache_.erase(order_.front());
      order_.pop_front();
    }
    const auto idx = x_.row_indices(i);
    const auto val = x_.row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) scratch_[idx[k]] = val[k];
    std::vector<double> out(x_.rows());
    for (std::size_t t = 0; t < x_.rows(); ++t) out[t] = x_.row_dot(t, scratch_);
    for (auto c : idx) scratch_[c] = 0.0;
    order_.push_back(i);
    return cache_.emplace(i, std::move(out)).first->second;
  }

 private:
  const SparseMatrix& x_;
  std::vector<double> scratch_;
  std::size_t capacity_;
  std::unordered_map<std::size_t, std::vector<double>> cache_;
  std::deque<std::size_t> order_;
};

}  // namespace

double svm_primal_objective(const SparseMatrix& x, std::span<const double> y,
                            std::span<const double> w, double b, double cost_c) {
  double reg = 0.0;
  for (double v : w) reg += v * v;
  double hinge = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    hinge += std::max(0.0, 1.0 - y[r] * (x.row_dot(r, w) + b));
  }
  return 0.5 * reg + cost_c * hinge;
}

// Sequential minimal optimization on the dual
//   min 0.5 a'Qa - e'a,  0 <= a <= C,  y'a = 0,  Q_it = y_i y_t x_i.x_t
// with second-order working-set selection. The stopping gap `tol` bounds the
// KKT violation, so training margins are within tol of their targets.
TrainedModel train_linear_svm(const SparseMatrix& x, const std::vector<Label>& labels,
                              const SvmHyper& h) {
  detail::check_training_input(x, labels);
  if (!(h.cost_c > 0.0)) throw Error(ErrorKind::Usage, "cost_c must be > 0");
  if (!(h.tol > 0.0)) throw Error(ErrorKind::Usage, "tol must be > 0");

  const std::size_t n = x.rows();
  const double c = h.cost_c;
  const auto y = signed_targets(labels);
  const std::int64_t max_iters =
      h.max_iters > 0 ? h.max_iters
                      : std::max<std::int64_t>(10'000'000, 100 * static_cast<std::int64_t>(n));

  std::vector<double> alpha(n, 0.0), grad(n, -1.0), diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = x.row_norm(i);
    diag[i] = norm * norm;
  }
  GramRows gram(x, std::size_t{256} << 20);

  auto at_upper = [&](std::size_t t) { return alpha[t] >= c; };
  auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::int64_t iter = 0;
  bool converged = false;
  while (iter < max_iters) {
    // i: maximal violator in I_up
    double gmax = -kInf;
    std::ptrdiff_t sel_i = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] > 0) {
        if (!at_upper(t) && -grad[t] >= gmax) {
          gmax = -grad[t];
          sel_i = static_cast<std::ptrdiff_t>(t);
        }
      } else if (!at_lower(t) && grad[t] >= gmax) {
        gmax = grad[t];
        sel_i = static_cast<std::ptrdiff_t>(t);
      }
    }
    if (sel_i < 0) {
      converged = true;
      break;
    }
    const auto i = static_cast<std::size_t>(sel_i);
    const auto& k_i = gram.row(i);

    // j: largest second-order decrease in I_low
    double gmax2 = -kInf;
    double best_obj = kInf;
    std::ptrdiff_t sel_j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      const double q_it = y[i] * y[t] * k_i[t];
      if (y[t] > 0) {
        if (at_lower(t)) continue;
        const double diff = gmax + grad[t];
        gmax2 = std::max(gmax2, grad[t]);
        if (diff > 0) {
          const double quad = diag[i] + diag[t] - 2.0 * y[i] * q_it;
          const double obj = -(diff * diff) / (quad > 0 ? quad : kTau);
          if (obj <= best_obj) {
            best_obj = obj;
            sel_j = static_cast<std::ptrdiff_t>(t);
          }
        }
      } else {
        if (at_upper(t)) continue;
        const double diff = gmax - grad[t];
        gmax2 = std::max(gmax2, -grad[t]);
        if (diff > 0) {
          const double quad = diag[i] + diag[t] + 2.0 * y[i] * q_it;
          const double obj = -(diff * diff) / (quad > 0 ? quad : kTau);
          if (obj <= best_obj) {
            best_obj = obj;
            sel_j = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
    }
    if (gmax + gmax2 < h.tol || sel_j < 0) {
      converged = true;
      break;
    }
    const auto j = static_cast<std::size_t>(sel_j);
    // fetching one row may evict the other, so row i is copied
    const std::vector<double> row_i = gram.row(i);
    const auto& row_j = gram.row(j);
    const double q_ij = y[i] * y[j] * row_i[j];

    const double old_ai = alpha[i], old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = diag[i] + diag[j] + 2.0 * q_ij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = diag[i] + diag[j] - 2.0 * q_ij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = sum;
        }
      }
    }

    const double d_ai = alpha[i] - old_ai;
    const double d_aj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * row_i[t] * d_ai + y[j] * row_j[t] * d_aj);
    }
    ++iter;
  }

  // bias from free vectors, or the midpoint of the feasible interval
  double ub = kInf, lb = -kInf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (at_upper(t)) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (at_lower(t)) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2;

  LinearParams params;
  params.weights.assign(x.cols(), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] == 0.0) continue;
    const auto idx = x.row_indices(t);
    const auto val = x.row_values(t);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      params.weights[idx[k]] += alpha[t] * y[t] * val[k];
    }
  }
  params.bias = -rho;

  TrainedModel model;
  model.kind = ModelKind::LinearSvm;
  model.hyper = h;
  model.feature_count = x.cols();
  model.info.iterations = static_cast<std::size_t>(iter);
  model.info.converged = converged;
  model.info.final_objective =
      svm_primal_objective(x, y, params.weights, params.bias, c);
  model.params = std::move(params);
  return model;
}

}  // namespace commentrel
