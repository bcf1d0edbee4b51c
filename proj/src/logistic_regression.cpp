#include <cmath>
#include <numeric>

#include "commentrel/classifiers.hpp"
#include "commentrel/error.hpp"
#include "training_checks.hpp"

namespace commentrel {

namespace {

// log(1 + exp(-z)) without overflow
double log1p_exp_neg(double z) {
  return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

// 1 / (1 + exp(z))
double sigmoid_neg(double z) {
  if (z >= 0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

std::vector<double> signed_targets(const std::vector<Label>& labels) {
  std::vector<double> y;
  y.reserve(labels.size());
  for (auto l : labels) y.push_back(l == Label::Useful ? 1.0 : -1.0);
  return y;
}

double logreg_objective(const SparseMatrix& x, std::span<const double> y,
                        std::span<const double> w, double b, double l2) {
  double loss = 0.5 * l2 * dot(w, w);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    loss += log1p_exp_neg(y[r] * (x.row_dot(r, w) + b));
  }
  return loss;
}

double logreg_gradient(const SparseMatrix& x, std::span<const double> y,
                       std::span<const double> w, double b, double l2,
                       std::span<double> grad_w) {
  for (std::size_t i = 0; i < grad_w.size(); ++i) grad_w[i] = l2 * w[i];
  double grad_b = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double coef = -y[r] * sigmoid_neg(y[r] * (x.row_dot(r, w) + b));
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) grad_w[idx[k]] += coef * val[k];
    grad_b += coef;
  }
  return grad_b;
}

// Full-batch gradient descent. Each step starts from a Barzilai-Borwein trial
// length and backtracks until the Armijo condition holds, so the objective
// never increases. Stops when |grad| <= tol * max(1, |grad_0|).
TrainedModel train_logreg(const SparseMatrix& x, const std::vector<Label>& labels,
                          const LogRegHyper& h) {
  detail::check_training_input(x, labels);
  if (!(h.l2_strength > 0.0)) throw Error(ErrorKind::Usage, "l2_strength must be > 0");
  if (!(h.tol > 0.0)) throw Error(ErrorKind::Usage, "tol must be > 0");

  const std::size_t d = x.cols();
  const auto y = signed_targets(labels);

  // parameters packed as [w..., b]
  std::vector<double> theta(d + 1, 0.0), grad(d + 1), prev_theta, prev_grad;
  auto objective = [&](const std::vector<double>& t) {
    return logreg_objective(x, y, std::span(t).first(d), t[d], h.l2_strength);
  };
  auto gradient = [&](const std::vector<double>& t, std::vector<double>& g) {
    g[d] = logreg_gradient(x, y, std::span(t).first(d), t[d], h.l2_strength,
                           std::span(g).first(d));
  };

  double f = objective(theta);
  gradient(theta, grad);
  const double g0 = std::sqrt(dot(grad, grad));
  const double threshold = h.tol * std::max(1.0, g0);

  TrainedModel model;
  model.kind = ModelKind::LogReg;
  model.hyper = h;
  model.feature_count = d;
  model.info.objective_history.push_back(f);

  double step = 1.0 / std::max(1.0, g0);
  std::vector<double> trial(d + 1);
  int it = 0;
  bool converged = std::sqrt(dot(grad, grad)) <= threshold;
  while (!converged && it < h.max_iters) {
    if (!prev_grad.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i <= d; ++i) {
        const double s = theta[i] - prev_theta[i];
        ss += s * s;
        sy += s * (grad[i] - prev_grad[i]);
      }
      if (sy > 0.0) step = ss / sy;
    }
    const double g2 = dot(grad, grad);
    double f_trial = f;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i <= d; ++i) trial[i] = theta[i] - step * grad[i];
      f_trial = objective(trial);
      if (f_trial <= f - 1e-4 * step * g2) break;
      step *= 0.5;
    }
    if (!(f_trial <= f)) break;  // no descent possible at machine precision

    prev_theta = theta;
    prev_grad = grad;
    theta = trial;
    f = f_trial;
    gradient(theta, grad);
    ++it;
    model.info.objective_history.push_back(f);
    converged = std::sqrt(dot(grad, grad)) <= threshold;
  }

  model.info.iterations = static_cast<std::size_t>(it);
  model.info.converged = converged;
  model.info.final_objective = f;
  LinearParams params;
  params.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(d));
  params.bias = theta[d];
  model.params = std::move(params);
  return model;
}

}  // namespace commentrel
