#ifndef COMMENTREL_TESTS_ORACLES_HPP
#define COMMENTREL_TESTS_ORACLES_HPP

// Brute-force reference implementations. Dense, direct formula evaluation,
// no shared code with the library beyond the Label enum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "commentrel/corpus.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;
using commentrel::Label;

inline void normalize_rows(Dense& w) {
  for (auto& row : w) {
    long double ss = 0;
    for (double v : row) ss += static_cast<long double>(v) * v;
    if (ss == 0) continue;
    const double norm = static_cast<double>(std::sqrt(ss));
    for (double& v : row) v /= norm;
  }
}

inline Dense tfidf(const Dense& tf, bool normalize) {
  const std::size_t n = tf.size(), d = tf.empty() ? 0 : tf[0].size();
  Dense w(n, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) {
    double df = 0;
    for (std::size_t j = 0; j < n; ++j) df += tf[j][i] > 0 ? 1 : 0;
    const double idf = std::log((1.0 + n) / (1.0 + df)) + 1.0;
    for (std::size_t j = 0; j < n; ++j) w[j][i] = tf[j][i] * idf;
  }
  if (normalize) normalize_rows(w);
  return w;
}

inline std::vector<double> logentropy_global(const Dense& tf) {
  const std::size_t n = tf.size(), d = tf.empty() ? 0 : tf[0].size();
  std::vector<double> g(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double gf = 0;
    for (std::size_t j = 0; j < n; ++j) gf += tf[j][i];
    if (gf == 0) continue;
    double h = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (tf[j][i] > 0) {
        const double p = tf[j][i] / gf;
        h += p * std::log2(p);
      }
    }
    g[i] = 1.0 + h / std::log2(static_cast<double>(n) + 1.0);
  }
  return g;
}

inline Dense logentropy(const Dense& tf, bool normalize) {
  const auto g = logentropy_global(tf);
  Dense w = tf;
  for (auto& row : w) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = std::log2(1.0 + row[i]) * g[i];
  }
  if (normalize) normalize_rows(w);
  return w;
}

inline std::vector<double> chi2(const Dense& x, const std::vector<Label>& y) {
  const std::size_t n = x.size(), d = x.empty() ? 0 : x[0].size();
  double n_class[2] = {0, 0};
  for (auto l : y) n_class[static_cast<int>(l)] += 1;
  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double observed[2] = {0, 0};
    for (std::size_t j = 0; j < n; ++j) observed[static_cast<int>(y[j])] += x[j][i];
    const double total = observed[0] + observed[1];
    if (total == 0) continue;
    for (int c = 0; c < 2; ++c) {
      const double expected = total * n_class[c] / static_cast<double>(n);
      out[i] += (observed[c] - expected) * (observed[c] - expected) / expected;
    }
  }
  return out;
}

// 2x2 table of (present?, class) counted by brute force
inline std::vector<double> mutual_information(const Dense& counts,
                                              const std::vector<Label>& y) {
  const std::size_t n = counts.size(), d = counts.empty() ? 0 : counts[0].size();
  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double table[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t j = 0; j < n; ++j) {
      table[counts[j][i] > 0 ? 1 : 0][static_cast<int>(y[j])] += 1;
    }
    double mi = 0;
    for (int u = 0; u < 2; ++u) {
      for (int c = 0; c < 2; ++c) {
        if (table[u][c] == 0) continue;
        const double nu = table[u][0] + table[u][1];
        const double nc = table[0][c] + table[1][c];
        mi += table[u][c] / n * std::log2(n * table[u][c] / (nu * nc));
      }
    }
    out[i] = mi;
  }
  return out;
}

// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    if (std::fabs(a[piv][col]) < 1e-12) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

inline double sign_of(Label l) { return l == Label::Useful ? 1.0 : -1.0; }

inline double logreg_loss(const Dense& x, const std::vector<Label>& y,
                          const std::vector<double>& w, double b, double l2) {
  double loss = 0;
  for (double v : w) loss += 0.5 * l2 * v * v;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double z = b;
    for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x[j][i];
    const double m = sign_of(y[j]) * z;
    loss += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
  }
  return loss;
}

struct LinearSolution {
  std::vector<double> w;
  double b = 0;
  double objective = 0;
};

// Newton's method on (w, b).
inline LinearSolution logreg_newton(const Dense& x, const std::vector<Label>& y,
                                    double l2) {
  const std::size_t d = x[0].size(), p = d + 1;
  std::vector<double> theta(p, 0.0);
  for (int it = 0; it < 100; ++it) {
    std::vector<double> g(p, 0.0);
    Dense h(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
      g[i] = l2 * theta[i];
      h[i][i] = l2;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
      std::vector<double> xt(x[j]);
      xt.push_back(1.0);
      double z = 0;
      for (std::size_t i = 0; i < p; ++i) z += theta[i] * xt[i];
      const double t = sign_of(y[j]);
      const double s = 1.0 / (1.0 + std::exp(t * z));  // sigma(-t z)
      for (std::size_t a = 0; a < p; ++a) {
        g[a] -= t * s * xt[a];
        for (std::size_t c = 0; c < p; ++c) h[a][c] += s * (1 - s) * xt[a] * xt[c];
      }
    }
    double gn = 0;
    for (double v : g) gn += v * v;
    if (std::sqrt(gn) < 1e-13) break;
    auto step = solve(h, g);
    if (!step) break;
    for (std::size_t i = 0; i < p; ++i) theta[i] -= (*step)[i];
  }
  LinearSolution out;
  out.w.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(d));
  out.b = theta[d];
  out.objective = logreg_loss(x, y, out.w, out.b, l2);
  return out;
}

inline double svm_objective(const Dense& x, const std::vector<Label>& y,
                            const std::vector<double>& w, double b, double c) {
  double obj = 0;
  for (double v : w) obj += 0.5 * v * v;
  for (std::size_t j = 0; j < x.size(); ++j) {
    double z = b;
    for (std::size_t i = 0; i < w.size(); ++i) z += w[i] * x[j][i];
    obj += c * std::max(0.0, 1.0 - sign_of(y[j]) * z);
  }
  return obj;
}

// Exact primal minimum by enumerating every assignment of points to
// {violating, on the margin, outside}: each assignment fixes a linear KKT
// system whose solution is a candidate; the optimum is among the candidates.
// Exponential in the number of points (3^n), fine for n <= 8.
inline LinearSolution svm_enumerate(const Dense& x, const std::vector<Label>& y, double c) {
  const std::size_t n = x.size(), d = x[0].size();
  LinearSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  std::size_t combos = 1;
  for (std::size_t j = 0; j < n; ++j) combos *= 3;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<int> role(n);
    std::size_t rest = code;
    for (std::size_t j = 0; j < n; ++j) {
      role[j] = static_cast<int>(rest % 3);  // 0 outside, 1 margin, 2 violating
      rest /= 3;
    }
    std::vector<std::size_t> margin;
    for (std::size_t j = 0; j < n; ++j) {
      if (role[j] == 1) margin.push_back(j);
    }
    // unknowns: w (d), b, lambda_m (|margin|)
    const std::size_t m = margin.size(), p = d + 1 + m;
    Dense a(p, std::vector<double>(p, 0.0));
    std::vector<double> rhs(p, 0.0);
    // w - sum_M lambda y x = C sum_V y x
    for (std::size_t i = 0; i < d; ++i) {
      a[i][i] = 1.0;
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = margin[k];
        a[i][d + 1 + k] = -sign_of(y[j]) * x[j][i];
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (role[j] == 2) rhs[i] += c * sign_of(y[j]) * x[j][i];
      }
    }
    // sum_M lambda y = -C sum_V y
    for (std::size_t k = 0; k < m; ++k) a[d][d + 1 + k] = sign_of(y[margin[k]]);
    for (std::size_t j = 0; j < n; ++j) {
      if (role[j] == 2) rhs[d] -= c * sign_of(y[j]);
    }
    // y (w.x + b) = 1 on the margin
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t j = margin[k];
      for (std::size_t i = 0; i < d; ++i) a[d + 1 + k][i] = sign_of(y[j]) * x[j][i];
      a[d + 1 + k][d] = sign_of(y[j]);
      rhs[d + 1 + k] = 1.0;
    }
    auto sol = solve(a, rhs);
    if (!sol) continue;
    std::vector<double> w(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(d));
    const double b = (*sol)[d];
    const double obj = svm_objective(x, y, w, b, c);
    if (obj < best.objective) {
      best.w = w;
      best.b = b;
      best.objective = obj;
    }
  }
  return best;
}

// Random small count matrix with both classes among the labels.
struct RandomCorpus {
  Dense counts;
  std::vector<Label> labels;
};

inline RandomCorpus random_corpus(std::mt19937_64& rng, std::size_t max_docs,
                                  std::size_t max_terms) {
  std::uniform_int_distribution<std::size_t> docs_dist(2, max_docs);
  std::uniform_int_distribution<std::size_t> terms_dist(1, max_terms);
  std::uniform_int_distribution<int> tf_dist(0, 4);
  std::bernoulli_distribution zero(0.45);
  RandomCorpus rc;
  const std::size_t n = docs_dist(rng), d = terms_dist(rng);
  rc.counts.assign(n, std::vector<double>(d, 0.0));
  for (auto& row : rc.counts) {
    for (auto& v : row) v = zero(rng) ? 0 : tf_dist(rng);
  }
  std::bernoulli_distribution coin(0.5);
  for (std::size_t j = 0; j < n; ++j) rc.labels.push_back(coin(rng) ? Label::Useful : Label::NotUseful);
  rc.labels[0] = Label::Useful;
  rc.labels[1] = Label::NotUseful;
  std::shuffle(rc.labels.begin(), rc.labels.end(), rng);
  return rc;
}

}  // namespace oracle

#endif  // COMMENTREL_TESTS_ORACLES_HPP
