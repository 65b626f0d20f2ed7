#include "bergdyn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bergdyn::linalg {

EigenDecomposition hermitian_eigen(HermitianMatrix m) {
  const int n = m.n;
  std::vector<std::vector<Complex>> v(n, std::vector<Complex>(n));
  for (int i = 0; i < n; ++i) v[i][i] = Complex(1.0, 0.0);  // v[col][row]

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += std::norm(m.at(i, j));
    return std::sqrt(s);
  };
  double diag_scale = 0.0;
  for (int i = 0; i < n; ++i)
    diag_scale = std::max(diag_scale, std::abs(m.at(i, i)));
  if (diag_scale == 0.0) diag_scale = 1.0;

  // Rotation J = [[c, -s*phase], [s*conj(phase), c]] on the (p, q)
  // plane with phase = a_pq/|a_pq| zeroes the (p, q) entry of J^H A J.
  for (int sweep = 0; sweep < 60 && off_norm() > 1e-14 * diag_scale; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = m.at(p, q);
        const double g = std::abs(apq);
        if (g <= 1e-300) continue;
        const Complex phase = apq / g;
        const double app = m.at(p, p).real();
        const double aqq = m.at(q, q).real();
        const double tau = (app - aqq) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex zeta = s * std::conj(phase);  // lower-left of J
        // Columns: col_p <- c col_p + zeta col_q,
        //          col_q <- -conj(zeta) col_p + c col_q.
        for (int k = 0; k < n; ++k) {
          const Complex mkp = m.at(k, p);
          const Complex mkq = m.at(k, q);
          m.at(k, p) = c * mkp + zeta * mkq;
          m.at(k, q) = -std::conj(zeta) * mkp + c * mkq;
        }
        // Rows: row_p <- c row_p + conj(zeta) row_q,
        //       row_q <- -zeta row_p + c row_q.
        for (int k = 0; k < n; ++k) {
          const Complex mpk = m.at(p, k);
          const Complex mqk = m.at(q, k);
          m.at(p, k) = c * mpk + std::conj(zeta) * mqk;
          m.at(q, k) = -zeta * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          const Complex vkp = v[p][k];
          const Complex vkq = v[q][k];
          v[p][k] = c * vkp + zeta * vkq;
          v[q][k] = -std::conj(zeta) * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return m.at(i, i).real() < m.at(j, j).real();
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = m.at(order[k], order[k]).real();
    out.vectors[k] = v[order[k]];
  }
  return out;
}

TruncatedSolution solve_truncated(const HermitianMatrix& g,
                                  const std::vector<Complex>& y,
                                  double cutoff_rel) {
  const int n = g.n;
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("solve_truncated: size mismatch");
  EigenDecomposition eig = hermitian_eigen(g);

  double lambda_max = 0.0;
  for (double l : eig.values) lambda_max = std::max(lambda_max, l);
  if (!(lambda_max > 0.0))
    throw GramBreakdownError("gram breakdown: no positive eigenvalue");

  TruncatedSolution sol;
  sol.lambda_max = lambda_max;
  sol.x.assign(n, Complex(0.0, 0.0));
  const double cutoff = cutoff_rel * lambda_max;
  for (int k = 0; k < n; ++k) {
    const double lambda = eig.values[k];
    if (lambda < cutoff) continue;
    ++sol.rank_kept;
    Complex proj(0.0, 0.0);
    for (int i = 0; i < n; ++i) proj += std::conj(eig.vectors[k][i]) * y[i];
    proj /= lambda;
    for (int i = 0; i < n; ++i) sol.x[i] += proj * eig.vectors[k][i];
  }
  if (sol.rank_kept == 0)
    throw GramBreakdownError("gram breakdown: all eigenvalues below cutoff");
  return sol;
}

}  // namespace bergdyn::linalg
