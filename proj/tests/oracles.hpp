#pragma once

// Test-only oracles. These deliberately avoid the library's own
// evaluation and integration paths so agreement is meaningful.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

using Complex = std::complex<double>;

// QUADPACK 7-15 Gauss-Kronrod pair on [-1, 1].
inline const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline const double kWg[4] = {0.129484966168870, 0.279705391489277,
                              0.381830050505119, 0.417959183673469};

struct GkResult {
  Complex value;
  double error;
  double l1;  // integral of |f|, for the roundoff floor
};

inline GkResult gk15_once(const std::function<Complex(double)>& f, double a,
                          double b) {
  const double h = 0.5 * (b - a);
  const double m = 0.5 * (b + a);
  Complex kronrod(0.0, 0.0);
  Complex gauss(0.0, 0.0);
  double l1 = 0.0;
  for (int i = 0; i < 8; ++i) {
    if (kXgk[i] == 0.0) {
      const Complex v = f(m);
      kronrod += kWgk[i] * v;
      gauss += kWg[3] * v;
      l1 += kWgk[i] * std::abs(v);
      continue;
    }
    const Complex vp = f(m + h * kXgk[i]);
    const Complex vm = f(m - h * kXgk[i]);
    kronrod += kWgk[i] * (vp + vm);
    l1 += kWgk[i] * (std::abs(vp) + std::abs(vm));
    if (i % 2 == 1) gauss += kWg[i / 2] * (vp + vm);
  }
  return {kronrod * h, std::abs(kronrod - gauss) * h, l1 * h};
}

inline Complex gk15_adaptive(const std::function<Complex(double)>& f, double a,
                             double b, double tol, int depth = 0) {
  const GkResult whole = gk15_once(f, a, b);
  // The second acceptance term is the roundoff floor: below it the
  // Gauss/Kronrod difference is noise and splitting cannot help.
  if (depth >= 48 || whole.error <= tol || whole.error <= 1e-14 * whole.l1)
    return whole.value;
  const double m = 0.5 * (a + b);
  return gk15_adaptive(f, a, m, 0.5 * tol, depth + 1) +
         gk15_adaptive(f, m, b, 0.5 * tol, depth + 1);
}

inline double simpson_adaptive(const std::function<double(double)>& f,
                               double a, double b, double tol, int depth = 0) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double left = (m - a) / 6.0 * (fa + 4.0 * f(lm) + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * f(rm) + fb);
  if (depth >= 48 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_adaptive(f, a, m, 0.5 * tol, depth + 1) +
         simpson_adaptive(f, m, b, 0.5 * tol, depth + 1);
}

/// w_nu = 2 * integral_0^1 r^(2 nu + 1) / (1 + r^2)^2 dr: the squared
/// 2-norm of z^nu over the unit disc against the spherical measure.
inline double monomial_weight(int nu) {
  return 2.0 * simpson_adaptive(
                   [nu](double r) {
                     const double d = 1.0 + r * r;
                     return std::pow(r, 2 * nu + 1) / (d * d);
                   },
                   0.0, 1.0, 1e-14);
}

/// Coefficient-oracle 2-norm on the disc: sqrt(sum |a_nu|^2 w_nu).
inline double coefficient_norm(const std::function<Complex(long)>& coeff,
                               int terms) {
  double acc = 0.0;
  for (int nu = 0; nu < terms; ++nu)
    acc += std::norm(coeff(nu)) * monomial_weight(nu);
  return std::sqrt(acc);
}

/// Dense complex solve by Gaussian elimination with partial pivoting.
inline std::vector<Complex> solve_dense(std::vector<std::vector<Complex>> a,
                                        std::vector<Complex> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-300)
      throw std::runtime_error("solve_dense: singular matrix");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

/// Sanity checks for the hardcoded Gauss-Kronrod constants; call once
/// per test binary that relies on them.
inline void self_check() {
  double wsum = kWgk[7];
  for (int i = 0; i < 7; ++i) wsum += 2.0 * kWgk[i];
  if (std::abs(wsum - 2.0) > 1e-12)
    throw std::runtime_error("gk15 kronrod weights corrupt");
  double gsum = kWg[3];
  for (int i = 0; i < 3; ++i) gsum += 2.0 * kWg[i];
  if (std::abs(gsum - 2.0) > 1e-12)
    throw std::runtime_error("gk15 gauss weights corrupt");
  // integral of x^10 over [-1,1] = 2/11, of e^x = e - 1/e.
  const Complex p = gk15_once([](double x) { return Complex(std::pow(x, 10), 0.0); }, -1.0, 1.0).value;
  if (std::abs(p.real() - 2.0 / 11.0) > 1e-13)
    throw std::runtime_error("gk15 fails on x^10");
  const Complex e = gk15_once([](double x) { return Complex(std::exp(x), 0.0); }, -1.0, 1.0).value;
  if (std::abs(e.real() - (std::exp(1.0) - std::exp(-1.0))) > 1e-12)
    throw std::runtime_error("gk15 fails on exp");
}

}  // namespace oracles
