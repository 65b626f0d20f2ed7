#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bergdyn/geometry.hpp"

namespace bergdyn::quad {

struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonFiniteSampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureConfig {
  double split_radius = 2.0;  // chart handover around |z| = R
  int max_depth = 12;         // subdivision levels below the root grid
  int base_order = 8;         // Gauss-Legendre points per cell edge
  double rel_tol = 1e-7;
  int threads = 0;            // 0 = library default
  std::uint64_t cell_budget = 10'000'000;

  void validate() const;
};

struct NormEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
  std::uint64_t cells_used = 0;
  std::uint64_t boundary_cells_discarded = 0;
  bool divergent = false;
};

struct InnerProductEstimate {
  Complex value;
  double error_estimate = 0.0;
  std::uint64_t cells_used = 0;
  std::uint64_t boundary_cells_discarded = 0;
};

using RealField = std::function<double(Complex)>;
using ComplexField = std::function<Complex(Complex)>;

/// Integral of g over Omega against the normalized spherical surface
/// measure dm2 = d(lambda2) / (pi (1+|z|^2)^2). Two charts (plane and
/// inverted plane) blended by a smooth radial partition of unity around
/// |z| = split_radius; the density is invariant under z -> 1/z. Cells
/// straddling the domain boundary are integrated by per-node pencil
/// slicing with bisected crossings. The reduction order is fixed, so
/// results are bit-identical for any thread count.
NormEstimate sphere_integral(const RealField& g, const geom::Domain& domain,
                             const QuadratureConfig& cfg);

/// (integral of |f|^p dm2)^(1/p).
NormEstimate ap_norm(const ComplexField& f, const geom::Domain& domain,
                     double p, const QuadratureConfig& cfg);

/// Integral of f * conj(g) dm2 over Omega.
InnerProductEstimate inner_product(const ComplexField& f,
                                   const ComplexField& g,
                                   const geom::Domain& domain,
                                   const QuadratureConfig& cfg);

/// Adaptive 1-D Gauss quadrature (two-level error control).
double line_integral(const std::function<double(double)>& f, double a,
                     double b, double rel_tol, int max_depth = 48);

struct LogGrowthRow {
  double r = 0.0;
  double h = 0.0;      // integral over T of dm(a) / |1 - a r|
  double ratio = 0.0;  // h / log(1/(1-r)), 0 when r = 0
};

/// Growth of the circle average of |gamma(a)(r)| against log(1/(1-r)).
std::vector<LogGrowthRow> log_growth_check(const std::vector<double>& radii);

/// Gauss-Legendre rule on [-1, 1], computed by Newton iteration.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

}  // namespace bergdyn::quad
