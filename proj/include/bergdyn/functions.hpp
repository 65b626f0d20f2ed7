#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "bergdyn/geometry.hpp"
#include "bergdyn/measures.hpp"

namespace bergdyn::fn {

/// Evaluation too close to a pole or to an arc's reciprocal set.
struct PoleProximityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Kernel support sticks out of Omega*.
struct SupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Resolvent requested for alpha inside the spectrum Omega*.
struct SpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The two domains of a split do not cover the sphere.
struct CoverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A piece of a split has its singularity in neither complement.
struct AmbiguousPieceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bergman-space element in closed form: a polynomial part about 0 plus
/// a kernel measure (atoms anywhere in Omega*, arcs on the unit circle)
/// representing z -> integral of 1/(1 - zeta z) d nu(zeta). The stored
/// measure is already conjugated, so no conjugation happens at
/// evaluation time and the Taylor shift is exactly "multiply by zeta".
struct AnalyticFn {
  std::vector<Complex> poly;
  std::vector<measures::Atom> atoms;
  std::vector<measures::ArcPiece> arcs;

  bool is_zero() const { return poly.empty() && atoms.empty() && arcs.empty(); }
};

/// gamma(alpha): z -> 1/(1 - alpha z), the eigenfunction of the shift.
AnalyticFn gamma_fn(Complex alpha);
AnalyticFn constant(Complex c);
AnalyticFn polynomial(std::vector<Complex> coeffs);

/// I_m(z) = (1/2pi) * integral over [theta1, theta2] of
/// e^{i m t} / (1 - e^{i t} z) dt. Stable for all m and all z off the
/// reciprocal arc; |z| > 1 is folded back to |1/z| < 1 by inversion.
Complex arc_kernel(double theta1, double theta2, long m, Complex z);

Complex evaluate(const AnalyticFn& f, Complex z);
Complex evaluate(const AnalyticFn& f, const ExtendedPoint& z);

/// Like evaluate, but a point caught by the pole-proximity guard is
/// retried with a tiny radial nudge away from the unit circle, where
/// all arc singularities live. For quadrature nodes that graze the
/// circle; rethrows if the nudge does not clear the guard.
Complex evaluate_guarded(const AnalyticFn& f, Complex z);

/// (Tf)(z) = (f(z) - f(0))/z: drops the leading Taylor coefficient,
/// shifts every kernel power up by one.
AnalyticFn taylor_shift(const AnalyticFn& f);

/// n-fold shift in one pass.
AnalyticFn iterate(const AnalyticFn& f, int n);

/// C nu: empty polynomial part, kernel measure nu.
AnalyticFn cauchy_transform(const measures::CircleMeasure& nu);
/// Validated variant: every atom must satisfy star_contains and every
/// arc must stay inside Omega* on the circle.
AnalyticFn cauchy_transform(const measures::CircleMeasure& nu,
                            const geom::Domain& domain);
/// Kernel measure with atoms anywhere (arcs still on the circle);
/// circle measures only allow unimodular atom positions.
AnalyticFn cauchy_transform(std::vector<measures::Atom> atoms,
                            std::vector<measures::ArcPiece> arcs);
AnalyticFn cauchy_transform(std::vector<measures::Atom> atoms,
                            std::vector<measures::ArcPiece> arcs,
                            const geom::Domain& domain);

/// S_n nu: kernel powers shifted down by n. Requires circle support,
/// which the CircleMeasure type guarantees.
AnalyticFn s_n_transform(const measures::CircleMeasure& nu, int n);

/// f_B for a union of arcs B: Cauchy transform of arc length restricted
/// to B.
AnalyticFn f_arc(const std::vector<std::pair<double, double>>& arcs);
AnalyticFn f_arc(const std::vector<std::pair<double, double>>& arcs,
                 const geom::Domain& domain);

/// Taylor coefficient of f about 0.
Complex taylor_coefficient(const AnalyticFn& f, long nu);

/// Degree-n Taylor polynomial of f about 0.
AnalyticFn partial_sum(const AnalyticFn& f, int n);

AnalyticFn add(const AnalyticFn& f, const AnalyticFn& g);
AnalyticFn scale(Complex c, const AnalyticFn& f);

/// Representation-level equality after canonical ordering, with atom
/// weights materialized. Exact (bitwise), no tolerance.
bool repr_equal(const AnalyticFn& f, const AnalyticFn& g);

/// S_alpha g: the continuous inverse of T - alpha I for 1/alpha in
/// Omega. An evaluator, not a closed-form AnalyticFn; the removable
/// singularity at 1/alpha is filled by a 4-point circle average.
class Resolvent {
 public:
  Resolvent(Complex alpha, AnalyticFn g, const geom::Domain& domain);
  Complex operator()(Complex z) const;
  Complex pole() const { return pole_; }

 private:
  Complex direct(Complex z) const;
  Complex alpha_;
  Complex pole_;      // 1/alpha
  Complex g_at_pole_over_alpha_;
  AnalyticFn g_;
};

/// Splits f = f1 + f2 with f1 holomorphic on omega1 and f2 on omega2,
/// for omega1 union omega2 covering the sphere (checked on a sample).
std::pair<AnalyticFn, AnalyticFn> split_singularities(
    const AnalyticFn& f, const geom::Domain& omega1,
    const geom::Domain& omega2);

}  // namespace bergdyn::fn
