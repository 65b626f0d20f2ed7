#include "bergdyn/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bergdyn::fn {

namespace {

constexpr double kAtomPoleTol = 1e-14;
constexpr double kArcPoleTol = 1e-10;
constexpr double kSeriesTail = 1e-15;

using measures::Atom;
using measures::ArcPiece;
using measures::arc_moment;

/// Min of |1 - e^{i t} z| over t in [t1, t2], written as
/// (1-rho)^2 + 2 rho (1 - cos psi) to stay accurate near the circle.
double min_kernel_distance(double t1, double t2, Complex z) {
  const double rho = std::abs(z);
  if (rho == 0.0) return 1.0;
  const double a = wrap_angle(t1 + std::arg(z));
  const double len = t2 - t1;
  double versine;  // min over the arc of 1 - cos(psi)
  if (a + len >= kTwoPi || a == 0.0) {
    versine = 0.0;
  } else {
    const double s1 = std::sin(0.5 * a);
    const double s2 = std::sin(0.5 * (a + len));
    versine = 2.0 * std::min(s1 * s1, s2 * s2);
  }
  const double d2 = (1.0 - rho) * (1.0 - rho) + 2.0 * rho * versine;
  return std::sqrt(std::max(d2, 0.0));
}

Complex arc_kernel_unit(double t1, double t2, long m, Complex z);

/// Closed form for m >= 1, |z| <= 1, guarded against cancellation:
/// I_m = z^{-m} (R_m(w2) - R_m(w1)) / (2 pi i) with
/// R_m(w) = -Log(1-w) - sum_{k=1}^{m-1} w^k / k  (= sum_{k>=m} w^k / k).
Complex arc_kernel_log_form(double t1, double t2, long m, Complex z) {
  const Complex w1 = z * unit_point(t1);
  const Complex w2 = z * unit_point(t2);
  auto tail = [m](Complex w) {
    Complex s(0.0, 0.0);
    Complex wk = w;
    for (long k = 1; k < m; ++k) {
      s += wk / static_cast<double>(k);
      wk *= w;
    }
    return -std::log(Complex(1.0, 0.0) - w) - s;
  };
  const Complex diff = tail(w2) - tail(w1);
  return cpow_int(z, -m) * diff / Complex(0.0, kTwoPi);
}

/// Taylor series I_m = sum_{nu >= 0} M_{m+nu} z^nu for |z| < 1, m >= 1.
Complex arc_kernel_series(double t1, double t2, long m, Complex z) {
  const double rho = std::abs(z);
  const double arc_mass = (t2 - t1) / kTwoPi;
  const Complex zeta1 = unit_point(t1);
  const Complex zeta2 = unit_point(t2);
  Complex p1 = unit_point(static_cast<double>(m) * t1);
  Complex p2 = unit_point(static_cast<double>(m) * t2);
  Complex zp(1.0, 0.0);
  Complex acc(0.0, 0.0);
  double rho_pow = 1.0;
  for (long nu = 0; nu < 2'000'000; ++nu) {
    const long k = m + nu;
    acc += zp * (p2 - p1) / Complex(0.0, kTwoPi * static_cast<double>(k));
    rho_pow *= rho;
    if (arc_mass * rho_pow / (1.0 - rho) < kSeriesTail) break;
    p1 *= zeta1;
    p2 *= zeta2;
    zp *= z;
    if ((nu & 0xff) == 0xff) {  // resync incremental powers
      p1 = unit_point(static_cast<double>(k + 1) * t1);
      p2 = unit_point(static_cast<double>(k + 1) * t2);
    }
  }
  return acc;
}

Complex arc_kernel_unit(double t1, double t2, long m, Complex z) {
  // Here |z| <= 1, so Re(1 - e^{it} z) >= 0 and the principal log is
  // continuous along the arc; no branch bookkeeping is needed.
  if (min_kernel_distance(t1, t2, z) < kArcPoleTol) {
    std::ostringstream os;
    os << "arc kernel evaluated within " << kArcPoleTol
       << " of the reciprocal arc, z = (" << z.real() << ", " << z.imag()
       << ")";
    throw PoleProximityError(os.str());
  }

  if (m == 0) {
    const Complex w1 = z * unit_point(t1);
    const Complex w2 = z * unit_point(t2);
    const Complex dlog = std::log(Complex(1.0, 0.0) - w2) -
                         std::log(Complex(1.0, 0.0) - w1);
    return Complex((t2 - t1) / kTwoPi, 0.0) + Complex(0.0, 1.0 / kTwoPi) * dlog;
  }

  if (m < 0) {
    // Downward recursion I_{j} = z I_{j+1} + M_j is stable for |z| <= 1.
    Complex I = arc_kernel_unit(t1, t2, 0, z);
    for (long j = -1; j >= m; --j) I = z * I + arc_moment(t1, t2, j);
    return I;
  }

  // m >= 1.
  if (z == Complex(0.0, 0.0)) return arc_moment(t1, t2, m);
  const double rho = std::abs(z);
  const double digits_lost = static_cast<double>(m) * std::log10(1.0 / rho);
  if (digits_lost <= 3.0) return arc_kernel_log_form(t1, t2, m, z);
  return arc_kernel_series(t1, t2, m, z);
}

std::vector<Complex> coefficients_of(const AnalyticFn& f, long upto) {
  std::vector<Complex> c(static_cast<std::size_t>(upto) + 1);
  for (long nu = 0; nu <= upto; ++nu) c[nu] = taylor_coefficient(f, nu);
  return c;
}

void canonicalize(const AnalyticFn& f, std::vector<Complex>& poly,
                  std::vector<std::pair<Complex, Complex>>& atoms,
                  std::vector<ArcPiece>& arcs) {
  poly = f.poly;
  while (!poly.empty() && poly.back() == Complex(0.0, 0.0)) poly.pop_back();

  atoms.clear();
  for (const Atom& a : f.atoms) {
    const Complex w = measures::materialized_weight(a);
    if (w == Complex(0.0, 0.0)) continue;
    atoms.emplace_back(a.position, w);
  }
  std::sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) {
    if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
    if (x.first.imag() != y.first.imag()) return x.first.imag() < y.first.imag();
    if (x.second.real() != y.second.real())
      return x.second.real() < y.second.real();
    return x.second.imag() < y.second.imag();
  });

  arcs.clear();
  for (const ArcPiece& p : f.arcs)
    if (p.weight != Complex(0.0, 0.0)) arcs.push_back(p);
  std::sort(arcs.begin(), arcs.end(), [](const ArcPiece& x, const ArcPiece& y) {
    if (x.theta1 != y.theta1) return x.theta1 < y.theta1;
    if (x.theta2 != y.theta2) return x.theta2 < y.theta2;
    if (x.power != y.power) return x.power < y.power;
    if (x.weight.real() != y.weight.real())
      return x.weight.real() < y.weight.real();
    return x.weight.imag() < y.weight.imag();
  });
}

std::vector<ExtendedPoint> sphere_sample(int count) {
  std::vector<ExtendedPoint> pts;
  pts.reserve(static_cast<std::size_t>(count) + 2);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double zc = 1.0 - 2.0 * (k + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const double phi = golden * k;
    const double denom = 1.0 - zc;  // stereographic from the north pole
    pts.push_back(ExtendedPoint::finite(
        Complex(r * std::cos(phi) / denom, r * std::sin(phi) / denom)));
  }
  pts.push_back(ExtendedPoint::finite(Complex(0.0, 0.0)));
  pts.push_back(ExtendedPoint::infinity());
  return pts;
}

}  // namespace

AnalyticFn gamma_fn(Complex alpha) {
  AnalyticFn f;
  f.atoms.push_back(Atom{alpha, Complex(1.0, 0.0), 0});
  return f;
}

AnalyticFn constant(Complex c) {
  AnalyticFn f;
  if (c != Complex(0.0, 0.0)) f.poly.push_back(c);
  return f;
}

AnalyticFn polynomial(std::vector<Complex> coeffs) {
  AnalyticFn f;
  f.poly = std::move(coeffs);
  return f;
}

Complex arc_kernel(double theta1, double theta2, long m, Complex z) {
  if (std::abs(z) > 1.0) {
    // Inversion identity: I_m(z) = -(1/z) I_{1-m}(1/z) on the mirrored
    // arc, which keeps every code path inside the closed unit disc.
    const Complex zi = 1.0 / z;
    return -zi * arc_kernel_unit(-theta2, -theta1, 1 - m, zi);
  }
  return arc_kernel_unit(theta1, theta2, m, z);
}

Complex evaluate(const AnalyticFn& f, Complex z) {
  Complex acc(0.0, 0.0);
  for (auto it = f.poly.rbegin(); it != f.poly.rend(); ++it)
    acc = acc * z + *it;
  for (const Atom& a : f.atoms) {
    const Complex den = Complex(1.0, 0.0) - a.position * z;
    if (std::abs(den) < kAtomPoleTol) {
      std::ostringstream os;
      os << "evaluation within " << kAtomPoleTol << " of pole 1/alpha, alpha=("
         << a.position.real() << ", " << a.position.imag() << ")";
      throw PoleProximityError(os.str());
    }
    acc += measures::materialized_weight(a) / den;
  }
  for (const ArcPiece& p : f.arcs)
    acc += p.weight * arc_kernel(p.theta1, p.theta2, p.power, z);
  return acc;
}

Complex evaluate(const AnalyticFn& f, const ExtendedPoint& z) {
  if (!z.is_infinity()) return evaluate(f, z.value());
  if (f.poly.size() > 1)
    throw std::domain_error(
        "evaluate at infinity: nonconstant polynomial part");
  Complex acc = f.poly.empty() ? Complex(0.0, 0.0) : f.poly[0];
  for (const Atom& a : f.atoms)
    if (a.position == Complex(0.0, 0.0))
      acc += measures::materialized_weight(a);
  return acc;  // arc kernels vanish at infinity
}

Complex evaluate_guarded(const AnalyticFn& f, Complex z) {
  try {
    return evaluate(f, z);
  } catch (const PoleProximityError&) {
    const double r = std::abs(z);
    if (r == 0.0) throw;
    const double factor = (r < 1.0) ? 1.0 - 3e-10 : 1.0 + 3e-10;
    return evaluate(f, z * factor);
  }
}

AnalyticFn taylor_shift(const AnalyticFn& f) { return iterate(f, 1); }

AnalyticFn iterate(const AnalyticFn& f, int n) {
  if (n < 0) throw std::invalid_argument("iterate: n must be >= 0");
  AnalyticFn g;
  if (static_cast<std::size_t>(n) < f.poly.size())
    g.poly.assign(f.poly.begin() + n, f.poly.end());
  g.atoms = f.atoms;
  for (Atom& a : g.atoms) a.power += n;
  g.arcs = f.arcs;
  for (ArcPiece& p : g.arcs) p.power += n;
  return g;
}

AnalyticFn cauchy_transform(const measures::CircleMeasure& nu) {
  AnalyticFn f;
  f.atoms = nu.atoms();
  f.arcs = nu.arcs();
  return f;
}

AnalyticFn cauchy_transform(const measures::CircleMeasure& nu,
                            const geom::Domain& domain) {
  std::ostringstream bad;
  for (const Atom& a : nu.atoms())
    if (!geom::star_contains(domain, a.position))
      bad << " atom(" << a.position.real() << ", " << a.position.imag() << ")";
  for (const ArcPiece& p : nu.arcs()) {
    for (int i = 0; i <= 4; ++i) {
      const double t = p.theta1 + (p.theta2 - p.theta1) * i / 4.0;
      if (!geom::star_contains(domain, unit_point(t))) {
        bad << " arc(" << p.theta1 << ", " << p.theta2 << ")@t=" << t;
        break;
      }
    }
  }
  const std::string s = bad.str();
  if (!s.empty())
    throw SupportError("kernel support outside Omega*:" + s);
  return cauchy_transform(nu);
}

AnalyticFn cauchy_transform(std::vector<Atom> atoms,
                            std::vector<ArcPiece> arcs) {
  for (const ArcPiece& p : arcs)
    if (!(p.theta1 < p.theta2) || !(p.theta2 <= p.theta1 + kTwoPi))
      throw std::invalid_argument(
          "cauchy_transform: arc must satisfy theta1 < theta2 <= theta1 + "
          "2*pi");
  AnalyticFn f;
  f.atoms = std::move(atoms);
  f.arcs = std::move(arcs);
  return f;
}

AnalyticFn cauchy_transform(std::vector<Atom> atoms,
                            std::vector<ArcPiece> arcs,
                            const geom::Domain& domain) {
  AnalyticFn f = cauchy_transform(std::move(atoms), std::move(arcs));
  std::ostringstream bad;
  for (const Atom& a : f.atoms)
    if (!geom::star_contains(domain, a.position))
      bad << " atom(" << a.position.real() << ", " << a.position.imag() << ")";
  for (const ArcPiece& p : f.arcs)
    for (int i = 0; i <= 4; ++i) {
      const double t = p.theta1 + (p.theta2 - p.theta1) * i / 4.0;
      if (!geom::star_contains(domain, unit_point(t))) {
        bad << " arc(" << p.theta1 << ", " << p.theta2 << ")@t=" << t;
        break;
      }
    }
  const std::string s = bad.str();
  if (!s.empty()) throw SupportError("kernel support outside Omega*:" + s);
  return f;
}

AnalyticFn s_n_transform(const measures::CircleMeasure& nu, int n) {
  if (n < 0) throw std::invalid_argument("s_n_transform: n must be >= 0");
  return cauchy_transform(measures::power_shift(nu, -n));
}

AnalyticFn f_arc(const std::vector<std::pair<double, double>>& arcs) {
  std::vector<ArcPiece> pieces;
  pieces.reserve(arcs.size());
  for (const auto& [t1, t2] : arcs)
    pieces.push_back(ArcPiece{t1, t2, 0, Complex(1.0, 0.0)});
  return cauchy_transform(measures::CircleMeasure({}, std::move(pieces)));
}

AnalyticFn f_arc(const std::vector<std::pair<double, double>>& arcs,
                 const geom::Domain& domain) {
  std::vector<ArcPiece> pieces;
  pieces.reserve(arcs.size());
  for (const auto& [t1, t2] : arcs)
    pieces.push_back(ArcPiece{t1, t2, 0, Complex(1.0, 0.0)});
  return cauchy_transform(measures::CircleMeasure({}, std::move(pieces)),
                          domain);
}

Complex taylor_coefficient(const AnalyticFn& f, long nu) {
  Complex acc(0.0, 0.0);
  if (nu >= 0 && static_cast<std::size_t>(nu) < f.poly.size())
    acc += f.poly[static_cast<std::size_t>(nu)];
  for (const Atom& a : f.atoms)
    acc += a.weight * cpow_int(a.position, a.power + nu);
  for (const ArcPiece& p : f.arcs)
    acc += p.weight * arc_moment(p.theta1, p.theta2, p.power + nu);
  return acc;
}

AnalyticFn partial_sum(const AnalyticFn& f, int n) {
  if (n < 0) throw std::invalid_argument("partial_sum: n must be >= 0");
  return polynomial(coefficients_of(f, n));
}

AnalyticFn add(const AnalyticFn& f, const AnalyticFn& g) {
  AnalyticFn h;
  h.poly.resize(std::max(f.poly.size(), g.poly.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < f.poly.size(); ++i) h.poly[i] += f.poly[i];
  for (std::size_t i = 0; i < g.poly.size(); ++i) h.poly[i] += g.poly[i];
  h.atoms = f.atoms;
  h.atoms.insert(h.atoms.end(), g.atoms.begin(), g.atoms.end());
  h.arcs = f.arcs;
  h.arcs.insert(h.arcs.end(), g.arcs.begin(), g.arcs.end());
  return h;
}

AnalyticFn scale(Complex c, const AnalyticFn& f) {
  AnalyticFn h = f;
  for (Complex& a : h.poly) a *= c;
  for (Atom& a : h.atoms) a.weight *= c;
  for (ArcPiece& p : h.arcs) p.weight *= c;
  return h;
}

bool repr_equal(const AnalyticFn& f, const AnalyticFn& g) {
  std::vector<Complex> pf, pg;
  std::vector<std::pair<Complex, Complex>> af, ag;
  std::vector<ArcPiece> rf, rg;
  canonicalize(f, pf, af, rf);
  canonicalize(g, pg, ag, rg);
  if (pf != pg || af.size() != ag.size() || rf.size() != rg.size())
    return false;
  for (std::size_t i = 0; i < af.size(); ++i)
    if (af[i].first != ag[i].first || af[i].second != ag[i].second)
      return false;
  for (std::size_t i = 0; i < rf.size(); ++i) {
    const ArcPiece &a = rf[i], &b = rg[i];
    if (a.theta1 != b.theta1 || a.theta2 != b.theta2 || a.power != b.power ||
        a.weight != b.weight)
      return false;
  }
  return true;
}

Resolvent::Resolvent(Complex alpha, AnalyticFn g, const geom::Domain& domain)
    : alpha_(alpha), g_(std::move(g)) {
  if (alpha == Complex(0.0, 0.0))
    throw std::invalid_argument("resolvent: alpha zero");
  if (geom::star_contains(domain, alpha))
    throw SpectrumError("resolvent: alpha in spectrum (1/alpha not in Omega)");
  pole_ = 1.0 / alpha;
  g_at_pole_over_alpha_ = evaluate(g_, pole_) / alpha_;
}

Complex Resolvent::direct(Complex z) const {
  return (z * evaluate(g_, z) - g_at_pole_over_alpha_) /
         (Complex(1.0, 0.0) - z * alpha_);
}

Complex Resolvent::operator()(Complex z) const {
  if (std::abs(z - pole_) < 1e-6) {
    // Removable singularity: 4-point circle average around z, exact to
    // O(r^4) for holomorphic functions.
    const double r = 1e-4;
    Complex acc(0.0, 0.0);
    for (int k = 0; k < 4; ++k)
      acc += direct(z + std::polar(r, 0.5 * kPi * k));
    return acc / 4.0;
  }
  return direct(z);
}

std::pair<AnalyticFn, AnalyticFn> split_singularities(
    const AnalyticFn& f, const geom::Domain& omega1,
    const geom::Domain& omega2) {
  for (const ExtendedPoint& p : sphere_sample(10'000)) {
    if (!omega1.contains(p) && !omega2.contains(p)) {
      std::ostringstream os;
      os << "cover violation: sample point ";
      if (p.is_infinity())
        os << "infinity";
      else
        os << "(" << p.value().real() << ", " << p.value().imag() << ")";
      os << " lies in neither domain";
      throw CoverError(os.str());
    }
  }

  AnalyticFn f1, f2;

  for (const Atom& a : f.atoms) {
    const ExtendedPoint s = reciprocal(a.position);
    const bool in1 = omega1.contains(s);
    const bool in2 = omega2.contains(s);
    if (in1 && in2)
      throw AmbiguousPieceError(
          "atom singularity lies inside both domains (f not holomorphic "
          "on the intersection)");
    if (in2)
      f1.atoms.push_back(a);
    else if (in1)
      f2.atoms.push_back(a);
    else
      f1.atoms.push_back(a);  // singular in neither: either side works
  }

  for (const ArcPiece& p : f.arcs) {
    bool any1 = false, any2 = false;
    for (int i = 0; i <= 8; ++i) {
      const double t = p.theta1 + (p.theta2 - p.theta1) * i / 8.0;
      const ExtendedPoint s = reciprocal(unit_point(t));
      const bool in1 = omega1.contains(s);
      const bool in2 = omega2.contains(s);
      if (in1 && in2)
        throw AmbiguousPieceError(
            "arc singularity lies inside both domains");
      any1 = any1 || in1;
      any2 = any2 || in2;
    }
    if (any1 && any2)
      throw AmbiguousPieceError(
          "arc singularities straddle both complements");
    if (any2)
      f1.arcs.push_back(p);
    else if (any1)
      f2.arcs.push_back(p);
    else
      f1.arcs.push_back(p);
  }

  if (!f.poly.empty()) {
    if (omega1.bounded_in_plane())
      f1.poly = f.poly;
    else if (omega2.bounded_in_plane())
      f2.poly = f.poly;
    else
      throw AmbiguousPieceError(
          "polynomial part requires a component bounded in the plane");
  }

  return {f1, f2};
}

}  // namespace bergdyn::fn
