#include "bergdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "bergdyn/linalg.hpp"
#include "bergdyn/rng.hpp"

namespace bergdyn::dyn {

namespace {

using fn::AnalyticFn;
using measures::CircleMeasure;

quad::ComplexField evaluator(AnalyticFn f) {
  return [f = std::move(f)](Complex z) { return fn::evaluate_guarded(f, z); };
}

/// Pointwise majorant integral of |gamma| against |nu|, plus the
/// polynomial part. Arc contributions need a 1-D quadrature per point.
double majorant_at(const AnalyticFn& f, Complex z) {
  double acc = 0.0;
  Complex horner(0.0, 0.0);
  for (auto it = f.poly.rbegin(); it != f.poly.rend(); ++it)
    horner = horner * z + *it;
  acc += std::abs(horner);
  for (const auto& a : f.atoms) {
    const double den = std::abs(Complex(1.0, 0.0) - a.position * z);
    acc += std::abs(measures::materialized_weight(a)) / std::max(den, 1e-14);
  }
  for (const auto& p : f.arcs) {
    auto g = [&](double t) {
      return 1.0 / std::max(std::abs(Complex(1.0, 0.0) - unit_point(t) * z),
                            1e-14);
    };
    acc += std::abs(p.weight) *
           quad::line_integral(g, p.theta1, p.theta2, 1e-5, 30) / kTwoPi;
  }
  return acc;
}

bool check_membership_mp(const AnalyticFn& f, const geom::Domain& domain,
                         double p, const quad::QuadratureConfig& cfg) {
  quad::QuadratureConfig prelim = cfg;
  prelim.max_depth = std::min(cfg.max_depth, 7);
  prelim.rel_tol = std::max(cfg.rel_tol, 1e-3);
  prelim.base_order = std::min(cfg.base_order, 6);
  const quad::NormEstimate ne = quad::ap_norm(
      [&f](Complex z) { return Complex(majorant_at(f, z), 0.0); }, domain, p,
      prelim);
  return !ne.divergent;
}

}  // namespace

std::vector<int> geometric_checkpoints(int n_max) {
  if (n_max < 0) throw std::invalid_argument("checkpoints: n_max < 0");
  std::vector<int> cp{0};
  for (int n = 1; n <= n_max; n *= 2) cp.push_back(n);
  if (cp.back() != n_max) cp.push_back(n_max);
  return cp;
}

OrbitRecord orbit_decay(const AnalyticFn& f, const geom::Domain& domain,
                        double p, int n_max,
                        const quad::QuadratureConfig& cfg) {
  OrbitRecord rec;
  for (const auto& a : f.atoms)
    if (std::abs(measures::materialized_weight(a)) > 0.0)
      rec.non_rajchman = true;

  if (!check_membership_mp(f, domain, p, cfg) && !rec.non_rajchman)
    throw NotInMpError("not in M_p: majorant integral diverges");

  for (int n : geometric_checkpoints(n_max)) {
    OrbitPoint pt;
    pt.n = n;
    pt.norm = quad::ap_norm(evaluator(fn::iterate(f, n)), domain, p, cfg);
    rec.points.push_back(pt);
  }
  return rec;
}

OrbitRecord s_n_decay(const CircleMeasure& nu, const geom::Domain& domain,
                      double p, int n_max, const quad::QuadratureConfig& cfg) {
  OrbitRecord rec;
  for (const auto& a : nu.atoms())
    if (std::abs(a.weight) > 0.0) rec.non_rajchman = true;

  const AnalyticFn base = fn::cauchy_transform(nu);
  if (!check_membership_mp(base, domain, p, cfg) && !rec.non_rajchman)
    throw NotInMpError("not in M_p: majorant integral diverges");

  for (int n : geometric_checkpoints(n_max)) {
    OrbitPoint pt;
    pt.n = n;
    pt.norm =
        quad::ap_norm(evaluator(fn::s_n_transform(nu, n)), domain, p, cfg);
    rec.points.push_back(pt);
  }
  return rec;
}

KitaiReport kitai_identity_check(const CircleMeasure& nu, int n_max,
                                 const std::vector<Complex>& samples) {
  if (n_max < 0) throw std::invalid_argument("kitai: n_max < 0");
  KitaiReport rep;
  const AnalyticFn reference = fn::cauchy_transform(nu);
  for (int n = 0; n <= n_max; ++n) {
    KitaiRow row;
    row.n = n;
    const AnalyticFn roundtrip = fn::iterate(fn::s_n_transform(nu, n), n);
    row.repr_exact = fn::repr_equal(roundtrip, reference);
    for (Complex z : samples) {
      const double dev =
          std::abs(fn::evaluate(roundtrip, z) - fn::evaluate(reference, z));
      row.max_dev = std::max(row.max_dev, dev);
    }
    rep.all_exact = rep.all_exact && row.repr_exact;
    rep.worst_dev = std::max(rep.worst_dev, row.max_dev);
    rep.rows.push_back(row);
  }
  return rep;
}

TransitivityWitness transitivity_witness(const AnalyticFn& f,
                                         const AnalyticFn& g, int n_max,
                                         const geom::Domain& domain, double p,
                                         const quad::QuadratureConfig& cfg) {
  if (!f.poly.empty() || !f.atoms.empty() || !g.poly.empty() ||
      !g.atoms.empty())
    throw std::invalid_argument(
        "transitivity_witness: f and g must be spanned by arc kernels");
  const CircleMeasure mu_g({}, g.arcs);

  TransitivityWitness w;
  w.norm_f = quad::ap_norm(evaluator(f), domain, p, cfg).value;
  w.norm_g = quad::ap_norm(evaluator(g), domain, p, cfg).value;
  for (int n : geometric_checkpoints(n_max)) {
    WitnessRow row;
    row.n = n;
    // u = f + S_n mu_g, so u - f = S_n mu_g and T^n u - g = T^n f.
    row.dist_source =
        quad::ap_norm(evaluator(fn::s_n_transform(mu_g, n)), domain, p, cfg)
            .value;
    row.dist_target =
        quad::ap_norm(evaluator(fn::iterate(f, n)), domain, p, cfg).value;
    w.rows.push_back(row);
  }
  w.final_u = fn::add(f, fn::s_n_transform(mu_g, n_max));
  return w;
}

SpanResidualCurve span_residual(const quad::ComplexField& target,
                                const std::vector<NodeSet>& node_sets,
                                const geom::Domain& domain,
                                const quad::QuadratureConfig& cfg,
                                double cutoff_rel) {
  // Unique basis elements across all node sets, in first-seen order.
  struct Basis {
    AnalyticFn f;
    quad::ComplexField eval;
  };
  std::vector<Basis> basis;
  std::map<std::pair<double, double>, std::size_t> gamma_index;
  std::map<std::pair<double, double>, std::size_t> arc_index;
  std::vector<std::vector<std::size_t>> set_members;

  for (const NodeSet& set : node_sets) {
    std::vector<std::size_t> members;
    if (std::holds_alternative<GammaNodeSet>(set)) {
      for (Complex a : std::get<GammaNodeSet>(set).nodes) {
        if (!geom::star_contains(domain, a))
          throw fn::SupportError("span_residual: node outside Omega*");
        const auto key = std::make_pair(a.real(), a.imag());
        auto it = gamma_index.find(key);
        if (it == gamma_index.end()) {
          it = gamma_index.emplace(key, basis.size()).first;
          Basis b;
          b.f = fn::gamma_fn(a);
          b.eval = evaluator(b.f);
          basis.push_back(std::move(b));
        }
        members.push_back(it->second);
      }
    } else {
      for (const auto& arc : std::get<ArcFamilySet>(set).arcs) {
        for (int i = 0; i <= 4; ++i) {
          const double t = arc.first + (arc.second - arc.first) * i / 4.0;
          if (!geom::star_contains(domain, unit_point(t)))
            throw fn::SupportError("span_residual: arc outside Omega*");
        }
        const auto key = arc;
        auto it = arc_index.find(key);
        if (it == arc_index.end()) {
          it = arc_index.emplace(key, basis.size()).first;
          Basis b;
          b.f = fn::f_arc({arc});
          b.eval = evaluator(b.f);
          basis.push_back(std::move(b));
        }
        members.push_back(it->second);
      }
    }
    set_members.push_back(std::move(members));
  }

  // Cached inner products: pair(a, b) -> integral of phi_a conj(phi_b),
  // a <= b; the other orientation is the conjugate.
  std::map<std::pair<std::size_t, std::size_t>, Complex> cache;
  auto pair_inner = [&](std::size_t a, std::size_t b) {
    const bool flip = a > b;
    const auto key = flip ? std::make_pair(b, a) : std::make_pair(a, b);
    auto it = cache.find(key);
    if (it == cache.end()) {
      const Complex v =
          quad::inner_product(basis[key.first].eval, basis[key.second].eval,
                              domain, cfg)
              .value;
      it = cache.emplace(key, v).first;
    }
    return flip ? std::conj(it->second) : it->second;
  };

  std::vector<Complex> target_inner(basis.size());
  std::vector<bool> target_done(basis.size(), false);
  auto target_against = [&](std::size_t j) {
    if (!target_done[j]) {
      target_inner[j] =
          quad::inner_product(target, basis[j].eval, domain, cfg).value;
      target_done[j] = true;
    }
    return target_inner[j];
  };

  SpanResidualCurve curve;
  const double t2 = std::max(
      0.0, quad::inner_product(target, target, domain, cfg).value.real());
  curve.target_norm = std::sqrt(t2);

  for (const auto& members : set_members) {
    const int n = static_cast<int>(members.size());
    linalg::HermitianMatrix gram(n);
    std::vector<Complex> y(n);
    for (int j = 0; j < n; ++j) {
      y[j] = target_against(members[j]);
      for (int k = 0; k < n; ++k)
        gram.at(j, k) = pair_inner(members[k], members[j]);
    }
    // Force exact Hermitian symmetry against quadrature noise.
    for (int j = 0; j < n; ++j) {
      gram.at(j, j) = Complex(gram.at(j, j).real(), 0.0);
      for (int k = j + 1; k < n; ++k) {
        const Complex avg =
            0.5 * (gram.at(j, k) + std::conj(gram.at(k, j)));
        gram.at(j, k) = avg;
        gram.at(k, j) = std::conj(avg);
      }
    }
    const linalg::TruncatedSolution sol =
        linalg::solve_truncated(gram, y, cutoff_rel);
    Complex fit(0.0, 0.0);
    for (int j = 0; j < n; ++j) fit += std::conj(y[j]) * sol.x[j];
    SpanResidualPoint pt;
    pt.node_count = members.size();
    pt.residual = std::sqrt(std::max(0.0, t2 - fit.real()));
    pt.rank_kept = sol.rank_kept;
    curve.points.push_back(pt);
  }
  return curve;
}

SpectrumRaster spectrum_raster(const geom::Domain& domain,
                               const AnalyticFn& probe_g,
                               const RasterConfig& rcfg,
                               const quad::QuadratureConfig& qcfg) {
  (void)qcfg;
  if (!(rcfg.grid_step > 0.0))
    throw std::invalid_argument("spectrum_raster: grid_step must be positive");

  SpectrumRaster raster;
  for (double im = rcfg.im_min; im <= rcfg.im_max + 1e-12;
       im += rcfg.grid_step)
    for (double re = rcfg.re_min; re <= rcfg.re_max + 1e-12;
         re += rcfg.grid_step) {
      RasterPoint pt;
      pt.alpha = Complex(re, im);
      pt.in_star = geom::star_contains(domain, pt.alpha);
      raster.points.push_back(pt);
    }

  // Interior points: the eigenfunction relation holds at representation
  // level exactly.
  const double h = rcfg.grid_step;
  for (const RasterPoint& pt : raster.points) {
    if (!pt.in_star) continue;
    const Complex a = pt.alpha;
    const bool interior = geom::star_contains(domain, a + Complex(h, 0)) &&
                          geom::star_contains(domain, a - Complex(h, 0)) &&
                          geom::star_contains(domain, a + Complex(0, h)) &&
                          geom::star_contains(domain, a - Complex(0, h));
    if (!interior) continue;
    ++raster.eigen_checked;
    const AnalyticFn gamma = fn::gamma_fn(a);
    raster.eigen_all_exact =
        raster.eigen_all_exact &&
        fn::repr_equal(fn::taylor_shift(gamma), fn::scale(a, gamma));
  }

  // Resolvent identity on a random sample of points outside Omega*.
  Rng rng(rcfg.seed);
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < raster.points.size(); ++i)
    if (!raster.points[i].in_star &&
        std::abs(raster.points[i].alpha) > 1e-9)
      outside.push_back(i);

  std::vector<Complex> probes;
  int guard = 0;
  while (static_cast<int>(probes.size()) < rcfg.probe_points &&
         guard++ < 100000) {
    const Complex z(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    if (std::abs(z) < 0.05) continue;
    if (!domain.contains(z)) continue;
    probes.push_back(z);
  }

  const int want = std::min<int>(rcfg.alpha_samples,
                                 static_cast<int>(outside.size()));
  std::vector<std::size_t> chosen;
  while (static_cast<int>(chosen.size()) < want) {
    const std::size_t pick =
        outside[static_cast<std::size_t>(rng.uniform() * outside.size())];
    if (std::find(chosen.begin(), chosen.end(), pick) != chosen.end())
      continue;
    chosen.push_back(pick);
  }

  for (std::size_t idx : chosen) {
    RasterPoint& pt = raster.points[idx];
    const fn::Resolvent res(pt.alpha, probe_g, domain);
    const Complex h0 = res(Complex(0.0, 0.0));
    double worst = 0.0;
    for (Complex z : probes) {
      if (std::abs(z - res.pole()) < 1e-3) continue;
      const Complex hz = res(z);
      const Complex shifted = (hz - h0) / z;
      const double r =
          std::abs(shifted - pt.alpha * hz - fn::evaluate(probe_g, z));
      worst = std::max(worst, r);
    }
    pt.resolvent_residual = worst;
    raster.max_resolvent_residual =
        std::max(raster.max_resolvent_residual, worst);
  }

  if (rcfg.p >= 2.0)
    raster.note =
        "point-spectrum classification on the boundary of Omega* assumes "
        "p < 2; for p >= 2 boundary eigenfunctions need not be "
        "p-integrable";
  return raster;
}

}  // namespace bergdyn::dyn
