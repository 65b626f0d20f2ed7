#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bergdyn/functions.hpp"
#include "bergdyn/quadrature.hpp"
#include "bergdyn/rng.hpp"
#include "oracles.hpp"

using namespace bergdyn;
using geom::Domain;

namespace {

Domain unit_disc() { return Domain::disc(Complex(0, 0), 1.0); }

quad::ComplexField field_of(fn::AnalyticFn f) {
  return [f = std::move(f)](Complex z) { return fn::evaluate_guarded(f, z); };
}

const double kLn2 = std::log(2.0);

}  // namespace

TEST_CASE("gauss rule sanity") {
  const quad::GaussRule r8 = quad::gauss_legendre(8);
  double wsum = 0.0;
  for (double w : r8.weights) wsum += w;
  CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
  // Exact for degree 15.
  double x14 = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    x14 += r8.weights[i] * std::pow(r8.nodes[i], 14);
  CHECK(x14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("normalization of the spherical measure") {
  quad::QuadratureConfig cfg;
  const auto one = [](Complex) { return 1.0; };
  const quad::NormEstimate whole =
      quad::sphere_integral(one, Domain::full_sphere(), cfg);
  CHECK(std::abs(whole.value - 1.0) < 1e-6);
  CHECK_FALSE(whole.divergent);

  const quad::NormEstimate disc = quad::sphere_integral(one, unit_disc(), cfg);
  CHECK(std::abs(disc.value - 0.5) < 1e-6);
}

TEST_CASE("second moment over the disc") {
  quad::QuadratureConfig cfg;
  const quad::NormEstimate m2 = quad::sphere_integral(
      [](Complex z) { return std::norm(z); }, unit_disc(), cfg);
  CHECK(std::abs(m2.value - (kLn2 - 0.5)) < 1e-6);
}

TEST_CASE("complement domains integrate over the far chart") {
  quad::QuadratureConfig cfg;
  // Everything but the closed unit disc has the remaining mass 1/2.
  const Domain outside =
      Domain::complement(Domain::disc(Complex(0, 0), 1.0));
  const quad::NormEstimate m = quad::sphere_integral(
      [](Complex) { return 1.0; }, outside, cfg);
  CHECK(std::abs(m.value - 0.5) < 1e-6);
}

TEST_CASE("ap norms on the disc") {
  quad::QuadratureConfig cfg;
  const quad::NormEstimate n1 = quad::ap_norm(
      field_of(fn::constant(Complex(1, 0))), unit_disc(), 2.0, cfg);
  CHECK(std::abs(n1.value - 1.0 / std::sqrt(2.0)) < 1e-5);

  const quad::NormEstimate nz = quad::ap_norm(
      field_of(fn::polynomial({Complex(0, 0), Complex(1, 0)})), unit_disc(),
      2.0, cfg);
  CHECK(std::abs(nz.value * nz.value - (kLn2 - 0.5)) < 1e-5);

  // Homogeneity.
  Rng rng(3);
  const Complex c(rng.uniform(-2, 2), rng.uniform(-2, 2));
  const fn::AnalyticFn f = fn::f_arc({{0.0, kPi}});
  const double base = quad::ap_norm(field_of(f), unit_disc(), 2.0, cfg).value;
  const double scaled =
      quad::ap_norm(field_of(fn::scale(c, f)), unit_disc(), 2.0, cfg).value;
  CHECK(scaled == doctest::Approx(std::abs(c) * base).epsilon(1e-6));
}

TEST_CASE("log singular norm is finite for p=1, divergent for p=2") {
  quad::QuadratureConfig cfg;
  const fn::AnalyticFn g1 = fn::gamma_fn(Complex(1, 0));
  const quad::NormEstimate a1 =
      quad::ap_norm(field_of(g1), unit_disc(), 1.0, cfg);
  CHECK_FALSE(a1.divergent);
  CHECK(a1.value > 0.5);
  CHECK(a1.value < 2.0);

  const quad::NormEstimate a2 =
      quad::ap_norm(field_of(g1), unit_disc(), 2.0, cfg);
  CHECK(a2.divergent);
}

TEST_CASE("inner products") {
  quad::QuadratureConfig cfg;
  const auto one = field_of(fn::constant(Complex(1, 0)));
  const auto zf = field_of(fn::polynomial({Complex(0, 0), Complex(1, 0)}));

  const quad::InnerProductEstimate p11 =
      quad::inner_product(one, one, unit_disc(), cfg);
  CHECK(std::abs(p11.value - Complex(0.5, 0)) < 1e-6);

  const quad::InnerProductEstimate pz1 =
      quad::inner_product(zf, one, unit_disc(), cfg);
  CHECK(std::abs(pz1.value) < 1e-8);

  const fn::AnalyticFn f = fn::f_arc({{0.0, kPi}});
  const quad::InnerProductEstimate pff =
      quad::inner_product(field_of(f), field_of(f), unit_disc(), cfg);
  const quad::NormEstimate nf =
      quad::ap_norm(field_of(f), unit_disc(), 2.0, cfg);
  CHECK(std::abs(pff.value.real() - nf.value * nf.value) < 1e-6);
  CHECK(std::abs(pff.value.imag()) < 1e-9);
}

TEST_CASE("monomial orthogonality") {
  quad::QuadratureConfig cfg;
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b < a; ++b) {
      const auto za = [a](Complex z) { return cpow_int(z, a); };
      const auto zb = [b](Complex z) { return cpow_int(z, b); };
      const quad::InnerProductEstimate ip =
          quad::inner_product(za, zb, unit_disc(), cfg);
      CHECK(std::abs(ip.value) < 1e-8);
    }
}

TEST_CASE("coefficient oracle agreement for polynomials") {
  quad::QuadratureConfig cfg;
  const std::vector<Complex> coeffs{Complex(0.8, -0.3), Complex(0, 1.2),
                                    Complex(-0.5, 0), Complex(0.1, 0.1)};
  const double direct =
      quad::ap_norm(field_of(fn::polynomial(coeffs)), unit_disc(), 2.0, cfg)
          .value;
  const double oracle = oracles::coefficient_norm(
      [&coeffs](long nu) {
        return nu < static_cast<long>(coeffs.size()) ? coeffs[nu]
                                                     : Complex(0, 0);
      },
      static_cast<int>(coeffs.size()));
  CHECK(direct == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("triangle inequality on random pairs") {
  quad::QuadratureConfig cfg;
  cfg.rel_tol = 1e-6;
  Rng rng(29);
  for (int trial = 0; trial < 3; ++trial) {
    const fn::AnalyticFn f =
        fn::scale(Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                  fn::f_arc({{0.0, 2.0}}));
    const fn::AnalyticFn g =
        fn::scale(Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                  fn::gamma_fn(Complex(0.4, 0.2)));
    const double p = 1.0 + rng.uniform() * 2.0;
    const double nf = quad::ap_norm(field_of(f), unit_disc(), p, cfg).value;
    const double ng = quad::ap_norm(field_of(g), unit_disc(), p, cfg).value;
    const double nsum =
        quad::ap_norm(field_of(fn::add(f, g)), unit_disc(), p, cfg).value;
    CHECK(nsum <= nf + ng + 1e-5);
  }
}

TEST_CASE("chart split agrees with a single wide chart") {
  // For a bounded domain the inverted chart contributes nothing; moving
  // the handover radius must not change the value beyond tolerance.
  quad::QuadratureConfig near_cfg;
  near_cfg.split_radius = 1.5;
  quad::QuadratureConfig far_cfg;
  far_cfg.split_radius = 40.0;
  const auto g = [](Complex z) { return 1.0 / (1.0 + std::norm(z)); };
  const double a = quad::sphere_integral(g, unit_disc(), near_cfg).value;
  const double b = quad::sphere_integral(g, unit_disc(), far_cfg).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("deterministic across thread counts") {
  const fn::AnalyticFn f = fn::f_arc({{0.0, kPi}});
  quad::QuadratureConfig one;
  one.threads = 1;
  quad::QuadratureConfig many;
  many.threads = 8;
  const quad::NormEstimate a = quad::ap_norm(field_of(f), unit_disc(), 2.0, one);
  const quad::NormEstimate b =
      quad::ap_norm(field_of(f), unit_disc(), 2.0, many);
  CHECK(a.value == b.value);  // bitwise
  CHECK(a.error_estimate == b.error_estimate);
  CHECK(a.cells_used == b.cells_used);
}

TEST_CASE("budget and non-finite guards") {
  quad::QuadratureConfig cfg;
  cfg.cell_budget = 100;
  const fn::AnalyticFn g1 = fn::gamma_fn(Complex(1, 0));
  CHECK_THROWS_AS(
      quad::ap_norm(field_of(g1), unit_disc(), 2.0, cfg),
      quad::BudgetExceededError);

  quad::QuadratureConfig ok;
  CHECK_THROWS_AS(quad::sphere_integral(
                      [](Complex z) {
                        return std::abs(z - Complex(0.3, 0.3)) < 0.5
                                   ? std::numeric_limits<double>::quiet_NaN()
                                   : 1.0;
                      },
                      unit_disc(), ok),
                  quad::NonFiniteSampleError);
}

TEST_CASE("config validation") {
  quad::QuadratureConfig bad;
  bad.split_radius = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = quad::QuadratureConfig{};
  bad.max_depth = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = quad::QuadratureConfig{};
  bad.base_order = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("log growth of the circle average") {
  const std::vector<double> radii{0.0, 1 - 1e-2, 1 - 1e-3, 1 - 1e-4,
                                  1 - 1e-5, 1 - 1e-6};
  const auto rows = quad::log_growth_check(radii);
  REQUIRE(rows.size() == radii.size());
  CHECK(rows[0].h == doctest::Approx(1.0).epsilon(1e-10));

  // h is strictly increasing in r.
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].h > rows[i - 1].h);

  // The ratio against log(1/(1-r)) stays bounded by a small constant.
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].ratio > 0.0);
    CHECK(rows[i].ratio < 2.0);
  }
}

TEST_CASE("line integral oracle cross-check") {
  // Against the independent Simpson oracle.
  const auto f = [](double t) { return std::exp(std::sin(t)) * t; };
  const double mine = quad::line_integral(f, 0.0, 3.0, 1e-12);
  const double ref = oracles::simpson_adaptive(f, 0.0, 3.0, 1e-13);
  CHECK(mine == doctest::Approx(ref).epsilon(1e-10));
}
