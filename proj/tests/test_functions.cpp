#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bergdyn/functions.hpp"
#include "bergdyn/rng.hpp"
#include "oracles.hpp"

using namespace bergdyn;
using fn::AnalyticFn;
using measures::CircleMeasure;

namespace {

AnalyticFn mixed_sample() {
  AnalyticFn f = fn::polynomial({Complex(1, 0), Complex(0, 2), Complex(-0.5, 0.25)});
  f = fn::add(f, fn::scale(Complex(0.7, -0.1), fn::gamma_fn(Complex(0.4, 0.3))));
  f = fn::add(f, fn::scale(Complex(0, 1), fn::gamma_fn(Complex(-0.2, 0.6))));
  AnalyticFn arcs = fn::f_arc({{-2.0, -0.5}, {0.3, 1.9}});
  return fn::add(f, fn::scale(Complex(0.5, 0.5), arcs));
}

Complex oracle_arc_kernel(double t1, double t2, long m, Complex z) {
  return oracles::gk15_adaptive(
             [&](double t) {
               return unit_point(static_cast<double>(m) * t) /
                      (Complex(1.0, 0.0) - unit_point(t) * z);
             },
             t1, t2, 1e-13) /
         kTwoPi;
}

}  // namespace

TEST_CASE("pointwise evaluation basics") {
  CHECK(fn::evaluate(fn::gamma_fn(Complex(0.5, 0)), Complex(1, 0)) ==
        Complex(2, 0));
  CHECK(fn::evaluate(fn::polynomial({Complex(1, 0), Complex(2, 0),
                                     Complex(3, 0)}),
                     Complex(2, 0)) == Complex(17, 0));

  // Full-circle kernel is identically 1 inside the disc (mean value).
  const AnalyticFn unit = fn::cauchy_transform(CircleMeasure::full_circle());
  for (Complex z : {Complex(0, 0), Complex(0.3, 0.2), Complex(-0.7, 0),
                    Complex(0, 0.6), Complex(0.24, -0.1)})
    CHECK(std::abs(fn::evaluate(unit, z) - Complex(1, 0)) < 1e-13);

  // gamma(0) is the constant 1.
  const AnalyticFn g0 = fn::gamma_fn(Complex(0, 0));
  CHECK(fn::evaluate(g0, Complex(0.9, 0.3)) == Complex(1, 0));
}

TEST_CASE("evaluation at infinity") {
  const AnalyticFn g = fn::gamma_fn(Complex(0.5, 0));
  CHECK(fn::evaluate(g, ExtendedPoint::infinity()) == Complex(0, 0));
  const AnalyticFn g0 = fn::gamma_fn(Complex(0, 0));
  CHECK(fn::evaluate(g0, ExtendedPoint::infinity()) == Complex(1, 0));
}

TEST_CASE("pole proximity guards") {
  const AnalyticFn g = fn::gamma_fn(Complex(0.5, 0));
  CHECK_THROWS_AS(fn::evaluate(g, Complex(2.0, 0)), fn::PoleProximityError);
  const AnalyticFn h = fn::f_arc({{0.0, kPi}});
  CHECK_THROWS_AS(fn::evaluate(h, unit_point(-kPi / 2)),
                  fn::PoleProximityError);
}

TEST_CASE("taylor shift examples") {
  const AnalyticFn p = fn::polynomial({Complex(1, 0), Complex(2, 0),
                                       Complex(3, 0)});
  CHECK(fn::repr_equal(fn::taylor_shift(p),
                       fn::polynomial({Complex(2, 0), Complex(3, 0)})));

  const AnalyticFn g = fn::gamma_fn(Complex(0.5, 0));
  CHECK(fn::repr_equal(fn::taylor_shift(g),
                       fn::scale(Complex(0.5, 0), g)));

  AnalyticFn arc = fn::f_arc({{0.1, 2.0}});
  const AnalyticFn shifted = fn::taylor_shift(arc);
  REQUIRE(shifted.arcs.size() == 1);
  CHECK(shifted.arcs[0].power == 1);
  CHECK(shifted.arcs[0].theta1 == 0.1);

  // T annihilates constants.
  CHECK(fn::repr_equal(fn::taylor_shift(fn::constant(Complex(3, 1))),
                       AnalyticFn{}));
  CHECK(fn::repr_equal(fn::taylor_shift(fn::gamma_fn(Complex(0, 0))),
                       AnalyticFn{}));
}

TEST_CASE("iterate is the n-fold shift, exactly") {
  Rng rng(5);
  const AnalyticFn f = mixed_sample();
  AnalyticFn twice = fn::taylor_shift(fn::taylor_shift(f));
  for (int i = 0; i < 100; ++i) {
    const Complex z(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
    CHECK(std::abs(fn::evaluate(fn::iterate(f, 2), z) -
                   fn::evaluate(twice, z)) < 1e-12);
  }
  CHECK(fn::repr_equal(fn::iterate(f, 2), twice));

  // Eigenfunction relation under iteration.
  const Complex alpha(0.4, -0.2);
  CHECK(fn::repr_equal(fn::iterate(fn::gamma_fn(alpha), 7),
                       fn::scale(cpow_int(alpha, 7), fn::gamma_fn(alpha))));

  // Nilpotence on polynomials.
  CHECK(fn::iterate(fn::polynomial({Complex(1, 0), Complex(2, 0)}), 5)
            .is_zero());
}

TEST_CASE("shift definition holds pointwise") {
  const AnalyticFn f = mixed_sample();
  const AnalyticFn tf = fn::taylor_shift(f);
  const Complex f0 = fn::evaluate(f, Complex(0, 0));
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    Complex z(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
    if (std::abs(z) < 1e-3) z += Complex(0.1, 0.1);
    const Complex lhs = fn::evaluate(tf, z);
    const Complex rhs = (fn::evaluate(f, z) - f0) / z;
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(fn::evaluate(f, z))));
  }
}

TEST_CASE("commuting diagram with the measure multiplier") {
  Rng rng(31);
  std::vector<measures::ArcPiece> arcs{
      measures::ArcPiece{-1.0, 0.7, 2, Complex(0.3, -0.4)}};
  std::vector<measures::Atom> atoms{
      measures::Atom{unit_point(2.1), Complex(1, 1), -1}};
  const CircleMeasure nu(atoms, arcs);
  CHECK(fn::repr_equal(fn::taylor_shift(fn::cauchy_transform(nu)),
                       fn::cauchy_transform(power_shift(nu, 1))));
}

TEST_CASE("kitai identity at representation level") {
  const CircleMeasure half = CircleMeasure::single_arc(0.0, kPi);
  const AnalyticFn reference = fn::cauchy_transform(half);
  for (int n : {0, 1, 5, 17, 64}) {
    const AnalyticFn roundtrip = fn::iterate(fn::s_n_transform(half, n), n);
    CHECK(fn::repr_equal(roundtrip, reference));
  }
  // Atom-bearing measure: the power bookkeeping cancels exactly too.
  const CircleMeasure atom = CircleMeasure::single_atom(unit_point(0.9));
  for (int n : {1, 8, 33})
    CHECK(fn::repr_equal(fn::iterate(fn::s_n_transform(atom, n), n),
                         fn::cauchy_transform(atom)));
}

TEST_CASE("s_n bookkeeping") {
  const CircleMeasure half = CircleMeasure::single_arc(0.0, kPi);
  const AnalyticFn s3 = fn::s_n_transform(half, 3);
  REQUIRE(s3.arcs.size() == 1);
  CHECK(s3.arcs[0].power == -3);
  CHECK(s3.poly.empty());
  CHECK(fn::repr_equal(fn::s_n_transform(half, 0),
                       fn::cauchy_transform(half)));
}

TEST_CASE("cauchy transform with general atoms") {
  const AnalyticFn f =
      fn::cauchy_transform({measures::Atom{Complex(0.5, 0), Complex(1, 0), 0}},
                           {});
  CHECK(fn::repr_equal(f, fn::gamma_fn(Complex(0.5, 0))));

  // Uniform circle measure evaluates to the constant 1; only the zeroth
  // moment survives.
  const AnalyticFn unit = fn::cauchy_transform(CircleMeasure::full_circle());
  CHECK(std::abs(fn::taylor_coefficient(unit, 0) - Complex(1, 0)) < 1e-15);
  for (long k = 1; k <= 6; ++k)
    CHECK(std::abs(fn::taylor_coefficient(unit, k)) < 1e-15);
}

TEST_CASE("support validation against the domain") {
  const geom::Domain disc = geom::Domain::disc(Complex(0, 0), 1.0);
  CHECK_NOTHROW(fn::cauchy_transform(CircleMeasure::single_arc(0.0, kPi),
                                     disc));
  const geom::Domain small_star =
      geom::Domain::complement(geom::Domain::disc(Complex(3, 0), 1.0));
  CHECK_THROWS_AS(fn::cauchy_transform(CircleMeasure::single_arc(0.0, 1.0),
                                       small_star),
                  fn::SupportError);
}

TEST_CASE("f_arc values") {
  const AnalyticFn fb = fn::f_arc({{0.0, kPi}});
  CHECK(std::abs(fn::evaluate(fb, Complex(0, 0)) - Complex(0.5, 0)) < 1e-15);
  const AnalyticFn full = fn::f_arc({{-kPi, kPi}});
  CHECK(std::abs(fn::evaluate(full, Complex(0.4, 0.1)) - Complex(1, 0)) <
        1e-13);
  const AnalyticFn shifted = fn::taylor_shift(fb);
  REQUIRE(shifted.arcs.size() == 1);
  CHECK(shifted.arcs[0].power == 1);
}

TEST_CASE("partial sums and taylor coefficients") {
  const AnalyticFn g = fn::gamma_fn(Complex(0.5, 0));
  const AnalyticFn s2 = fn::partial_sum(g, 2);
  CHECK(fn::repr_equal(s2, fn::polynomial({Complex(1, 0), Complex(0.5, 0),
                                           Complex(0.25, 0)})));

  // Half-circle moments are the Taylor coefficients of f_B.
  const AnalyticFn fb = fn::f_arc({{0.0, kPi}});
  for (long k = 0; k <= 12; ++k) {
    const Complex expected = measures::arc_moment(0.0, kPi, k);
    CHECK(std::abs(fn::taylor_coefficient(fb, k) - expected) < 1e-15);
  }

  // Series evaluation matches the partial sums well inside the disc.
  const AnalyticFn s60 = fn::partial_sum(fb, 60);
  for (Complex z : {Complex(0.5, 0), Complex(-0.3, 0.2), Complex(0, 0.45)}) {
    CHECK(std::abs(fn::evaluate(s60, z) - fn::evaluate(fb, z)) < 1e-12);
  }

  // f - S_{n-1} f vanishes to order n and the quotient is T^n f.
  const AnalyticFn f = mixed_sample();
  const int n = 6;
  const AnalyticFn sn1 = fn::partial_sum(f, n - 1);
  for (Complex z : {Complex(0.3, 0.1), Complex(-0.2, -0.25)}) {
    const Complex lhs =
        (fn::evaluate(f, z) - fn::evaluate(sn1, z)) / cpow_int(z, n);
    const Complex rhs = fn::evaluate(fn::iterate(f, n), z);
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("arc kernel against an independent quadrature oracle") {
  oracles::self_check();
  Rng rng(41);
  const double t1 = -0.8, t2 = 1.9;
  for (long m : {0L, 1L, -1L, 3L, -3L, 7L, 16L, -16L, 64L}) {
    for (int trial = 0; trial < 12; ++trial) {
      Complex z(rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4));
      // Keep a safe distance from the reciprocal arc.
      if (std::abs(std::abs(z) - 1.0) < 2e-2) z *= 0.8;
      const Complex mine = fn::arc_kernel(t1, t2, m, z);
      const Complex ref = oracle_arc_kernel(t1, t2, m, z);
      CHECK(std::abs(mine - ref) < 1e-10);
    }
  }
}

TEST_CASE("arc kernel large-power stability") {
  oracles::self_check();
  // Large positive powers at moderate radius: the naive upward
  // recursion would lose dozens of digits here.
  for (double rho : {0.5, 0.9, 0.97}) {
    const Complex z = std::polar(rho, 0.6);
    const Complex mine = fn::arc_kernel(0.0, kPi, 128, z);
    const Complex ref = oracle_arc_kernel(0.0, kPi, 128, z);
    CHECK(std::abs(mine - ref) < 1e-11);
  }
  // Mirror case outside the disc.
  const Complex z_out = std::polar(1.8, -0.3);
  CHECK(std::abs(fn::arc_kernel(0.0, kPi, -64, z_out) -
                 oracle_arc_kernel(0.0, kPi, -64, z_out)) < 1e-11);
}

TEST_CASE("resolvent basics") {
  const geom::Domain disc = geom::Domain::disc(Complex(0, 0), 1.0);
  const fn::Resolvent res(Complex(2, 0), fn::constant(Complex(1, 0)), disc);
  for (Complex z : {Complex(0, 0), Complex(0.3, 0.3), Complex(0.5, 0),
                    Complex(0.5 + 1e-8, 0), Complex(-0.9, 0.05)})
    CHECK(std::abs(res(z) - Complex(-0.5, 0)) < 1e-9);

  CHECK_THROWS_AS(fn::Resolvent(Complex(0.5, 0), fn::constant(Complex(1, 0)),
                                disc),
                  fn::SpectrumError);
  CHECK_THROWS_AS(fn::Resolvent(Complex(0, 0), fn::constant(Complex(1, 0)),
                                disc),
                  std::invalid_argument);
}

TEST_CASE("resolvent inverts T - alpha I") {
  const geom::Domain disc = geom::Domain::disc(Complex(0, 0), 1.0);
  const AnalyticFn g = fn::f_arc({{0.0, kPi}});
  Rng rng(55);
  for (Complex alpha : {Complex(2, 0), Complex(0, -3), Complex(1.5, 1.5)}) {
    const fn::Resolvent h(alpha, g, disc);
    const Complex h0 = h(Complex(0, 0));
    for (int i = 0; i < 100; ++i) {
      Complex z(rng.uniform(-0.95, 0.95), rng.uniform(-0.95, 0.95));
      if (std::abs(z) < 1e-2 || std::abs(z) > 0.97) continue;
      if (std::abs(z - h.pole()) < 1e-3) continue;
      const Complex lhs = (h(z) - h0) / z - alpha * h(z);
      CHECK(std::abs(lhs - fn::evaluate(g, z)) < 1e-10);
    }
  }
}

TEST_CASE("split singularities") {
  const geom::Domain o1 = geom::Domain::disc(Complex(0, 0), 1.2);
  const geom::Domain o2 =
      geom::Domain::complement(geom::Domain::disc(Complex(0, 0), 0.8));
  const AnalyticFn f = fn::add(fn::gamma_fn(Complex(0.5, 0)),
                               fn::gamma_fn(Complex(-2, 0)));
  const auto [f1, f2] = fn::split_singularities(f, o1, o2);
  REQUIRE(f1.atoms.size() == 1);
  REQUIRE(f2.atoms.size() == 1);
  CHECK(f1.atoms[0].position == Complex(0.5, 0));   // pole at 2, inside o2
  CHECK(f2.atoms[0].position == Complex(-2, 0));    // pole at -1/2, inside o1

  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const Complex z(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
    CHECK(std::abs(fn::evaluate(f1, z) + fn::evaluate(f2, z) -
                   fn::evaluate(f, z)) < 1e-12);
  }

  // Polynomial part goes with the bounded component.
  const AnalyticFn p = fn::polynomial({Complex(1, 0), Complex(1, 0)});
  const auto [p1, p2] = fn::split_singularities(p, o1, o2);
  CHECK(fn::repr_equal(p1, p));
  CHECK(p2.is_zero());

  // Cover violation is detected.
  const geom::Domain small1 = geom::Domain::disc(Complex(0, 0), 1.0);
  const geom::Domain small2 = geom::Domain::disc(Complex(0.1, 0), 1.0);
  CHECK_THROWS_AS(fn::split_singularities(f, small1, small2), fn::CoverError);
}

TEST_CASE("linear plumbing") {
  const AnalyticFn f = mixed_sample();
  CHECK(fn::repr_equal(fn::scale(Complex(0, 0), f), AnalyticFn{}));
  Rng rng(81);
  for (int i = 0; i < 50; ++i) {
    const Complex z(rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6));
    CHECK(std::abs(fn::evaluate(fn::add(f, fn::scale(Complex(-1, 0), f)), z)) <
          1e-12);
  }
  const AnalyticFn g = fn::gamma_fn(Complex(0.3, 0.2));
  CHECK(fn::repr_equal(fn::taylor_shift(fn::add(f, g)),
                       fn::add(fn::taylor_shift(f), fn::taylor_shift(g))));
}
