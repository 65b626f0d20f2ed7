#include "bergdyn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bergdyn::measures {

namespace {
constexpr double kUnimodularTol = 1e-12;
}

Complex arc_moment(double theta1, double theta2, long k) {
  if (k == 0) return Complex((theta2 - theta1) / kTwoPi, 0.0);
  const double kk = static_cast<double>(k);
  const Complex num = unit_point(kk * theta2) - unit_point(kk * theta1);
  return num / Complex(0.0, kTwoPi * kk);
}

CircleMeasure::CircleMeasure(std::vector<Atom> atoms,
                             std::vector<ArcPiece> arcs)
    : atoms_(std::move(atoms)), arcs_(std::move(arcs)) {
  for (const Atom& a : atoms_) {
    if (std::abs(std::abs(a.position) - 1.0) > kUnimodularTol)
      throw std::invalid_argument(
          "CircleMeasure: atom position off the unit circle");
  }
  for (const ArcPiece& p : arcs_) {
    if (!(p.theta1 < p.theta2) || !(p.theta2 <= p.theta1 + kTwoPi))
      throw std::invalid_argument(
          "CircleMeasure: arc must satisfy theta1 < theta2 <= theta1 + 2*pi");
  }
}

CircleMeasure CircleMeasure::full_circle(Complex weight) {
  return single_arc(-kPi, kPi, 0, weight);
}

CircleMeasure CircleMeasure::single_arc(double theta1, double theta2,
                                        long power, Complex weight) {
  return CircleMeasure({}, {ArcPiece{theta1, theta2, power, weight}});
}

CircleMeasure CircleMeasure::single_atom(Complex position, Complex weight) {
  return CircleMeasure({Atom{position, weight, 0}}, {});
}

Complex fourier_stieltjes(const CircleMeasure& nu, long k) {
  Complex acc(0.0, 0.0);
  for (const Atom& a : nu.atoms())
    acc += a.weight * cpow_int(a.position, a.power + k);
  for (const ArcPiece& p : nu.arcs())
    acc += p.weight * arc_moment(p.theta1, p.theta2, p.power + k);
  return acc;
}

CircleMeasure power_shift(const CircleMeasure& nu, long j) {
  std::vector<Atom> atoms = nu.atoms();
  for (Atom& a : atoms) a.power += j;
  std::vector<ArcPiece> arcs = nu.arcs();
  for (ArcPiece& p : arcs) p.power += j;
  return CircleMeasure(std::move(atoms), std::move(arcs));
}

double total_variation(const CircleMeasure& nu) {
  double tv = 0.0;
  for (const Atom& a : nu.atoms()) tv += std::abs(a.weight);
  for (const ArcPiece& p : nu.arcs())
    tv += std::abs(p.weight) * (p.theta2 - p.theta1) / kTwoPi;
  return tv;
}

RajchmanReport rajchman_decay(const CircleMeasure& nu, int K) {
  if (K < 1) throw std::invalid_argument("rajchman_decay: K must be >= 1");
  RajchmanReport rep;
  rep.rows.reserve(2 * static_cast<std::size_t>(K));
  for (long k = -K; k <= K; ++k) {
    if (k == 0) continue;
    const double mag = std::abs(fourier_stieltjes(nu, k));
    rep.rows.push_back(RajchmanRow{k, mag});
    rep.tail_constant =
        std::max(rep.tail_constant, mag * std::abs(static_cast<double>(k)));
  }
  for (const Atom& a : nu.atoms())
    if (std::abs(a.weight) > 0.0) rep.atom_dominated = true;
  return rep;
}

}  // namespace bergdyn::measures
