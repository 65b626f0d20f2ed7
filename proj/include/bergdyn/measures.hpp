#pragma once

#include <vector>

#include "bergdyn/complex_util.hpp"

namespace bergdyn::measures {

/// Point mass weight * position^power * delta_{position}. The integer
/// power keeps shifts by zeta^j exact bookkeeping; the effective weight
/// is materialized on demand.
struct Atom {
  Complex position;
  Complex weight;
  long power = 0;
};

/// weight * zeta^power * dm restricted to the arc (theta1, theta2),
/// where dm is normalized arc length (the full circle has mass 1).
struct ArcPiece {
  double theta1 = 0.0;
  double theta2 = 0.0;
  long power = 0;
  Complex weight;
};

inline Complex materialized_weight(const Atom& a) {
  return a.weight * cpow_int(a.position, a.power);
}

/// (1/2pi) * integral of e^{i k t} over [theta1, theta2].
Complex arc_moment(double theta1, double theta2, long k);

/// Finite complex measure on the unit circle: atoms plus arcs carrying
/// Laurent-monomial densities. Atom positions must be unimodular to
/// within 1e-12; arcs satisfy theta1 < theta2 <= theta1 + 2*pi.
class CircleMeasure {
 public:
  CircleMeasure() = default;
  CircleMeasure(std::vector<Atom> atoms, std::vector<ArcPiece> arcs);

  static CircleMeasure full_circle(Complex weight = Complex(1.0, 0.0));
  static CircleMeasure single_arc(double theta1, double theta2, long power = 0,
                                  Complex weight = Complex(1.0, 0.0));
  static CircleMeasure single_atom(Complex position,
                                   Complex weight = Complex(1.0, 0.0));

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<ArcPiece>& arcs() const { return arcs_; }
  bool empty() const { return atoms_.empty() && arcs_.empty(); }

 private:
  std::vector<Atom> atoms_;
  std::vector<ArcPiece> arcs_;
};

/// nu_hat(k) = integral of zeta^k d nu(zeta), in closed form.
Complex fourier_stieltjes(const CircleMeasure& nu, long k);

/// Multiplies the measure by zeta^j: atom and arc powers shift by j.
/// The support is unchanged.
CircleMeasure power_shift(const CircleMeasure& nu, long j);

double total_variation(const CircleMeasure& nu);

struct RajchmanRow {
  long k = 0;
  double magnitude = 0.0;
};

struct RajchmanReport {
  std::vector<RajchmanRow> rows;  // k = -K..-1, 1..K
  /// Least C with |nu_hat(k)| <= C/|k| over 1 <= |k| <= K.
  double tail_constant = 0.0;
  /// Any atom with nonzero weight keeps the coefficients from decaying.
  bool atom_dominated = false;
};

RajchmanReport rajchman_decay(const CircleMeasure& nu, int K);

}  // namespace bergdyn::measures
