#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bergdyn/complex_util.hpp"

namespace bergdyn::geom {

/// Open subset of the Riemann sphere built from set algebra over a few
/// primitives. Primitive boundaries are excluded (open-set convention);
/// the complement of a disc means the complement of the closed disc, so
/// complements of discs and arcs are again open. Membership of infinity
/// is propagated symbolically through the tree.
class Domain {
 public:
  // Primitives.
  static Domain disc(Complex center, double radius);
  /// { z : Re(z * conj(normal)) < offset }, normal normalized internally.
  static Domain half_plane(Complex normal, double offset);
  static Domain full_sphere();
  /// Closed arc { e^{i t} : theta1 <= t <= theta2 } of the unit circle.
  /// Requires theta1 < theta2 <= theta1 + 2*pi.
  static Domain closed_arc(double theta1, double theta2);

  // Combinators.
  static Domain complement(Domain d);
  static Domain intersection(Domain a, Domain b);
  static Domain union_of(Domain a, Domain b);

  /// Open membership: true iff z lies in the open set.
  bool contains(const ExtendedPoint& z) const;
  bool contains(Complex z) const;
  /// Closure membership (used for complements and boundedness).
  bool closure_contains(const ExtendedPoint& z) const;

  bool contains_zero() const { return contains_zero_; }
  bool contains_infinity() const { return contains_infinity_; }
  bool bounded_in_plane() const { return bounded_in_plane_; }

  /// Representative points of every primitive in the tree, used by the
  /// quadrature to avoid missing components smaller than a probe grid.
  const std::vector<ExtendedPoint>& feature_points() const {
    return features_;
  }

  /// Config-syntax description, e.g. "complement(arc(0, 3.14159265))".
  std::string describe() const;

  struct Node;

 private:
  explicit Domain(std::shared_ptr<const Node> root);
  std::shared_ptr<const Node> root_;
  bool contains_zero_ = false;
  bool contains_infinity_ = false;
  bool bounded_in_plane_ = false;
  std::vector<ExtendedPoint> features_;
};

/// alpha in Omega* = 1/(sphere \ Omega), i.e. 1/alpha not in Omega
/// (with 1/0 = infinity).
bool star_contains(const Domain& domain, Complex alpha);

/// Maximal arcs of Omega* on the unit circle found by angular scan.
struct StarArcs {
  /// Disjoint arcs (theta1, theta2) with theta1 in [-pi, pi) and
  /// theta2 - theta1 <= 2*pi. A single arc of length 2*pi is the full
  /// circle.
  std::vector<std::pair<double, double>> arcs;
  double resolution = 0.0;

  bool empty() const { return arcs.empty(); }
  bool full_circle() const;
};

/// Scans the circle at the given angular resolution and bisects the
/// transitions to resolution/2^10. Reported arcs are conservative:
/// subsets of the true set up to endpoint tolerance. An empty result
/// means Omega* misses the circle; it is not a failure.
StarArcs star_arcs(const Domain& domain, double resolution);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Diagnostics {
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Standing hypotheses: 0 in Omega, and exactly one of "bounded in the
/// plane" / "contains infinity".
Diagnostics validate(const Domain& domain);

}  // namespace bergdyn::geom
