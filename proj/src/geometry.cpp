#include "bergdyn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bergdyn::geom {

namespace {
// Points within this distance of a primitive boundary count as boundary:
// excluded from open membership, included in closure membership. Keeps
// reciprocal images of circle points classified as the closed set they
// mathematically lie on.
constexpr double kBoundaryTol = 1e-12;
constexpr double kCircleTol = 1e-12;
}

struct Domain::Node {
  enum class Kind {
    Disc,
    HalfPlane,
    FullSphere,
    ClosedArc,
    Complement,
    Intersection,
    Union
  };

  Kind kind;
  Complex center;         // Disc
  double radius = 0.0;    // Disc
  Complex normal;         // HalfPlane
  double offset = 0.0;    // HalfPlane
  double theta1 = 0.0;    // ClosedArc
  double theta2 = 0.0;    // ClosedArc
  std::shared_ptr<const Node> left, right;
};

namespace {

using Node = Domain::Node;
using Kind = Node::Kind;

bool open_member(const Node& n, const ExtendedPoint& z);
bool closed_member(const Node& n, const ExtendedPoint& z);

bool on_closed_arc(const Node& n, const ExtendedPoint& z) {
  if (z.is_infinity()) return false;
  const Complex v = z.value();
  if (std::abs(std::abs(v) - 1.0) > kCircleTol) return false;
  const double phi = std::arg(v);
  double delta = wrap_angle(phi - n.theta1);
  const double len = n.theta2 - n.theta1;
  return delta <= len || delta >= kTwoPi - kCircleTol;
}

bool open_member(const Node& n, const ExtendedPoint& z) {
  switch (n.kind) {
    case Kind::Disc:
      return !z.is_infinity() &&
             std::abs(z.value() - n.center) < n.radius - kBoundaryTol;
    case Kind::HalfPlane:
      return !z.is_infinity() &&
             (z.value() * std::conj(n.normal)).real() <
                 n.offset - kBoundaryTol;
    case Kind::FullSphere:
      return true;
    case Kind::ClosedArc:
      return false;  // empty interior
    case Kind::Complement:
      return !closed_member(*n.left, z);
    case Kind::Intersection:
      return open_member(*n.left, z) && open_member(*n.right, z);
    case Kind::Union:
      return open_member(*n.left, z) || open_member(*n.right, z);
  }
  return false;
}

bool closed_member(const Node& n, const ExtendedPoint& z) {
  switch (n.kind) {
    case Kind::Disc:
      return !z.is_infinity() &&
             std::abs(z.value() - n.center) <= n.radius + kBoundaryTol;
    case Kind::HalfPlane:
      // The closure of a half plane on the sphere contains infinity.
      return z.is_infinity() ||
             (z.value() * std::conj(n.normal)).real() <=
                 n.offset + kBoundaryTol;
    case Kind::FullSphere:
      return true;
    case Kind::ClosedArc:
      return on_closed_arc(n, z);
    case Kind::Complement:
      return !open_member(*n.left, z);
    case Kind::Intersection:
      return closed_member(*n.left, z) && closed_member(*n.right, z);
    case Kind::Union:
      return closed_member(*n.left, z) || closed_member(*n.right, z);
  }
  return false;
}

void collect_features(const Node& n, std::vector<ExtendedPoint>& out) {
  switch (n.kind) {
    case Kind::Disc: {
      out.push_back(ExtendedPoint::finite(n.center));
      const double r = 0.5 * n.radius;
      out.push_back(ExtendedPoint::finite(n.center + Complex(r, 0)));
      out.push_back(ExtendedPoint::finite(n.center - Complex(r, 0)));
      out.push_back(ExtendedPoint::finite(n.center + Complex(0, r)));
      out.push_back(ExtendedPoint::finite(n.center - Complex(0, r)));
      break;
    }
    case Kind::HalfPlane: {
      const Complex foot = n.normal * (n.offset - 1.0);
      out.push_back(ExtendedPoint::finite(foot));
      out.push_back(ExtendedPoint::finite(foot + Complex(0, 1) * n.normal));
      out.push_back(ExtendedPoint::finite(foot - Complex(0, 1) * n.normal));
      break;
    }
    case Kind::FullSphere:
      break;
    case Kind::ClosedArc: {
      out.push_back(ExtendedPoint::finite(unit_point(n.theta1)));
      out.push_back(ExtendedPoint::finite(unit_point(n.theta2)));
      out.push_back(
          ExtendedPoint::finite(unit_point(0.5 * (n.theta1 + n.theta2))));
      break;
    }
    case Kind::Complement:
      collect_features(*n.left, out);
      break;
    case Kind::Intersection:
    case Kind::Union:
      collect_features(*n.left, out);
      collect_features(*n.right, out);
      break;
  }
}

std::string describe_node(const Node& n) {
  std::ostringstream os;
  os.precision(17);
  switch (n.kind) {
    case Kind::Disc:
      if (n.center.imag() == 0.0)
        os << "disc(" << n.center.real() << ", " << n.radius << ")";
      else
        os << "disc(" << n.center.real() << ", " << n.center.imag() << ", "
           << n.radius << ")";
      break;
    case Kind::HalfPlane:
      os << "halfplane(" << n.normal.real() << ", " << n.normal.imag() << ", "
         << n.offset << ")";
      break;
    case Kind::FullSphere:
      os << "sphere";
      break;
    case Kind::ClosedArc:
      os << "arc(" << n.theta1 << ", " << n.theta2 << ")";
      break;
    case Kind::Complement:
      os << "complement(" << describe_node(*n.left) << ")";
      break;
    case Kind::Intersection:
      os << "intersect(" << describe_node(*n.left) << ", "
         << describe_node(*n.right) << ")";
      break;
    case Kind::Union:
      os << "union(" << describe_node(*n.left) << ", "
         << describe_node(*n.right) << ")";
      break;
  }
  return os.str();
}

}  // namespace

Domain::Domain(std::shared_ptr<const Node> root) : root_(std::move(root)) {
  contains_zero_ = contains(ExtendedPoint::finite(Complex(0, 0)));
  contains_infinity_ = contains(ExtendedPoint::infinity());
  bounded_in_plane_ = !closure_contains(ExtendedPoint::infinity());
  collect_features(*root_, features_);
  features_.push_back(ExtendedPoint::finite(Complex(0, 0)));
  features_.push_back(ExtendedPoint::infinity());
}

Domain Domain::disc(Complex center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("disc: radius must be positive");
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag()))
    throw std::invalid_argument("disc: non-finite center");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Disc;
  n->center = center;
  n->radius = radius;
  return Domain(n);
}

Domain Domain::half_plane(Complex normal, double offset) {
  const double mag = std::abs(normal);
  if (!(mag > 0.0) || !std::isfinite(mag) || !std::isfinite(offset))
    throw std::invalid_argument("half_plane: bad normal or offset");
  auto n = std::make_shared<Node>();
  n->kind = Kind::HalfPlane;
  n->normal = normal / mag;
  n->offset = offset;
  return Domain(n);
}

Domain Domain::full_sphere() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::FullSphere;
  return Domain(n);
}

Domain Domain::closed_arc(double theta1, double theta2) {
  if (!std::isfinite(theta1) || !std::isfinite(theta2) || !(theta1 < theta2) ||
      !(theta2 <= theta1 + kTwoPi))
    throw std::invalid_argument(
        "closed_arc: need theta1 < theta2 <= theta1 + 2*pi");
  auto n = std::make_shared<Node>();
  n->kind = Kind::ClosedArc;
  n->theta1 = theta1;
  n->theta2 = theta2;
  return Domain(n);
}

Domain Domain::complement(Domain d) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Complement;
  n->left = d.root_;
  return Domain(n);
}

Domain Domain::intersection(Domain a, Domain b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Intersection;
  n->left = a.root_;
  n->right = b.root_;
  return Domain(n);
}

Domain Domain::union_of(Domain a, Domain b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Union;
  n->left = a.root_;
  n->right = b.root_;
  return Domain(n);
}

bool Domain::contains(const ExtendedPoint& z) const {
  return open_member(*root_, z);
}

bool Domain::contains(Complex z) const {
  return contains(ExtendedPoint::finite(z));
}

bool Domain::closure_contains(const ExtendedPoint& z) const {
  return closed_member(*root_, z);
}

std::string Domain::describe() const { return describe_node(*root_); }

bool star_contains(const Domain& domain, Complex alpha) {
  return !domain.contains(reciprocal(alpha));
}

bool StarArcs::full_circle() const {
  return arcs.size() == 1 && arcs[0].second - arcs[0].first >= kTwoPi - 1e-9;
}

StarArcs star_arcs(const Domain& domain, double resolution) {
  if (!(resolution > 0.0))
    throw std::invalid_argument("star_arcs: resolution must be positive");

  StarArcs out;
  out.resolution = resolution;

  const int n = std::max(8, static_cast<int>(std::ceil(kTwoPi / resolution)));
  const double step = kTwoPi / n;
  std::vector<bool> member(n);
  for (int j = 0; j < n; ++j)
    member[j] = star_contains(domain, unit_point(-kPi + j * step));

  const bool any_in = std::find(member.begin(), member.end(), true) !=
                      member.end();
  if (!any_in) return out;
  const bool any_out = std::find(member.begin(), member.end(), false) !=
                       member.end();
  if (!any_out) {
    out.arcs.emplace_back(-kPi, kPi);
    return out;
  }

  // Bisect each transition; keep the endpoint on the inside of the set so
  // reported arcs are conservative.
  auto refine = [&](double t_in, double t_out) {
    for (int i = 0; i < 10; ++i) {
      const double mid = 0.5 * (t_in + t_out);
      if (star_contains(domain, unit_point(mid)))
        t_in = mid;
      else
        t_out = mid;
    }
    return t_in;
  };

  // Walk the circle once; collect (rise, fall) pairs in scan coordinates.
  std::vector<double> rises, falls;
  for (int j = 0; j < n; ++j) {
    const int k = (j + 1) % n;
    const double tj = -kPi + j * step;
    const double tk = tj + step;
    if (!member[j] && member[k]) rises.push_back(refine(tk, tj));
    if (member[j] && !member[k]) falls.push_back(refine(tj, tk));
  }

  // Pair each rise with the next fall, wrapping across -pi, then
  // center the representation so midpoints land in [-pi, pi).
  for (double r : rises) {
    double len = kTwoPi;
    for (double f : falls) {
      double d = f - r;
      if (d <= 0) d += kTwoPi;
      len = std::min(len, d);
    }
    double mid = r + 0.5 * len;
    mid -= kTwoPi * std::floor((mid + kPi) / kTwoPi);
    out.arcs.emplace_back(mid - 0.5 * len, mid + 0.5 * len);
  }
  std::sort(out.arcs.begin(), out.arcs.end());
  return out;
}

Diagnostics validate(const Domain& domain) {
  Diagnostics d;

  CheckResult zero;
  zero.name = "zero_in_domain";
  zero.pass = domain.contains_zero();
  if (!zero.pass) zero.detail = "0 is not in Omega";
  d.checks.push_back(zero);

  CheckResult extent;
  extent.name = "bounded_or_contains_infinity";
  const bool b = domain.bounded_in_plane();
  const bool i = domain.contains_infinity();
  extent.pass = (b != i);
  if (!extent.pass) {
    extent.detail = b ? "both bounded and containing infinity"
                      : "neither bounded in the plane nor containing infinity";
  }
  d.checks.push_back(extent);

  return d;
}

}  // namespace bergdyn::geom
