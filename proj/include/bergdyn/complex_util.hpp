#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace bergdyn {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// e^{i*theta} on the unit circle.
inline Complex unit_point(double theta) { return std::polar(1.0, theta); }

/// Integer power of a complex number, stable for large |n|. The
/// power-1 case returns the base bit-exactly (representation-level
/// identities rely on it). 0^0 = 1; negative powers of 0 are rejected.
inline Complex cpow_int(Complex base, long n) {
  if (n == 0) return Complex(1.0, 0.0);
  if (n == 1) return base;
  if (base == Complex(0.0, 0.0)) {
    if (n > 0) return Complex(0.0, 0.0);
    throw std::domain_error("cpow_int: negative power of zero");
  }
  if (n == -1) return 1.0 / base;
  const double r = std::abs(base);
  const double phi = std::arg(base);
  return std::polar(std::pow(r, static_cast<double>(n)),
                    static_cast<double>(n) * phi);
}

/// Reduce an angle to [0, 2*pi).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

/// Point on the Riemann sphere: a finite complex number or infinity.
class ExtendedPoint {
 public:
  ExtendedPoint() : value_(0.0, 0.0), infinite_(false) {}

  static ExtendedPoint infinity() {
    ExtendedPoint p;
    p.infinite_ = true;
    return p;
  }

  static ExtendedPoint finite(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("ExtendedPoint: non-finite components");
    ExtendedPoint p;
    p.value_ = z;
    return p;
  }

  bool is_infinity() const { return infinite_; }

  Complex value() const {
    if (infinite_)
      throw std::logic_error("ExtendedPoint: value() of infinity");
    return value_;
  }

  friend bool operator==(const ExtendedPoint& a, const ExtendedPoint& b) {
    if (a.infinite_ != b.infinite_) return false;
    return a.infinite_ || a.value_ == b.value_;
  }

 private:
  Complex value_;
  bool infinite_;
};

/// 1/z on the sphere, with 0 <-> infinity.
inline ExtendedPoint reciprocal(const ExtendedPoint& z) {
  if (z.is_infinity()) return ExtendedPoint::finite(Complex(0.0, 0.0));
  const Complex v = z.value();
  if (v == Complex(0.0, 0.0)) return ExtendedPoint::infinity();
  return ExtendedPoint::finite(1.0 / v);
}

inline ExtendedPoint reciprocal(Complex z) {
  return reciprocal(ExtendedPoint::finite(z));
}

}  // namespace bergdyn
