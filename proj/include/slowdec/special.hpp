#pragma once

#include <cmath>
#include <complex>

namespace slowdec {

inline constexpr double kPi = 3.14159265358979323846;

// sin(pi*x) with exact argument reduction; plain std::sin(pi*x) loses the
// phase entirely once pi*x no longer rounds well (x ~ 1e5 and up).
inline double sinpi(double x) {
  double r = std::remainder(x, 2.0);  // r in [-1, 1], x = 2k + r exactly
  double a = std::abs(r);
  double s;
  if (a <= 0.25)
    s = std::sin(kPi * a);
  else if (a <= 0.75)
    s = std::cos(kPi * (0.5 - a));
  else
    s = std::sin(kPi * (1.0 - a));
  return r < 0 ? -s : s;
}

inline double cospi(double x) {
  double r = std::abs(std::remainder(x, 2.0));
  if (r <= 0.25) return std::cos(kPi * r);
  if (r < 0.75) return std::sin(kPi * (0.5 - r));
  return -std::cos(kPi * (1.0 - r));
}

// ln|sin(pi z)|, stable for large |Im z| (never forms cosh/sinh directly).
inline double log_abs_sinpi(std::complex<double> z) {
  double x = z.real(), y = z.imag();
  double ay = kPi * std::abs(y);
  if (ay > 20.0) {
    // |sin(pi z)| = e^{pi|y|}/2 * |1 - e^{2 pi i x} e^{-2 pi |y|}|
    double ex = std::exp(-2.0 * ay);
    return ay - std::log(2.0) + 0.5 * std::log1p(ex * (ex - 2.0 * cospi(2.0 * x)));
  }
  double sp = sinpi(x), cp = cospi(x);
  double sh = std::sinh(kPi * y), ch = std::cosh(kPi * y);
  // |sin(pi(x+iy))|^2 = sin^2(pi x) cosh^2 + cos^2(pi x) sinh^2
  double m2 = sp * sp * ch * ch + cp * cp * sh * sh;
  return 0.5 * std::log(m2);
}

// ln|sin(pi z)/(pi z)| with the removable singularity at z = 0 handled.
inline double log_abs_sinc_pi(std::complex<double> z) {
  double az = std::abs(z);
  if (az < 1e-8) {
    // sin(pi z)/(pi z) = 1 - (pi z)^2/6 + ...
    std::complex<double> w = kPi * z;
    return std::log(std::abs(1.0 - w * w / 6.0));
  }
  return log_abs_sinpi(z) - std::log(kPi * az);
}

}  // namespace slowdec
