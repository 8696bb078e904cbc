#pragma once

// Root-of-unity parameter arithmetic.  The anisotropy angle is always an
// exact integer fraction of pi: eta = pi * num / den.  Order and dimension
// follow from the reduced fraction, never from floating-point search, since
// membership of Delta in the dense countable admissible set is an arithmetic
// property of the fraction.

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

namespace qlxxz {

using cplx = std::complex<double>;

struct RootOfUnityAnisotropy {
  long eta_num = 0;     // reduced fraction: eta = pi * eta_num / eta_den
  long eta_den = 1;
  double eta = 0.0;     // radians, in [0, 2*pi)
  std::complex<double> q{1.0, 0.0};
  int order_d = 1;      // smallest d > 0 with q^d = 1
  int rep_dim_m = 1;    // d if d odd, d/2 if d even
  double delta = 1.0;   // cos(eta)
  bool admissible = false;  // q^m = 1, i.e. d odd
};

inline RootOfUnityAnisotropy anisotropy_from_angle(long num, long den) {
  if (den == 0) throw std::invalid_argument("anisotropy_from_angle: zero denominator");
  if (den < 0) { den = -den; num = -num; }
  if (num < 0 || num >= 2 * den)
    throw std::invalid_argument("anisotropy_from_angle: eta must lie in [0, 2*pi)");
  const long g = std::gcd(num, den);
  num /= g;
  den /= g;

  RootOfUnityAnisotropy a;
  a.eta_num = num;
  a.eta_den = den;
  a.eta = M_PI * static_cast<double>(num) / static_cast<double>(den);
  a.q = std::polar(1.0, a.eta);
  // q^d = 1  <=>  d*num = 0 (mod 2*den)
  a.order_d = static_cast<int>(2 * den / std::gcd(num, 2 * den));
  a.rep_dim_m = (a.order_d % 2 == 1) ? a.order_d : a.order_d / 2;
  a.delta = std::cos(a.eta);
  a.admissible = (a.order_d % 2 == 1);
  return a;
}

/// sin(k*eta) and cos(k*eta), the ubiquitous shorthands s_k, c_k.
inline double s_k(const RootOfUnityAnisotropy& a, int k) {
  return std::sin(k * a.eta);
}
inline double c_k(const RootOfUnityAnisotropy& a, int k) {
  return std::cos(k * a.eta);
}

}  // namespace qlxxz
