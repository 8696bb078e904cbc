#pragma once

// The three irreducible representation families of the quantum group at a
// root of unity, built entrywise in the standard basis |0>, ..., |m-1>.
// V1 and V2 carry a complex spin s and coupling pair (alpha, beta); V3
// carries an integer weight p and a single coupling gamma.  A coupling links
// |m-1> back to |0> (semicyclic case) or both corners (cyclic case).

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qlxxz/root_of_unity.hpp"

namespace qlxxz {

struct singular_parameter_error : std::domain_error {
  using std::domain_error::domain_error;
};

enum class RepKind { V1, V2, V3 };

inline const char* to_string(RepKind k) {
  switch (k) {
    case RepKind::V1: return "V1";
    case RepKind::V2: return "V2";
    default: return "V3";
  }
}

struct Representation {
  RepKind kind = RepKind::V2;
  int m = 0;
  double eta = 0.0;
  std::complex<double> spin_s{0.0};   // V1, V2
  int weight_p = 0;                   // V3
  std::complex<double> alpha{0.0};    // V1, V2
  std::complex<double> beta{0.0};     // V1, V2
  std::complex<double> gamma{0.0};    // V3
  Eigen::MatrixXcd Sz, Sp, Sm;
};

namespace detail {

inline std::complex<double> csin(std::complex<double> z) { return std::sin(z); }

inline void require_dim(const RootOfUnityAnisotropy& a) {
  if (a.rep_dim_m < 2)
    throw std::invalid_argument("representation: need m >= 2");
}

}  // namespace detail

inline Representation build_v1(const RootOfUnityAnisotropy& a,
                               std::complex<double> s,
                               std::complex<double> alpha,
                               std::complex<double> beta) {
  detail::require_dim(a);
  const int m = a.rep_dim_m;
  const double eta = a.eta;
  Representation rep;
  rep.kind = RepKind::V1;
  rep.m = m;
  rep.eta = eta;
  rep.spin_s = s;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.Sz = Eigen::MatrixXcd::Zero(m, m);
  rep.Sp = Eigen::MatrixXcd::Zero(m, m);
  rep.Sm = Eigen::MatrixXcd::Zero(m, m);
  const double se = std::sin(eta);
  for (int k = 0; k < m; ++k) rep.Sz(k, k) = s - static_cast<double>(k);
  for (int k = 0; k <= m - 2; ++k) {
    const std::complex<double> den = detail::csin((2.0 * s - static_cast<double>(k)) * eta);
    std::complex<double> diag = std::sin((k + 1) * eta) / se;
    if (alpha * beta != std::complex<double>(0.0)) {
      if (std::abs(den) < 1e-12)
        throw singular_parameter_error("V1: sin((2s-k)eta) vanishes with nonzero coupling");
      diag += alpha * beta * se / den;
    }
    rep.Sp(k, k + 1) = diag;
    rep.Sm(k + 1, k) = den / se;
  }
  rep.Sp(m - 1, 0) = alpha;
  rep.Sm(0, m - 1) = beta;
  return rep;
}

inline Representation build_v2(const RootOfUnityAnisotropy& a,
                               std::complex<double> s,
                               std::complex<double> alpha,
                               std::complex<double> beta) {
  detail::require_dim(a);
  const int m = a.rep_dim_m;
  const double eta = a.eta;
  Representation rep;
  rep.kind = RepKind::V2;
  rep.m = m;
  rep.eta = eta;
  rep.spin_s = s;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.Sz = Eigen::MatrixXcd::Zero(m, m);
  rep.Sp = Eigen::MatrixXcd::Zero(m, m);
  rep.Sm = Eigen::MatrixXcd::Zero(m, m);
  const double se = std::sin(eta);
  for (int k = 0; k < m; ++k) rep.Sz(k, k) = s - static_cast<double>(k);
  for (int k = 0; k <= m - 2; ++k) {
    const double den = std::sin((k + 1) * eta);
    std::complex<double> diag =
        detail::csin((2.0 * s - static_cast<double>(k)) * eta) / se;
    if (alpha * beta != std::complex<double>(0.0)) {
      if (std::abs(den) < 1e-12)
        throw singular_parameter_error("V2: sin((k+1)eta) vanishes with nonzero coupling");
      diag += alpha * beta * se / den;
    }
    rep.Sp(k, k + 1) = diag;
    rep.Sm(k + 1, k) = den / se;
  }
  rep.Sp(m - 1, 0) = alpha;
  rep.Sm(0, m - 1) = beta;
  return rep;
}

inline Representation build_v3(const RootOfUnityAnisotropy& a, int p,
                               std::complex<double> gamma) {
  detail::require_dim(a);
  const int m = a.rep_dim_m;
  if (p < 0 || p > m - 2)
    throw std::invalid_argument("V3: weight p must satisfy 0 <= p <= m-2");
  const double eta = a.eta;
  Representation rep;
  rep.kind = RepKind::V3;
  rep.m = m;
  rep.eta = eta;
  rep.weight_p = p;
  rep.gamma = gamma;
  rep.Sz = Eigen::MatrixXcd::Zero(m, m);
  rep.Sp = Eigen::MatrixXcd::Zero(m, m);
  rep.Sm = Eigen::MatrixXcd::Zero(m, m);
  const double se = std::sin(eta);
  for (int k = 0; k <= m - 2; ++k) rep.Sz(k, k) = k - 0.5 * p;
  rep.Sz(m - 1, m - 1) = -(0.5 * p + 1.0);
  for (int k = 0; k <= m - 2; ++k) {
    rep.Sm(k, k + 1) = std::sin((p - k) * eta) / se;
    rep.Sp(k + 1, k) = std::sin((k + 1) * eta) / se;
  }
  rep.Sp(0, m - 1) = gamma;
  return rep;
}

struct RepParams {
  std::complex<double> spin_s{0.0};
  std::complex<double> alpha{0.0};
  std::complex<double> beta{0.0};
  int weight_p = 0;
  std::complex<double> gamma{0.0};
};

inline Representation build_representation(RepKind kind,
                                           const RootOfUnityAnisotropy& a,
                                           const RepParams& p) {
  switch (kind) {
    case RepKind::V1: return build_v1(a, p.spin_s, p.alpha, p.beta);
    case RepKind::V2: return build_v2(a, p.spin_s, p.alpha, p.beta);
    default: return build_v3(a, p.weight_p, p.gamma);
  }
}

/// q^{c Sz} for diagonal Sz, defined entrywise as exp(i*c*eta*Sz).
inline Eigen::MatrixXcd q_power_sz(const Representation& rep, double c) {
  const int m = rep.m;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  const std::complex<double> i(0.0, 1.0);
  for (int k = 0; k < m; ++k)
    out(k, k) = std::exp(i * c * rep.eta * rep.Sz(k, k));
  return out;
}

/// sin(c*eta*Sz)/sin(eta) entrywise on the diagonal.
inline Eigen::MatrixXcd sin_sz_over_sin(const Representation& rep, double c) {
  const int m = rep.m;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  for (int k = 0; k < m; ++k)
    out(k, k) = std::sin(c * rep.eta * rep.Sz(k, k)) / std::sin(rep.eta);
  return out;
}

inline constexpr double kRelationTol = 1e-10;

struct RelationResidualReport {
  std::vector<std::pair<std::string, double>> residuals;
  double max_residual = 0.0;
  bool verdict = false;

  void add(std::string name, double r) {
    max_residual = std::max(max_residual, r);
    residuals.emplace_back(std::move(name), r);
  }
  void finalize() { verdict = max_residual <= kRelationTol; }
};

/// Residuals of the defining relations, with full weights q^{2 Sz}.  These
/// hold for every family at every parameter value at a root of unity.
inline RelationResidualReport check_defining_relations(const Representation& rep) {
  const std::complex<double> q = std::polar(1.0, rep.eta);
  const Eigen::MatrixXcd Q2 = q_power_sz(rep, 2.0);
  const Eigen::MatrixXcd Q2inv = q_power_sz(rep, -2.0);
  const int m = rep.m;
  RelationResidualReport rr;
  rr.add("q2Sz inverse", (Q2 * Q2inv - Eigen::MatrixXcd::Identity(m, m)).norm());
  rr.add("Sp q2Sz", (rep.Sp * Q2 - std::pow(q, -2.0) * Q2 * rep.Sp).norm());
  rr.add("Sm q2Sz", (rep.Sm * Q2 - std::pow(q, 2.0) * Q2 * rep.Sm).norm());
  rr.add("[Sp,Sm]", (rep.Sp * rep.Sm - rep.Sm * rep.Sp - sin_sz_over_sin(rep, 2.0)).norm());
  rr.finalize();
  return rr;
}

/// Residuals of the FCR-compatible set, with half weights q^{Sz}.  For a
/// coupled (semicyclic or cyclic) representation these hold iff q^m = 1,
/// i.e. iff the order of the root of unity is odd.
inline RelationResidualReport check_fcr_relations(const Representation& rep) {
  const std::complex<double> q = std::polar(1.0, rep.eta);
  const Eigen::MatrixXcd Q = q_power_sz(rep, 1.0);
  RelationResidualReport rr;
  rr.add("Sp qSz", (rep.Sp * Q - Q * rep.Sp / q).norm());
  rr.add("Sm qSz", (rep.Sm * Q - q * Q * rep.Sm).norm());
  rr.add("[Sp,Sm]", (rep.Sp * rep.Sm - rep.Sm * rep.Sp - sin_sz_over_sin(rep, 2.0)).norm());
  rr.finalize();
  return rr;
}

/// Product prod_{l=1}^{m-1} sin((2s-l+1)eta)/sin(l eta) relating the V1 and
/// V2 coupling parameters: beta2 = prod * beta1, alpha1 = prod * alpha2.
inline std::complex<double> v1_v2_coupling_product(const RootOfUnityAnisotropy& a,
                                                   std::complex<double> s) {
  std::complex<double> prod = 1.0;
  for (int l = 1; l <= a.rep_dim_m - 1; ++l)
    prod *= detail::csin((2.0 * s - static_cast<double>(l - 1)) * a.eta) /
            std::sin(l * a.eta);
  return prod;
}

/// Diagonal module isomorphism U: V2 -> V1 with U_00 = 1 and
/// U_kk = prod_{l=1}^{k} sin((2s-l+1)eta)/sin(l eta).  Throws when a diagonal
/// entry vanishes (e.g. s = 0), where the map fails to be an isomorphism.
inline Eigen::MatrixXcd isomorphism_matrix(const RootOfUnityAnisotropy& a,
                                           std::complex<double> s) {
  detail::require_dim(a);
  const int m = a.rep_dim_m;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(m, m);
  u(0, 0) = 1.0;
  std::complex<double> prod = 1.0;
  for (int k = 1; k < m; ++k) {
    prod *= detail::csin((2.0 * s - static_cast<double>(k - 1)) * a.eta) /
            std::sin(k * a.eta);
    u(k, k) = prod;
  }
  for (int k = 0; k < m; ++k)
    if (std::abs(u(k, k)) < 1e-12)
      throw singular_parameter_error("isomorphism_matrix: singular U");
  return u;
}

}  // namespace qlxxz
