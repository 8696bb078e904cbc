#pragma once

// Lax operators over an auxiliary representation space, the trigonometric
// R-matrix, fundamental-commutation-relation residuals on the triple tensor
// product, and transfer matrices V_n(phi) on the physical chain.
//
// Spectral parameters follow x = exp(i*phi) throughout; "generic phi" in
// tests means 0.9 + 0.2i by convention.

#include <Eigen/Dense>
#include <array>

#include "qlxxz/dense.hpp"
#include "qlxxz/pauli.hpp"
#include "qlxxz/representation.hpp"

namespace qlxxz {

/// Generic spectral parameter used by deterministic tests.
inline constexpr cplx kGenericPhi{0.9, 0.2};

inline int label_index(char c) {
  switch (c) {
    case '+': return 0;
    case '-': return 1;
    case '0': return 2;
    default: return 3;  // 'z'
  }
}

struct LaxComponents {
  cplx phi{0.0};
  int m = 0;
  // Indexed per label_index: L^+, L^-, L^0, L^z.
  std::array<Eigen::MatrixXcd, 4> comps;

  const Eigen::MatrixXcd& operator[](char c) const { return comps[label_index(c)]; }
  Eigen::MatrixXcd& operator[](char c) { return comps[label_index(c)]; }
};

/// L^0 = sin(phi) cos(eta Sz), L^z = cos(phi) sin(eta Sz),
/// L^{+-} = sin(eta) S^{-+}  (note the index swap).
inline LaxComponents lax_components(const Representation& rep, cplx phi) {
  LaxComponents lc;
  lc.phi = phi;
  lc.m = rep.m;
  const int m = rep.m;
  Eigen::MatrixXcd cos_sz = Eigen::MatrixXcd::Zero(m, m);
  Eigen::MatrixXcd sin_sz = Eigen::MatrixXcd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    cos_sz(k, k) = std::cos(rep.eta * rep.Sz(k, k));
    sin_sz(k, k) = std::sin(rep.eta * rep.Sz(k, k));
  }
  const double se = std::sin(rep.eta);
  lc['0'] = std::sin(phi) * cos_sz;
  lc['z'] = std::cos(phi) * sin_sz;
  lc['+'] = se * rep.Sm;
  lc['-'] = se * rep.Sp;
  return lc;
}

/// Reassembles the 2m x 2m two-block form
///   [ sin(phi + eta Sz)   sin(eta) S^- ]
///   [ sin(eta) S^+        sin(phi - eta Sz) ]
/// directly from the representation (oracle for the component split).
inline Eigen::MatrixXcd lax_full_matrix(const Representation& rep, cplx phi) {
  const int m = rep.m;
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  for (int k = 0; k < m; ++k) {
    full(k, k) = std::sin(phi + rep.eta * rep.Sz(k, k));
    full(m + k, m + k) = std::sin(phi - rep.eta * rep.Sz(k, k));
  }
  const double se = std::sin(rep.eta);
  full.block(0, m, m, m) = se * rep.Sm;
  full.block(m, 0, m, m) = se * rep.Sp;
  return full;
}

/// Same two-block form assembled from the components, kron(sigma^mu, L^mu).
inline Eigen::MatrixXcd lax_full_from_components(const LaxComponents& lc) {
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(2 * lc.m, 2 * lc.m);
  for (char c : kLabels)
    full += kron(site_matrix(c), lc[c]);
  return full;
}

struct RescaledLaxComponents {
  int family = 2;        // 1, 2, 3
  cplx phi{0.0};
  int m = 0;
  bool admissible = true;
  // csc(phi) * L^mu at zero spin/weight and zero coupling.
  std::array<Eigen::MatrixXcd, 4> base;
  // The single nonzero coupling derivative of the unrescaled components.
  char derivative_label = '+';
  Eigen::MatrixXcd derivative;

  const Eigen::MatrixXcd& operator[](char c) const { return base[label_index(c)]; }
};

/// Representation underlying one charge family at zero parameters:
/// V1(0, 0, 0), V2(0, 0, 0) or V3(0, 0).
inline Representation family_base_representation(int family,
                                                 const RootOfUnityAnisotropy& a) {
  switch (family) {
    case 1: return build_v1(a, 0.0, 0.0, 0.0);
    case 2: return build_v2(a, 0.0, 0.0, 0.0);
    case 3: return build_v3(a, 0, 0.0);
    default: throw std::invalid_argument("family must be 1, 2 or 3");
  }
}

/// Family 1 differentiates in alpha, families 2 and 3 in beta resp. gamma:
///   d/dalpha L^- = sin(eta) |m-1><0|        (family 1)
///   d/dbeta  L^+ = sin(eta) |0><m-1|        (family 2)
///   d/dgamma L^- = sin(eta) |0><m-1|        (family 3)
inline RescaledLaxComponents rescaled_lax(int family,
                                          const RootOfUnityAnisotropy& a,
                                          cplx phi) {
  const Representation rep = family_base_representation(family, a);
  const LaxComponents lc = lax_components(rep, phi);
  RescaledLaxComponents out;
  out.family = family;
  out.phi = phi;
  out.m = rep.m;
  out.admissible = a.admissible;
  const cplx csc = 1.0 / std::sin(phi);
  for (int i = 0; i < 4; ++i) out.base[i] = csc * lc.comps[i];
  const int m = rep.m;
  out.derivative = Eigen::MatrixXcd::Zero(m, m);
  const double se = std::sin(a.eta);
  switch (family) {
    case 1:
      out.derivative_label = '-';
      out.derivative(m - 1, 0) = se;
      break;
    case 2:
      out.derivative_label = '+';
      out.derivative(0, m - 1) = se;
      break;
    default:
      out.derivative_label = '-';
      out.derivative(0, m - 1) = se;
      break;
  }
  return out;
}

/// Trigonometric R-matrix on the two-site physical space.
inline Eigen::Matrix4cd r_matrix(cplx x, cplx q) {
  const cplx a = q * x - 1.0 / (q * x);
  const cplx b = x - 1.0 / x;
  const cplx c = q - 1.0 / q;
  Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
  r(0, 0) = a;
  r(1, 1) = b;
  r(1, 2) = c;
  r(2, 1) = c;
  r(2, 2) = b;
  r(3, 3) = a;
  return r;
}

/// Frobenius norm of R12(x/y) L13(x) L23(y) - L23(y) L13(x) R12(x/y) on the
/// 4m-dimensional space H (x) H (x) V, with x = exp(i phi), y = exp(i phi').
inline double fcr_residual(const Representation& rep, cplx phi, cplx phi_prime) {
  const cplx i(0.0, 1.0);
  const cplx x = std::exp(i * phi);
  const cplx y = std::exp(i * phi_prime);
  const cplx q = std::polar(1.0, rep.eta);
  const int m = rep.m;
  const Eigen::MatrixXcd eye2 = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd eyem = Eigen::MatrixXcd::Identity(m, m);
  const LaxComponents lx = lax_components(rep, phi);
  const LaxComponents ly = lax_components(rep, phi_prime);
  Eigen::MatrixXcd l13 = Eigen::MatrixXcd::Zero(4 * m, 4 * m);
  Eigen::MatrixXcd l23 = Eigen::MatrixXcd::Zero(4 * m, 4 * m);
  for (char c : kLabels) {
    l13 += kron(kron(site_matrix(c), eye2), lx[c]);
    l23 += kron(kron(eye2, site_matrix(c)), ly[c]);
  }
  const Eigen::MatrixXcd r12 = kron(r_matrix(x / y, q), eyem);
  return (r12 * l13 * l23 - l23 * l13 * r12).norm();
}

inline constexpr int kMaxTransferSites = 12;

struct TransferMatrix {
  int n = 0;
  cplx phi{0.0};
  Representation rep;
  PauliOperator op;
};

namespace detail {

/// Depth-first sweep over label strings accumulating the auxiliary-space
/// product; coefficient of (mu_1 ... mu_n) is scale * tr(M^{mu_1}...M^{mu_n}).
/// Labels are visited in lexicographic order so insertion is append-only.
inline void transfer_dfs(const std::array<Eigen::MatrixXcd, 4>& comps, int n,
                         int depth, const Eigen::MatrixXcd& partial,
                         std::string& labels, cplx scale, PauliOperator& out) {
  if (depth == n) {
    const cplx coeff = scale * partial.trace();
    if (coeff != cplx(0.0)) out.terms.emplace_hint(out.terms.end(), labels, coeff);
    return;
  }
  for (char c : kLabels) {
    const Eigen::MatrixXcd next = partial * comps[label_index(c)];
    if (next.cwiseAbs().maxCoeff() == 0.0) continue;
    labels.push_back(c);
    transfer_dfs(comps, n, depth + 1, next, labels, scale, out);
    labels.pop_back();
  }
}

inline PauliOperator transfer_from_components(
    const std::array<Eigen::MatrixXcd, 4>& comps, int m, int n, cplx scale) {
  if (n < 2) throw std::invalid_argument("transfer matrix: need n >= 2");
  if (n > kMaxTransferSites)
    throw std::length_error("transfer matrix: contraction guard exceeded");
  PauliOperator out(n);
  std::string labels;
  labels.reserve(n);
  transfer_dfs(comps, n, 0, Eigen::MatrixXcd::Identity(m, m), labels, scale, out);
  out.canonicalize();
  return out;
}

}  // namespace detail

/// V_n(phi) = tr_a(L(phi)^{(x)_p n}): the coefficient of the string
/// (mu_1 ... mu_n) is tr(L^{mu_1} ... L^{mu_n}) over the auxiliary space.
inline TransferMatrix transfer_matrix(const Representation& rep, cplx phi, int n) {
  TransferMatrix tm;
  tm.n = n;
  tm.phi = phi;
  tm.rep = rep;
  tm.op = detail::transfer_from_components(lax_components(rep, phi).comps,
                                           rep.m, n, 1.0);
  return tm;
}

/// Frobenius norm of [V_n(phi), V_n(phi')] for the given representation.
inline double involution_residual(const Representation& rep, cplx phi,
                                  cplx phi_prime, int n) {
  const TransferMatrix a = transfer_matrix(rep, phi, n);
  const TransferMatrix b = transfer_matrix(rep, phi_prime, n);
  return commutator_frobenius(a.op, b.op);
}

}  // namespace qlxxz
