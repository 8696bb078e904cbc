#pragma once

// Quasilocal charge families X_n(phi): local terms q_r, extensive assembly,
// the auxiliary transfer matrix T(phi, phi'), and the Hilbert-Schmidt kernel
// in closed, series and finite-n form.
//
// Family 1 couples <1| ... |m-1> with sigma^- boundaries, family 2 couples
// <m-1| ... |1> with sigma^+ boundaries, family 3 couples <m-1| ... |1> with
// sigma^- boundaries.  Every string of q_r carries a net surplus of +m
// (family 2) or -m (families 1 and 3) raising labels, so the charges shift
// the total magnetization instead of conserving it.

#include <Eigen/Dense>

#include "qlxxz/lax.hpp"
#include "qlxxz/pauli.hpp"

namespace qlxxz {

struct pole_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct ChargeFamily {
  int family = 2;  // 1, 2, 3
  RootOfUnityAnisotropy aniso;
  cplx phi{M_PI / 2.0, 0.0};
};

/// Kernel formulas require |Re phi - pi/2| < pi/(2m).
inline bool in_strip(const RootOfUnityAnisotropy& a, cplx phi) {
  return std::abs(phi.real() - M_PI / 2.0) < M_PI / (2.0 * a.rep_dim_m);
}
inline bool in_strip(const ChargeFamily& cf) { return in_strip(cf.aniso, cf.phi); }

struct LocalTerm {
  int r = 0;
  PauliOperator op;
};

namespace detail {

struct FamilyGeometry {
  int bra;        // auxiliary index of the bra vector
  int ket;        // auxiliary index of the ket vector
  char boundary;  // physical label at both ends of q_r
};

inline FamilyGeometry family_geometry(int family, int m) {
  switch (family) {
    case 1: return {1, m - 1, '-'};
    case 2: return {m - 1, 1, '+'};
    case 3: return {m - 1, 1, '-'};
    default: throw std::invalid_argument("family must be 1, 2 or 3");
  }
}

inline void local_term_dfs(const std::array<Eigen::MatrixXcd, 4>& base, int ket,
                           int steps_left, const Eigen::RowVectorXcd& row,
                           std::string& interior, char boundary,
                           PauliOperator& out) {
  if (steps_left == 0) {
    const cplx coeff = row(ket);
    if (coeff != cplx(0.0))
      out.terms.emplace_hint(out.terms.end(),
                             boundary + interior + boundary, coeff);
    return;
  }
  for (char c : kLabels) {
    const Eigen::RowVectorXcd next = row * base[label_index(c)];
    if (next.cwiseAbs().maxCoeff() == 0.0) continue;
    interior.push_back(c);
    local_term_dfs(base, ket, steps_left - 1, next, interior, boundary, out);
    interior.pop_back();
  }
}

}  // namespace detail

/// q_r(phi) = sum over interiors <bra| L~^{mu_2} ... L~^{mu_{r-1}} |ket>
/// sigma^b (x) sigma^{mu_2} (x) ... (x) sigma^b, zero whenever r < m.
inline LocalTerm local_term(const ChargeFamily& cf, int r) {
  if (r < 2) throw std::invalid_argument("local_term: need r >= 2");
  if (r > kMaxTransferSites + 2)
    throw std::length_error("local_term: interior enumeration guard exceeded");
  const RescaledLaxComponents rl = rescaled_lax(cf.family, cf.aniso, cf.phi);
  const auto geom = detail::family_geometry(cf.family, rl.m);
  LocalTerm lt;
  lt.r = r;
  lt.op = PauliOperator(r);
  Eigen::RowVectorXcd bra = Eigen::RowVectorXcd::Zero(rl.m);
  bra(geom.bra) = 1.0;
  std::string interior;
  interior.reserve(r - 2);
  detail::local_term_dfs(rl.base, geom.ket, r - 2, bra, interior, geom.boundary,
                         lt.op);
  lt.op.canonicalize();
  return lt;
}

/// X_n(phi) = sum_{r=2}^{n} sum_{x=0}^{n-1} shift^x(q_r (x) 1^{n-r}).
inline PauliOperator assemble_charge(const ChargeFamily& cf, int n) {
  if (n < 2) throw std::invalid_argument("assemble_charge: need n >= 2");
  if (n > kMaxTransferSites)
    throw std::length_error("assemble_charge: resource guard exceeded");
  PauliOperator x(n);
  for (int r = 2; r <= n; ++r) {
    const LocalTerm q = local_term(cf, r);
    if (q.op.empty()) continue;
    for (const auto& [s, c] : q.op.terms) {
      std::string padded = s + std::string(n - r, '0');
      for (int sh = 0; sh < n; ++sh) {
        x.terms[padded] += c;
        std::rotate(padded.begin(), padded.begin() + 1, padded.end());
      }
    }
  }
  x.canonicalize();
  return x;
}

/// Independent route to X_n: analytic coupling derivative of the transfer
/// matrix, i.e. the sum over single insertions of the derivative Lax
/// component into the length-n coefficient trace, normalized by
/// (sin eta)^2 (sin phi)^{n-2}.
inline PauliOperator derivative_route_charge(const ChargeFamily& cf, int n) {
  if (n < 2) throw std::invalid_argument("derivative_route_charge: need n >= 2");
  if (n > kMaxTransferSites)
    throw std::length_error("derivative_route_charge: resource guard exceeded");
  const Representation rep0 = family_base_representation(cf.family, cf.aniso);
  const LaxComponents lc = lax_components(rep0, cf.phi);
  const RescaledLaxComponents rl = rescaled_lax(cf.family, cf.aniso, cf.phi);
  const int m = rep0.m;

  // tr(dL L^{mu_2} ... L^{mu_n}) = sin(eta) <b| L^{mu_2} ... L^{mu_n} |a>
  // for dL = sin(eta) |a><b|.
  int a_idx = 0, b_idx = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (rl.derivative(i, j) != cplx(0.0)) { a_idx = i; b_idx = j; }

  const double se = std::sin(cf.aniso.eta);
  const cplx norm =
      se / (se * se * std::pow(std::sin(cf.phi), n - 2));

  PauliOperator x(n);
  Eigen::RowVectorXcd bra = Eigen::RowVectorXcd::Zero(m);
  bra(b_idx) = 1.0;

  // depth-first over (mu_2 ... mu_n) with the bra-row partial product
  struct Frame { Eigen::RowVectorXcd row; };
  std::string labels(1, rl.derivative_label);
  auto rec = [&](auto&& self, const Eigen::RowVectorXcd& row, int depth) -> void {
    if (depth == n) {
      const cplx coeff = norm * row(a_idx);
      if (coeff == cplx(0.0)) return;
      std::string padded = labels;
      for (int sh = 0; sh < n; ++sh) {
        x.terms[padded] += coeff;
        std::rotate(padded.begin(), padded.begin() + 1, padded.end());
      }
      return;
    }
    for (char c : kLabels) {
      const Eigen::RowVectorXcd next = row * lc[c];
      if (next.cwiseAbs().maxCoeff() == 0.0) continue;
      labels.push_back(c);
      self(self, next, depth + 1);
      labels.pop_back();
    }
  };
  rec(rec, bra, 1);
  x.canonicalize();
  return x;
}

/// Hilbert-Schmidt distance between the two construction routes; the
/// assembled charge and the transfer-matrix derivative must coincide.
inline double derivative_cross_check(const ChargeFamily& cf, int n) {
  return hs_norm(assemble_charge(cf, n) - derivative_route_charge(cf, n));
}

struct SpinFlipResiduals {
  double parity = 0.0;     // || q^{f1}(phi) - P q^{f2}(phi) P ||
  double transpose = 0.0;  // || q^{f1}(phi) - (q^{f2}(pi - phi))^T ||
};

/// Checks the family identities q(1) = P q(2) P = (q(2)(pi-phi))^T (and, via
/// family choice, q(3) = q(1)); residuals in HS norm.
inline SpinFlipResiduals spin_flip_relations(const ChargeFamily& cf1,
                                             const ChargeFamily& cf2, int r) {
  const PauliOperator q1 = local_term(cf1, r).op;
  const PauliOperator q2 = local_term(cf2, r).op;
  ChargeFamily mirrored = cf2;
  mirrored.phi = M_PI - cf2.phi;
  const PauliOperator q2m = local_term(mirrored, r).op;
  SpinFlipResiduals res;
  res.parity = hs_norm(q1 - parity_conjugate(q2));
  res.transpose = hs_norm(q1 - transpose_op(q2m));
  return res;
}

struct AuxTransfer {
  cplx phi{0.0}, phi_prime{0.0};
  // Acts on span{|1>, ..., |m-1>}; entry (j, k) couples rungs j+1 and k+1.
  Eigen::MatrixXcd matrix;
};

/// T(phi,phi') = sum_k (c_k^2 + cot phi cot phi' s_k^2) |k><k|
///             + sum_k |s_k s_{k+1}| / (2 sin phi sin phi') (|k><k+1| + h.c.)
inline AuxTransfer aux_transfer(const RootOfUnityAnisotropy& a, cplx phi,
                                cplx phi_prime) {
  const int m = a.rep_dim_m;
  AuxTransfer t;
  t.phi = phi;
  t.phi_prime = phi_prime;
  t.matrix = Eigen::MatrixXcd::Zero(m - 1, m - 1);
  const cplx cot1 = std::cos(phi) / std::sin(phi);
  const cplx cot2 = std::cos(phi_prime) / std::sin(phi_prime);
  for (int k = 1; k <= m - 1; ++k) {
    const double ck = c_k(a, k), sk = s_k(a, k);
    t.matrix(k - 1, k - 1) = ck * ck + cot1 * cot2 * sk * sk;
  }
  const cplx off_denom = 2.0 * std::sin(phi) * std::sin(phi_prime);
  for (int k = 1; k <= m - 2; ++k) {
    const cplx v = std::abs(s_k(a, k) * s_k(a, k + 1)) / off_denom;
    t.matrix(k - 1, k) = v;
    t.matrix(k, k - 1) = v;
  }
  return t;
}

inline double aux_spectral_radius(const AuxTransfer& t) {
  return t.matrix.eigenvalues().cwiseAbs().maxCoeff();
}

struct OverlapIdentity {
  cplx lhs{0.0};  // tr(q_r(phi)^T q_r(phi')) / 2^r
  cplx rhs{0.0};  // (1/4) <m-1| T(phi,phi')^{r-2} |1>
};

inline OverlapIdentity overlap_identity_check(const ChargeFamily& cf, int r,
                                              cplx phi, cplx phi_prime) {
  ChargeFamily a = cf, b = cf;
  a.phi = phi;
  b.phi = phi_prime;
  OverlapIdentity oi;
  oi.lhs = hs_bilinear(local_term(a, r).op, local_term(b, r).op);
  if (r >= 2) {
    const AuxTransfer t = aux_transfer(cf.aniso, phi, phi_prime);
    const int m = cf.aniso.rep_dim_m;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m - 1);
    v(0) = 1.0;  // |1> in rung coordinates
    for (int p = 0; p < r - 2; ++p) v = t.matrix * v;
    oi.rhs = 0.25 * v(m - 2);
  }
  return oi;
}

/// Closed-form Hilbert-Schmidt kernel
///   K = sin phi sin phi' sin(phi+phi') / (2 sin^2 eta sin(m(phi+phi'))),
/// with the removable points phi+phi' = k*pi (m odd) evaluated in the limit
/// K = sin phi sin phi' / (2 m sin^2 eta).  A switch-over window of 1e-6
/// avoids the 0/0 cancellation in double precision.
inline cplx kernel_closed_form(const RootOfUnityAnisotropy& a, cplx phi,
                               cplx phi_prime) {
  const int m = a.rep_dim_m;
  const double se = std::sin(a.eta);
  const cplx z = phi + phi_prime;
  const double kq = std::round(z.real() / M_PI);
  if (std::abs(z - kq * M_PI) < 1e-6)
    return std::sin(phi) * std::sin(phi_prime) / (2.0 * m * se * se);
  const double jq = std::round((static_cast<double>(m) * z).real() / M_PI);
  if (std::abs(z - jq * M_PI / static_cast<double>(m)) < 1e-9 &&
      std::lround(jq) % m != 0)
    throw pole_error("kernel_closed_form: sin(m(phi+phi')) pole");
  return std::sin(phi) * std::sin(phi_prime) * std::sin(z) /
         (2.0 * se * se * std::sin(static_cast<double>(m) * z));
}

/// Partial sums sum_{r=m}^{R} (1/4) <m-1| T^{r-2} |1>; converges
/// geometrically to the closed form inside the strip.
inline cplx kernel_partial_sum(const RootOfUnityAnisotropy& a, cplx phi,
                               cplx phi_prime, int R) {
  const int m = a.rep_dim_m;
  const AuxTransfer t = aux_transfer(a, phi, phi_prime);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m - 1);
  v(0) = 1.0;
  cplx acc = 0.0;
  for (int r = 2; r <= R; ++r) {
    if (r >= m) acc += 0.25 * v(m - 2);
    v = t.matrix * v;
  }
  return acc;
}

/// Finite-size kernel (1/n) (X_n(conj phi), X_n(phi')); approaches the
/// closed form as n grows.
inline cplx finite_n_kernel(const ChargeFamily& cf, int n, cplx phi_prime) {
  ChargeFamily left = cf, right = cf;
  left.phi = std::conj(cf.phi);
  right.phi = phi_prime;
  return hs_inner(assemble_charge(left, n), assemble_charge(right, n)) /
         static_cast<double>(n);
}

inline cplx finite_n_kernel(const ChargeFamily& cf, int n) {
  return finite_n_kernel(cf, n, cf.phi);
}

}  // namespace qlxxz
