#pragma once

// Dense 2^n x 2^n backend for PauliOperator.  Serves as the oracle against
// which the sparse algebra is validated and powers the exact-diagonalization
// routines.  Hard guard at n = 14 (memory wall).

#include <Eigen/Dense>

#include "qlxxz/pauli.hpp"

namespace qlxxz {

inline constexpr int kMaxDenseSites = 14;

inline void require_dense_feasible(int n) {
  if (n > kMaxDenseSites)
    throw std::length_error("dense backend limited to n <= 14 sites");
}

/// The four single-site matrices in the "+-0z" alphabet.
inline Eigen::Matrix2cd site_matrix(char c) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (c) {
    case '0': m(0, 0) = 1.0; m(1, 1) = 1.0; break;
    case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    case '+': m(0, 1) = 1.0; break;
    case '-': m(1, 0) = 1.0; break;
    default: throw std::invalid_argument("site_matrix: invalid label");
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Direct tensor-product realization of a single label string (oracle route;
/// O(4^n) per string, use only on small inputs).
inline Eigen::MatrixXcd string_matrix_kron(const std::string& s) {
  require_dense_feasible(static_cast<int>(s.size()));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : s) m = kron(m, site_matrix(c));
  return m;
}

/// Scatter realization: a string has one nonzero entry per site for +/- and
/// two for 0/z, so its matrix has 2^{#0z} nonzeros.  Site 0 is the slowest
/// (most significant) tensor factor.
inline void scatter_string(const std::string& s, cplx coeff, Eigen::MatrixXcd& out) {
  const int n = static_cast<int>(s.size());
  std::vector<int> free_sites;
  long long row = 0, col = 0;
  for (int j = 0; j < n; ++j) {
    switch (s[j]) {
      case '0': case 'z': free_sites.push_back(j); break;
      case '+': col |= 1LL << (n - 1 - j); break;           // |0><1|
      case '-': row |= 1LL << (n - 1 - j); break;           // |1><0|
    }
  }
  const int f = static_cast<int>(free_sites.size());
  for (long long mask = 0; mask < (1LL << f); ++mask) {
    long long r = row, c = col;
    double sign = 1.0;
    for (int t = 0; t < f; ++t) {
      if (mask & (1LL << t)) {
        const int j = free_sites[t];
        r |= 1LL << (n - 1 - j);
        c |= 1LL << (n - 1 - j);
        if (s[j] == 'z') sign = -sign;
      }
    }
    out(r, c) += sign * coeff;
  }
}

inline Eigen::MatrixXcd to_dense(const PauliOperator& a) {
  require_dense_feasible(a.n);
  const long long dim = 1LL << a.n;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [s, c] : a.terms) scatter_string(s, c, out);
  return out;
}

/// Expands a dense matrix back into the sparse string basis by recursive
/// 2x2 block decomposition of the leading site.
inline void pauli_from_dense_rec(const Eigen::MatrixXcd& m, std::string& prefix,
                                 PauliOperator& out) {
  if (m.rows() == 1) {
    if (m(0, 0) != cplx(0.0)) out.terms[prefix] += m(0, 0);
    return;
  }
  const Eigen::Index h = m.rows() / 2;
  const Eigen::MatrixXcd m00 = m.topLeftCorner(h, h);
  const Eigen::MatrixXcd m01 = m.topRightCorner(h, h);
  const Eigen::MatrixXcd m10 = m.bottomLeftCorner(h, h);
  const Eigen::MatrixXcd m11 = m.bottomRightCorner(h, h);
  struct Piece { char label; Eigen::MatrixXcd block; };
  const Piece pieces[4] = {{'0', 0.5 * (m00 + m11)},
                           {'+', m01},
                           {'-', m10},
                           {'z', 0.5 * (m00 - m11)}};
  for (const auto& p : pieces) {
    if (p.block.cwiseAbs().maxCoeff() == 0.0) continue;
    prefix.push_back(p.label);
    pauli_from_dense_rec(p.block, prefix, out);
    prefix.pop_back();
  }
}

inline PauliOperator pauli_from_dense(const Eigen::MatrixXcd& m, int n) {
  require_dense_feasible(n);
  if (m.rows() != (1LL << n) || m.cols() != (1LL << n))
    throw std::invalid_argument("pauli_from_dense: dimension mismatch");
  PauliOperator out(n);
  std::string prefix;
  prefix.reserve(n);
  pauli_from_dense_rec(m, prefix, out);
  out.canonicalize();
  return out;
}

/// Frobenius norm of the dense realization of AB - BA.
inline double commutator_frobenius(const PauliOperator& a, const PauliOperator& b) {
  require_same_sites(a, b);
  const Eigen::MatrixXcd da = to_dense(a);
  const Eigen::MatrixXcd db = to_dense(b);
  return (da * db - db * da).norm();
}

}  // namespace qlxxz
