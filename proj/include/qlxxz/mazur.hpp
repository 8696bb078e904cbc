#pragma once

// Spin-flip observables, their projections onto the charge families, the
// Fredholm equation for the optimal weight function over the strip, the
// resulting Mazur-Suzuki lower bound, and exact-diagonalization cross-checks
// (time-averaged Drude weights, linear-response quench steady state).

#include <Eigen/Dense>
#include <map>
#include <random>
#include <tuple>

#include "qlxxz/charges.hpp"
#include "qlxxz/dense.hpp"
#include "qlxxz/util.hpp"

namespace qlxxz {

struct SpinFlipObservable {
  int k = 1;
  int n = 1;
  PauliOperator op;
};

/// A_k = sum_x shift^x((sigma^x)^{(x) k} (x) 1^{n-k}), k odd.  Expanding
/// sigma^x = sigma^+ + sigma^- gives 2^k unit-coefficient strings per shift.
inline SpinFlipObservable build_observable(int k, int n) {
  if (k % 2 == 0) throw std::invalid_argument("build_observable: k must be odd");
  if (k < 1 || k > n) throw std::invalid_argument("build_observable: need 1 <= k <= n");
  SpinFlipObservable a;
  a.k = k;
  a.n = n;
  a.op = PauliOperator(n);
  std::string s(n, '0');
  for (long mask = 0; mask < (1L << k); ++mask) {
    for (int j = 0; j < k; ++j) s[j] = (mask >> j) & 1 ? '+' : '-';
    std::string rot = s;
    for (int sh = 0; sh < n; ++sh) {
      a.op.terms[rot] += 1.0;
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    }
  }
  a.op.canonicalize();
  return a;
}

struct ProjectionValue {
  int k = 0;
  int m = 0;
  cplx phi{0.0};
  cplx value{0.0};           // thermodynamic-limit (A_k, X(phi))/n
  cplx finite_n_value{0.0};  // (A_k, X_n(phi))/n on the n-site chain
};

namespace detail {

/// Sum over the all-raising/lowering strings of q_k of their coefficients;
/// the thermodynamic-limit projection is this over 2^k.  In the limit only
/// r = k contributes to (A_k, X_n)/n: boundary labels against identity kill
/// every bulk alignment, and the r = n seam terms (whose two boundary labels
/// sit on adjacent sites of the ring) decay geometrically with n.
inline cplx projection_sum(const ChargeFamily& cf, int k) {
  const LocalTerm q = local_term(cf, k);
  cplx acc = 0.0;
  for (const auto& [s, c] : q.op.terms) {
    bool pm_only = true;
    for (char ch : s)
      if (ch == '0' || ch == 'z') { pm_only = false; break; }
    if (pm_only) acc += c;
  }
  return acc;
}

}  // namespace detail

/// Projection of A_k onto the charge family: thermodynamic-limit value plus
/// the finite-n overlap.  Exact zero when k < m or k - m is odd.
inline ProjectionValue projection(int k, const ChargeFamily& cf, int n) {
  if (k % 2 == 0) throw std::invalid_argument("projection: k must be odd");
  ProjectionValue pv;
  pv.k = k;
  pv.m = cf.aniso.rep_dim_m;
  pv.phi = cf.phi;
  if (k < pv.m || (k - pv.m) % 2 != 0) return pv;  // exact zeros
  pv.value = detail::projection_sum(cf, k) / std::pow(2.0, k);
  if (n >= k) {
    const auto a = build_observable(k, n);
    pv.finite_n_value =
        hs_inner(a.op, assemble_charge(cf, n)) / static_cast<double>(n);
  }
  return pv;
}

/// a(phi) = amplitude * csc(phi)^{k-2}; the amplitude is the projection
/// evaluated at phi = pi/2 where csc = 1 and cot = 0.
inline cplx projection_amplitude(const RootOfUnityAnisotropy& a, int family, int k) {
  const ChargeFamily cf{family, a, cplx(M_PI / 2.0, 0.0)};
  const int m = a.rep_dim_m;
  if (k < m || (k - m) % 2 != 0) return 0.0;
  return detail::projection_sum(cf, k) / std::pow(2.0, k);
}

inline cplx projection_at(const RootOfUnityAnisotropy& a, int family, int k,
                          cplx phi) {
  return projection_amplitude(a, family, k) *
         std::pow(1.0 / std::sin(phi), k - 2);
}

/// Homogeneous polynomial g in the pair variables u_i = s_i s_{i+1},
/// i = 1..m-2, extracted exactly from the ladder walks of q_k: every
/// monomial coefficient is a nonnegative integer and the total degree is
/// (k-m)/2.
struct GPolynomial {
  int k = 0;
  int m = 0;
  int degree = 0;                                // (k-m)/2
  std::map<std::vector<int>, long long> coeffs;  // u-exponent vector -> count
  double value = 0.0;                            // evaluated at the given eta
};

inline GPolynomial g_polynomial(int k, int m, const RootOfUnityAnisotropy& a) {
  if (a.rep_dim_m != m)
    throw std::invalid_argument("g_polynomial: m must match the anisotropy");
  if (k < m || (k - m) % 2 != 0)
    throw std::invalid_argument("g_polynomial: need k >= m with k - m even");
  GPolynomial g;
  g.k = k;
  g.m = m;
  g.degree = (k - m) / 2;

  // Enumerate walks level 1 -> m-1 in k-2 steps; an up-step at level l
  // contributes s_{l+1}, a down-step contributes -s_{l-1}.  Collect the
  // exponent vector of s_1..s_{m-1} per walk with its sign.
  std::map<std::vector<int>, long long> s_poly;
  std::vector<int> expo(m, 0);  // index j holds the power of s_j, j = 1..m-1
  auto walk = [&](auto&& self, int level, int steps_left, int sign) -> void {
    if (steps_left == 0) {
      if (level == m - 1) s_poly[expo] += sign;
      return;
    }
    if (level + 1 <= m - 1) {
      ++expo[level + 1];
      self(self, level + 1, steps_left - 1, sign);
      --expo[level + 1];
    }
    if (level - 1 >= 1) {
      ++expo[level - 1];
      self(self, level - 1, steps_left - 1, -sign);
      --expo[level - 1];
    }
  };
  walk(walk, 1, k - 2, 1);

  const long long sign_all = (g.degree % 2 == 0) ? 1 : -1;
  for (auto& [e, c] : s_poly) {
    if (c == 0) continue;
    // factor out the base prefactor s_2 ... s_{m-1}
    std::vector<int> reduced = e;
    for (int j = 2; j <= m - 1; ++j) {
      if (reduced[j] < 1)
        throw std::logic_error("g_polynomial: missing base prefactor power");
      --reduced[j];
    }
    // map s-exponents onto pair-variable exponents a_i, u_i = s_i s_{i+1}
    std::vector<int> u(m >= 3 ? m - 2 : 0, 0);
    int prev = 0;
    for (int j = 1; j <= m - 2; ++j) {
      const int aj = reduced[j] - prev;
      if (aj < 0) throw std::logic_error("g_polynomial: inconsistent exponents");
      u[j - 1] = aj;
      prev = aj;
    }
    if (m >= 3 && reduced[m - 1] != prev)
      throw std::logic_error("g_polynomial: inconsistent exponents");
    int total = 0;
    for (int v : u) total += v;
    if (total != g.degree)
      throw std::logic_error("g_polynomial: monomial degree mismatch");
    const long long coeff = sign_all * c;
    if (coeff < 0) throw std::logic_error("g_polynomial: negative coefficient");
    g.coeffs[u] += coeff;
  }

  for (const auto& [u, c] : g.coeffs) {
    double mono = 1.0;
    for (int i = 0; i < static_cast<int>(u.size()); ++i)
      mono *= std::pow(s_k(a, i + 1) * s_k(a, i + 2), u[i]);
    g.value += static_cast<double>(c) * mono;
  }
  return g;
}

struct FredholmGridSpec {
  int nx = 41;
  int ny = 41;
  // Fraction of the strip half-width kept clear of the kernel poles, and the
  // imaginary truncation.  The bound is insensitive to both (kernel and rhs
  // decay in |Im phi|); these defaults keep the 41x41 Nystrom system
  // resolvable at the 1e-10 regularization level.
  double margin_frac = 0.30;
  double imag_cutoff = 2.5;
  double tikhonov = 1e-10;
  std::vector<double> lambda_sweep = {1e-8, 1e-10, 1e-12};
  unsigned seed = 42;
  int initial_rank = 128;
  int max_rank = 1024;
  double residual_target = 1e-6;
  double rhs_scale = 1.0;
};

struct FredholmSolution {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  Eigen::VectorXcd f;
  double residual = 0.0;   // ||A f - b|| / ||b||
  bool converged = false;  // residual under the configured target
  double bound = 0.0;      // Re (1/2) sum w a f
  double bound_imag = 0.0; // leftover imaginary part (diagnostic)
  int rank_used = 0;
  // (lambda, residual, ||f||) triples plus the corner pick
  std::vector<std::tuple<double, double, double>> lcurve;
  double lcurve_corner = 0.0;
};

namespace detail {

struct RsvdTriplets {
  Eigen::MatrixXcd left;    // N x r, orthonormal columns times U
  Eigen::VectorXd sigma;    // r
  Eigen::MatrixXcd right;   // N x r (V)
};

/// Randomized range-finder SVD of A truncated at the given rank; the kernel
/// is analytic so the spectrum decays fast and a modest rank captures it.
/// The small factor is diagonalized through its Gram matrix, which is much
/// faster than a Jacobi SVD on the wide block and accurate far above the
/// regularization level.
inline RsvdTriplets rsvd(const Eigen::MatrixXcd& a, int rank, unsigned seed) {
  const int n = static_cast<int>(a.rows());
  rank = std::min(rank, n);
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd omega(n, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < n; ++i) omega(i, j) = gauss(rng);
  const Eigen::MatrixXcd y = a * omega;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
  const Eigen::MatrixXcd q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(n, rank);
  const Eigen::MatrixXcd b = q.adjoint() * a;  // rank x n
  const Eigen::MatrixXcd gram = b * b.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  RsvdTriplets t;
  t.sigma = es.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd u = es.eigenvectors().rowwise().reverse();
  t.left = q * u;
  t.right = Eigen::MatrixXcd(n, rank);
  const Eigen::MatrixXcd bhu = b.adjoint() * u;
  for (int j = 0; j < rank; ++j) {
    const double s = t.sigma(j);
    t.right.col(j) = s > 0.0 ? (bhu.col(j) / s).eval() : bhu.col(j);
  }
  return t;
}

inline Eigen::VectorXcd tikhonov_apply(const RsvdTriplets& t,
                                       const Eigen::VectorXcd& b,
                                       double lambda) {
  const Eigen::VectorXcd ub = t.left.adjoint() * b;
  Eigen::VectorXcd filtered(t.sigma.size());
  for (Eigen::Index j = 0; j < t.sigma.size(); ++j) {
    const double s = t.sigma(j);
    filtered(j) = s / (s * s + lambda) * ub(j);
  }
  return t.right * filtered;
}

}  // namespace detail

/// Nystrom discretization of (1/2) int_D K(phi, phi') f(phi') d^2 phi'
/// = conj(a(conj phi)) over the truncated strip, solved in Tikhonov-
/// regularized least squares.  First-kind equations are ill-conditioned, so
/// a residual above target yields converged = false (a diagnostic, not a
/// crash).
inline FredholmSolution fredholm_solve(const RootOfUnityAnisotropy& aniso,
                                       int k, const FredholmGridSpec& spec) {
  if (!aniso.admissible)
    throw std::invalid_argument("fredholm_solve: inadmissible anisotropy");
  const int m = aniso.rep_dim_m;
  const double half = M_PI / (2.0 * m) * (1.0 - spec.margin_frac);
  const Quadrature qx =
      gauss_legendre(spec.nx, M_PI / 2.0 - half, M_PI / 2.0 + half);
  const Quadrature qy =
      gauss_legendre(spec.ny, -spec.imag_cutoff, spec.imag_cutoff);

  FredholmSolution sol;
  const long nn = static_cast<long>(spec.nx) * spec.ny;
  sol.nodes.resize(nn);
  sol.weights.resize(nn);
  for (int ix = 0; ix < spec.nx; ++ix)
    for (int iy = 0; iy < spec.ny; ++iy) {
      const long idx = static_cast<long>(ix) * spec.ny + iy;
      sol.nodes[idx] = cplx(qx.nodes[ix], qy.nodes[iy]);
      sol.weights[idx] = qx.weights[ix] * qy.weights[iy];
    }

  // rhs: conj(a(conj phi)); the projection amplitude is real-analytic so
  // this equals a(phi), but the conjugation is kept literal.
  const cplx amp = projection_amplitude(aniso, 2, k) * spec.rhs_scale;
  Eigen::VectorXcd b(nn);
  for (long i = 0; i < nn; ++i) {
    const cplx a_conj =
        amp * std::pow(1.0 / std::sin(std::conj(sol.nodes[i])), k - 2);
    b(i) = std::conj(a_conj);
  }

  Eigen::MatrixXcd a_mat(nn, nn);
  parallel_for(nn, [&](long i) {
    for (long j = 0; j < nn; ++j)
      a_mat(i, j) = 0.5 * sol.weights[j] *
                    kernel_closed_form(aniso, sol.nodes[i], sol.nodes[j]);
  });

  const double bnorm = b.norm();
  if (bnorm == 0.0) {  // parity-excluded rhs: the regularized solution is 0
    sol.f = Eigen::VectorXcd::Zero(nn);
    sol.residual = 0.0;
    sol.converged = true;
    sol.lcurve_corner = spec.tikhonov;
    return sol;
  }

  int rank = std::min<long>(spec.initial_rank, nn);
  detail::RsvdTriplets triplets;
  while (true) {
    triplets = detail::rsvd(a_mat, rank, spec.seed);
    sol.f = detail::tikhonov_apply(triplets, b, spec.tikhonov);
    sol.residual = (a_mat * sol.f - b).norm() / bnorm;
    sol.rank_used = rank;
    if (sol.residual <= spec.residual_target || rank >= spec.max_rank ||
        rank >= nn)
      break;
    rank = std::min<long>(2 * rank, nn);
  }
  sol.converged = sol.residual <= spec.residual_target;

  // L-curve sweep on the same decomposition; corner = point closest to the
  // origin of the normalized log-log curve.
  double best = 1e300;
  for (double lam : spec.lambda_sweep) {
    const Eigen::VectorXcd fl = detail::tikhonov_apply(triplets, b, lam);
    const double res = (a_mat * fl - b).norm() / bnorm;
    const double fn = fl.norm();
    sol.lcurve.emplace_back(lam, res, fn);
    const double score = std::hypot(std::log10(std::max(res, 1e-300)),
                                    std::log10(std::max(fn, 1e-300)));
    if (score < best) {
      best = score;
      sol.lcurve_corner = lam;
    }
  }

  cplx bound = 0.0;
  for (long i = 0; i < nn; ++i) {
    const cplx a_i = amp * std::pow(1.0 / std::sin(sol.nodes[i]), k - 2);
    bound += 0.5 * sol.weights[i] * a_i * sol.f(i);
  }
  sol.bound = bound.real();
  sol.bound_imag = bound.imag();
  return sol;
}

/// Time average of A over the eigenspaces of H (degeneracy-aware): in the
/// eigenbasis every cross-group block is erased.  gap is the threshold for
/// grouping eigenvalues.
inline Eigen::MatrixXd time_average_ed(const Eigen::MatrixXd& h,
                                       const Eigen::MatrixXd& a,
                                       double gap = 1e-10) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXd& q = es.eigenvectors();
  const Eigen::VectorXd& e = es.eigenvalues();
  Eigen::MatrixXd at = q.transpose() * a * q;
  const Eigen::Index dim = h.rows();
  Eigen::Index start = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> groups;
  for (Eigen::Index i = 1; i <= dim; ++i) {
    if (i == dim || e(i) - e(i - 1) > gap) {
      groups.emplace_back(start, i);
      start = i;
    }
  }
  Eigen::MatrixXd kept = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [lo, hi] : groups)
    kept.block(lo, lo, hi - lo, hi - lo) = at.block(lo, lo, hi - lo, hi - lo);
  return q * kept * q.transpose();
}

/// Finite-size Drude weight D = <Abar^2> / (2n) with the infinite-
/// temperature expectation <.> = tr(.)/2^n.
inline double drude_weight_ed(int k, const RootOfUnityAnisotropy& aniso, int n) {
  require_dense_feasible(n);
  const auto h_op = build_xxz_hamiltonian({n, aniso.delta});
  const auto a_op = build_observable(k, n);
  const Eigen::MatrixXd h = to_dense(h_op).real();
  const Eigen::MatrixXd a = to_dense(a_op.op).real();
  const Eigen::MatrixXd abar = time_average_ed(h, a);
  const double dim = std::pow(2.0, n);
  return abar.squaredNorm() / dim / (2.0 * n);
}

/// Linear-response steady state after a quench H - lambda A_k -> H:
/// rho_ss = rho_beta (1 + beta lambda Abar_k), rho_beta = exp(-beta H_lambda)/Z.
inline PauliOperator quench_steady_state(int k, const RootOfUnityAnisotropy& aniso,
                                         int n, double beta, double lambda) {
  require_dense_feasible(n);
  const Eigen::MatrixXd h = to_dense(build_xxz_hamiltonian({n, aniso.delta})).real();
  const Eigen::MatrixXd a = to_dense(build_observable(k, n).op).real();
  const Eigen::MatrixXd h_lambda = h - lambda * a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_lambda);
  const Eigen::VectorXd boltz = (-beta * es.eigenvalues().array()).exp();
  const Eigen::MatrixXd rho_beta = es.eigenvectors() *
                                   (boltz / boltz.sum()).asDiagonal() *
                                   es.eigenvectors().transpose();
  const Eigen::MatrixXd abar = time_average_ed(h, a);
  const Eigen::MatrixXd rho_ss =
      rho_beta * (Eigen::MatrixXd::Identity(h.rows(), h.cols()) +
                  beta * lambda * abar);
  return pauli_from_dense(rho_ss.cast<cplx>(), n);
}

}  // namespace qlxxz
