#include <catch2/catch_amalgamated.hpp>

#include "qlxxz/lax.hpp"

using namespace qlxxz;

namespace {
const cplx kPhi = kGenericPhi;
const cplx kPhi2{0.5, -0.3};
}  // namespace

TEST_CASE("lax components at m = 3, s = 0, phi = pi/2", "[lax]") {
  const auto a = anisotropy_from_angle(2, 3);
  const auto rep = build_v2(a, 0.0, 0.0, 0.0);
  const auto lc = lax_components(rep, M_PI / 2.0);
  // L^0 diagonal = sin(phi) * (1, cos eta, cos 2eta) = (1, -1/2, -1/2)
  CHECK(std::abs(lc['0'](0, 0) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(lc['0'](1, 1) - cplx(-0.5)) < 1e-14);
  CHECK(std::abs(lc['0'](2, 2) - cplx(-0.5)) < 1e-14);
  // L^z vanishes at phi = pi/2
  CHECK(lc['z'].norm() < 1e-15);
}

TEST_CASE("lax index swap: L^+ = sin(eta) S^-", "[lax]") {
  const auto a = anisotropy_from_angle(2, 5);
  const auto rep = build_v2(a, cplx(0.3, 0.1), 0.2, 0.7);
  const auto lc = lax_components(rep, kPhi);
  CHECK((lc['+'] - std::sin(a.eta) * rep.Sm).norm() < 1e-14);
  CHECK((lc['-'] - std::sin(a.eta) * rep.Sp).norm() < 1e-14);
}

TEST_CASE("lax reassembly identity", "[lax]") {
  const auto a = anisotropy_from_angle(2, 5);
  for (const auto& rep : {build_v1(a, cplx(0.2, -0.1), 0.4, 0.1),
                          build_v2(a, 0.37, 0.0, 0.82),
                          build_v3(a, 1, 0.5)}) {
    const auto lc = lax_components(rep, kPhi);
    CHECK((lax_full_from_components(lc) - lax_full_matrix(rep, kPhi)).norm() < 1e-12);
  }
}

TEST_CASE("rescaled lax blocks, family 2", "[lax]") {
  const auto a = anisotropy_from_angle(2, 3);
  const auto rl = rescaled_lax(2, a, kPhi);
  const cplx csc = 1.0 / std::sin(kPhi);
  // base L~+ has csc(phi) s_{k+1} at (k+1, k)
  for (int k = 0; k <= rl.m - 2; ++k)
    CHECK(std::abs(rl['+'](k + 1, k) - csc * s_k(a, k + 1)) < 1e-14);
  // derivative is sin(eta) |0><m-1|
  CHECK(rl.derivative_label == '+');
  CHECK(std::abs(rl.derivative(0, rl.m - 1) - cplx(std::sin(a.eta))) < 1e-14);
  CHECK(rl.derivative.norm() == Catch::Approx(std::abs(std::sin(a.eta))));
}

TEST_CASE("rescaled lax displayed blocks for all families", "[lax]") {
  const auto a = anisotropy_from_angle(2, 5);
  const int m = a.rep_dim_m;
  const cplx csc = 1.0 / std::sin(kPhi);
  const cplx cot = std::cos(kPhi) / std::sin(kPhi);

  for (int family : {1, 2, 3}) {
    const auto rl = rescaled_lax(family, a, kPhi);
    // L~0 diagonal c_k for every family
    for (int k = 0; k < m; ++k)
      CHECK(std::abs(rl['0'](k, k) - cplx(c_k(a, k))) < 1e-12);
    // L~z diagonal -cot(phi) s_k (families 1, 2) or +cot(phi) s_k (family 3)
    const double zsign = (family == 3) ? 1.0 : -1.0;
    for (int k = 0; k < m; ++k)
      CHECK(std::abs(rl['z'](k, k) - zsign * cot * s_k(a, k)) < 1e-12);
  }
  // family 1: L~+ = -csc phi s_k |k+1><k|, L~- = csc phi s_{k+1} |k><k+1|
  {
    const auto rl = rescaled_lax(1, a, kPhi);
    for (int k = 0; k <= m - 2; ++k) {
      CHECK(std::abs(rl['+'](k + 1, k) + csc * s_k(a, k)) < 1e-12);
      CHECK(std::abs(rl['-'](k, k + 1) - csc * s_k(a, k + 1)) < 1e-12);
    }
    CHECK(rl.derivative_label == '-');
    CHECK(std::abs(rl.derivative(m - 1, 0) - cplx(std::sin(a.eta))) < 1e-14);
  }
  // family 3: L~+ = -csc phi s_k |k><k+1|, L~- = csc phi s_{k+1} |k+1><k|
  {
    const auto rl = rescaled_lax(3, a, kPhi);
    for (int k = 0; k <= m - 2; ++k) {
      CHECK(std::abs(rl['+'](k, k + 1) + csc * s_k(a, k)) < 1e-12);
      CHECK(std::abs(rl['-'](k + 1, k) - csc * s_k(a, k + 1)) < 1e-12);
    }
    CHECK(rl.derivative_label == '-');
    CHECK(std::abs(rl.derivative(0, m - 1) - cplx(std::sin(a.eta))) < 1e-14);
  }
}

TEST_CASE("r-matrix entries", "[lax]") {
  const cplx q = std::polar(1.0, 2.0 * M_PI / 3.0);
  // x = 1: diagonal x - 1/x vanishes, off-diagonal block is q - 1/q
  const auto r1 = r_matrix(1.0, q);
  CHECK(std::abs(r1(1, 1)) < 1e-15);
  CHECK(std::abs(r1(1, 2) - (q - 1.0 / q)) < 1e-15);
  CHECK(std::abs(r1(2, 1) - (q - 1.0 / q)) < 1e-15);
  // q -> 1: R degenerates to (x - 1/x) * identity
  const cplx x(0.7, 0.4);
  const auto rq1 = r_matrix(x, 1.0);
  CHECK((rq1 - (x - 1.0 / x) * Eigen::Matrix4cd::Identity()).norm() < 1e-14);
  // generic entrywise
  const auto r = r_matrix(x, q);
  CHECK(std::abs(r(0, 0) - (q * x - 1.0 / (q * x))) < 1e-15);
  CHECK(std::abs(r(3, 3) - (q * x - 1.0 / (q * x))) < 1e-15);
  CHECK(std::abs(r(2, 2) - (x - 1.0 / x)) < 1e-15);
  CHECK(std::abs(r(0, 1)) + std::abs(r(0, 2)) + std::abs(r(0, 3)) < 1e-15);
}

TEST_CASE("fcr residual verdicts", "[lax]") {
  const auto a3 = anisotropy_from_angle(2, 3);
  const auto a6 = anisotropy_from_angle(1, 3);
  CHECK(fcr_residual(build_v2(a3, 0.0, 0.0, 0.82), kPhi, kPhi2) < 1e-10);
  CHECK(fcr_residual(build_v2(a6, 0.0, 0.0, 0.82), kPhi, kPhi2) > 1e-3);
  // highest-weight representation passes at any eta
  CHECK(fcr_residual(build_v1(a3, 0.37, 0.0, 0.0), kPhi, kPhi2) < 1e-10);
  CHECK(fcr_residual(build_v1(a6, 0.37, 0.0, 0.0), kPhi, kPhi2) < 1e-10);
}

TEST_CASE("transfer matrix n = 2 coefficient", "[lax]") {
  const auto a = anisotropy_from_angle(2, 3);
  const auto rep = build_v2(a, 0.37, 0.0, 0.82);
  const auto lc = lax_components(rep, kPhi);
  const auto tm = transfer_matrix(rep, kPhi, 2);
  CHECK(std::abs(tm.op.coefficient("00") - (lc['0'] * lc['0']).trace()) < 1e-13);
  CHECK(std::abs(tm.op.coefficient("+-") - (lc['+'] * lc['-']).trace()) < 1e-13);
  CHECK_THROWS_AS(transfer_matrix(rep, kPhi, 1), std::invalid_argument);
}

TEST_CASE("transfer matrices are conserved at admissible eta", "[lax]") {
  const auto a = anisotropy_from_angle(2, 3);
  const auto rep = build_v2(a, 0.37, 0.0, 0.82);
  for (int n : {4, 5, 6}) {
    const auto tm = transfer_matrix(rep, kPhi, n);
    const auto h = build_xxz_hamiltonian({n, a.delta});
    CHECK(commutator_frobenius(tm.op, h) < 1e-10);
  }
}

TEST_CASE("non-conservation at eta = pi/3", "[lax]") {
  const auto a = anisotropy_from_angle(1, 3);
  const auto rep = build_v2(a, 0.37, 0.0, 0.82);
  const auto tm = transfer_matrix(rep, kPhi, 4);
  const auto h = build_xxz_hamiltonian({4, a.delta});
  CHECK(commutator_frobenius(tm.op, h) > 1e-3);
}

TEST_CASE("fcr verdict equals conservation verdict", "[lax]") {
  // the two verdicts must never disagree
  for (auto [num, den] : {std::pair<long, long>{2, 3}, {1, 3}, {2, 5}}) {
    const auto a = anisotropy_from_angle(num, den);
    for (int family : {1, 2, 3}) {
      RepParams p;
      p.spin_s = 0.23;
      if (family == 1) p.alpha = 0.82;
      if (family == 2) p.beta = 0.82;
      p.gamma = 0.82;
      p.weight_p = 0;
      const auto rep = build_representation(
          family == 1 ? RepKind::V1 : family == 2 ? RepKind::V2 : RepKind::V3,
          a, p);
      const bool fcr_ok = fcr_residual(rep, kPhi, kPhi2) <= 1e-10;
      // probe at n > m so the coupling corner participates in the trace
      const int n = a.rep_dim_m + 1;
      const auto tm = transfer_matrix(rep, kPhi, n);
      const auto h = build_xxz_hamiltonian({n, a.delta});
      const double cons = commutator_frobenius(tm.op, h);
      const bool cons_ok = cons <= 1e-10;
      INFO("eta = " << num << "pi/" << den << " family " << family
                    << " cons residual " << cons);
      CHECK(fcr_ok == cons_ok);
      if (!cons_ok) CHECK(cons > 1e-3);
    }
  }
}

TEST_CASE("transfer matrix is translation covariant", "[lax]") {
  const auto a = anisotropy_from_angle(2, 3);
  const auto rep = build_v2(a, 0.37, 0.0, 0.82);
  const auto tm = transfer_matrix(rep, kPhi, 5);
  CHECK(hs_norm(shift(tm.op, 1) - tm.op) < 1e-12);
}

TEST_CASE("rescaling consistency of the transfer matrix", "[lax]") {
  // V_n at s = 0 from rescaled base components times (sin phi)^n equals the
  // transfer matrix of V2(0,0,0).
  const auto a = anisotropy_from_angle(2, 3);
  const int n = 5;
  const auto rl = rescaled_lax(2, a, kPhi);
  const cplx scale = std::pow(std::sin(kPhi), n);
  const auto via_base = detail::transfer_from_components(rl.base, rl.m, n, scale);
  const auto direct = transfer_matrix(build_v2(a, 0.0, 0.0, 0.0), kPhi, n);
  CHECK(hs_norm(via_base - direct.op) < 1e-12);
}

TEST_CASE("involution at s = 0 for odd m", "[lax]") {
  const auto a = anisotropy_from_angle(2, 3);
  const auto rep = build_v2(a, 0.0, 0.0, 0.82);
  CHECK(involution_residual(rep, kPhi, kPhi2, 6) < 1e-10);
  // commuting also across different coupling values
  const auto repb = build_v2(a, 0.0, 0.0, 0.31);
  const auto va = transfer_matrix(rep, kPhi, 6);
  const auto vb = transfer_matrix(repb, kPhi2, 6);
  CHECK(commutator_frobenius(va.op, vb.op) < 1e-10);
}

TEST_CASE("involution fails for q^m = -1", "[lax]") {
  const auto a = anisotropy_from_angle(1, 3);
  const auto rep = build_v2(a, 0.0, 0.0, 0.82);
  CHECK(involution_residual(rep, kPhi, kPhi2, 4) > 1e-3);
}

TEST_CASE("any transfer matrix commutes with itself", "[lax]") {
  const auto a = anisotropy_from_angle(1, 3);  // even the inadmissible one
  const auto rep = build_v2(a, 0.37, 0.0, 0.82);
  CHECK(involution_residual(rep, kPhi, kPhi, 4) == 0.0);
}
