#pragma once

// Sparse operator algebra over tensor strings of {sigma^0, sigma^+, sigma^-,
// sigma^z} on a periodic chain of n spin-1/2 sites.  An operator is a map
// from label strings (one character per site, alphabet "+-0z") to complex
// coefficients.  All functions are pure; operators are canonical after every
// arithmetic operation (duplicate strings merged, negligible coefficients
// dropped).

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlxxz {

using cplx = std::complex<double>;

/// Coefficients below this fraction of the largest one are dropped.
inline constexpr double kDropTolerance = 1e-14;

/// Site labels in their canonical (ASCII, hence lexicographic) order.
inline constexpr std::array<char, 4> kLabels = {'+', '-', '0', 'z'};

inline bool is_valid_label(char c) {
  return c == '+' || c == '-' || c == '0' || c == 'z';
}

struct PauliOperator {
  int n = 0;
  std::map<std::string, cplx> terms;

  PauliOperator() = default;
  explicit PauliOperator(int sites) : n(sites) {
    if (sites < 1) throw std::invalid_argument("PauliOperator: need n >= 1");
  }

  /// Accumulates coeff onto the given label string.
  void add_term(const std::string& labels, cplx coeff) {
    if (static_cast<int>(labels.size()) != n)
      throw std::invalid_argument("PauliOperator::add_term: wrong string length");
    for (char c : labels)
      if (!is_valid_label(c))
        throw std::invalid_argument("PauliOperator::add_term: invalid label");
    terms[labels] += coeff;
  }

  cplx coefficient(const std::string& labels) const {
    auto it = terms.find(labels);
    return it == terms.end() ? cplx(0.0) : it->second;
  }

  std::size_t size() const { return terms.size(); }
  bool empty() const { return terms.empty(); }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [s, c] : terms) m = std::max(m, std::abs(c));
    return m;
  }

  /// Merges duplicates (the map already does) and drops coefficients below
  /// kDropTolerance relative to the largest one.
  void canonicalize() {
    const double cut = kDropTolerance * max_abs_coefficient();
    for (auto it = terms.begin(); it != terms.end();) {
      if (std::abs(it->second) <= cut)
        it = terms.erase(it);
      else
        ++it;
    }
  }
};

inline void require_same_sites(const PauliOperator& a, const PauliOperator& b) {
  if (a.n != b.n)
    throw std::invalid_argument("site-count mismatch between operators");
}

inline PauliOperator operator*(cplx scale, const PauliOperator& a) {
  PauliOperator out(a.n);
  if (scale == cplx(0.0)) return out;
  for (const auto& [s, c] : a.terms) out.terms[s] = scale * c;
  out.canonicalize();
  return out;
}

inline PauliOperator operator+(const PauliOperator& a, const PauliOperator& b) {
  require_same_sites(a, b);
  PauliOperator out = a;
  for (const auto& [s, c] : b.terms) out.terms[s] += c;
  out.canonicalize();
  return out;
}

inline PauliOperator operator-(const PauliOperator& a, const PauliOperator& b) {
  return a + (cplx(-1.0) * b);
}

// Single-site products sigma^a sigma^b expanded back over the label set.
//   + -  ->  (0 + z)/2        - +  ->  (0 - z)/2
//   + z  ->  -+               z +  ->  +
//   - z  ->  -                z -  ->  --
//   z z  ->  0                + +  =  - -  =  0 (annihilate)
struct SiteProduct {
  int count = 0;
  std::array<char, 2> label{};
  std::array<cplx, 2> coeff{};
};

inline SiteProduct site_product(char a, char b) {
  SiteProduct p;
  auto one = [&p](char l, double c) {
    p.count = 1;
    p.label[0] = l;
    p.coeff[0] = c;
  };
  if (a == '0') { one(b, 1.0); return p; }
  if (b == '0') { one(a, 1.0); return p; }
  if (a == 'z' && b == 'z') { one('0', 1.0); return p; }
  if (a == 'z' && b == '+') { one('+', 1.0); return p; }
  if (a == 'z' && b == '-') { one('-', -1.0); return p; }
  if (a == '+' && b == 'z') { one('+', -1.0); return p; }
  if (a == '-' && b == 'z') { one('-', 1.0); return p; }
  if (a == '+' && b == '-') {
    p.count = 2;
    p.label = {'0', 'z'};
    p.coeff = {0.5, 0.5};
    return p;
  }
  if (a == '-' && b == '+') {
    p.count = 2;
    p.label = {'0', 'z'};
    p.coeff = {0.5, -0.5};
    return p;
  }
  // ++ or --
  p.count = 0;
  return p;
}

inline PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
  require_same_sites(a, b);
  PauliOperator out(a.n);
  std::vector<std::pair<std::string, cplx>> branches, next;
  for (const auto& [sa, ca] : a.terms) {
    for (const auto& [sb, cb] : b.terms) {
      branches.clear();
      branches.emplace_back(std::string(), ca * cb);
      bool dead = false;
      for (int j = 0; j < a.n && !dead; ++j) {
        const SiteProduct p = site_product(sa[j], sb[j]);
        if (p.count == 0) { dead = true; break; }
        next.clear();
        for (const auto& [prefix, coeff] : branches)
          for (int t = 0; t < p.count; ++t)
            next.emplace_back(prefix + p.label[t], coeff * p.coeff[t]);
        branches.swap(next);
      }
      if (dead) continue;
      for (auto& [s, c] : branches) out.terms[s] += c;
    }
  }
  out.canonicalize();
  return out;
}

inline PauliOperator commutator(const PauliOperator& a, const PauliOperator& b) {
  return multiply(a, b) - multiply(b, a);
}

/// Periodic left shift by x sites: label at position j of the result is the
/// label at position (j + x) mod n of the input.  shift(A, n) == A.
inline PauliOperator shift(const PauliOperator& a, int x) {
  PauliOperator out(a.n);
  int r = ((x % a.n) + a.n) % a.n;
  if (r == 0) return a;
  for (const auto& [s, c] : a.terms)
    out.terms[s.substr(r) + s.substr(0, r)] += c;
  out.canonicalize();
  return out;
}

/// Conjugation by P = (sigma^x)^{tensor n}: swaps +/-, flips the sign of z.
inline PauliOperator parity_conjugate(const PauliOperator& a) {
  PauliOperator out(a.n);
  for (const auto& [s, c] : a.terms) {
    std::string t = s;
    int zs = 0;
    for (char& ch : t) {
      if (ch == '+') ch = '-';
      else if (ch == '-') ch = '+';
      else if (ch == 'z') ++zs;
    }
    out.terms[t] += (zs % 2 ? -c : c);
  }
  out.canonicalize();
  return out;
}

/// Conjugation by U = (1 (x) sigma^z)^{tensor n/2}: +/- at odd sites flip
/// sign, 0 and z are unchanged.  Requires even n.
inline PauliOperator sign_flip_conjugate(const PauliOperator& a) {
  if (a.n % 2 != 0)
    throw std::invalid_argument("sign_flip_conjugate: n must be even");
  PauliOperator out(a.n);
  for (const auto& [s, c] : a.terms) {
    int flips = 0;
    for (int j = 1; j < a.n; j += 2)
      if (s[j] == '+' || s[j] == '-') ++flips;
    out.terms[s] += (flips % 2 ? -c : c);
  }
  out.canonicalize();
  return out;
}

/// Entrywise transpose: swaps +/- labels, coefficients unchanged.
inline PauliOperator transpose_op(const PauliOperator& a) {
  PauliOperator out(a.n);
  for (const auto& [s, c] : a.terms) {
    std::string t = s;
    for (char& ch : t) {
      if (ch == '+') ch = '-';
      else if (ch == '-') ch = '+';
    }
    out.terms[t] += c;
  }
  out.canonicalize();
  return out;
}

/// Hermitian adjoint: swaps +/- labels and conjugates coefficients.
inline PauliOperator dagger(const PauliOperator& a) {
  PauliOperator out(a.n);
  for (const auto& [s, c] : a.terms) {
    std::string t = s;
    for (char& ch : t) {
      if (ch == '+') ch = '-';
      else if (ch == '-') ch = '+';
    }
    out.terms[t] += std::conj(c);
  }
  out.canonicalize();
  return out;
}

/// Hilbert-Schmidt weight of a label string: (S, S) = prod over sites of
/// tr(sigma^mu{}^dagger sigma^mu)/2, i.e. 1/2 per +/- label and 1 otherwise.
inline double hs_weight(const std::string& s) {
  double w = 1.0;
  for (char c : s)
    if (c == '+' || c == '-') w *= 0.5;
  return w;
}

/// Hilbert-Schmidt inner product tr(A^dagger B)/2^n.  Distinct strings are
/// orthogonal, so only shared strings contribute.
inline cplx hs_inner(const PauliOperator& a, const PauliOperator& b) {
  require_same_sites(a, b);
  cplx acc = 0.0;
  const bool a_small = a.size() <= b.size();
  const auto& small = a_small ? a : b;
  const auto& large = a_small ? b : a;
  for (const auto& [s, c] : small.terms) {
    auto it = large.terms.find(s);
    if (it == large.terms.end()) continue;
    const cplx ca = a_small ? c : it->second;
    const cplx cb = a_small ? it->second : c;
    acc += std::conj(ca) * cb * hs_weight(s);
  }
  return acc;
}

/// Transpose pairing tr(A^T B)/2^n; bilinear (no conjugation), same weights.
inline cplx hs_bilinear(const PauliOperator& a, const PauliOperator& b) {
  require_same_sites(a, b);
  cplx acc = 0.0;
  const bool a_small = a.size() <= b.size();
  const auto& small = a_small ? a : b;
  const auto& large = a_small ? b : a;
  for (const auto& [s, c] : small.terms) {
    auto it = large.terms.find(s);
    if (it != large.terms.end()) acc += c * it->second * hs_weight(s);
  }
  return acc;
}

inline double hs_norm(const PauliOperator& a) {
  return std::sqrt(std::abs(hs_inner(a, a)));
}

/// Embeds an r-site operator into the first r sites of an n-site chain.
inline PauliOperator embed(const PauliOperator& a, int n) {
  if (n < a.n) throw std::invalid_argument("embed: target chain too short");
  PauliOperator out(n);
  const std::string pad(n - a.n, '0');
  for (const auto& [s, c] : a.terms) out.terms[s + pad] = c;
  return out;
}

struct HamiltonianSpec {
  int n = 2;
  double delta = 0.0;  // anisotropy in the z-z coupling
};

/// XXZ Hamiltonian sum_j [2 s+_j s-_{j+1} + 2 s-_j s+_{j+1} + Delta z_j z_{j+1}]
/// with indices mod n.  For n = 2 the single bond is counted twice.
inline PauliOperator build_xxz_hamiltonian(const HamiltonianSpec& spec) {
  if (spec.n < 2)
    throw std::invalid_argument("build_xxz_hamiltonian: need n >= 2");
  PauliOperator h(spec.n);
  for (int j = 0; j < spec.n; ++j) {
    const int j1 = (j + 1) % spec.n;
    auto bond = [&](char a, char b, cplx c) {
      std::string s(spec.n, '0');
      s[j] = a;
      s[j1] = b;
      h.terms[s] += c;
    };
    bond('+', '-', 2.0);
    bond('-', '+', 2.0);
    bond('z', 'z', spec.delta);
  }
  h.canonicalize();
  return h;
}

/// Total magnetization M^z = sum_j sigma^z_j.
inline PauliOperator magnetization(int n) {
  PauliOperator m(n);
  for (int j = 0; j < n; ++j) {
    std::string s(n, '0');
    s[j] = 'z';
    m.terms[s] += 1.0;
  }
  return m;
}

/// Net raising surplus (#+ minus #-) of a label string; [M^z, S] = 2*surplus*S.
inline int label_surplus(const std::string& s) {
  int d = 0;
  for (char c : s) {
    if (c == '+') ++d;
    else if (c == '-') --d;
  }
  return d;
}

}  // namespace qlxxz
