#pragma once

// Machine-readable output.  Operator documents follow the exchange format
//   {"n": int, "terms": [{"string": "...", "re": x, "im": y}, ...]}
// with terms sorted lexicographically by string.  Floats are always printed
// with 17 significant digits so output is byte-stable for a fixed input.

#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qlxxz/pauli.hpp"
#include "qlxxz/representation.hpp"

namespace qlxxz {

inline std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string operator_to_json(const PauliOperator& a) {
  std::ostringstream os;
  os << "{\"n\": " << a.n << ", \"terms\": [";
  bool first = true;
  for (const auto& [s, c] : a.terms) {  // std::map keys are already sorted
    if (!first) os << ", ";
    first = false;
    os << "{\"string\": \"" << s << "\", \"re\": " << format_g17(c.real())
       << ", \"im\": " << format_g17(c.imag()) << "}";
  }
  os << "]}";
  return os.str();
}

inline PauliOperator operator_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  PauliOperator out(j.at("n").get<int>());
  for (const auto& t : j.at("terms"))
    out.add_term(t.at("string").get<std::string>(),
                 cplx(t.at("re").get<double>(), t.at("im").get<double>()));
  out.canonicalize();
  return out;
}

namespace detail {

inline void matrix_to_json(std::ostream& os, const Eigen::MatrixXcd& m) {
  os << "[";
  bool first = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {  // row-major
      if (!first) os << ", ";
      first = false;
      os << "[" << format_g17(m(i, j).real()) << ", "
         << format_g17(m(i, j).imag()) << "]";
    }
  os << "]";
}

}  // namespace detail

inline std::string representation_to_json(const Representation& rep,
                                          const RootOfUnityAnisotropy& a) {
  std::ostringstream os;
  os << "{\"kind\": \"" << to_string(rep.kind) << "\", \"m\": " << rep.m
     << ", \"eta_num\": " << a.eta_num << ", \"eta_den\": " << a.eta_den
     << ", \"params\": {";
  if (rep.kind == RepKind::V3) {
    os << "\"p\": " << rep.weight_p << ", \"gamma\": ["
       << format_g17(rep.gamma.real()) << ", " << format_g17(rep.gamma.imag())
       << "]";
  } else {
    os << "\"s\": [" << format_g17(rep.spin_s.real()) << ", "
       << format_g17(rep.spin_s.imag()) << "], \"alpha\": ["
       << format_g17(rep.alpha.real()) << ", " << format_g17(rep.alpha.imag())
       << "], \"beta\": [" << format_g17(rep.beta.real()) << ", "
       << format_g17(rep.beta.imag()) << "]";
  }
  os << "}, \"Sz\": ";
  detail::matrix_to_json(os, rep.Sz);
  os << ", \"Sp\": ";
  detail::matrix_to_json(os, rep.Sp);
  os << ", \"Sm\": ";
  detail::matrix_to_json(os, rep.Sm);
  os << "}";
  return os.str();
}

/// One line of a verification report.
struct VerificationRecord {
  std::string test;
  int eta_num = 0;
  int eta_den = 1;
  std::string family;
  int n = 0;
  double residual = 0.0;
  bool pass = false;
};

inline std::string record_to_json(const VerificationRecord& r) {
  std::ostringstream os;
  os << "{\"test\": \"" << r.test << "\", \"eta_num\": " << r.eta_num
     << ", \"eta_den\": " << r.eta_den << ", \"family\": \"" << r.family
     << "\", \"n\": " << r.n << ", \"residual\": " << format_g17(r.residual)
     << ", \"verdict\": \"" << (r.pass ? "pass" : "fail") << "\"}";
  return os.str();
}

}  // namespace qlxxz
