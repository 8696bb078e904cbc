// Command-line front end: construction, verification, kernel and bound
// computations with machine-readable output.
//
// Exit codes: 0 all checks pass, 1 assertion failure, 2 usage error.
// QLXXZ_THREADS controls worker threads for grid assembly.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qlxxz/io.hpp"
#include "qlxxz/mazur.hpp"

using namespace qlxxz;

namespace {

struct EtaFraction {
  long num = 2;
  long den = 3;
};

// "2/3pi", "2/3", "1/2pi" -> fraction of pi
EtaFraction parse_eta(const std::string& text) {
  std::string t = text;
  if (t.size() >= 2 && t.substr(t.size() - 2) == "pi") t = t.substr(0, t.size() - 2);
  EtaFraction f;
  const auto slash = t.find('/');
  try {
    if (slash == std::string::npos) {
      f.num = std::stol(t);
      f.den = 1;
    } else {
      f.num = std::stol(t.substr(0, slash));
      f.den = std::stol(t.substr(slash + 1));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--eta", "expected an integer fraction like 2/3pi");
  }
  return f;
}

// "0.9+0.2i", "0.9-0.2i", "1.2", "pi/2"
cplx parse_complex(const std::string& text) {
  if (text == "pi/2") return cplx(M_PI / 2.0, 0.0);
  double re = 0.0, im = 0.0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf%lf%c", &re, &im, &tail) == 3 && tail == 'i')
    return cplx(re, im);
  try {
    return cplx(std::stod(text), 0.0);
  } catch (const std::exception&) {
    throw CLI::ValidationError("phi", "expected a+bi, a, or pi/2");
  }
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos)
    throw CLI::ValidationError("--grid", "expected NXxNY like 41x41");
  return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
}

// key=value lines; '#' starts a comment.  Values override already-parsed
// flags, which makes batch sweeps reproducible from one file.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = value;
  }
  return kv;
}

struct Settings {
  std::string eta = "2/3pi";
  long eta_num = 0, eta_den = 0;  // set explicitly via --eta-num/--eta-den
  int family = 2;
  std::string n_range = "6";
  std::string r_range = "3..5";
  std::string phi = "0.9+0.2i";
  std::string phi2 = "0.5-0.3i";
  int k = 3;
  std::string grid = "41x41";
  double lambda_reg = 1e-10;
  double imag_cutoff = 2.5;
  double margin = 0.30;
  unsigned seed = 42;
  double tol = 1e-10;
  double neg_tol = 1e-3;
  int series_cutoff = 400;
  std::string finite_n = "6,8,10";
  std::string output;  // empty = stdout
  std::string csv;     // mazur-bound / kernel CSV target
  std::string config;
};

void apply_config(Settings& s) {
  if (s.config.empty()) return;
  const auto kv = read_config(s.config);
  auto get = [&](const char* key, auto& slot) {
    auto it = kv.find(key);
    if (it == kv.end()) return;
    std::istringstream is(it->second);
    is >> slot;
  };
  get("eta", s.eta);
  get("eta-num", s.eta_num);
  get("eta-den", s.eta_den);
  get("family", s.family);
  get("n", s.n_range);
  get("r", s.r_range);
  get("phi", s.phi);
  get("phi2", s.phi2);
  get("k", s.k);
  get("grid", s.grid);
  get("lambda-reg", s.lambda_reg);
  get("imag-cutoff", s.imag_cutoff);
  get("margin", s.margin);
  get("seed", s.seed);
  get("tol", s.tol);
  get("neg-tol", s.neg_tol);
  get("series-cutoff", s.series_cutoff);
  get("finite-n", s.finite_n);
  get("output", s.output);
  get("csv", s.csv);
}

RootOfUnityAnisotropy settings_aniso(const Settings& s) {
  if (s.eta_num != 0 || s.eta_den != 0) {
    if (s.eta_den == 0) throw CLI::ValidationError("--eta-den", "zero denominator");
    return anisotropy_from_angle(s.eta_num, s.eta_den);
  }
  const EtaFraction f = parse_eta(s.eta);
  return anisotropy_from_angle(f.num, f.den);
}

struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw CLI::ValidationError("--output", "cannot open " + path);
      os = &file;
    }
  }
  std::ostream& out() { return *os; }
};

Representation coupled_representation(int family, const RootOfUnityAnisotropy& a,
                                      cplx spin, cplx coupling) {
  switch (family) {
    case 1: return build_v1(a, spin, coupling, 0.0);
    case 2: return build_v2(a, spin, 0.0, coupling);
    case 3: return build_v3(a, a.rep_dim_m > 2 ? 1 : 0, coupling);
    default: throw CLI::ValidationError("--family", "family must be 1, 2 or 3");
  }
}

int cmd_verify(const Settings& s) {
  const auto a = settings_aniso(s);
  const cplx phi = parse_complex(s.phi);
  const cplx phi2 = parse_complex(s.phi2);
  const auto [n_lo, n_hi] = parse_range(s.n_range);
  Sink sink(s.output);
  bool all_ok = true;

  auto emit = [&](const std::string& test, int n, double residual, bool pass) {
    VerificationRecord rec;
    rec.test = test;
    rec.eta_num = static_cast<int>(a.eta_num);
    rec.eta_den = static_cast<int>(a.eta_den);
    rec.family = std::to_string(s.family);
    rec.n = n;
    rec.residual = residual;
    rec.pass = pass;
    sink.out() << record_to_json(rec) << "\n";
    all_ok = all_ok && pass;
  };

  // Positive expectation at admissible eta, negative control otherwise.
  // The control only bites from n = m+1 on: below m the coupling corner
  // cannot enter the auxiliary trace, and at n = m it only feeds the
  // all-raising string, which commutes with H at any anisotropy.
  auto expect = [&](double residual, int n) {
    if (a.admissible || n < a.rep_dim_m + 1) return residual <= s.tol;
    return residual > s.neg_tol;
  };

  const auto rep = coupled_representation(s.family, a, 0.37, 0.82);
  const auto def = check_defining_relations(rep);
  emit("defining-relations", 0, def.max_residual, def.verdict);

  // the FCR residual probes the coupling corner directly at any size
  const double fcr = fcr_residual(rep, phi, phi2);
  emit("fcr", 0, fcr, expect(fcr, a.rep_dim_m + 1));

  for (int n = n_lo; n <= n_hi; ++n) {
    const auto h = build_xxz_hamiltonian({n, a.delta});
    const double cons = commutator_frobenius(transfer_matrix(rep, phi, n).op, h);
    emit("transfer-conservation", n, cons, expect(cons, n));
  }

  const ChargeFamily cf{s.family, a, phi};
  for (int n = std::max(n_lo, a.rep_dim_m); n <= n_hi; ++n) {
    const auto x = assemble_charge(cf, n);
    const auto h = build_xxz_hamiltonian({n, a.delta});
    const double cons = commutator_frobenius(x, h);
    const bool empty = x.empty();
    emit("charge-conservation", n, cons, empty || expect(cons, n));
    if (!empty) {
      const int m = a.rep_dim_m;
      const double sign = s.family == 2 ? 1.0 : -1.0;
      const auto ladder =
          commutator(magnetization(n), x) - cplx(sign * 2.0 * m) * x;
      const double lres = ladder.max_abs_coefficient();
      emit("magnetization-ladder", n, lres,
           lres <= 1e-12 * std::max(1.0, x.max_abs_coefficient()));
    }
  }

  const auto rep0 = coupled_representation(s.family, a, 0.0, 0.82);
  const int n_inv = std::max(4, a.rep_dim_m + 1);
  const double inv = involution_residual(rep0, phi, phi2, n_inv);
  emit("involution", n_inv, inv, expect(inv, n_inv));

  return all_ok ? 0 : 1;
}

int cmd_charge_terms(const Settings& s) {
  const auto a = settings_aniso(s);
  const cplx phi = parse_complex(s.phi);
  const auto [r_lo, r_hi] = parse_range(s.r_range);
  Sink sink(s.output);
  const ChargeFamily cf{s.family, a, phi};
  std::ostringstream norms;
  bool first = true;
  for (int r = r_lo; r <= r_hi; ++r) {
    const auto q = local_term(cf, r);
    sink.out() << operator_to_json(q.op) << "\n";
    if (!first) norms << ", ";
    first = false;
    norms << "\"" << r << "\": " << format_g17(hs_norm(q.op));
  }
  sink.out() << "{\"hs_norms\": {" << norms.str() << "}}\n";
  return 0;
}

int cmd_kernel(const Settings& s) {
  const auto a = settings_aniso(s);
  if (!a.admissible) {
    std::cerr << "kernel: inadmissible anisotropy (order " << a.order_d
              << " is even)\n";
    return 1;
  }
  const cplx phi = parse_complex(s.phi);
  const cplx phi2 = parse_complex(s.phi2);
  Sink sink(s.output.empty() ? s.csv : s.output);
  auto row = [&](cplx p, cplx p2, cplx k, const char* route) {
    sink.out() << format_g17(p.real()) << "," << format_g17(p.imag()) << ","
               << format_g17(p2.real()) << "," << format_g17(p2.imag()) << ","
               << format_g17(k.real()) << "," << format_g17(k.imag()) << ","
               << route << "\n";
  };
  sink.out() << "re_phi,im_phi,re_phi2,im_phi2,re_K,im_K,route\n";
  const cplx closed = kernel_closed_form(a, phi, phi2);
  row(phi, phi2, closed, "closed");
  const cplx series = kernel_partial_sum(a, phi, phi2, s.series_cutoff);
  row(phi, phi2, series, "series");

  const ChargeFamily cf{s.family, a, phi};
  std::stringstream fn(s.finite_n);
  std::string tok;
  while (std::getline(fn, tok, ',')) {
    const int n = std::stoi(tok);
    row(phi, phi2, finite_n_kernel(cf, n, phi2), "finite_n");
  }

  // series consistency is only claimed where the partial sums converge
  const bool convergent =
      in_strip(a, phi) && in_strip(a, phi2) &&
      aux_spectral_radius(aux_transfer(a, phi, phi2)) < 1.0;
  if (convergent && std::abs(closed - series) > 1e-8) {
    std::cerr << "kernel: series and closed form disagree by "
              << std::abs(closed - series) << "\n";
    return 1;
  }
  return 0;
}

int cmd_mazur(const Settings& s) {
  const auto a = settings_aniso(s);
  FredholmGridSpec spec;
  std::tie(spec.nx, spec.ny) = parse_grid(s.grid);
  spec.tikhonov = s.lambda_reg;
  spec.imag_cutoff = s.imag_cutoff;
  spec.margin_frac = s.margin;
  spec.seed = s.seed;
  const auto sol = fredholm_solve(a, s.k, spec);
  Sink sink(s.output);
  sink.out() << "{\"bound\": " << format_g17(sol.bound)
             << ", \"residual\": " << format_g17(sol.residual)
             << ", \"grid\": \"" << spec.nx << "x" << spec.ny
             << "\", \"regularization\": " << format_g17(spec.tikhonov)
             << ", \"imag_cutoff\": " << format_g17(spec.imag_cutoff)
             << ", \"margin\": " << format_g17(spec.margin_frac)
             << ", \"rank\": " << sol.rank_used
             << ", \"lcurve_corner\": " << format_g17(sol.lcurve_corner)
             << ", \"converged\": " << (sol.converged ? "true" : "false")
             << "}\n";
  if (!s.csv.empty()) {
    std::ofstream csv(s.csv);
    if (!csv) throw CLI::ValidationError("--csv", "cannot open " + s.csv);
    csv << "re_phi,im_phi,weight,re_f,im_f\n";
    for (std::size_t i = 0; i < sol.nodes.size(); ++i)
      csv << format_g17(sol.nodes[i].real()) << ","
          << format_g17(sol.nodes[i].imag()) << ","
          << format_g17(sol.weights[i]) << ","
          << format_g17(sol.f(static_cast<Eigen::Index>(i)).real()) << ","
          << format_g17(sol.f(static_cast<Eigen::Index>(i)).imag()) << "\n";
  }
  return sol.converged ? 0 : 1;
}

int cmd_project(const Settings& s) {
  const auto a = settings_aniso(s);
  const cplx phi = parse_complex(s.phi);
  const auto [n_lo, n_hi] = parse_range(s.n_range);
  Sink sink(s.output);
  const ChargeFamily cf{s.family, a, phi};
  for (int n = n_lo; n <= n_hi; ++n) {
    const auto pv = projection(s.k, cf, n);
    sink.out() << "{\"k\": " << pv.k << ", \"m\": " << pv.m
               << ", \"eta_num\": " << a.eta_num << ", \"eta_den\": " << a.eta_den
               << ", \"n\": " << n
               << ", \"re_phi\": " << format_g17(phi.real())
               << ", \"im_phi\": " << format_g17(phi.imag())
               << ", \"re_value\": " << format_g17(pv.value.real())
               << ", \"im_value\": " << format_g17(pv.value.imag())
               << ", \"re_finite_n\": " << format_g17(pv.finite_n_value.real())
               << ", \"im_finite_n\": " << format_g17(pv.finite_n_value.imag())
               << "}\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasilocal charges of the periodic XXZ chain at roots of unity"};
  app.require_subcommand(1);
  Settings s;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--eta", s.eta, "anisotropy angle as a fraction of pi, e.g. 2/3pi");
    cmd->add_option("--eta-num", s.eta_num, "numerator of eta/pi");
    cmd->add_option("--eta-den", s.eta_den, "denominator of eta/pi");
    cmd->add_option("--family", s.family, "charge family (1, 2 or 3)");
    cmd->add_option("--phi", s.phi, "spectral parameter, e.g. 0.9+0.2i or pi/2");
    cmd->add_option("--seed", s.seed, "seed for randomized numerics");
    cmd->add_option("--output", s.output, "output path (default stdout)");
    cmd->add_option("--config", s.config, "key=value file overriding flags");
  };

  CLI::App* verify = app.add_subcommand("verify", "admissibility / FCR / conservation / involution checks");
  add_common(verify);
  verify->add_option("--n", s.n_range, "chain length or range, e.g. 4..9");
  verify->add_option("--phi2", s.phi2, "second spectral parameter");
  verify->add_option("--tol", s.tol, "pass tolerance for residuals");
  verify->add_option("--neg-tol", s.neg_tol, "residual floor expected at inadmissible eta");

  CLI::App* terms = app.add_subcommand("charge-terms", "local terms q_r as operator JSON");
  add_common(terms);
  terms->add_option("--r", s.r_range, "support length or range, e.g. 3..6");

  CLI::App* kernel = app.add_subcommand("kernel", "Hilbert-Schmidt kernel by all routes (CSV)");
  add_common(kernel);
  kernel->add_option("--phi2", s.phi2, "second spectral parameter");
  kernel->add_option("--series-cutoff", s.series_cutoff, "partial-sum cutoff R");
  kernel->add_option("--finite-n", s.finite_n, "comma list of chain lengths");
  kernel->add_option("--csv", s.csv, "CSV path (default stdout)");

  CLI::App* mazur = app.add_subcommand("mazur-bound", "Fredholm solve and Mazur-Suzuki bound");
  add_common(mazur);
  mazur->add_option("--k", s.k, "spin-flip support length (odd)");
  mazur->add_option("--grid", s.grid, "collocation grid, e.g. 41x41");
  mazur->add_option("--lambda-reg", s.lambda_reg, "Tikhonov parameter");
  mazur->add_option("--imag-cutoff", s.imag_cutoff, "imaginary truncation of the strip");
  mazur->add_option("--margin", s.margin, "pole margin as a fraction of the strip half-width");
  mazur->add_option("--csv", s.csv, "write f over the grid to this CSV");

  CLI::App* project = app.add_subcommand("project", "projection of A_k onto the charges");
  add_common(project);
  project->add_option("--k", s.k, "spin-flip support length (odd)");
  project->add_option("--n", s.n_range, "chain length or range for the finite-n route");

  try {
    app.parse(argc, argv);
    apply_config(s);
    if (verify->parsed()) return cmd_verify(s);
    if (terms->parsed()) return cmd_charge_terms(s);
    if (kernel->parsed()) return cmd_kernel(s);
    if (mazur->parsed()) return cmd_mazur(s);
    if (project->parsed()) return cmd_project(s);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
