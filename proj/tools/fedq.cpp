#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fedq/checks.hpp"
#include "fedq/fock.hpp"
#include "fedq/io.hpp"
#include "fedq/moment.hpp"
#include "fedq/parse.hpp"

using namespace fedq;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string geometry = "flat:1";
  std::string alpha;
  std::string level;
  int maxY = 5;
  int maxYbar = 4;
  int maxH = 4;
  std::string format = "text";
  std::string cache;
  std::uint64_t seed = 1;
  int threads = 0;
  bool timings = false;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw UsageError(path + " is not valid JSON: " + e.what());
  }
}

RationalFn parse_function(const Json& j, int n, const std::string& what) {
  if (!j.is_string()) throw UsageError(what + " must be an expression string");
  HPoly p = parse_expression(j.get<std::string>(), n);
  if (!p.is_hbar_free()) throw UsageError(what + " must not depend on h");
  return p.coeff(0);
}

Matrix parse_matrix(const Json& j, int n, const std::string& what) {
  Matrix m;
  if (!j.is_array()) throw UsageError(what + " must be an array of rows");
  for (const auto& row : j) {
    if (!row.is_array()) throw UsageError(what + " must be an array of rows");
    Vector r;
    for (const auto& e : row) r.push_back(parse_function(e, n, what));
    m.push_back(r);
  }
  return m;
}

Vector parse_vector(const Json& j, int n, const std::string& what) {
  if (!j.is_array()) throw UsageError(what + " must be an array");
  Vector v;
  for (const auto& e : j) v.push_back(parse_function(e, n, what));
  return v;
}

// Preset name, a saved geometry, or {"name", "omega": [[expr]], "d_rho": [expr], "dbar_rho"?}.
GeometryPtr load_geometry(const std::string& spec) {
  if (spec.size() < 5 || spec.substr(spec.size() - 5) != ".json") {
    try {
      return geometry_from_name(spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string(e.what()) + " (presets: flat:n, cp1, disc, or a .json file)");
    }
  }
  Json j = read_json_file(spec);
  if (j.contains("schema")) return geometry_from_json(j);
  if (!j.contains("omega") || !j.contains("d_rho")) throw UsageError(spec + " needs 'omega' and 'd_rho'");
  int n = static_cast<int>(j.at("omega").size());
  CustomMetric m;
  m.name = j.value("name", "custom");
  m.omega = parse_matrix(j.at("omega"), n, "omega");
  m.d_rho = parse_vector(j.at("d_rho"), n, "d_rho");
  if (j.contains("dbar_rho")) m.dbar_rho = parse_vector(j.at("dbar_rho"), n, "dbar_rho");
  return custom_geometry(m);
}

// Built-in name or {"coeff": {"h": [[expr]]}, "d_phi": {...}, "dbar_phi": {...}}.
AlphaForm load_alpha(const ChartGeometry& g, const std::string& spec) {
  if (spec.size() < 5 || spec.substr(spec.size() - 5) != ".json") {
    try {
      return alpha_from_name(g, spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string(e.what()) + " (zero, hbar_omega, berezin_toeplitz, or a .json file)");
    }
  }
  Json j = read_json_file(spec);
  std::map<int, Matrix> coeff;
  std::map<int, Vector> d_phi, dbar_phi;
  const Json none = Json::object();
  const Json& jc = j.contains("coeff") ? j.at("coeff") : none;
  const Json& jd = j.contains("d_phi") ? j.at("d_phi") : none;
  const Json& jdb = j.contains("dbar_phi") ? j.at("dbar_phi") : none;
  for (const auto& [k, v] : jc.items()) coeff[std::stoi(k)] = parse_matrix(v, g.n, "coeff");
  for (const auto& [k, v] : jd.items()) d_phi[std::stoi(k)] = parse_vector(v, g.n, "d_phi");
  for (const auto& [k, v] : jdb.items()) dbar_phi[std::stoi(k)] = parse_vector(v, g.n, "dbar_phi");
  return custom_alpha(g, coeff, d_phi, dbar_phi);
}

std::optional<Scalar> parse_level(const std::string& s) {
  if (s.empty()) return std::nullopt;
  HPoly p = parse_expression(s, 1);
  if (!p.is_hbar_free() || !p.coeff(0).is_constant()) throw UsageError("--level must be a Gaussian rational constant");
  Scalar k = p.coeff(0).constant_value();
  if (k.is_zero()) throw UsageError("--level must be nonzero");
  return k;
}

struct Session {
  RunConfig cfg;
  GeometryPtr g;
  AlphaForm alpha;
  std::optional<Scalar> level;

  Session(const RunConfig& c, const std::string& default_alpha) : cfg(c) {
    if (cfg.maxY < 2 || cfg.maxYbar < 1 || cfg.maxH < 1) throw UsageError("degree bounds must be positive (max-y-degree >= 2)");
    g = load_geometry(cfg.geometry);
    alpha = load_alpha(*g, cfg.alpha.empty() ? default_alpha : cfg.alpha);
    level = parse_level(cfg.level);
  }

  // Formal connection, from the cache when one is configured.
  FedosovData formal(int maxY) const {
    if (cfg.cache.empty()) return solve_fedosov(g, alpha, maxY);
    return ConnectionCache(cfg.cache).load_or_solve(g, alpha, maxY);
  }

  FedosovData connection(int maxY) const {
    FedosovData fd = formal(maxY);
    return level ? at_level(fd, *level) : fd;
  }

  HPoly expr(const std::string& s) const { return parse_expression(s, g->n); }
};

std::string render(const RationalFn& f, const std::string& format) {
  return format == "latex" ? f.to_latex() : f.to_string();
}

std::string render(const HPoly& f, const std::string& format) {
  return format == "latex" ? f.to_latex() : f.to_string();
}

std::string render(const WeylSection& s, const std::string& format) {
  return format == "latex" ? s.to_latex() : s.to_string();
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kExactBound:
      return "exact_bound";
    case Verdict::kUnboundedWithinTest:
      return "unbounded_within_test";
    case Verdict::kBoundedBy:
      return "bounded_by";
  }
  return "";
}

Json to_json(const QuantizabilityReport& q) {
  return {{"verdict", verdict_name(q.verdict)},
          {"bound", q.bound},
          {"max_ybar_degree_observed", q.max_ybar_degree_observed},
          {"tested_through_y_degree", q.tested_through_y_degree}};
}

Json to_json(const DiffOperator& d) {
  Json terms = Json::array();
  for (const auto& [b, c] : d.coeffs()) {
    Json e = Json::array();
    for (int i = 0; i < d.n(); ++i) e.push_back(b[i]);
    terms.push_back({{"d", e}, {"coeff", fedq::to_json(c)}});
  }
  return {{"schema", "fedq.diff_operator/1"},
          {"n", d.n()},
          {"level", fedq::to_json(d.level())},
          {"terms", terms},
          {"text", d.to_string()},
          {"latex", d.to_latex()}};
}

int cmd_geometry(const RunConfig& cfg) {
  Session s(cfg, "zero");
  const auto& g = *s.g;
  if (cfg.format == "json") {
    Json j = fedq::to_json(g);
    j["alpha"] = fedq::to_json(s.alpha);
    print_json(j);
    return 0;
  }
  const std::string& f = cfg.format;
  std::cout << "geometry " << g.name << " (n = " << g.n << ")\n";
  auto matrix = [&](const char* title, const Matrix& m) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) std::cout << title << "[" << i + 1 << "," << j + 1 << "] = " << render(m[i][j], f) << "\n";
    }
  };
  matrix("omega", g.omega);
  matrix("omega_inv", g.omega_inv);
  bool gamma_zero = true;
  for (int k = 0; k < g.n; ++k) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        if (g.christoffel[k][i][j].is_zero()) continue;
        gamma_zero = false;
        std::cout << "Gamma^" << k + 1 << "_" << i + 1 << j + 1 << " = " << render(g.christoffel[k][i][j], f) << "\n";
      }
    }
  }
  if (gamma_zero) std::cout << "Gamma = 0\n";
  bool r_zero = true;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      for (int k = 0; k < g.n; ++k) {
        for (int l = 0; l < g.n; ++l) {
          const auto& r = g.curvature[i][j][k][l];
          if (r.is_zero()) continue;
          r_zero = false;
          std::cout << "R[" << i + 1 << "," << j + 1 << "b," << k + 1 << "," << l + 1 << "b] = " << render(r, f) << "\n";
        }
      }
    }
  }
  if (r_zero) std::cout << "R = 0\n";
  matrix("ricci", g.ricci);
  for (int i = 0; i < g.n; ++i) std::cout << "d_rho[" << i + 1 << "] = " << render(g.d_rho[i], f) << "\n";
  auto fails = geometry_invariant_failures(g);
  std::cout << "invariants: " << (fails.empty() ? "ok" : fails.front()) << "\n";
  return fails.empty() ? 0 : kExitCheckFailed;
}

int cmd_fedosov(const RunConfig& cfg) {
  Session s(cfg, "zero");
  FedosovData fd = s.connection(cfg.maxY);
  WeylSection res = fedosov_residual(fd);
  auto fails = fedosov_invariant_failures(fd);
  bool ok = res.is_zero() && fails.empty();
  if (cfg.format == "json") {
    Json j = fedq::to_json(fd);
    j["residual_zero"] = res.is_zero();
    j["certified_y_degree"] = fd.certified_y_degree();
    print_json(j);
    return ok ? 0 : kExitCheckFailed;
  }
  const std::string& f = cfg.format;
  std::cout << "connection on " << fd.g().name << " with alpha " << fd.alpha.name << ", maxY " << fd.maxY;
  if (fd.level) std::cout << ", level " << fd.level->to_string();
  std::cout << "\n";
  std::cout << "I = " << render(fd.I, f) << "\n";
  std::cout << "J = " << render(fd.J, f) << "\n";
  std::cout << "residual through y-degree " << fd.certified_y_degree() << ": "
            << (res.is_zero() ? "0" : render(res, f)) << "\n";
  if (!fd.level) std::cout << "Karabegov form: " << form_to_string(karabegov_form(fd), fd.g().n) << "\n";
  for (const auto& m : fails) std::cout << "invariant failed: " << m << "\n";
  return ok ? 0 : kExitCheckFailed;
}

int cmd_star(const RunConfig& cfg, const std::string& fs, const std::string& gs) {
  Session s(cfg, "zero");
  HPoly f = s.expr(fs), g = s.expr(gs);
  FedosovData fd = s.formal(std::max(cfg.maxY, 2 * cfg.maxH + 3));
  HPoly fg = star_of_functions(f, g, fd, cfg.maxH);
  HPoly gf = star_of_functions(g, f, fd, cfg.maxH);
  if (s.level) {
    fg = HPoly(fg.evaluate(*s.level));
    gf = HPoly(gf.evaluate(*s.level));
  }
  if (cfg.format == "json") {
    print_json({{"schema", "fedq.star/1"},
                {"f", fs},
                {"g", gs},
                {"through_h", cfg.maxH},
                {"f_star_g", fedq::to_json(fg)},
                {"g_star_f", fedq::to_json(gf)},
                {"f_star_g_text", fg.to_string()},
                {"g_star_f_text", gf.to_string()}});
    return 0;
  }
  std::cout << "f*g = " << render(fg, cfg.format) << "\n";
  std::cout << "g*f = " << render(gf, cfg.format) << "\n";
  return 0;
}

FlatSection flat_of(const Session& s, const HPoly& f, const FedosovData& fd) {
  if (f.is_hbar_free() && f.coeff(0).is_holomorphic()) return flat_prolong_holomorphic(f.coeff(0), fd);
  return flat_section_of_function(f, fd, FlatOptions{s.cfg.maxYbar, s.cfg.maxH});
}

int cmd_flat(const RunConfig& cfg, const std::string& fn) {
  Session s(cfg, "zero");
  HPoly f = s.expr(fn);
  FedosovData fd = s.connection(cfg.maxY);
  FlatSection o = flat_of(s, f, fd);
  auto q = quantizability_check(o);
  if (cfg.format == "json") {
    print_json({{"schema", "fedq.flat_section/1"},
                {"fn", fn},
                {"section", fedq::to_json(o.section)},
                {"symbol", fedq::to_json(o.symbol)},
                {"certified_degree", o.certified_degree},
                {"provenance", provenance_name(o.provenance)},
                {"quantizability", to_json(q)}});
    return 0;
  }
  std::cout << "O[" << fn << "] on " << fd.g().name << " with alpha " << fd.alpha.name << "\n";
  for (const auto& [idx, c] : o.section.terms()) {
    WeylSection one = WeylSection::monomial(o.section.n(), idx, c);
    std::cout << "  " << render(one, cfg.format) << "\n";
  }
  std::cout << "certified through y-degree " << o.certified_degree << "\n";
  std::cout << "provenance " << provenance_name(o.provenance) << "\n";
  std::cout << "quantizability " << q.to_string() << "\n";
  return 0;
}

// Fock data need a positive integer level and alpha = h Ricci.
FedosovData fock_connection(const Session& s) {
  if (!s.level) throw UsageError("--level is required");
  const Scalar& k = *s.level;
  if (!k.is_real() || k.re().get_den() != 1 || k.re() <= 0) throw UsageError("--level must be a positive integer");
  return s.connection(std::max(s.cfg.maxY, 6));
}

int cmd_quantize(const RunConfig& cfg, const std::string& fn, int order) {
  Session s(cfg, "berezin_toeplitz");
  FedosovData fd = fock_connection(s);
  FlatSection o = flat_of(s, s.expr(fn), fd);
  DiffOperator d = quantize_to_diffop(o, fd, order);
  if (cfg.format == "json") {
    Json j = to_json(d);
    j["fn"] = fn;
    print_json(j);
  } else {
    std::cout << (cfg.format == "latex" ? d.to_latex() : d.to_string()) << "\n";
  }
  return 0;
}

int cmd_moment(const RunConfig& cfg, const std::string& symmetry) {
  Session s(cfg, "zero");
  FedosovData fd = s.connection(std::max(cfg.maxY, 6));
  SymmetryDatum sym;
  try {
    sym = symmetry_from_name(s.g, symmetry);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  MomentSection ms = build_moment_section(sym, fd);
  Json j = {{"schema", "fedq.moment/1"},
            {"symmetry", sym.name},
            {"vector_field", fedq::to_json(sym.v)},
            {"moment_fn", fedq::to_json(sym.moment_fn)},
            {"quadratic_weyl", fedq::to_json(ms.quadratic_weyl)},
            {"s", fedq::to_json(ms.s)}};
  const std::string& f = cfg.format;
  std::ostringstream text;
  text << "symmetry " << sym.name << " on " << s.g->name << "\n";
  for (int i = 0; i < s.g->n; ++i) text << "V^" << i + 1 << " = " << render(sym.v[i], f) << "\n";
  text << "mu = " << render(sym.moment_fn, f) << "\n";
  text << "quadratic part (Moyal order) = " << render(ms.quadratic_weyl, f) << "\n";
  text << "s = " << render(ms.s, f) << "\n";
  int status = 0;
  try {
    FlatSection c = complete_to_flat(ms, fd);
    auto q = quantizability_check(c);
    j["completed_symbol"] = fedq::to_json(c.symbol);
    j["quantizability"] = to_json(q);
    text << "completed symbol = " << render(c.symbol, f) << "\n";
    text << "quantizability " << q.to_string() << "\n";
    if (s.level) {
      const Scalar& k = *s.level;
      if (k.is_real() && k.re().get_den() == 1 && k.re() > 0) {
        DiffOperator d = quantize_to_diffop(c, fd, 4);
        j["operator"] = to_json(d);
        text << "operator = " << (f == "latex" ? d.to_latex() : d.to_string()) << "\n";
      }
    }
  } catch (const CompletionOutsideClass& e) {
    j["completion"] = e.what();
    text << e.what() << "\n";
    status = kExitCheckFailed;
  }
  if (f == "json") {
    print_json(j);
  } else {
    std::cout << text.str();
  }
  return status;
}

int cmd_check(const RunConfig& cfg, const std::string& suite, bool geometry_given, bool alpha_given) {
  SuiteOptions o;
  if (geometry_given) o.geometries.push_back(load_geometry(cfg.geometry));
  if (alpha_given) o.alphas.push_back(cfg.alpha);
  o.maxY = cfg.maxY;
  o.level = parse_level(cfg.level);
  o.seed = cfg.seed;
  std::optional<ConnectionCache> cache;
  if (!cfg.cache.empty()) {
    cache.emplace(cfg.cache);
    o.cache = &*cache;
  }
  std::vector<Check> checks;
  try {
    checks = suite_checks(suite, o);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  CheckReport report = run_checks(checks, cfg.threads);
  bool ok = all_pass(report);
  if (cfg.format == "json") {
    Json j = fedq::to_json(report, cfg.timings);
    j["suite"] = suite;
    j["seed"] = cfg.seed;
    print_json(j);
  } else {
    std::cout << "suite " << suite << ", seed " << cfg.seed << "\n";
    for (const auto& r : report) {
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail;
      if (cfg.timings) {
        char secs[32];
        std::snprintf(secs, sizeof secs, "; %.2f s", r.seconds);
        std::cout << secs;
      }
      std::cout << ")\n";
    }
    std::cout << (ok ? "all checks passed" : "some checks failed") << "\n";
  }
  return ok ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fedosov quantization of Kahler charts: star products, flat sections, Fock quantization"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  auto* geometry_opt = app.add_option("--geometry", cfg.geometry, "flat:n, cp1, disc, or a .json file")->capture_default_str();
  auto* alpha_opt = app.add_option("--alpha", cfg.alpha, "zero, hbar_omega, berezin_toeplitz, or a .json file");
  app.add_option("--level", cfg.level, "evaluate h = 1/level (Gaussian rational)");
  app.add_option("--max-y-degree", cfg.maxY, "fiber degree of the connection")->capture_default_str();
  app.add_option("--max-ybar-degree", cfg.maxYbar, "yb truncation of flat sections")->capture_default_str();
  app.add_option("--max-h-degree", cfg.maxH, "h truncation")->capture_default_str();
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"text", "json", "latex"}))
      ->capture_default_str();
  app.add_option("--cache", cfg.cache, "directory of cached connections");
  app.add_option("--seed", cfg.seed, "seed of the random-section generator")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads for check (0 = hardware)");
  app.add_flag("--timings", cfg.timings, "report elapsed time per check");

  auto* geometry = app.add_subcommand("geometry", "print the chart data");
  auto* fedosov = app.add_subcommand("fedosov", "solve the Fedosov connection");
  auto* star = app.add_subcommand("star", "symbols of f*g and g*f");
  std::string f_expr, g_expr, fn;
  star->add_option("--f", f_expr, "left factor")->required();
  star->add_option("--g", g_expr, "right factor")->required();
  auto* flat = app.add_subcommand("flat", "flat section with a given symbol");
  flat->add_option("--fn", fn, "symbol")->required();
  auto* quantize = app.add_subcommand("quantize", "differential operator of a flat section");
  int order = 4;
  quantize->add_option("--fn", fn, "symbol")->required();
  quantize->add_option("--order", order, "highest monomial degree used to identify the operator")->capture_default_str();
  auto* moment = app.add_subcommand("moment", "quantum moment map of a symmetry");
  std::string symmetry;
  moment->add_option("--symmetry", symmetry, "rotation or translation:i")->required();
  auto* check = app.add_subcommand("check", "run an invariant suite");
  std::string suite = "all";
  check->add_option("suite", suite, "geometry, fedosov, flat, fock, moment, acceptance, all")->capture_default_str();
  for (auto* sub : {geometry, fedosov, star, flat, quantize, moment, check}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*geometry) return cmd_geometry(cfg);
    if (*fedosov) return cmd_fedosov(cfg);
    if (*star) return cmd_star(cfg, f_expr, g_expr);
    if (*flat) return cmd_flat(cfg, fn);
    if (*quantize) return cmd_quantize(cfg, fn, order);
    if (*moment) return cmd_moment(cfg, symmetry);
    if (*check) return cmd_check(cfg, suite, geometry_opt->count() > 0, alpha_opt->count() > 0);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GeometryError& e) {
    std::cerr << "error: invalid geometry: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FockError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
