#include "fedq/checks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "fedq/flat_sections.hpp"
#include "fedq/fock.hpp"
#include "fedq/io.hpp"
#include "fedq/moment.hpp"
#include "fedq/random.hpp"

namespace fedq {

void Tally::expect(bool ok, const std::string& what) {
  ++total_;
  if (ok) return;
  ++failed_;
  if (first_failures_.size() < 3) first_failures_.push_back(what);
}

std::string Tally::summary() const {
  std::string s = std::to_string(total_ - failed_) + "/" + std::to_string(total_) + " identities hold";
  for (const auto& f : first_failures_) s += "; FAIL " + f;
  return s;
}

std::string clip(const std::string& s, std::size_t max) {
  return s.size() <= max ? s : s.substr(0, max) + "...";
}

CheckReport run_checks(const std::vector<Check>& checks, int threads) {
  CheckReport out(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < checks.size(); i = next++) {
      const Check& c = checks[i];
      CheckResult r;
      r.name = c.name;
      auto start = std::chrono::steady_clock::now();
      try {
        Tally t = c.run();
        r.pass = t.pass();
        r.detail = t.summary();
      } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (c.time_limit > 0 && r.seconds > c.time_limit) {
        r.pass = false;
        r.detail += "; exceeded time limit of " + std::to_string(static_cast<int>(c.time_limit)) + " s";
      }
      out[i] = std::move(r);
    }
  };
  int n = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min<int>(n, static_cast<int>(std::max<std::size_t>(1, checks.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

namespace {

const AlphaKind kBuiltinAlphas[] = {AlphaKind::kZero, AlphaKind::kHbarOmega, AlphaKind::kBerezinToeplitz};

RationalFn z(int i = 0) { return RationalFn::var(z_var(i)); }
RationalFn zb(int i = 0) { return RationalFn::var(zb_var(i)); }

std::vector<GeometryPtr> presets() { return {flat_geometry(1), flat_geometry(2), cp1_geometry(), disc_geometry()}; }

// Non-symmetric metric 1 + z zb: curvature is not parallel, so no series terminates.
GeometryPtr bumpy_geometry() {
  CustomMetric m;
  m.name = "bumpy";
  m.omega = {{RationalFn(1) + z() * zb()}};
  m.d_rho = {zb() + z() * zb() * zb() * Scalar::rational(1, 2)};
  return custom_geometry(m);
}

int denominator_sign(const ChartGeometry& g) {
  if (g.name == "cp1" || g.name == "bumpy") return 1;
  return g.name == "disc" ? -1 : 0;
}

FedosovData solve(GeometryPtr g, AlphaKind k, int maxY) { return solve_fedosov(g, alpha_form(*g, k), maxY); }

FedosovData bt_level(GeometryPtr g, long k, int maxY) {
  return at_level(solve(g, AlphaKind::kBerezinToeplitz, maxY), Scalar(k));
}

std::string label(const ChartGeometry& g, const AlphaForm& a) { return g.name + "/" + a.name; }

FockSection random_fock(SectionGenerator& gen, const ChartGeometry& g, const Scalar& k, unsigned forms = 0b11) {
  RandomSpec s;
  s.terms = 3;
  s.max_y = 2;
  s.max_yb = 0;
  s.form_degrees = forms;
  s.denominator_sign = denominator_sign(g);
  return FockSection::make(gen.section(g.n, s), k);
}

WeylSection random_weyl(SectionGenerator& gen, const ChartGeometry& g, const Scalar& k, unsigned forms = 0b11) {
  RandomSpec s;
  s.terms = 3;
  s.max_y = 2;
  s.max_yb = 1;
  s.max_h = 1;
  s.form_degrees = forms;
  s.denominator_sign = denominator_sign(g);
  return evaluate_hbar(gen.section(g.n, s), k);
}

// Contraction of one yb^q with one y^p against w^{p qbar}.
WeylSection fiber_trace(const WeylSection& a, const ChartGeometry& g) {
  WeylSection r(g.n);
  for (int p = 0; p < g.n; ++p) {
    for (int q = 0; q < g.n; ++q) r += d_yb(d_y(a, p), q) * g.omega_inv[p][q];
  }
  return r;
}

// c y^a yb^b with a + b <= d, forms {1, dz, dzb}, coefficients {1, z, zb, z zb}.
std::vector<WeylSection> monomial_basis_1d(int d) {
  std::vector<WeylSection> out;
  for (const auto& c : {RationalFn(1), z(), zb(), z() * zb()}) {
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        for (std::uint8_t f : {std::uint8_t{0}, dz_bit(0), dzb_bit(0)}) {
          TermIndex t;
          t.form = f;
          t.y[0] = static_cast<std::uint8_t>(a);
          t.yb[0] = static_cast<std::uint8_t>(b);
          out.push_back(WeylSection::monomial(1, t, c));
        }
      }
    }
  }
  return out;
}

void expect_zero(Tally& t, const WeylSection& s, const std::string& what) {
  t.expect(s.is_zero(), what + ": " + clip(s.to_string()));
}

// Module axiom, D_F^2 = 0 and compatibility on seeded random inputs.
void fock_structure(Tally& t, GeometryPtr g, long k, std::uint64_t seed, int samples) {
  SectionGenerator gen(seed);
  Scalar kk(k);
  std::string tag = g->name + " k=" + std::to_string(k);
  for (int it = 0; it < samples; ++it) {
    WeylSection a = random_weyl(gen, *g, kk), b = random_weyl(gen, *g, kk);
    FockSection s = random_fock(gen, *g, kk);
    FockSection lhs = bf_act(wick_mul(a, b, *g), s, *g), rhs = bf_act(a, bf_act(b, s, *g), *g);
    expect_zero(t, lhs.poly - rhs.poly, "module axiom " + tag);
  }
  auto fd = bt_level(g, k, 6);
  for (int it = 0; it < samples; ++it) {
    FockSection s = random_fock(gen, *g, kk);
    WeylSection dd = fock_connection_apply(fd, fock_connection_apply(fd, s)).poly;
    expect_zero(t, dd.up_to_y_degree(fd.maxY - 2), "D_F^2 " + tag);
  }
  auto fd7 = bt_level(g, k, 7);
  for (int it = 0; it < samples; ++it) {
    WeylSection a = random_weyl(gen, *g, kk);
    FockSection s = random_fock(gen, *g, kk, 0b1);
    for (int parity : {0, 1}) {
      WeylSection ap = a.filter([parity](const TermIndex& i) { return i.form_degree() % 2 == parity; });
      WeylSection lhs = fock_connection_apply(fd7, bf_act(ap, s, *g)).poly;
      WeylSection rhs = bf_act(connection_apply(fd7, ap), s, *g).poly;
      WeylSection second = bf_act(ap, fock_connection_apply(fd7, s), *g).poly;
      rhs += parity ? -second : second;
      expect_zero(t, (lhs - rhs).up_to_y_degree(fd7.maxY - 4), "compatibility " + tag);
    }
  }
}

// sigma(O_f * O_g) axioms over a basis: unit, associativity, one Poisson constant.
void star_axioms(Tally& t, const FedosovData& fd, const std::vector<RationalFn>& basis, int order,
                 std::optional<Scalar>* lambda_out = nullptr) {
  std::optional<Scalar> lambda;
  for (const auto& f : basis) {
    t.expect(star_of_functions(HPoly(f), HPoly(1), fd, order) == HPoly(f), "f*1 = f for " + f.to_string());
    t.expect(star_of_functions(HPoly(1), HPoly(f), fd, order) == HPoly(f), "1*f = f for " + f.to_string());
    for (const auto& g : basis) {
      HPoly fg = star_of_functions(HPoly(f), HPoly(g), fd, order);
      std::string pair = f.to_string() + "," + g.to_string();
      t.expect(fg.coeff(0) == f * g, "classical limit " + pair);
      RationalFn comm = fg.coeff(1) - star_of_functions(HPoly(g), HPoly(f), fd, order).coeff(1);
      RationalFn pb = poisson_bracket(fd.g(), f, g);
      if (pb.is_zero()) {
        t.expect(comm.is_zero(), "commutator vanishes with the bracket " + pair);
      } else {
        RationalFn ratio = comm / pb;
        bool constant = ratio.is_constant();
        if (constant && !lambda) lambda = ratio.constant_value();
        t.expect(constant && ratio.constant_value() == *lambda, "Poisson constant " + pair);
      }
      for (const auto& h : basis) {
        HPoly left = star_of_functions(fg, HPoly(h), fd, order);
        HPoly right = star_of_functions(HPoly(f), star_of_functions(HPoly(g), HPoly(h), fd, order), fd, order);
        t.expect(left == right, "associativity " + pair + "," + h.to_string());
      }
    }
  }
  t.expect(lambda.has_value(), "some pair has a nonzero Poisson bracket");
  if (lambda_out) *lambda_out = lambda;
}

// Holomorphic prolongations have no yb; O_{u_j} has yb-degree one with the stated part.
void generator_shapes(Tally& t, const FedosovData& fd) {
  const auto& g = fd.g();
  std::string tag = label(g, fd.alpha);
  std::vector<RationalFn> hol{z(), z() * z() + z()};
  if (g.n > 1) hol.push_back(z(0) * z(1));
  for (const auto& f : hol) {
    FlatSection o = flat_prolong_holomorphic(f, fd);
    t.expect(o.section.max_ybar_degree() == 0, tag + " O[" + f.to_string() + "] has yb");
    expect_zero(t, flatness_defect(o, fd), tag + " O[" + f.to_string() + "] not flat");
  }
  for (int j = 0; j < g.n; ++j) {
    FlatSection o = build_u(fd, j);
    t.expect(o.section.max_ybar_degree() == 1, tag + " O[u] yb-degree " + std::to_string(o.section.max_ybar_degree()));
    WeylSection anti = WeylSection::scalar(g.n, u_function(g, fd.alpha, j));
    for (int m = 0; m < g.n; ++m) anti += WeylSection::yb(g.n, m) * g.omega[j][m];
    expect_zero(t, pi_0star(o.section) - anti, tag + " anti-holomorphic part of O[u]");
    expect_zero(t, flatness_defect(o, fd), tag + " O[u] not flat");
    auto q = quantizability_check(o);
    t.expect(q.verdict == Verdict::kExactBound && q.bound == 1, tag + " O[u] verdict " + q.to_string());
  }
}

void tdo_structure(Tally& t, const FedosovData& fd, std::optional<Scalar>* psi = nullptr) {
  std::vector<RationalFn> samples{z(), z() * z(), z() * z() * z() + z()};
  if (fd.g().n > 1) samples.push_back(z(0) * z(1));
  TdoReport r = tdo_checks(fd, samples);
  for (const auto& c : r.items) t.expect(c.pass, label(fd.g(), fd.alpha) + " " + c.name + " " + c.detail);
  t.expect(r.psi_constant.has_value(), "psi constant found");
  if (psi) *psi = r.psi_constant;
}

void moment_structure(Tally& t, const SymmetryDatum& sym, const FedosovData& fd, int basis_degree) {
  std::string tag = label(fd.g(), fd.alpha) + " " + sym.name;
  for (const auto& f : symmetry_invariant_failures(sym)) t.expect(false, tag + " " + f);
  MomentSection ms = build_moment_section(sym, fd);
  if (fd.g().n == 1) {
    for (const auto& a : monomial_basis_1d(basis_degree)) {
      expect_zero(t, moment_identity_defect(ms, fd, a), tag + " bracket identity on " + a.to_string());
    }
  }
  try {
    FlatSection c = complete_to_flat(ms, fd);
    auto q = quantizability_check(c);
    t.expect(q.verdict == Verdict::kExactBound && q.bound == 1, tag + " completion verdict " + q.to_string());
    t.expect((c.symbol.coeff(0) + sym.moment_fn * Scalar::i()).is_constant(), tag + " symbol is -i mu");
  } catch (const CompletionOutsideClass& e) {
    t.expect(false, tag + " " + e.what());
  }
}

}  // namespace

std::vector<Check> acceptance_checks(std::uint64_t seed) {
  std::vector<Check> c;
  c.push_back({"A1 Fedosov residual zero", [] {
                 Tally t;
                 for (auto g : presets()) {
                   auto start = std::chrono::steady_clock::now();
                   for (auto k : kBuiltinAlphas) {
                     FedosovData fd = solve(g, k, 5);
                     t.expect(fd.certified_y_degree() >= 4, g->name + " certified degree");
                     expect_zero(t, fedosov_residual(fd), label(*g, fd.alpha) + " residual");
                   }
                   double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                   t.expect(secs < 60, g->name + " took " + std::to_string(secs) + " s");
                 }
                 return t;
               },
               240});
  c.push_back({"A2 star-product axioms on flat(1)", [] {
                 Tally t;
                 auto fd = solve(flat_geometry(1), AlphaKind::kZero, 7);
                 std::vector<RationalFn> b{RationalFn(1), z(), zb(), z() * z(), z() * zb(), zb() * zb()};
                 std::optional<Scalar> lambda;
                 star_axioms(t, fd, b, 3, &lambda);
                 t.expect(lambda && *lambda == Scalar::i(), "lambda = i");
                 return t;
               },
               30});
  c.push_back({"A3 quantizable generators", [] {
                 Tally t;
                 for (auto g : presets()) {
                   for (auto k : {AlphaKind::kZero, AlphaKind::kBerezinToeplitz}) generator_shapes(t, solve(g, k, 5));
                 }
                 return t;
               },
               60});
  c.push_back({"A4 counterexample at k = 1", [] {
                 Tally t;
                 auto g = flat_geometry(1);
                 auto fd = solve(g, AlphaKind::kHbarOmega, 5);
                 WeylSection s = WeylSection::yb(1, 0) * g->omega[0][0];
                 t.expect(symbol(s).is_zero(), "symbol vanishes");
                 expect_zero(t, connection_apply(at_level(fd, Scalar(1)), s), "D_{alpha,1} s");
                 for (long k : {2, 5, 10}) {
                   t.expect(!connection_apply(at_level(fd, Scalar(k)), s).is_zero(), "flat at k=" + std::to_string(k));
                   t.expect(symbol_free_kernel_dimension(fd, Scalar(k), 3, 1) == 0,
                            "symbol-free flat section at k=" + std::to_string(k));
                 }
                 t.expect(symbol_free_kernel_dimension(fd, Scalar(1), 3, 1) > 0, "no symbol-free flat section at k=1");
                 return t;
               },
               10});
  c.push_back({"A5 Bargmann-Fock module", [seed] {
                 Tally t;
                 std::uint64_t s = seed;
                 for (auto g : presets()) {
                   for (long k : {1, 2, 3}) fock_structure(t, g, k, s++, 20);
                 }
                 return t;
               },
               120});
  c.push_back({"A6 coherent frame and lemmas", [] {
                 Tally t;
                 for (auto g : {flat_geometry(1), cp1_geometry()}) {
                   for (long k : {1, 2}) {
                     auto fd = bt_level(g, k, 6);
                     FockSection e = coherent_section(fd);
                     std::string tag = g->name + " k=" + std::to_string(k);
                     t.expect(symbol(e.poly) == HPoly(1), tag + " symbol of the frame");
                     t.expect(fock_certified_degree(fd) >= 4, tag + " certified through y^4");
                     expect_zero(t, fock_connection_apply(fd, e).poly.up_to_y_degree(4), tag + " D_F e^{k beta}");
                   }
                 }
                 // D(beta) = w_{i jbar} dzb^j y^i - d rho.
                 for (auto g : {flat_geometry(1), flat_geometry(2), cp1_geometry(), disc_geometry(), bumpy_geometry()}) {
                   WeylSection beta = build_beta(*g, 6);
                   WeylSection expect(g->n);
                   for (int i = 0; i < g->n; ++i) {
                     TermIndex dz;
                     dz.form = dz_bit(i);
                     expect -= WeylSection::monomial(g->n, dz, g->d_rho[i]);
                     for (int j = 0; j < g->n; ++j) {
                       TermIndex u;
                       u.form = dzb_bit(j);
                       u.y[i] = 1;
                       expect += WeylSection::monomial(g->n, u, g->omega[i][j]);
                     }
                   }
                   for (auto k : kBuiltinAlphas) {
                     auto fd = solve(g, k, 6);
                     expect_zero(t, connection_apply(fd, beta).up_to_y_degree(fd.maxY - 1) - expect,
                                 label(*g, fd.alpha) + " D(beta)");
                   }
                 }
                 // (J)_n = h tr(I_{n+1}).
                 for (auto g : {cp1_geometry(), bumpy_geometry()}) {
                   auto fd = solve(g, AlphaKind::kBerezinToeplitz, 7);
                   for (int n = 1; n < fd.maxY; ++n) {
                     WeylSection expect = fiber_trace(fd.I.with_y_degree(n + 1), *g).times_hbar(1);
                     expect_zero(t, fd.J.with_y_degree(n) - expect, g->name + " J_" + std::to_string(n));
                   }
                 }
                 // (I + J) (.) e^{k beta} = ((1/h)[I, beta]) e^{k beta}.
                 for (auto g : {flat_geometry(1), cp1_geometry(), disc_geometry(), bumpy_geometry()}) {
                   for (long k : {1, 2}) {
                     auto fd = bt_level(g, k, 6);
                     FockSection e = coherent_section(fd);
                     WeylSection lhs = bf_act(fd.I_alpha(), e, *g).poly;
                     WeylSection beta = build_beta(*g, fd.maxY);
                     beta.set_level(Scalar(k));
                     WeylSection rhs = commutative_mul(hbar_bracket(evaluate_hbar(fd.I, Scalar(k)), beta, *g), e.poly);
                     expect_zero(t, (lhs - rhs).up_to_y_degree(fd.maxY - 2), g->name + " star identity");
                   }
                 }
                 return t;
               },
               120});
  c.push_back({"A7 quantization map", [] {
                 Tally t;
                 for (long k : {1, 2, 3}) {
                   auto fd = bt_level(flat_geometry(1), k, 6);
                   DiffOperator d = DiffOperator::derivative(1, 0, Scalar(k));
                   DiffOperator q = quantize_to_diffop(flat_section_of_function(HPoly(zb()), fd), fd, 4);
                   t.expect(q == d * Scalar(-Scalar(k).inverse()), "quantize(O_zb) = " + q.to_string());
                   for (const auto& f : {z(), z() * z(), z() * z() * z() + RationalFn(2)}) {
                     DiffOperator m = quantize_to_diffop(flat_prolong_holomorphic(f, fd), fd, 4);
                     t.expect(m == DiffOperator::multiplication(1, f), "quantize(" + f.to_string() + ") = " + m.to_string());
                   }
                 }
                 for (auto g : {flat_geometry(1), cp1_geometry(), disc_geometry()}) {
                   auto fd = bt_level(g, 2, 7);
                   std::vector<FlatSection> secs{flat_prolong_holomorphic(z(), fd), build_u(fd, 0),
                                                 flat_prolong_holomorphic(z() * z(), fd)};
                   secs.push_back(star_product_section(secs[0], secs[1], fd));
                   std::vector<DiffOperator> ops;
                   for (const auto& s : secs) ops.push_back(quantize_to_diffop(s, fd, 4));
                   const std::pair<int, int> pairs[] = {{0, 1}, {1, 0}, {1, 1}, {1, 2}, {3, 1}, {1, 3}};
                   for (auto [a, b] : pairs) {
                     DiffOperator p = quantize_to_diffop(star_product_section(secs[a], secs[b], fd), fd, 4);
                     t.expect(p == ops[a].compose(ops[b]), g->name + " homomorphism on pair " + std::to_string(a) + "," +
                                                               std::to_string(b) + ": " + p.to_string());
                   }
                 }
                 auto fd = bt_level(flat_geometry(1), 2, 6);
                 std::vector<DiffOperator> gens{quantize_to_diffop(flat_prolong_holomorphic(z(), fd), fd, 4),
                                                quantize_to_diffop(build_u(fd, 0), fd, 4)};
                 auto missing = missing_from_generated_span(gens, 3, 3);
                 t.expect(missing.empty(), "generated algebra misses " + (missing.empty() ? "" : missing.front()));
                 return t;
               },
               120});
  c.push_back({"A8 Kahler trace identity", [] {
                 Tally t;
                 for (auto g : {cp1_geometry(), disc_geometry()}) {
                   for (const auto& v : kahler_trace_defect(*g)) t.expect(v.is_zero(), g->name + " defect " + v.to_string());
                   // rho1 is a potential of the Ricci form computed from the curvature tensor.
                   t.expect(g->d_rho1[0].derivative(zb_var(0)) == g->ricci[0][0], g->name + " dbar d rho1 = Ric");
                   RationalFn direct = g->d_rho1[0] + g->omega[0][0].derivative(z_var(0)) * g->omega_inv[0][0];
                   t.expect(direct.is_zero(), g->name + " direct formula " + direct.to_string());
                 }
                 return t;
               },
               5});
  c.push_back({"A9 TDO structure", [] {
                 Tally t;
                 std::optional<Scalar> first;
                 for (auto g : presets()) {
                   for (auto k : kBuiltinAlphas) {
                     std::optional<Scalar> psi;
                     tdo_structure(t, solve(g, k, 6), &psi);
                     if (!first) first = psi;
                     t.expect(psi && first && *psi == *first, g->name + " psi constant differs");
                   }
                 }
                 for (auto k : kBuiltinAlphas) {
                   auto r = cp1_two_chart_cocycle(k);
                   std::string tag = "cp1 cocycle " + alpha_kind_name(k) + " " + r.cocycle.to_string();
                   t.expect(r.holomorphic, tag + " dbar-closed");
                   t.expect(r.d_closed, tag + " d-closed");
                   t.expect(r.same_metric && r.same_alpha, tag + " chart data agree");
                 }
                 return t;
               },
               60});
  c.push_back({"A10 moment maps", [seed] {
                 Tally t;
                 auto g = flat_geometry(1);
                 auto fd = solve(g, AlphaKind::kZero, 7);
                 for (const std::string name : {"rotation", "translation:1"}) {
                   auto sym = symmetry_from_name(g, name);
                   moment_structure(t, sym, fd, 4);
                   auto ms = build_moment_section(sym, fd);
                   FlatSection completed = complete_to_flat(ms, fd);
                   for (const auto& f : {z(), zb(), z() * zb()}) {
                     FlatSection of = flat_section_of_function(HPoly(f), fd, FlatOptions{4, 4});
                     int cut = std::min(of.certified_degree, completed.certified_degree) - 3;
                     int yb_cut = of.section.trunc().maxYbar;
                     WeylSection diff = (hbar_bracket(completed.section, of.section, *g) - lie_derivative(sym, of.section))
                                            .up_to_y_degree(cut)
                                            .filter([&](const TermIndex& i) { return i.yb_degree() < yb_cut; });
                     expect_zero(t, diff, name + " [s, O_f] = L_V O_f for " + f.to_string());
                   }
                 }
                 SectionGenerator gen(seed);
                 for (int it = 0; it < 20; ++it) {
                   RandomSpec s;
                   s.terms = 3;
                   s.max_y = 2;
                   s.max_yb = 2;
                   s.max_h = 1;
                   s.form_degrees = 0b11;
                   WeylSection a = gen.section(1, s), b = gen.section(1, s);
                   WeylSection lhs = weyl_wick_transform(moyal_mul(a, b, *g), *g);
                   WeylSection rhs = wick_mul(weyl_wick_transform(a, *g), weyl_wick_transform(b, *g), *g);
                   expect_zero(t, lhs - rhs, "intertwiner");
                 }
                 return t;
               },
               120});
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"geometry", "fedosov", "flat", "fock", "moment", "acceptance", "all"};
  return names;
}

std::vector<Check> suite_checks(const std::string& suite, const SuiteOptions& o) {
  if (suite == "acceptance") return acceptance_checks(o.seed);
  if (suite == "all") {
    std::vector<Check> all;
    for (const auto& s : suite_names()) {
      if (s == "all") continue;
      auto part = suite_checks(s, o);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  std::vector<GeometryPtr> geoms = o.geometries.empty() ? presets() : o.geometries;
  std::vector<std::string> alphas = o.alphas;
  if (alphas.empty()) alphas = {"zero", "hbar_omega", "berezin_toeplitz"};
  auto connection = [o](GeometryPtr g, const std::string& a, int maxY) {
    AlphaForm alpha = alpha_from_name(*g, a);
    return o.cache ? o.cache->load_or_solve(g, alpha, maxY) : solve_fedosov(g, alpha, maxY);
  };
  std::vector<Check> c;
  std::uint64_t seed = o.seed;
  for (auto g : geoms) {
    if (suite == "geometry") {
      c.push_back({"geometry " + g->name, [g, alphas] {
                     Tally t;
                     for (const auto& f : geometry_invariant_failures(*g)) t.expect(false, f);
                     for (const auto& v : kahler_trace_defect(*g)) t.expect(v.is_zero(), "Kahler trace " + v.to_string());
                     for (const auto& a : alphas) {
                       for (const auto& f : alpha_invariant_failures(*g, alpha_from_name(*g, a))) t.expect(false, a + " " + f);
                       t.expect(true, a);
                     }
                     return t;
                   }});
      continue;
    }
    for (const auto& a : alphas) {
      std::string tag = g->name + " " + a;
      if (suite == "fedosov") {
        c.push_back({"fedosov " + tag, [=] {
                       Tally t;
                       FedosovData fd = connection(g, a, o.maxY);
                       expect_zero(t, fedosov_residual(fd), "residual");
                       for (const auto& f : fedosov_invariant_failures(fd)) t.expect(false, f);
                       t.expect(forms_equal(karabegov_form(fd), karabegov_from_curvature(fd), g->n), "Karabegov form");
                       if (o.level) expect_zero(t, fedosov_residual(at_level(fd, *o.level)), "residual at level");
                       return t;
                     }});
      } else if (suite == "flat") {
        c.push_back({"flat " + tag, [=] {
                       Tally t;
                       FedosovData fd = connection(g, a, std::max(o.maxY, 6));
                       tdo_structure(t, fd);
                       if (o.level) tdo_structure(t, at_level(fd, *o.level));
                       generator_shapes(t, fd);
                       std::vector<RationalFn> basis{RationalFn(1), z(), zb(), z() * zb()};
                       star_axioms(t, fd, basis, 3);
                       auto u = symbol_uniqueness_level(fd, 4);
                       for (int k = 2; k <= 4; ++k) {
                         t.expect(u.kernel_dims[k - 1] == 0, "symbol-free flat section at k=" + std::to_string(k));
                       }
                       return t;
                     }});
      } else if (suite == "moment") {
        std::vector<std::string> names;
        if (g->n == 1 && (g->name == "flat:1" || g->name == "cp1" || g->name == "disc")) names.push_back("rotation");
        if (g->name.rfind("flat:", 0) == 0) {
          for (int i = 1; i <= g->n; ++i) names.push_back("translation:" + std::to_string(i));
        }
        if (names.empty()) continue;
        c.push_back({"moment " + tag, [=] {
                       Tally t;
                       FedosovData fd = connection(g, a, std::max(o.maxY, 6));
                       std::vector<SymmetryDatum> syms;
                       for (const auto& n : names) syms.push_back(symmetry_from_name(g, n));
                       for (const auto& s : syms) moment_structure(t, s, fd, 3);
                       auto rep = lie_algebra_check(syms, fd);
                       for (const auto& item : rep.items) t.expect(item.pass, item.name + " " + item.detail);
                       return t;
                     }});
      }
    }
    if (suite == "fock") {
      std::vector<long> levels{1, 2, 3};
      if (o.level) {
        if (!o.level->is_real() || o.level->re().get_den() != 1 || o.level->re() <= 0) {
          throw std::invalid_argument("the Fock module needs a positive integer level");
        }
        levels = {o.level->re().get_num().get_si()};
      }
      for (long k : levels) {
        c.push_back({"fock " + g->name + " berezin_toeplitz k=" + std::to_string(k), [g, k, seed] {
                       Tally t;
                       fock_structure(t, g, k, seed + static_cast<std::uint64_t>(k), 5);
                       auto fd = bt_level(g, k, 6);
                       FockSection e = coherent_section(fd);
                       expect_zero(t, fock_connection_apply(fd, e).poly.up_to_y_degree(fock_certified_degree(fd)),
                                   "coherent frame");
                       for (int j = 0; j < g->n; ++j) {
                         DiffOperator q = quantize_to_diffop(build_u(fd, j), fd, 3);
                         DiffOperator d = DiffOperator::derivative(g->n, j, Scalar(k)) * Scalar(-Scalar(k).inverse());
                         t.expect(q == d, "quantize(O_u) = " + q.to_string());
                       }
                       return t;
                     }});
      }
    }
  }
  return c;
}

}  // namespace fedq
