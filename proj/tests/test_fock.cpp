#include <gtest/gtest.h>

#include "fedq/fock.hpp"
#include "fedq/random.hpp"
#include "support.hpp"

using namespace fedq;
using namespace fedq::testing;

namespace {

std::vector<GeometryPtr> fock_geometries() {
  auto g = all_geometries();
  g.push_back(bumpy_geometry());
  return g;
}

int denominator_sign(const ChartGeometry& g) {
  if (g.name == "cp1" || g.name == "bumpy") return 1;
  return g.name == "disc" ? -1 : 0;
}

FedosovData bt_level(GeometryPtr g, long k, int maxY) {
  return at_level(solve_fedosov(g, alpha_form(*g, AlphaKind::kBerezinToeplitz), maxY), Scalar(k));
}

FockSection random_fock(SectionGenerator& gen, const ChartGeometry& g, long k, unsigned forms = 0b11) {
  RandomSpec s;
  s.terms = 3;
  s.max_y = 2;
  s.max_yb = 0;
  s.form_degrees = forms;
  s.denominator_sign = denominator_sign(g);
  return FockSection::make(gen.section(g.n, s), Scalar(k));
}

WeylSection random_weyl(SectionGenerator& gen, const ChartGeometry& g, long k, unsigned forms = 0b11) {
  RandomSpec s;
  s.terms = 3;
  s.max_y = 2;
  s.max_yb = 1;
  s.max_h = 1;
  s.form_degrees = forms;
  s.denominator_sign = denominator_sign(g);
  return evaluate_hbar(gen.section(g.n, s), Scalar(k));
}

WeylSection ricci_form(const ChartGeometry& g, const Scalar& k) {
  WeylSection r(g.n, Trunc{}, k);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      TermIndex t;
      t.form = form_mask({i}, {j});
      r.add_term(t, g.ricci[i][j]);
    }
  }
  return r;
}

DiffOperator quantize(const FlatSection& q, const FedosovData& fd) { return quantize_to_diffop(q, fd, 4); }

}  // namespace

TEST(Fock, ActionExamples) {
  auto g = flat_geometry(1);
  FockSection y = FockSection::make(WeylSection::y(1, 0), Scalar(1));
  FockSection one = FockSection::make(WeylSection::scalar(1, HPoly(1)), Scalar(1));
  EXPECT_EQ(bf_act(WeylSection::yb(1, 0), y, *g), FockSection::make(WeylSection::scalar(1, HPoly(-1)), Scalar(1)));
  FockSection s = FockSection::make(term(1, 0, {0}, {}, 0, z() + zb()), Scalar(3));
  EXPECT_EQ(bf_act(WeylSection::y(1, 0), s, *g).poly, term(1, 0, {0, 0}, {}, 0, z() + zb()));
  // (yb * yb) (.) y^2 = yb (.) (yb (.) y^2) = 2/k^2.
  for (long k : {1, 2, 3}) {
    FockSection y2 = FockSection::make(term(1, 0, {0, 0}, {}, 0, RationalFn(1)), Scalar(k));
    WeylSection ybyb = wick_mul(WeylSection::yb(1, 0), WeylSection::yb(1, 0), *g);
    FockSection lhs = bf_act(ybyb, y2, *g);
    EXPECT_EQ(lhs, bf_act(WeylSection::yb(1, 0), bf_act(WeylSection::yb(1, 0), y2, *g), *g));
    EXPECT_EQ(lhs.poly, WeylSection::scalar(1, HPoly(RationalFn(Scalar::rational(2, k * k)))));
  }
  // On cp1, yb acts through w^{1 1bar} = (1 + z zb)^2.
  auto cp = cp1_geometry();
  FockSection yk = FockSection::make(WeylSection::y(1, 0), Scalar(2));
  EXPECT_EQ(bf_act(WeylSection::yb(1, 0), yk, *cp).poly,
            WeylSection::scalar(1, HPoly(cp->omega_inv[0][0] * Scalar::rational(-1, 2))));
  EXPECT_EQ(bf_act(WeylSection::scalar(1, HPoly(1)), one, *g), one);
}

TEST(Fock, ModuleAxiom) {
  SectionGenerator gen(101);
  for (auto g : fock_geometries()) {
    for (long k : {1, 2, 3}) {
      for (int it = 0; it < 20; ++it) {
        WeylSection a = random_weyl(gen, *g, k), b = random_weyl(gen, *g, k);
        FockSection s = random_fock(gen, *g, k);
        EXPECT_EQ(bf_act(wick_mul(a, b, *g), s, *g), bf_act(a, bf_act(b, s, *g), *g)) << g->name;
      }
    }
  }
}

TEST(Fock, ConnectionSquaresToZero) {
  SectionGenerator gen(102);
  for (auto g : fock_geometries()) {
    for (long k : {1, 2, 3}) {
      auto fd = bt_level(g, k, 6);
      for (int it = 0; it < 20; ++it) {
        FockSection s = random_fock(gen, *g, k);
        WeylSection dd = fock_connection_apply(fd, fock_connection_apply(fd, s)).poly;
        EXPECT_TRUE(dd.up_to_y_degree(fd.maxY - 2).is_zero()) << g->name << " k=" << k;
      }
    }
  }
}

TEST(Fock, Compatibility) {
  SectionGenerator gen(103);
  for (auto g : fock_geometries()) {
    for (long k : {1, 2, 3}) {
      auto fd = bt_level(g, k, 7);
      for (int it = 0; it < 20; ++it) {
        WeylSection a = random_weyl(gen, *g, k);
        FockSection s = random_fock(gen, *g, k, 0b1);
        // Split a by parity so the sign is uniform.
        for (int parity : {0, 1}) {
          WeylSection ap = a.filter([parity](const TermIndex& i) { return i.form_degree() % 2 == parity; });
          WeylSection lhs = fock_connection_apply(fd, bf_act(ap, s, *g)).poly;
          WeylSection rhs = bf_act(connection_apply(fd, ap), s, *g).poly;
          WeylSection second = bf_act(ap, fock_connection_apply(fd, s), *g).poly;
          rhs += parity ? -second : second;
          EXPECT_TRUE((lhs - rhs).up_to_y_degree(fd.maxY - 4).is_zero()) << g->name << " k=" << k;
        }
      }
    }
  }
}

TEST(Fock, CurvatureActsAsNablaSquared) {
  // k R (.) s = nabla^2 s - Ric ^ s.
  SectionGenerator gen(104);
  for (auto g : fock_geometries()) {
    for (long k : {1, 2, 3}) {
      for (int it = 0; it < 5; ++it) {
        FockSection s = random_fock(gen, *g, k, 0b1);
        WeylSection lhs = bf_act(curvature_section(*g), s, *g).poly * Scalar(k);
        WeylSection rhs = fock_nabla_squared(*g, s).poly - commutative_mul(ricci_form(*g, Scalar(k)), s.poly);
        EXPECT_EQ(lhs, rhs) << g->name;
      }
    }
  }
}

TEST(Fock, Beta) {
  auto flat = flat_geometry(1);
  EXPECT_EQ(build_beta(*flat, 6), term(1, 0, {0}, {}, 0, zb()));
  for (auto g : fock_geometries()) {
    WeylSection beta = build_beta(*g, 6);
    EXPECT_EQ(beta.min_y_degree(), 1);
    EXPECT_EQ(beta.max_ybar_degree(), 0);
    EXPECT_EQ(beta.max_h(), 0);
    // D beta = w_{i jbar} dzb^j y^i - d rho.
    for (auto alpha : kAlphas) {
      auto fd = solve_fedosov(g, alpha_form(*g, alpha), 6);
      WeylSection expect(g->n);
      for (int i = 0; i < g->n; ++i) {
        expect -= term(g->n, dz_bit(i), {}, {}, 0, g->d_rho[i]);
        for (int j = 0; j < g->n; ++j) expect += term(g->n, dzb_bit(j), {i}, {}, 0, g->omega[i][j]);
      }
      EXPECT_EQ(connection_apply(fd, beta).up_to_y_degree(fd.maxY - 1), expect) << g->name;
    }
  }
}

TEST(Fock, CoherentSectionIsFlat) {
  for (auto g : fock_geometries()) {
    for (long k : {1, 2}) {
      auto fd = bt_level(g, k, 6);
      FockSection e = coherent_section(fd);
      EXPECT_EQ(symbol(e.poly), HPoly(1));
      WeylSection d = fock_connection_apply(fd, e).poly;
      EXPECT_GE(fock_certified_degree(fd), 4);
      EXPECT_TRUE(d.up_to_y_degree(fock_certified_degree(fd)).is_zero()) << g->name << " k=" << k;
    }
  }
  auto fd = bt_level(flat_geometry(1), 1, 4);
  // e^{zb y} through y^4.
  WeylSection expect(1);
  RationalFn p(1);
  for (int m = 0; m <= 4; ++m) {
    TermIndex t;
    t.y[0] = m;
    expect.add_term(t, p * factorial(m).inverse());
    p = p * zb();
  }
  EXPECT_EQ(coherent_section(fd).poly, expect);
}

TEST(Fock, StarIdentityOnCoherentSection) {
  // (I + J) (.) e^{k beta} = ((1/h)[I, beta]) e^{k beta}.
  for (auto g : {cp1_geometry(), disc_geometry(), bumpy_geometry()}) {
    for (long k : {1, 2}) {
      auto fd = bt_level(g, k, 6);
      FockSection e = coherent_section(fd);
      WeylSection lhs = bf_act(fd.I_alpha(), e, *g).poly;
      WeylSection ik = evaluate_hbar(fd.I, Scalar(k));
      WeylSection beta = build_beta(*g, fd.maxY);
      beta.set_level(Scalar(k));
      WeylSection rhs = commutative_mul(hbar_bracket(ik, beta, *g), e.poly);
      EXPECT_TRUE((lhs - rhs).up_to_y_degree(fd.maxY - 2).is_zero()) << g->name;
      EXPECT_FALSE(rhs.is_zero());
    }
  }
}

TEST(Fock, KahlerTraceIdentity) {
  for (auto g : fock_geometries()) {
    for (const auto& v : kahler_trace_defect(*g)) EXPECT_TRUE(v.is_zero()) << g->name;
  }
  CustomMetric m;
  m.omega = {{RationalFn(1) + z() * zb()}};
  m.d_rho = {zb() + z() * zb() * zb() * Scalar::rational(1, 2)};
  auto g = custom_geometry(m);
  auto bad = std::make_shared<ChartGeometry>(*g);
  bad->d_rho1[0] += RationalFn(1);
  EXPECT_FALSE(kahler_trace_defect(*bad)[0].is_zero());
}

TEST(Fock, RejectsNonIntegralData) {
  auto g = flat_geometry(1);
  auto fd = at_level(solve_fedosov(g, alpha_form(*g, AlphaKind::kHbarOmega), 4), Scalar(1));
  FockSection s = FockSection::make(WeylSection::y(1, 0), Scalar(1));
  EXPECT_THROW(fock_connection_apply(fd, s), FockError);
  EXPECT_THROW(FockSection::make(WeylSection::y(1, 0), Scalar::rational(1, 2)), std::invalid_argument);
  EXPECT_THROW(FockSection::make(WeylSection::yb(1, 0), Scalar(1)), FockError);
  auto fd2 = bt_level(g, 2, 4);
  EXPECT_THROW(fock_connection_apply(fd2, s), FockError);
}

TEST(Fock, QuantizeOnFlat) {
  for (long k : {1, 2, 3}) {
    auto fd = bt_level(flat_geometry(1), k, 6);
    FlatSection ozb = flat_section_of_function(HPoly(zb()), fd);
    DiffOperator d = DiffOperator::derivative(1, 0, Scalar(k));
    EXPECT_EQ(quantize(ozb, fd), d * Scalar(-Scalar(k).inverse()));
    FlatSection oz2 = flat_prolong_holomorphic(z() * z(), fd);
    EXPECT_EQ(quantize(oz2, fd), DiffOperator::multiplication(1, z() * z()));
    FlatSection sq = star_product_section(ozb, ozb, fd);
    EXPECT_EQ(quantize(sq, fd), d.compose(d) * Scalar::rational(1, k * k));
  }
}

TEST(Fock, QuantizeUOnCurvedGeometries) {
  for (auto g : fock_geometries()) {
    for (long k : {1, 2}) {
      auto fd = bt_level(g, k, 6);
      for (int j = 0; j < g->n; ++j) {
        DiffOperator d = DiffOperator::derivative(g->n, j, Scalar(k));
        EXPECT_EQ(quantize(build_u(fd, j), fd), d * Scalar(-Scalar(k).inverse())) << g->name;
      }
      EXPECT_EQ(quantize(flat_prolong_holomorphic(z() * z() + RationalFn(1), fd), fd),
                DiffOperator::multiplication(g->n, z() * z() + RationalFn(1)));
    }
  }
}

TEST(Fock, QuantizeIsHomomorphism) {
  for (auto g : {flat_geometry(1), cp1_geometry(), disc_geometry()}) {
    long k = 2;
    auto fd = bt_level(g, k, 7);
    std::vector<FlatSection> secs{flat_prolong_holomorphic(z(), fd), build_u(fd, 0),
                                  flat_prolong_holomorphic(z() * z(), fd)};
    secs.push_back(star_product_section(secs[0], secs[1], fd));
    std::vector<DiffOperator> ops;
    for (const auto& s : secs) ops.push_back(quantize(s, fd));
    const std::pair<int, int> pairs[] = {{0, 1}, {1, 0}, {1, 1}, {1, 2}, {3, 1}, {1, 3}};
    for (auto [a, b] : pairs) {
      FlatSection p = star_product_section(secs[a], secs[b], fd);
      EXPECT_EQ(quantize(p, fd), ops[a].compose(ops[b])) << g->name << " " << a << "," << b;
    }
    // Distinct sections give distinct operators.
    for (std::size_t a = 0; a < ops.size(); ++a) {
      for (std::size_t b = a + 1; b < ops.size(); ++b) EXPECT_FALSE(ops[a] == ops[b]);
    }
  }
}

TEST(Fock, GeneratedAlgebraCoversMonomialOperators) {
  auto fd = bt_level(flat_geometry(1), 2, 6);
  std::vector<DiffOperator> gens{quantize(flat_prolong_holomorphic(z(), fd), fd), quantize(build_u(fd, 0), fd)};
  EXPECT_TRUE(missing_from_generated_span(gens, 3, 3).empty());
  std::vector<DiffOperator> only_z{gens[0]};
  EXPECT_FALSE(missing_from_generated_span(only_z, 3, 3).empty());
}

TEST(Fock, DiffOperatorAlgebra) {
  DiffOperator d = DiffOperator::derivative(1, 0);
  DiffOperator zop = DiffOperator::multiplication(1, z());
  // [d, z] = 1.
  DiffOperator comm = d.compose(zop) + zop.compose(d) * Scalar(-1);
  EXPECT_EQ(comm, DiffOperator::multiplication(1, RationalFn(1)));
  EXPECT_EQ(d.compose(d).apply(z() * z() * z()), z() * Scalar(6));
  EXPECT_EQ(d.compose(zop).order(), 1);
  DiffOperator op(2, {{FiberIndex{1, 1}, z(0)}});
  EXPECT_EQ(op.apply(z(0) * z(0) * z(1)), z(0) * z(0) * Scalar(2));
  EXPECT_TRUE(op.holomorphic());
  EXPECT_FALSE(DiffOperator::multiplication(1, zb()).holomorphic());
}

TEST(Fock, SymbolIsomorphism) {
  for (auto g : {flat_geometry(1), cp1_geometry(), disc_geometry()}) {
    auto fd = bt_level(g, 2, 6);
    auto rep = symbol_iso_check(fd, {RationalFn(1), z(), z() * z() * z()}, {zb(), z() * zb()});
    for (const auto& c : rep) EXPECT_TRUE(c.pass) << g->name << " " << c.name << " " << c.detail;
  }
}

TEST(Fock, PrequantumOperator) {
  auto g = flat_geometry(1);
  std::vector<RationalFn> samples{RationalFn(1), z(), z() * z(), z() * z() * z()};
  for (long k : {1, 2, 3}) {
    auto c = prequantum_operator(*g, RationalFn(5), Scalar(k));
    EXPECT_EQ(c.apply(z()), z() * Scalar(5));
    auto q = prequantum_operator(*g, z() * zb(), Scalar(k));
    // -(1/k) z d/dz.
    for (const auto& s : samples) EXPECT_EQ(q.apply(s), z() * s.derivative(z_var(0)) * Scalar(-Scalar(k).inverse()));
    EXPECT_TRUE(q.preserves_holomorphy(samples));
    EXPECT_FALSE(prequantum_operator(*g, zb() * zb(), Scalar(k)).preserves_holomorphy(samples));
    // Linear functions give first-order holomorphic operators.
    EXPECT_TRUE(prequantum_operator(*g, (z() + zb()) * Scalar::rational(1, 2), Scalar(k)).preserves_holomorphy(samples));
  }
  auto cp = cp1_geometry();
  // The moment map of rotation on cp1.
  auto rot = prequantum_operator(*cp, z() * zb() / (RationalFn(1) + z() * zb()), Scalar(2));
  EXPECT_TRUE(rot.preserves_holomorphy(samples));
}
