#include <gtest/gtest.h>

#include "fedq/random.hpp"
#include "fedq/weyl.hpp"
#include "oracles.hpp"

using namespace fedq;

namespace {

WeylSection Y(int n = 1, int i = 0) { return WeylSection::y(n, i); }
WeylSection YB(int n = 1, int j = 0) { return WeylSection::yb(n, j); }
WeylSection H(int n = 1) { return WeylSection::scalar(n, HPoly::hbar()); }
WeylSection F(const RationalFn& f, int n = 1) { return WeylSection::scalar(n, HPoly(f)); }
WeylSection dzb_form(int n = 1, int j = 0) {
  TermIndex t;
  t.form = dzb_bit(j);
  return WeylSection::monomial(n, t, RationalFn(1));
}
WeylSection dz_form(int n = 1, int i = 0) {
  TermIndex t;
  t.form = dz_bit(i);
  return WeylSection::monomial(n, t, RationalFn(1));
}

RandomSpec spec_for(const ChartGeometry& g, unsigned forms, int max_h = 1) {
  RandomSpec s;
  s.terms = 4;
  s.max_y = 2;
  s.max_yb = 2;
  s.max_h = max_h;
  s.form_degrees = forms;
  s.denominator_sign = g.name == "cp1" ? 1 : (g.name == "disc" ? -1 : 0);
  return s;
}

std::vector<GeometryPtr> all_geometries() {
  return {flat_geometry(1), flat_geometry(2), cp1_geometry(), disc_geometry()};
}

}  // namespace

TEST(Wick, BasicProducts) {
  auto g = flat_geometry(1);
  EXPECT_EQ(wick_mul(Y(), YB(), *g), commutative_mul(Y(), YB()) + H());
  EXPECT_EQ(wick_mul(YB(), Y(), *g), commutative_mul(Y(), YB()));
  EXPECT_EQ(graded_bracket(Y(), YB(), *g), H());
  EXPECT_EQ(graded_bracket(YB(), Y(), *g), -H());
  RationalFn z = RationalFn::var(z_var(0)), zb = RationalFn::var(zb_var(0));
  EXPECT_EQ(wick_mul(F(z), F(zb), *g), F(z * zb));
  // y^2 * yb^2 = y^2 yb^2 + 4h y yb + 2h^2
  WeylSection y2 = commutative_mul(Y(), Y()), yb2 = commutative_mul(YB(), YB());
  EXPECT_EQ(wick_mul(y2, yb2, *g), commutative_mul(y2, yb2) +
                                       commutative_mul(Y(), YB()).times_hbar(1) * Scalar(4) +
                                       WeylSection::scalar(1, HPoly(RationalFn(2), 2)));
}

TEST(Wick, MatchesIterationOracle) {
  SectionGenerator gen(7);
  for (auto g : all_geometries()) {
    for (int it = 0; it < 6; ++it) {
      auto s = spec_for(*g, 0b111);
      WeylSection a = gen.section(g->n, s), b = gen.section(g->n, s);
      EXPECT_EQ(wick_mul(a, b, *g), oracle::wick_by_iteration(a, b, *g)) << g->name;
      EXPECT_EQ(graded_bracket(a, b, *g), oracle::bracket_by_iteration(a, b, *g)) << g->name;
      EXPECT_EQ(hbar_bracket(a, b, *g).times_hbar(1), graded_bracket(a, b, *g)) << g->name;
    }
  }
}

TEST(Wick, AssociativeOnRandomSections) {
  SectionGenerator gen(11);
  for (auto g : all_geometries()) {
    for (int it = 0; it < 4; ++it) {
      auto s = spec_for(*g, 0b11, 0);
      s.terms = 3;
      WeylSection a = gen.section(g->n, s), b = gen.section(g->n, s), c = gen.section(g->n, s);
      EXPECT_EQ(wick_mul(wick_mul(a, b, *g), c, *g), wick_mul(a, wick_mul(b, c, *g), *g))
          << g->name;
    }
  }
}

TEST(Wick, EvenSelfBracketVanishes) {
  SectionGenerator gen(3);
  auto g = cp1_geometry();
  for (int it = 0; it < 5; ++it) {
    WeylSection a = gen.section(1, spec_for(*g, 0b101));
    EXPECT_TRUE(graded_bracket(a, a, *g).is_zero());
  }
}

TEST(Wick, HolomorphicDerivativeBracket) {
  // [w_{1 1bar} yb, g'(z) y] = -h g'(z) on flat(1), for g = z^3.
  auto g = flat_geometry(1);
  RationalFn dg = RationalFn::var(z_var(0)).pow(2) * Scalar(3);
  WeylSection lhs = graded_bracket(YB() * g->omega[0][0], Y() * dg, *g);
  EXPECT_EQ(lhs, F(dg).times_hbar(1) * Scalar(-1));
}

TEST(Wick, BracketWithGeneratorsIsDerivative) {
  SectionGenerator gen(5);
  for (auto g : all_geometries()) {
    WeylSection a = gen.section(g->n, spec_for(*g, 0b1));
    for (int p = 0; p < g->n; ++p) {
      WeylSection expect_y(g->n), expect_yb(g->n);
      for (int q = 0; q < g->n; ++q) {
        expect_y -= d_yb(a, q) * g->omega_inv[p][q];
        expect_yb += d_y(a, q) * g->omega_inv[q][p];
      }
      EXPECT_EQ(hbar_bracket(a, Y(g->n, p), *g), expect_y);
      EXPECT_EQ(hbar_bracket(a, YB(g->n, p), *g), expect_yb);
    }
  }
}

TEST(Delta, Examples) {
  auto y2 = commutative_mul(Y(), Y());
  EXPECT_EQ(delta10(y2), commutative_mul(dz_form(), Y()) * Scalar(2));
  EXPECT_TRUE(delta10(YB()).is_zero());
  EXPECT_TRUE(delta(F(RationalFn::var(z_var(0)))).is_zero());
  EXPECT_EQ(delta10_inv(dz_form()), Y());
  EXPECT_EQ(delta10_inv(commutative_mul(dz_form(), Y())), y2 * Scalar::rational(1, 2));
}

TEST(Delta, NilpotentAndHomotopy) {
  SectionGenerator gen(21);
  for (auto g : all_geometries()) {
    for (int it = 0; it < 5; ++it) {
      WeylSection a = gen.section(g->n, spec_for(*g, 0b111));
      EXPECT_TRUE(delta10(delta10(a)).is_zero());
      EXPECT_TRUE(delta01(delta01(a)).is_zero());
      EXPECT_TRUE(delta(delta(a)).is_zero());
      EXPECT_EQ(delta10(delta10_inv(a)) + delta10_inv(delta10(a)), a - pi_0star(a));
      WeylSection pi01 =
          a.filter([](const TermIndex& i) { return i.dzb_degree() == 0 && i.yb_degree() == 0; });
      EXPECT_EQ(delta01(delta01_inv(a)) + delta01_inv(delta01(a)), a - pi01);
      WeylSection pi00 = a.filter(
          [](const TermIndex& i) { return i.form == 0 && i.y_degree() == 0 && i.yb_degree() == 0; });
      EXPECT_EQ(delta(delta_inv(a)) + delta_inv(delta(a)), a - pi00);
      EXPECT_EQ(pi_0star(pi_0star(a)), pi_0star(a));
    }
  }
}

TEST(Projection, Examples) {
  RationalFn z = RationalFn::var(z_var(0));
  EXPECT_EQ(pi_0star(F(z) + Y() + YB()), F(z) + YB());
  EXPECT_TRUE(pi_0star(commutative_mul(dz_form(), YB())).is_zero());
  EXPECT_EQ(symbol(F(z) + commutative_mul(Y(), F(z))), HPoly(z));
  EXPECT_EQ(symbol(F(z).times_hbar(1)), HPoly(z, 1));
}

TEST(Nabla, FlatIsExteriorDerivative) {
  auto g = flat_geometry(1);
  RationalFn z = RationalFn::var(z_var(0)), zb = RationalFn::var(zb_var(0));
  WeylSection a = commutative_mul(Y(), YB()) * (z * zb);
  EXPECT_EQ(nabla(a, *g), commutative_mul(dz_form(), commutative_mul(Y(), YB())) * zb +
                              commutative_mul(dzb_form(), commutative_mul(Y(), YB())) * z);
  EXPECT_EQ(nabla_tilde10(F(z), *g), Y());
  EXPECT_TRUE(nabla_tilde10(F(RationalFn(5)), *g).is_zero());
  EXPECT_TRUE(nabla_tilde10(nabla_tilde10(F(z), *g), *g).is_zero());
}

TEST(Nabla, MetricFormIsParallel) {
  for (auto g : all_geometries()) {
    WeylSection s(g->n);
    for (int i = 0; i < g->n; ++i) {
      for (int j = 0; j < g->n; ++j) {
        s += commutative_mul(dzb_form(g->n, j), Y(g->n, i)) * g->omega[i][j];
        s -= commutative_mul(dz_form(g->n, i), YB(g->n, j)) * g->omega[i][j];
      }
    }
    EXPECT_TRUE(nabla(s, *g).is_zero()) << g->name;
  }
}

TEST(Nabla, SquareIsCurvatureBracket) {
  SectionGenerator gen(31);
  for (auto g : all_geometries()) {
    WeylSection R = curvature_section(*g);
    for (int it = 0; it < 4; ++it) {
      WeylSection a = gen.section(g->n, spec_for(*g, 0b11));
      EXPECT_EQ(nabla(nabla(a, *g), *g), hbar_bracket(R, a, *g)) << g->name;
    }
  }
}

TEST(Nabla, DerivationOfWick) {
  SectionGenerator gen(41);
  for (auto g : all_geometries()) {
    for (int it = 0; it < 3; ++it) {
      auto s = spec_for(*g, 0b11);
      s.terms = 3;
      WeylSection a = gen.section(g->n, s), b = gen.section(g->n, s);
      auto [ae, ao] = std::pair{a.filter([](const TermIndex& i) { return i.form_degree() % 2 == 0; }),
                                a.filter([](const TermIndex& i) { return i.form_degree() % 2 == 1; })};
      WeylSection rhs = wick_mul(nabla(a, *g), b, *g) + wick_mul(ae, nabla(b, *g), *g) -
                        wick_mul(ao, nabla(b, *g), *g);
      EXPECT_EQ(nabla(wick_mul(a, b, *g), *g), rhs) << g->name;
    }
  }
}

TEST(Evaluate, RingMapAndExamples) {
  auto g = flat_geometry(1);
  RationalFn z = RationalFn::var(z_var(0));
  EXPECT_EQ(evaluate_hbar(F(z).times_hbar(1), Scalar(2)), F(z) * Scalar::rational(1, 2));
  EXPECT_EQ(evaluate_hbar(wick_mul(Y(), YB(), *g), Scalar(1)),
            commutative_mul(Y(), YB()) + F(RationalFn(1)));
  EXPECT_THROW(evaluate_hbar(Y(), Scalar(0)), std::domain_error);
  SectionGenerator gen(51);
  for (auto gg : all_geometries()) {
    for (long k : {1, 3}) {
      WeylSection a = gen.section(gg->n, spec_for(*gg, 0b11)), b = gen.section(gg->n, spec_for(*gg, 0b11));
      Scalar kk(k);
      EXPECT_EQ(evaluate_hbar(wick_mul(a, b, *gg), kk),
                wick_mul(evaluate_hbar(a, kk), evaluate_hbar(b, kk), *gg));
      EXPECT_EQ(evaluate_hbar(nabla(a, *gg), kk), nabla(evaluate_hbar(a, kk), *gg));
      EXPECT_EQ(evaluate_hbar(delta(a), kk), delta(evaluate_hbar(a, kk)));
      EXPECT_EQ(symbol(evaluate_hbar(a, kk)), HPoly(symbol(a).evaluate(kk)));
    }
  }
}

TEST(Weight, FiltrationAndProducts) {
  auto g = flat_geometry(1);
  EXPECT_EQ(YB().weight(), 2);
  WeylSection y5 = Y();
  for (int i = 0; i < 4; ++i) y5 = commutative_mul(y5, Y());
  EXPECT_EQ(y5.weight(), 0);
  EXPECT_TRUE(filtration_cut(YB() + H(), 1).is_zero());
  SectionGenerator gen(61);
  for (int it = 0; it < 10; ++it) {
    WeylSection a = gen.section(1, spec_for(*g, 0b1)), b = gen.section(1, spec_for(*g, 0b1));
    EXPECT_LE(wick_mul(a, b, *g).weight(), a.weight() + b.weight());
  }
}

TEST(Trunc, DroppedTermsClearExactness) {
  auto g = flat_geometry(1);
  Trunc t{2, 2, 2};
  WeylSection a = WeylSection::y(1, 0, t);
  WeylSection a3 = commutative_mul(commutative_mul(a, a), a);
  EXPECT_TRUE(a3.is_zero());
  EXPECT_FALSE(a3.exact().y);
  WeylSection b = wick_mul(a, WeylSection::yb(1, 0, t), *g);
  EXPECT_TRUE(b.exact().y && b.exact().ybar && b.exact().h);
}
