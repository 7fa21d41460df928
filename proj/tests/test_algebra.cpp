#include <gtest/gtest.h>

#include <random>

#include "fedq/hpoly.hpp"
#include "fedq/rational_fn.hpp"

using namespace fedq;

namespace {

Poly rand_poly(std::mt19937& rng, int nvars, int max_deg, int terms) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, max_deg), var(0, nvars - 1);
  Poly p;
  for (int t = 0; t < terms; ++t) {
    Mono m{};
    for (int v = 0; v < nvars; ++v) {
      int d = deg(rng);
      if (d > 0 && var(rng) == 0) m[v < nvars / 2 ? z_var(v) : zb_var(v - nvars / 2)] = d;
    }
    p.add_term(m, Scalar(coef(rng), coef(rng)));
  }
  return p;
}

RationalFn rand_rat(std::mt19937& rng) {
  Poly num = rand_poly(rng, 2, 2, 3);
  static const Poly dens[] = {Poly(1), Poly(1) + Poly::var(z_var(0)) * Poly::var(zb_var(0)),
                              Poly(1) - Poly::var(z_var(0)) * Poly::var(zb_var(0)),
                              Poly::var(z_var(0))};
  std::uniform_int_distribution<int> pick(0, 3);
  return RationalFn::quotient(num, dens[pick(rng)]);
}

}  // namespace

TEST(Scalar, ArithmeticAndPrinting) {
  Scalar a = Scalar::rational(1, 2) + Scalar::i() * Scalar::rational(3, 5);
  EXPECT_EQ(a.to_string(), "1/2+3/5*i");
  EXPECT_EQ((a * a.inverse()), Scalar(1));
  EXPECT_EQ(Scalar::i() * Scalar::i(), Scalar(-1));
  EXPECT_EQ(Scalar::i().to_string(), "i");
  EXPECT_EQ((-Scalar::i() * Scalar(2)).to_string(), "-2*i");
  EXPECT_EQ(factorial(5), Scalar(120));
  EXPECT_EQ(pow(Scalar(2), -3), Scalar::rational(1, 8));
  EXPECT_EQ(Scalar::from_string("-6/4"), Scalar::rational(-3, 2));
}

TEST(Poly, RingAxiomsOnRandomInputs) {
  std::mt19937 rng(1234);
  for (int it = 0; it < 50; ++it) {
    Poly a = rand_poly(rng, 4, 2, 4), b = rand_poly(rng, 4, 2, 4), c = rand_poly(rng, 4, 2, 4);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b).derivative(z_var(0)),
              a.derivative(z_var(0)) * b + a * b.derivative(z_var(0)));
    EXPECT_EQ(a.conj().conj(), a);
    EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
    if (!b.is_zero()) {
      auto q = (a * b).divide_exact(b);
      ASSERT_TRUE(q.has_value());
      EXPECT_EQ(*q, a);
    }
  }
}

TEST(RationalFn, CancellationAndEquality) {
  Poly z = Poly::var(z_var(0)), zb = Poly::var(zb_var(0));
  Poly q = Poly(1) + z * zb;
  RationalFn f = RationalFn::quotient(q * z, q.pow(3));
  EXPECT_EQ(f.den().size(), 1u);
  EXPECT_EQ(f.den()[0].e, 2);
  EXPECT_EQ(f, RationalFn::quotient(z, q.pow(2)));
  // 1/(1+z zb) - 1 = -z zb/(1+z zb)
  RationalFn g = RationalFn::quotient(Poly(1), q) - RationalFn(1);
  EXPECT_EQ(g, RationalFn::quotient(-(z * zb), q));
  EXPECT_TRUE((f - f).is_zero());
  EXPECT_EQ(RationalFn::quotient(z, z * Scalar(2)), RationalFn(Scalar::rational(1, 2)));
}

TEST(RationalFn, FieldAxiomsOnRandomInputs) {
  std::mt19937 rng(99);
  for (int it = 0; it < 40; ++it) {
    RationalFn a = rand_rat(rng), b = rand_rat(rng), c = rand_rat(rng);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!b.is_zero()) EXPECT_EQ((a / b) * b, a);
    for (int v : {z_var(0), zb_var(0)}) {
      EXPECT_EQ((a * b).derivative(v), a.derivative(v) * b + a * b.derivative(v));
      EXPECT_EQ(a.derivative(v).derivative(conj_var(v)), a.derivative(conj_var(v)).derivative(v));
    }
    EXPECT_EQ(a.conj().conj(), a);
    EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
  }
}

TEST(RationalFn, QuotientRuleAgainstClosedForm) {
  Poly z = Poly::var(z_var(0)), zb = Poly::var(zb_var(0));
  Poly q = Poly(1) + z * zb;
  // d/dz (1+z zb)^-2 = -2 zb (1+z zb)^-3
  RationalFn w = RationalFn::quotient(Poly(1), q.pow(2));
  EXPECT_EQ(w.derivative(z_var(0)), RationalFn::quotient(zb * Scalar(-2), q.pow(3)));
}

TEST(RationalFn, Substitute) {
  Poly z = Poly::var(z_var(0)), zb = Poly::var(zb_var(0));
  RationalFn f = RationalFn::quotient(zb, Poly(1) + z * zb);
  RationalFn w = RationalFn::quotient(Poly(1), z);
  RationalFn wb = RationalFn::quotient(Poly(1), zb);
  std::array<const RationalFn*, kVars> img{};
  img[z_var(0)] = &w;
  img[zb_var(0)] = &wb;
  // zb/(1+z zb) at z -> 1/z: (1/zb)/(1 + 1/(z zb)) = z/(z zb + 1)
  EXPECT_EQ(f.substitute(img), RationalFn::quotient(z, Poly(1) + z * zb));
}

TEST(HPoly, EvaluateIsRingMap) {
  RationalFn z = RationalFn::var(z_var(0));
  HPoly a = HPoly(z) + HPoly(z * z, 1);
  HPoly b = HPoly(RationalFn(1)) + HPoly(z, 2);
  for (long k : {1, 2, 5}) {
    EXPECT_EQ((a * b).evaluate(Scalar(k)), a.evaluate(Scalar(k)) * b.evaluate(Scalar(k)));
  }
  EXPECT_EQ(HPoly(z, 1).evaluate(Scalar(2)), z * Scalar::rational(1, 2));
  EXPECT_THROW(a.evaluate(Scalar(0)), std::domain_error);
}
