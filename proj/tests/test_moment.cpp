#include <gtest/gtest.h>

#include "fedq/fock.hpp"
#include "fedq/integrate.hpp"
#include "fedq/moment.hpp"
#include "fedq/random.hpp"
#include "support.hpp"

using namespace fedq;
using namespace fedq::testing;

namespace {

FedosovData solve(GeometryPtr g, AlphaKind k, int maxY = 6) { return solve_fedosov(g, alpha_form(*g, k), maxY); }

RationalFn q_disc() { return RationalFn(1) - z() * zb(); }
RationalFn q_cp1() { return RationalFn(1) + z() * zb(); }

WeylSection monomial(int n, std::uint8_t form, int y, int yb, const RationalFn& c) {
  TermIndex t;
  t.form = form;
  t.y[0] = y;
  t.yb[0] = yb;
  return WeylSection::monomial(n, t, c);
}

// Monomials c y^a yb^b (form) with a + b <= d on a 1-dimensional chart.
std::vector<WeylSection> basis_1d(int d) {
  std::vector<WeylSection> out;
  for (const auto& c : {RationalFn(1), z(), zb(), z() * zb()}) {
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        for (std::uint8_t f : {std::uint8_t{0}, dz_bit(0), dzb_bit(0)}) out.push_back(monomial(1, f, a, b, c));
      }
    }
  }
  return out;
}

using Key = std::pair<TermIndex, Mono>;

std::map<Key, Scalar> flatten(const WeylSection& s) {
  std::map<Key, Scalar> r;
  for (const auto& [idx, c] : s.terms()) {
    EXPECT_TRUE(c.is_polynomial());
    for (const auto& [m, v] : c.num().terms()) r[{idx, m}] += v;
  }
  return r;
}

// Exact least-structure solve of sum_k x_k cols[k] = rhs; nullopt when inconsistent.
std::optional<std::vector<Scalar>> solve_columns(const std::vector<std::map<Key, Scalar>>& cols,
                                                 const std::map<Key, Scalar>& rhs) {
  std::set<Key> keys;
  for (const auto& c : cols) {
    for (const auto& [k, v] : c) keys.insert(k);
  }
  for (const auto& [k, v] : rhs) keys.insert(k);
  const std::size_t nc = cols.size();
  std::vector<std::vector<Scalar>> rows;
  for (const auto& k : keys) {
    std::vector<Scalar> row(nc + 1);
    for (std::size_t c = 0; c < nc; ++c) {
      auto it = cols[c].find(k);
      if (it != cols[c].end()) row[c] = it->second;
    }
    auto it = rhs.find(k);
    if (it != rhs.end()) row[nc] = it->second;
    rows.push_back(row);
  }
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    Scalar inv = rows[r][c].inverse();
    for (auto& v : rows[r]) v = v * inv;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c].is_zero()) continue;
      Scalar f = rows[o][c];
      for (std::size_t k = 0; k <= nc; ++k) rows[o][k] -= f * rows[r][k];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (std::size_t o = r; o < rows.size(); ++o) {
    if (!rows[o][nc].is_zero()) return std::nullopt;
  }
  std::vector<Scalar> x(nc);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = rows[i][nc];
  return x;
}

}  // namespace

TEST(Integrate, Antiderivatives) {
  EXPECT_EQ(*antiderivative(z() * z() * zb(), z_var(0)), z() * z() * z() * zb() * Scalar::rational(1, 3));
  EXPECT_EQ(*antiderivative(RationalFn(1) / (q_cp1() * q_cp1()), z_var(0)), -(RationalFn(1) / (zb() * q_cp1())));
  EXPECT_EQ(*antiderivative(zb() / (q_disc() * q_disc()), z_var(0)), RationalFn(1) / q_disc());
  EXPECT_FALSE(antiderivative(RationalFn(1) / q_cp1(), z_var(0)).has_value());
  EXPECT_FALSE(antiderivative(RationalFn(1) / z(), z_var(0)).has_value());
  EXPECT_EQ(*antiderivative(RationalFn(1) / z(), zb_var(0)), zb() / z());
}

TEST(Integrate, RecoversRandomPrimitives) {
  SectionGenerator gen(301);
  for (int sign : {0, 1, -1}) {
    for (int it = 0; it < 10; ++it) {
      RandomSpec s;
      s.denominator_sign = sign;
      s.max_coeff_degree = 2;
      RationalFn F = gen.coefficient(1, s);
      auto back = potential_of_closed_form(1, {F.derivative(z_var(0))}, {F.derivative(zb_var(0))});
      ASSERT_TRUE(back.has_value()) << F.to_string();
      EXPECT_TRUE((*back - F).is_constant()) << F.to_string();
    }
  }
  EXPECT_THROW(potential_of_closed_form(1, {zb()}, {RationalFn(0)}), std::invalid_argument);
}

TEST(Moment, SymmetryPresets) {
  auto flat = flat_geometry(1);
  auto rot = symmetry_from_name(flat, "rotation");
  EXPECT_EQ(rot.moment_fn, z() * zb());
  auto tr = symmetry_from_name(flat, "translation:1");
  EXPECT_EQ(tr.moment_fn, (z() - zb()) * Scalar::i());
  auto disc = symmetry_from_name(disc_geometry(), "rotation");
  EXPECT_TRUE((disc.moment_fn - RationalFn(1) / q_disc()).is_constant());
  auto cp = symmetry_from_name(cp1_geometry(), "rotation");
  EXPECT_TRUE((cp.moment_fn + RationalFn(1) / q_cp1()).is_constant());
  for (const auto& s : {rot, tr, disc, cp}) EXPECT_TRUE(symmetry_invariant_failures(s).empty()) << s.name;
  EXPECT_THROW(symmetry_from_vector_field(flat, {z() * z()}), MomentError);
  EXPECT_THROW(symmetry_from_vector_field(flat, {zb()}), MomentError);
  EXPECT_THROW(symmetry_from_name(cp1_geometry(), "translation:1"), MomentError);
  EXPECT_THROW(symmetry_from_name(flat, "translation:2"), std::invalid_argument);
  EXPECT_THROW(symmetry_from_name(flat, "spin"), std::invalid_argument);
  // Unitary rotation mixing the two coordinates of flat(2).
  auto mix = symmetry_from_vector_field(flat_geometry(2), {z(1), -z(0)}, "mix");
  EXPECT_TRUE((mix.moment_fn - (z(0) * zb(1) - z(1) * zb(0)) * Scalar::i()).is_constant());
}

TEST(Moment, WeylWickTransform) {
  auto g = flat_geometry(1);
  EXPECT_EQ(weyl_wick_transform(WeylSection::y(1, 0), *g), WeylSection::y(1, 0));
  WeylSection yyb = monomial(1, 0, 1, 1, RationalFn(1));
  EXPECT_EQ(weyl_wick_transform(yyb, *g), yyb + WeylSection::scalar(1, HPoly(Scalar::rational(1, 2)), {}).times_hbar(1));
  // Moyal commutator of generators matches the Wick one.
  WeylSection y = WeylSection::y(1, 0), yb = WeylSection::yb(1, 0);
  EXPECT_EQ(moyal_mul(y, yb, *g) - moyal_mul(yb, y, *g), wick_mul(y, yb, *g) - wick_mul(yb, y, *g));
  SectionGenerator gen(311);
  for (auto geo : all_geometries()) {
    for (int it = 0; it < 20; ++it) {
      RandomSpec s;
      s.terms = 3;
      s.max_y = 2;
      s.max_yb = 2;
      s.max_h = 1;
      s.form_degrees = 0b11;
      s.denominator_sign = geo->name == "cp1" ? 1 : (geo->name == "disc" ? -1 : 0);
      WeylSection a = gen.section(geo->n, s), b = gen.section(geo->n, s);
      EXPECT_EQ(weyl_wick_transform(moyal_mul(a, b, *geo), *geo),
                wick_mul(weyl_wick_transform(a, *geo), weyl_wick_transform(b, *geo), *geo))
          << geo->name;
      EXPECT_EQ(weyl_wick_transform(weyl_wick_transform(a, *geo), *geo, TransformDirection::kToWeyl), a);
      if (it < 3) {
        WeylSection c = gen.section(geo->n, s);
        EXPECT_EQ(moyal_mul(moyal_mul(a, b, *geo), c, *geo), moyal_mul(a, moyal_mul(b, c, *geo), *geo));
      }
    }
  }
}

TEST(Moment, FlatSectionsOnFlatSpace) {
  auto g = flat_geometry(1);
  auto fd = solve(g, AlphaKind::kZero);
  auto rot = build_moment_section(symmetry_from_name(g, "rotation"), fd);
  WeylSection expect = monomial(1, 0, 1, 1, RationalFn(1)) + monomial(1, 0, 0, 1, z()) + monomial(1, 0, 1, 0, zb()) +
                       WeylSection::scalar(1, HPoly(Scalar::rational(1, 2))).times_hbar(1);
  EXPECT_EQ(rot.s, expect * (-Scalar::i()));
  auto tr = build_moment_section(symmetry_from_name(g, "translation:1"), fd);
  EXPECT_EQ(tr.s, WeylSection::y(1, 0) - WeylSection::yb(1, 0));

  FlatSection crot = complete_to_flat(rot, fd);
  EXPECT_EQ(crot.symbol, (HPoly(z() * zb()) + HPoly(Scalar::rational(1, 2), 1)) * (-Scalar::i()));
  auto q = quantizability_check(crot);
  EXPECT_EQ(q.verdict, Verdict::kExactBound);
  EXPECT_EQ(q.bound, 1);
  FlatSection ctr = complete_to_flat(tr, fd);
  EXPECT_EQ(ctr.symbol, HPoly(z() - zb()));
  EXPECT_EQ(quantizability_check(ctr).verdict, Verdict::kExactBound);
  EXPECT_EQ(quantizability_check(ctr).bound, 1);
}

TEST(Moment, QuadraticPartMatchesHessian) {
  // On flat space the Moyal-ordered quadratic part is the fiber Hessian of -i mu.
  std::vector<SymmetryDatum> syms{symmetry_from_name(flat_geometry(1), "rotation"),
                                  symmetry_from_name(flat_geometry(1), "translation:1"),
                                  symmetry_from_vector_field(flat_geometry(2), {z(1), -z(0)}, "mix"),
                                  symmetry_from_vector_field(flat_geometry(2), {z(0) * Scalar::i(), -(z(1) * Scalar::i())}, "torus")};
  for (const auto& sym : syms) {
    auto fd = solve(sym.geometry, AlphaKind::kZero, 4);
    int n = sym.geometry->n;
    WeylSection hess(n);
    RationalFn mu = sym.moment_fn * (-Scalar::i());
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        FiberIndex y{}, yb{};
        y[p] = 1;
        yb[q] = 1;
        TermIndex t;
        t.y = y;
        t.yb = yb;
        hess += WeylSection::monomial(n, t, mu.derivative(z_var(p)).derivative(zb_var(q)));
      }
    }
    EXPECT_EQ(build_moment_section(sym, fd).quadratic_weyl, hess) << sym.name;
  }
}

TEST(Moment, AnsatzSolveReproducesSection) {
  // Solve (1/h)[s, a] = L_V a - [D, i_V] a over a quadratic ansatz on flat(1).
  auto g = flat_geometry(1);
  auto fd = solve(g, AlphaKind::kZero, 5);
  for (const std::string name : {"rotation", "translation:1"}) {
    auto sym = symmetry_from_name(g, name);
    std::vector<WeylSection> ansatz;
    for (const auto& c : {RationalFn(1), z(), zb()}) {
      for (auto [a, b] : {std::pair{1, 1}, {2, 0}, {0, 2}, {1, 0}, {0, 1}}) ansatz.push_back(monomial(1, 0, a, b, c));
    }
    std::vector<std::map<Key, Scalar>> cols(ansatz.size());
    std::map<Key, Scalar> rhs;
    int tag = 0;
    for (const auto& a : basis_1d(3)) {
      // Tag each test section so equations from different inputs stay separate.
      ++tag;
      for (std::size_t k = 0; k < ansatz.size(); ++k) {
        for (const auto& [key, v] : flatten(hbar_bracket(ansatz[k], a, *g))) {
          Key kk = key;
          kk.first.h += 100 * tag;
          cols[k][kk] += v;
        }
      }
      for (const auto& [key, v] : flatten(moment_operator(sym, fd, a))) {
        Key kk = key;
        kk.first.h += 100 * tag;
        rhs[kk] += v;
      }
    }
    auto x = solve_columns(cols, rhs);
    ASSERT_TRUE(x.has_value()) << name;
    WeylSection s(1);
    for (std::size_t k = 0; k < ansatz.size(); ++k) s += ansatz[k] * (*x)[k];
    auto ms = build_moment_section(sym, fd);
    // Equal up to central terms.
    WeylSection diff = ms.s - s;
    for (const auto& [idx, c] : diff.terms()) {
      EXPECT_TRUE(idx.y_degree() == 0 && idx.yb_degree() == 0 && c.is_constant()) << name;
    }
  }
}

TEST(Moment, BracketIdentityOnMonomialBasis) {
  struct Case {
    GeometryPtr g;
    std::string sym;
    AlphaKind alpha;
  };
  std::vector<Case> cases{{flat_geometry(1), "rotation", AlphaKind::kZero},
                          {flat_geometry(1), "translation:1", AlphaKind::kZero},
                          {flat_geometry(1), "rotation", AlphaKind::kHbarOmega},
                          {disc_geometry(), "rotation", AlphaKind::kBerezinToeplitz},
                          {cp1_geometry(), "rotation", AlphaKind::kZero},
                          {cp1_geometry(), "rotation", AlphaKind::kBerezinToeplitz}};
  for (const auto& c : cases) {
    auto fd = solve(c.g, c.alpha, 7);
    auto ms = build_moment_section(symmetry_from_name(c.g, c.sym), fd);
    for (const auto& a : basis_1d(4)) {
      EXPECT_TRUE(moment_identity_defect(ms, fd, a).is_zero()) << c.g->name << " " << c.sym << " " << a.to_string();
    }
  }
  auto g2 = flat_geometry(2);
  auto fd2 = solve(g2, AlphaKind::kZero, 5);
  SectionGenerator gen(321);
  for (const auto& sym : {symmetry_from_name(g2, "translation:2"), symmetry_from_vector_field(g2, {z(1), -z(0)}, "mix")}) {
    auto ms = build_moment_section(sym, fd2);
    for (int it = 0; it < 10; ++it) {
      RandomSpec s;
      s.form_degrees = 0b11;
      EXPECT_TRUE(moment_identity_defect(ms, fd2, gen.section(2, s)).is_zero()) << sym.name;
    }
  }
}

TEST(Moment, BracketActsAsLieDerivativeOnFlatSections) {
  for (auto [g, alpha] : {std::pair{flat_geometry(1), AlphaKind::kZero}, {disc_geometry(), AlphaKind::kBerezinToeplitz}}) {
    auto fd = solve(g, alpha, 7);
    for (const std::string name : {"rotation", "translation:1"}) {
      if (g->name == "disc" && name != "rotation") continue;
      auto sym = symmetry_from_name(g, name);
      auto ms = build_moment_section(sym, fd);
      FlatSection completed = complete_to_flat(ms, fd);
      for (const auto& f : {z(), zb(), z() * zb()}) {
        FlatSection of = flat_section_of_function(HPoly(f), fd, FlatOptions{4, 4});
        int cut = std::min(of.certified_degree, completed.certified_degree) - 3;
        WeylSection lhs = hbar_bracket(completed.section, of.section, *g);
        int yb_cut = of.section.trunc().maxYbar;
        WeylSection diff = (lhs - lie_derivative(sym, of.section))
                               .up_to_y_degree(cut)
                               .filter([&](const TermIndex& t) { return t.yb_degree() < yb_cut; });
        EXPECT_TRUE(diff.is_zero()) << g->name << name << "\n" << diff.to_string();
        // L_V O_f = O_{V f}.
        RationalFn vf = sym.v[0] * f.derivative(z_var(0)) + sym.v_bar()[0] * f.derivative(zb_var(0));
        EXPECT_EQ(symbol(lhs), HPoly(vf));
      }
    }
  }
}

TEST(Moment, QuantizedRotationIsEuler) {
  auto g = flat_geometry(1);
  for (long k : {1, 2, 3}) {
    auto fd = at_level(solve(g, AlphaKind::kZero, 6), Scalar(k));
    FlatSection c = complete_to_flat(build_moment_section(symmetry_from_name(g, "rotation"), fd), fd);
    DiffOperator op = quantize_to_diffop(c, fd, 4);
    Scalar ik = Scalar::i() / Scalar(k);
    DiffOperator expect = DiffOperator::multiplication(1, z() * ik).compose(DiffOperator::derivative(1, 0)) +
                          DiffOperator::multiplication(1, RationalFn(ik * Scalar::rational(1, 2)));
    EXPECT_EQ(op, expect) << op.to_string();
    EXPECT_EQ(op.order(), 1);
  }
}

TEST(Moment, LieAlgebraHomomorphism) {
  auto g = flat_geometry(1);
  auto fd = solve(g, AlphaKind::kZero, 6);
  auto rot = symmetry_from_name(g, "rotation");
  auto tr = symmetry_from_name(g, "translation:1");
  auto itr = symmetry_from_vector_field(g, {RationalFn(Scalar::i())}, "itranslation");
  auto rep = lie_algebra_check({rot, tr, itr}, fd);
  for (const auto& c : rep.items) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
  ASSERT_EQ(rep.central_constants.size(), 3u);
  EXPECT_EQ(rep.central_constants[0], "rotation,translation:1: 0");
  // Translations along 1 and i commute as fields but their moments have a central bracket.
  EXPECT_NE(rep.central_constants[2], "translation:1,itranslation: 0");

  auto g2 = flat_geometry(2);
  auto fd2 = solve(g2, AlphaKind::kZero, 5);
  auto rep2 = lie_algebra_check({symmetry_from_name(g2, "translation:1"), symmetry_from_name(g2, "translation:2")}, fd2);
  for (const auto& c : rep2.items) EXPECT_TRUE(c.pass) << c.name;
  EXPECT_EQ(rep2.central_constants[0], "translation:1,translation:2: 0");

  auto disc = disc_geometry();
  auto fdd = at_level(solve(disc, AlphaKind::kBerezinToeplitz, 6), Scalar(2));
  auto rep3 = lie_algebra_check({symmetry_from_name(disc, "rotation")}, fdd);
  for (const auto& c : rep3.items) EXPECT_TRUE(c.pass) << c.name;
}

TEST(Moment, CurvedCompletions) {
  for (auto g : {disc_geometry(), cp1_geometry()}) {
    for (auto alpha : kAlphas) {
      auto fd = solve(g, alpha, 6);
      auto ms = build_moment_section(symmetry_from_name(g, "rotation"), fd);
      try {
        FlatSection c = complete_to_flat(ms, fd);
        EXPECT_EQ(quantizability_check(c).verdict, Verdict::kExactBound);
        EXPECT_EQ(quantizability_check(c).bound, 1);
        EXPECT_TRUE((c.symbol.coeff(0) + ms.symmetry.moment_fn * Scalar::i()).is_constant()) << g->name;
      } catch (const CompletionOutsideClass& e) {
        ADD_FAILURE() << g->name << " " << alpha_kind_name(alpha) << ": " << e.what();
      }
    }
  }
}

TEST(Moment, DefectDetectsPerturbedSection) {
  auto g = cp1_geometry();
  auto fd = solve(g, AlphaKind::kBerezinToeplitz, 6);
  auto ms = build_moment_section(symmetry_from_name(g, "rotation"), fd);
  MomentSection bad = ms;
  bad.s += monomial(1, 0, 1, 1, z());
  bool seen = false;
  for (const auto& a : basis_1d(2)) seen = seen || !moment_identity_defect(bad, fd, a).is_zero();
  EXPECT_TRUE(seen);
  EXPECT_THROW(complete_to_flat(bad, fd), MomentError);
}
