#include "fedq/moment.hpp"

#include <sstream>

#include "fedq/integrate.hpp"

namespace fedq {

namespace {

WeylSection empty_like(const WeylSection& a) { return WeylSection(a.n(), a.trunc(), a.level()); }

WeylSection fiber_monomial(int n, std::uint8_t form, const FiberIndex& y, const FiberIndex& yb,
                           const RationalFn& c) {
  TermIndex t;
  t.form = form;
  t.y = y;
  t.yb = yb;
  return WeylSection::monomial(n, t, c);
}

// Coefficients, fiber monomials of degree <= 2 and forms of degree <= 1.
std::vector<WeylSection> spanning_set(int n) {
  std::vector<RationalFn> coeffs{RationalFn(1)};
  for (int i = 0; i < n; ++i) {
    coeffs.push_back(RationalFn::var(z_var(i)));
    coeffs.push_back(RationalFn::var(zb_var(i)));
  }
  std::vector<std::pair<FiberIndex, FiberIndex>> fibers{{FiberIndex{}, FiberIndex{}}};
  for (int i = 0; i < 2 * n; ++i) {
    FiberIndex y{}, yb{};
    (i < n ? y[i] : yb[i - n]) = 1;
    fibers.emplace_back(y, yb);
    for (int j = i; j < 2 * n; ++j) {
      FiberIndex y2 = y, yb2 = yb;
      ++(j < n ? y2[j] : yb2[j - n]);
      fibers.emplace_back(y2, yb2);
    }
  }
  std::vector<std::uint8_t> forms{0};
  for (int i = 0; i < n; ++i) {
    forms.push_back(dz_bit(i));
    forms.push_back(dzb_bit(i));
  }
  std::vector<WeylSection> out;
  for (const auto& c : coeffs) {
    for (const auto& [y, yb] : fibers) {
      for (auto f : forms) out.push_back(fiber_monomial(n, f, y, yb, c));
    }
  }
  return out;
}

int moment_cert(const FedosovData& fd) {
  return fd.I_alpha().exact().y ? fd.maxY : fd.maxY - 1;
}

}  // namespace

Vector SymmetryDatum::v_bar() const {
  Vector r;
  for (const auto& c : v) r.push_back(c.conj());
  return r;
}

std::vector<std::string> symmetry_invariant_failures(const SymmetryDatum& s) {
  std::vector<std::string> out;
  const auto& g = *s.geometry;
  Vector vb = s.v_bar();
  for (int i = 0; i < g.n; ++i) {
    if (!s.v[i].is_holomorphic()) out.push_back("V^" + std::to_string(i + 1) + " is not holomorphic");
  }
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      RationalFn l;
      for (int m = 0; m < g.n; ++m) {
        l += s.v[m] * g.omega[i][j].derivative(z_var(m)) + vb[m] * g.omega[i][j].derivative(zb_var(m));
        l += s.v[m].derivative(z_var(i)) * g.omega[m][j] + vb[m].derivative(zb_var(j)) * g.omega[i][m];
      }
      if (!l.is_zero()) {
        out.push_back("L_V w is nonzero at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
    }
  }
  for (int i = 0; i < g.n; ++i) {
    RationalFn x, xb;
    for (int j = 0; j < g.n; ++j) {
      x += g.omega_inv[i][j] * s.moment_fn.derivative(zb_var(j)) * Scalar::i();
      xb += g.omega_inv[j][i] * s.moment_fn.derivative(z_var(j)) * (-Scalar::i());
    }
    if (!(x == s.v[i]) || !(xb == vb[i])) {
      out.push_back("X_mu differs from V in component " + std::to_string(i + 1));
    }
  }
  return out;
}

SymmetryDatum symmetry_from_vector_field(GeometryPtr gp, Vector v, std::string name) {
  const auto& g = *gp;
  if (static_cast<int>(v.size()) != g.n) throw std::invalid_argument("vector field has the wrong dimension");
  SymmetryDatum s{std::move(name), gp, std::move(v), RationalFn()};
  for (const auto& c : s.v) {
    if (!c.is_holomorphic()) throw MomentError("vector field is not holomorphic");
  }
  Vector vb = s.v_bar();
  Vector dz(g.n), dzb(g.n);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      dzb[j] += g.omega[i][j] * s.v[i] * (-Scalar::i());
      dz[i] += g.omega[i][j] * vb[j] * Scalar::i();
    }
  }
  std::optional<RationalFn> mu;
  try {
    mu = potential_of_closed_form(g.n, dz, dzb);
  } catch (const std::invalid_argument&) {
    throw MomentError("vector field " + s.name + " is not Hamiltonian");
  }
  if (!mu) throw MomentError("Hamiltonian of " + s.name + " is not a rational function");
  s.moment_fn = *mu;
  auto fails = symmetry_invariant_failures(s);
  if (!fails.empty()) throw MomentError("vector field " + s.name + ": " + fails.front());
  return s;
}

SymmetryDatum symmetry_from_name(GeometryPtr g, const std::string& name) {
  if (name == "rotation") {
    if (g->n != 1) throw std::invalid_argument("rotation needs a 1-dimensional geometry");
    return symmetry_from_vector_field(g, {RationalFn::var(z_var(0)) * Scalar::i()}, name);
  }
  const std::string prefix = "translation:";
  if (name.rfind(prefix, 0) == 0) {
    int i = 0;
    try {
      i = std::stoi(name.substr(prefix.size()));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad translation index in '" + name + "'");
    }
    if (i < 1 || i > g->n) throw std::invalid_argument("translation index out of range");
    Vector v(g->n);
    v[i - 1] = RationalFn(1);
    return symmetry_from_vector_field(g, std::move(v), name);
  }
  throw std::invalid_argument("unknown symmetry '" + name + "' (rotation, translation:i)");
}

Vector vector_field_bracket(const ChartGeometry& g, const Vector& v, const Vector& w) {
  Vector r(g.n);
  for (int i = 0; i < g.n; ++i) {
    for (int m = 0; m < g.n; ++m) {
      r[i] += v[m] * w[i].derivative(z_var(m)) - w[m] * v[i].derivative(z_var(m));
    }
  }
  return r;
}

WeylSection lie_derivative(const SymmetryDatum& s, const WeylSection& a) {
  const int n = a.n();
  Vector vb = s.v_bar();
  WeylSection r = empty_like(a);
  for (const auto& [idx, c] : a.terms()) {
    RationalFn dc;
    for (int m = 0; m < n; ++m) dc += s.v[m] * c.derivative(z_var(m)) + vb[m] * c.derivative(zb_var(m));
    r.add_term(idx, dc);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      RationalFn hol = s.v[i].derivative(z_var(j));
      if (hol.is_zero()) continue;
      RationalFn anti = hol.conj();
      r += commutative_mul(WeylSection::y(n, j), d_y(a, i)) * hol;
      r += wedge_left(dz_bit(j), interior(dz_bit(i), a)) * hol;
      r += commutative_mul(WeylSection::yb(n, j), d_yb(a, i)) * anti;
      r += wedge_left(dzb_bit(j), interior(dzb_bit(i), a)) * anti;
    }
  }
  return r;
}

WeylSection contraction(const SymmetryDatum& s, const WeylSection& a) {
  Vector vb = s.v_bar();
  WeylSection r = empty_like(a);
  for (int i = 0; i < a.n(); ++i) {
    if (!s.v[i].is_zero()) r += interior(dz_bit(i), a) * s.v[i];
    if (!vb[i].is_zero()) r += interior(dzb_bit(i), a) * vb[i];
  }
  return r;
}

WeylSection moment_operator(const SymmetryDatum& s, const FedosovData& fd, const WeylSection& a) {
  return lie_derivative(s, a) - connection_apply(fd, contraction(s, a)) - contraction(s, connection_apply(fd, a));
}

WeylSection moyal_mul(const WeylSection& a, const WeylSection& b, const ChartGeometry& g) {
  WeylSection r = commutative_mul(a, b);
  std::vector<std::pair<WeylSection, WeylSection>> level{{a, b}};
  Scalar coef(1);
  for (int k = 1; !level.empty(); ++k) {
    std::vector<std::pair<WeylSection, WeylSection>> next;
    for (const auto& [A, B] : level) {
      for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
          const RationalFn& w = g.omega_inv[i][j];
          if (w.is_zero()) continue;
          WeylSection a1 = d_y(A, i), b1 = d_yb(B, j);
          if (!a1.is_zero() && !b1.is_zero()) next.emplace_back(a1 * w, b1);
          WeylSection a2 = d_yb(A, j), b2 = d_y(B, i);
          if (!a2.is_zero() && !b2.is_zero()) next.emplace_back(-(a2 * w), b2);
        }
      }
    }
    coef = coef * Scalar::rational(1, 2 * k);
    for (const auto& [A, B] : next) r += commutative_mul(A, B).times_hbar(k) * coef;
    level = std::move(next);
  }
  return r;
}

WeylSection weyl_wick_transform(const WeylSection& a, const ChartGeometry& g, TransformDirection d) {
  const Scalar sign = d == TransformDirection::kToWick ? Scalar(1) : Scalar(-1);
  WeylSection r = a, term = a;
  for (int m = 1; !term.is_zero(); ++m) {
    WeylSection next = empty_like(a);
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        if (!g.omega_inv[i][j].is_zero()) next += d_yb(d_y(term, i), j) * g.omega_inv[i][j];
      }
    }
    term = next.times_hbar(1) * (sign * Scalar::rational(1, 2 * m));
    r += term;
  }
  return r;
}

MomentSection build_moment_section(const SymmetryDatum& sym, const FedosovData& fd) {
  const auto& g = fd.g();
  const int n = g.n;
  auto fails = symmetry_invariant_failures(sym);
  if (!fails.empty()) throw MomentError("invalid symmetry: " + fails.front());
  Vector vb = sym.v_bar();
  MomentSection ms;
  ms.symmetry = sym;
  ms.quadratic_weyl = WeylSection(n);
  WeylSection linear(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      // c_{p qbar} = -w_{m qbar} nabla_p V^m.
      RationalFn c;
      for (int m = 0; m < n; ++m) {
        RationalFn nv = sym.v[m].derivative(z_var(p));
        for (int l = 0; l < n; ++l) nv += sym.v[l] * g.christoffel[m][l][p];
        c -= nv * g.omega[m][q];
      }
      FiberIndex y{}, yb{};
      y[p] = 1;
      yb[q] = 1;
      ms.quadratic_weyl += fiber_monomial(n, 0, y, yb, c);
      linear += WeylSection::y(n, p) * (g.omega[p][q] * vb[q]);
      linear -= WeylSection::yb(n, q) * (g.omega[p][q] * sym.v[p]);
    }
  }
  WeylSection s = weyl_wick_transform(ms.quadratic_weyl, g) + linear;
  s.set_trunc(Trunc{fd.maxY, 64, 64});
  if (fd.level) s = evaluate_hbar(s, *fd.level);
  s -= contraction(sym, fd.I_alpha());
  ms.s = s;
  ms.certified_degree = moment_cert(fd);
  for (const auto& a : spanning_set(n)) {
    WeylSection d = moment_identity_defect(ms, fd, a);
    if (!d.is_zero()) {
      throw MomentError("moment bracket identity fails on " + a.to_string() + ": " + d.to_string());
    }
  }
  return ms;
}

WeylSection moment_identity_defect(const MomentSection& ms, const FedosovData& fd, const WeylSection& a_in) {
  WeylSection a = fd.level ? evaluate_hbar(a_in, *fd.level) : a_in;
  WeylSection lhs = hbar_bracket(ms.s, a, fd.g());
  WeylSection rhs = moment_operator(ms.symmetry, fd, a);
  const int cut = ms.certified_degree - std::max(a.max_ybar_degree(), 1) - 1;
  return (lhs - rhs).up_to_y_degree(cut);
}

FlatSection complete_to_flat(const MomentSection& ms, const FedosovData& fd) {
  const auto& g = fd.g();
  WeylSection ds = connection_apply(fd, ms.s).up_to_y_degree(ms.certified_degree - 2);
  std::map<int, std::pair<Vector, Vector>> theta;
  for (const auto& [idx, c] : ds.terms()) {
    if (idx.form_degree() != 1 || idx.y_degree() != 0 || idx.yb_degree() != 0) {
      throw MomentError("D(s) is not a scalar 1-form: " + ds.to_string());
    }
    auto& [dz, dzb] = theta.try_emplace(idx.h, Vector(g.n), Vector(g.n)).first->second;
    for (int i = 0; i < g.n; ++i) {
      if (idx.form == dz_bit(i)) dz[i] -= c;
      if (idx.form == dzb_bit(i)) dzb[i] -= c;
    }
  }
  WeylSection completed = ms.s;
  for (const auto& [h, form] : theta) {
    std::optional<RationalFn> f;
    try {
      f = potential_of_closed_form(g.n, form.first, form.second);
    } catch (const std::invalid_argument&) {
      throw MomentError("D(s) is not closed: " + ds.to_string());
    }
    if (!f) {
      throw CompletionOutsideClass("completion exists outside the rational coefficient class: D(s) = " +
                                   ds.to_string());
    }
    WeylSection term = WeylSection::scalar(g.n, HPoly(*f, h));
    completed += fd.level ? evaluate_hbar(term, *fd.level) : term;
  }
  FlatSection fs;
  fs.section = completed;
  fs.symbol = symbol(completed);
  fs.certified_degree = ms.certified_degree;
  fs.provenance = Provenance::kMoment;
  fs.structural_bound = 1;
  WeylSection defect = flatness_defect(fs, fd);
  if (!defect.is_zero()) throw MomentError("completed moment section is not flat: " + defect.to_string());
  return fs;
}

LieAlgebraReport lie_algebra_check(const std::vector<SymmetryDatum>& syms, const FedosovData& fd) {
  const auto& g = fd.g();
  LieAlgebraReport rep;
  std::vector<FlatSection> completed;
  for (const auto& s : syms) completed.push_back(complete_to_flat(build_moment_section(s, fd), fd));
  for (std::size_t a = 0; a < syms.size(); ++a) {
    for (std::size_t b = a + 1; b < syms.size(); ++b) {
      WeylSection br = hbar_bracket(completed[a].section, completed[b].section, g);
      Vector vab = vector_field_bracket(g, syms[a].v, syms[b].v);
      bool zero_field = std::all_of(vab.begin(), vab.end(), [](const RationalFn& c) { return c.is_zero(); });
      WeylSection expect = empty_like(br);
      if (!zero_field) {
        auto sab = symmetry_from_vector_field(syms[a].geometry, vab, "[" + syms[a].name + "," + syms[b].name + "]");
        expect = complete_to_flat(build_moment_section(sab, fd), fd).section;
      }
      const int cut = std::min(completed[a].certified_degree, completed[b].certified_degree) - 2;
      WeylSection diff = (br - expect).up_to_y_degree(cut);
      bool central = true;
      for (const auto& [idx, c] : diff.terms()) {
        if (idx.form != 0 || idx.y_degree() != 0 || idx.yb_degree() != 0 || !c.is_constant()) central = false;
      }
      std::string label = syms[a].name + "," + syms[b].name;
      std::string constant = diff.is_zero() ? "0" : diff.to_string();
      rep.items.push_back({"(1/h)[O_a, O_b] = O_[a,b] + const for " + label, central,
                           central ? "central constant " + constant : diff.to_string(), 0});
      rep.central_constants.push_back(label + ": " + constant);
    }
  }
  // G-invariance of D on a spanning set.
  for (const auto& s : syms) {
    bool ok = true;
    for (const auto& a_in : spanning_set(g.n)) {
      WeylSection a = fd.level ? evaluate_hbar(a_in, *fd.level) : a_in;
      WeylSection c = lie_derivative(s, connection_apply(fd, a)) - connection_apply(fd, lie_derivative(s, a));
      if (!c.up_to_y_degree(fd.maxY - 3).is_zero()) ok = false;
    }
    rep.items.push_back({"[L_V, D] = 0 for " + s.name, ok, "", 0});
  }
  return rep;
}

}  // namespace fedq
