#include "fedq/flat_sections.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace fedq {

namespace {

bool is_0form_scalar(const TermIndex& i) { return i.form == 0; }

int cert_from(const WeylSection& ia, int maxY, int ybar) {
  return ia.exact().y ? maxY : maxY - std::max(ybar, 1);
}

int exact_level_of(const WeylSection& s, const FlatOptions& o) {
  int e = INT_MAX;
  if (!s.exact().ybar) e = std::min(e, o.maxYbar);
  if (!s.exact().h) e = std::min(e, o.maxH);
  return e;
}

void certify(const FlatSection& s, const FedosovData& fd) {
  WeylSection d = flatness_defect(s, fd);
  if (!d.is_zero()) {
    throw FlatSectionError("section is not flat within certification: " + d.to_string());
  }
}

WeylSection connection_for(const WeylSection& s, const FedosovData& fd) {
  if (s.level() && !fd.level) return connection_apply(at_level(fd, *s.level()), s);
  if (!s.level() && fd.level) {
    return connection_apply(formal_connection(fd), s);
  }
  return connection_apply(fd, s);
}

}  // namespace

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kIteration:
      return "iteration";
    case Provenance::kHolomorphic:
      return "holomorphic";
    case Provenance::kGeneratorU:
      return "generator_u";
    case Provenance::kProduct:
      return "product";
    case Provenance::kReconstructed:
      return "reconstructed";
    case Provenance::kMoment:
      return "moment";
  }
  return "?";
}

bool FlatSection::complete() const {
  const auto& e = section.exact();
  return e.y && e.ybar && e.h;
}

FedosovData formal_connection(const FedosovData& fd) {
  FedosovData f = fd;
  f.level.reset();
  return f;
}

WeylSection flatness_defect(const FlatSection& s, const FedosovData& fd) {
  WeylSection d = connection_for(s.section, fd);
  const int ycut = s.certified_degree - 1;
  const int lcut = s.exact_level == INT_MAX ? INT_MAX : s.exact_level - 1;
  return d.filter([&](const TermIndex& i) {
    return i.y_degree() <= ycut && (lcut == INT_MAX || i.yb_degree() + i.h <= lcut);
  });
}

FlatSection flat_prolong_holomorphic(const RationalFn& f, const FedosovData& fd) {
  if (!f.is_holomorphic()) throw std::invalid_argument("function is not holomorphic");
  const auto& g = fd.g();
  Trunc t{fd.maxY, 64, 64};
  WeylSection term = WeylSection::scalar(g.n, HPoly(f), t);
  WeylSection o = term;
  for (int m = 1; m <= fd.maxY + 1 && !term.is_zero(); ++m) {
    term = nabla_tilde10(term, g);
    o += term;
  }
  if (fd.level) o = evaluate_hbar(o, *fd.level);
  FlatSection s;
  s.section = o;
  s.symbol = HPoly(f);
  s.certified_degree = cert_from(fd.I_alpha(), fd.maxY, 0);
  s.provenance = Provenance::kHolomorphic;
  s.structural_bound = 0;
  certify(s, fd);
  return s;
}

FlatSection flat_section_of_function(const HPoly& f, const FedosovData& fd, FlatOptions opt) {
  FedosovData F = formal_connection(fd);
  const auto& g = F.g();
  Trunc t{F.maxY, opt.maxYbar, opt.maxH};
  WeylSection base = WeylSection::scalar(g.n, f, t);
  WeylSection ia = F.I_alpha();
  WeylSection o = base;
  const int limit = F.maxY + opt.maxYbar + 2 * opt.maxH + 4;
  bool stable = false;
  for (int pass = 0; pass < limit && !stable; ++pass) {
    WeylSection next = base + delta_inv(nabla(o, g) + hbar_bracket(ia, o, g));
    stable = next == o;
    o = std::move(next);
  }
  if (!stable) throw FlatSectionError("flat-section iteration did not stabilize");
  FlatSection s;
  s.section = o;
  s.symbol = f;
  s.certified_degree = cert_from(ia, F.maxY, o.max_ybar_degree());
  s.exact_level = exact_level_of(o, opt);
  s.provenance = Provenance::kIteration;
  if (!(symbol(o) == f)) throw FlatSectionError("symbol of the flat section differs from input");
  certify(s, F);
  if (fd.level) s = evaluate_flat(s, *fd.level);
  return s;
}

WeylSection reconstruct_from_antiholomorphic(const WeylSection& a0, const FedosovData& fd) {
  for (const auto& [i, c] : a0.terms()) {
    if (i.dz_degree() != 0 || i.y_degree() != 0) {
      throw std::invalid_argument("input has holomorphic form or fiber components");
    }
  }
  const auto& g = fd.g();
  WeylSection term = a0;
  term.set_trunc(meet(a0.trunc(), Trunc{fd.maxY, 64, 64}));
  WeylSection o = term;
  for (int m = 1; m <= fd.maxY + 1 && !term.is_zero(); ++m) {
    term = nabla_tilde10(term, g);
    o += term;
  }
  return o;
}

HPoly u_function(const ChartGeometry& g, const AlphaForm& a, int j) {
  return HPoly(g.d_rho[j]) - a.d_phi_component(j);
}

FlatSection build_u(const FedosovData& fd, int j) {
  const auto& g = fd.g();
  if (j < 0 || j >= g.n) throw std::invalid_argument("u index out of range");
  HPoly u = u_function(g, fd.alpha, j);
  WeylSection a0 = WeylSection::scalar(g.n, u);
  for (int m = 0; m < g.n; ++m) a0 += WeylSection::yb(g.n, m) * g.omega[j][m];
  if (fd.level) a0 = evaluate_hbar(a0, *fd.level);
  FlatSection s;
  s.section = reconstruct_from_antiholomorphic(a0, fd);
  s.symbol = fd.level ? HPoly(u.evaluate(*fd.level)) : u;
  s.certified_degree = cert_from(fd.I_alpha(), fd.maxY, 1);
  s.provenance = Provenance::kGeneratorU;
  s.structural_bound = 1;
  certify(s, fd);
  return s;
}

FlatSection star_product_section(const FlatSection& a, const FlatSection& b,
                                 const FedosovData& fd) {
  FlatSection s;
  s.section = wick_mul(a.section, b.section, fd.g());
  s.symbol = symbol(s.section);
  s.certified_degree = std::min(a.certified_degree - b.section.max_ybar_degree(), b.certified_degree);
  s.exact_level = std::min(a.exact_level, b.exact_level);
  s.provenance = Provenance::kProduct;
  if (a.structural_bound >= 0 && b.structural_bound >= 0) {
    s.structural_bound = a.structural_bound + b.structural_bound;
  }
  certify(s, fd);
  return s;
}

FlatSection evaluate_flat(const FlatSection& s, const Scalar& k) {
  if (s.section.level()) {
    if (*s.section.level() == k) return s;
    throw std::invalid_argument("flat section already evaluated at another level");
  }
  if (!s.section.exact().ybar || !s.section.exact().h || s.exact_level != INT_MAX) {
    throw FlatSectionError("cannot evaluate: section is not polynomial in h and yb within bounds");
  }
  FlatSection r = s;
  r.section = evaluate_hbar(s.section, k);
  r.symbol = HPoly(s.symbol.evaluate(k));
  return r;
}

namespace {

// Flat section of f cut at total degree y + yb + 2h <= D. That degree never drops along
// the iteration (delta^{-1} adds one, brackets with I and J add at least one), so the
// cut terms are exact.
WeylSection flat_section_to_degree(const HPoly& f, const FedosovData& F, int D) {
  const auto& g = F.g();
  auto keep = [D](const TermIndex& i) { return i.y_degree() + i.yb_degree() + 2 * i.h <= D; };
  Trunc t{D, D, D};
  WeylSection base = WeylSection::scalar(g.n, f, t).filter(keep);
  WeylSection ia = F.I_alpha().filter([D](const TermIndex& i) { return i.y_degree() + i.yb_degree() + 2 * i.h <= D + 1; });
  WeylSection o = base;
  for (int pass = 0; pass <= D + 2; ++pass) {
    WeylSection next = base + delta_inv(nabla(o, g) + hbar_bracket(ia, o, g)).filter(keep);
    if (next == o) return o;
    o = std::move(next);
  }
  throw FlatSectionError("flat-section iteration did not stabilize");
}

}  // namespace

HPoly star_of_functions(const HPoly& f, const HPoly& g, const FedosovData& fd, int order) {
  if (f.min_power() < 0 || g.min_power() < 0) {
    throw FlatSectionError("star product needs symbols without negative powers of h");
  }
  const int D = 2 * order;
  FedosovData F = formal_connection(fd);
  if (F.certified_y_degree() < D) F = solve_fedosov(F.geometry, F.alpha, D + 1);
  WeylSection A = flat_section_to_degree(f, F, D).filter([order](const TermIndex& i) {
    return is_0form_scalar(i) && i.yb_degree() == 0 && i.y_degree() + i.h <= order;
  });
  WeylSection B = flat_section_to_degree(g, F, D).filter([order](const TermIndex& i) {
    return is_0form_scalar(i) && i.y_degree() == 0 && i.yb_degree() + i.h <= order;
  });
  HPoly full = symbol(wick_mul(A, B, fd.g()));
  HPoly out;
  for (const auto& [h, c] : full.coeffs()) {
    if (h <= order) out.add(h, c);
  }
  return out;
}

std::string QuantizabilityReport::to_string() const {
  std::ostringstream os;
  switch (verdict) {
    case Verdict::kExactBound:
      os << "exact_bound(" << bound << ")";
      break;
    case Verdict::kBoundedBy:
      os << "bounded_by(" << bound << ")";
      break;
    case Verdict::kUnboundedWithinTest:
      os << "unbounded_within_test";
      break;
  }
  os << " [max yb-degree " << max_ybar_degree_observed << ", tested through y-degree "
     << tested_through_y_degree << "]";
  return os.str();
}

QuantizabilityReport quantizability_check(const FlatSection& s) {
  QuantizabilityReport r;
  r.max_ybar_degree_observed = s.section.max_ybar_degree();
  r.tested_through_y_degree = s.certified_degree;
  r.bound = r.max_ybar_degree_observed;
  if (s.structural_bound >= 0 && r.max_ybar_degree_observed <= s.structural_bound) {
    r.verdict = Verdict::kExactBound;
  } else if (s.complete()) {
    r.verdict = Verdict::kExactBound;
  } else if (!s.section.exact().ybar) {
    r.verdict = Verdict::kUnboundedWithinTest;
  } else {
    r.verdict = Verdict::kBoundedBy;
  }
  return r;
}

std::string PsiField::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : coeffs) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    for (int p = 0; p < kMaxDim; ++p) {
      if (idx[p] == 0) continue;
      os << "*d_y" << p + 1;
      if (idx[p] > 1) os << "^" << static_cast<int>(idx[p]);
    }
  }
  return first ? "0" : os.str();
}

PsiField graded_symbol_psi(const FlatSection& s, const ChartGeometry& g) {
  auto q = quantizability_check(s);
  if (q.verdict != Verdict::kExactBound) {
    throw FlatSectionError("graded symbol needs an exact yb-bound, got " + q.to_string());
  }
  PsiField psi;
  psi.order = q.bound;
  for (const auto& [i, c] : s.section.terms()) {
    if (i.form != 0 || i.y_degree() != 0 || i.yb_degree() != psi.order) continue;
    std::map<FiberIndex, HPoly> acc{{FiberIndex{}, HPoly(c, i.h)}};
    for (int l = 0; l < g.n; ++l) {
      for (int rep = 0; rep < i.yb[l]; ++rep) {
        std::map<FiberIndex, HPoly> next;
        for (const auto& [idx, v] : acc) {
          for (int p = 0; p < g.n; ++p) {
            if (g.omega_inv[p][l].is_zero()) continue;
            FiberIndex k = idx;
            ++k[p];
            next[k] += v * HPoly(g.omega_inv[p][l]);
          }
        }
        acc = std::move(next);
      }
    }
    for (const auto& [idx, v] : acc) psi.coeffs[idx] += v;
  }
  std::erase_if(psi.coeffs, [](const auto& kv) { return kv.second.is_zero(); });
  for (const auto& [idx, v] : psi.coeffs) {
    for (int z = 0; z < g.n; ++z) {
      if (v.depends_on(zb_var(z))) psi.holomorphic = false;
    }
  }
  return psi;
}

namespace {

CheckResult make_check(std::string name, bool pass, std::string detail = {}) {
  return CheckResult{std::move(name), pass, std::move(detail), 0};
}

}  // namespace

TdoReport tdo_checks(const FedosovData& fd, const std::vector<RationalFn>& samples) {
  const auto& g = fd.g();
  TdoReport rep;
  std::vector<FlatSection> gens;
  std::vector<std::string> names;
  for (const auto& f : samples) {
    gens.push_back(flat_prolong_holomorphic(f, fd));
    names.push_back("O[" + f.to_string() + "]");
  }
  for (int j = 0; j < g.n; ++j) {
    gens.push_back(build_u(fd, j));
    names.push_back("O[u" + std::to_string(j + 1) + "]");
  }
  for (int j = 0; j < g.n; ++j) {
    gens.push_back(star_product_section(gens[samples.size() + j], gens[samples.size() + j], fd));
    names.push_back("O[u" + std::to_string(j + 1) + "]*O[u" + std::to_string(j + 1) + "]");
  }

  // Filtration: deg [A, B] <= deg A + deg B - 1.
  bool filt_ok = true;
  std::string filt_detail;
  int pairs = 0;
  for (std::size_t a = 0; a < gens.size(); ++a) {
    for (std::size_t b = a + 1; b < gens.size(); ++b) {
      const auto& A = gens[a];
      const auto& B = gens[b];
      int cert = std::min(A.certified_degree - B.section.max_ybar_degree(),
                          B.certified_degree - A.section.max_ybar_degree());
      WeylSection br = graded_bracket(A.section, B.section, g).up_to_y_degree(cert);
      int da = A.section.max_ybar_degree(), db = B.section.max_ybar_degree();
      ++pairs;
      bool ok = da + db == 0 ? br.is_zero() : br.max_ybar_degree() <= da + db - 1;
      if (!ok) {
        filt_ok = false;
        filt_detail += names[a] + "," + names[b] + "; ";
      }
    }
  }
  rep.items.push_back(make_check("filtration drop on " + std::to_string(pairs) + " pairs", filt_ok,
                                 filt_detail));

  // psi(O_u_j) = d_{y^j} with unit coefficient.
  bool psi_ok = true;
  for (int j = 0; j < g.n; ++j) {
    PsiField p = graded_symbol_psi(gens[samples.size() + j], g);
    FiberIndex e{};
    e[j] = 1;
    bool ok = p.order == 1 && p.coeffs.size() == 1 && p.coeffs.count(e) &&
              p.coeffs.at(e) == HPoly(RationalFn(1)) && p.holomorphic;
    psi_ok = psi_ok && ok;
  }
  rep.items.push_back(make_check("psi(O_u_j) = d_y^j", psi_ok));

  // sigma((1/h)[O_{u_j}, O_f]) = lambda * psi(O_{u_j})(f), one constant for all pairs.
  bool lam_ok = true;
  std::string lam_detail;
  for (int j = 0; j < g.n; ++j) {
    const auto& U = gens[samples.size() + j];
    for (std::size_t s = 0; s < samples.size(); ++s) {
      RationalFn df = samples[s].derivative(z_var(j));
      HPoly lhs = symbol(hbar_bracket(U.section, gens[s].section, g));
      if (df.is_zero()) {
        lam_ok = lam_ok && lhs.is_zero();
        continue;
      }
      if (!lhs.is_hbar_free()) {
        lam_ok = false;
        continue;
      }
      RationalFn ratio = lhs.coeff(0) / df;
      if (!ratio.is_constant()) {
        lam_ok = false;
        lam_detail += "non-constant ratio for " + names[s] + "; ";
        continue;
      }
      Scalar lam = ratio.constant_value();
      if (!rep.psi_constant) rep.psi_constant = lam;
      if (!(*rep.psi_constant == lam)) {
        lam_ok = false;
        lam_detail += "ratio " + lam.to_string() + " for " + names[s] + "; ";
      }
    }
  }
  if (rep.psi_constant) lam_detail = "constant " + rep.psi_constant->to_string() + " " + lam_detail;
  rep.items.push_back(make_check("bracket with O_u matches psi up to one constant", lam_ok, lam_detail));

  // Karabegov form read off the connection equals (1/h)(w - alpha).
  FedosovData formal = formal_connection(fd);
  bool kar = forms_equal(karabegov_form(formal), karabegov_from_curvature(formal), g.n);
  rep.items.push_back(make_check("Karabegov form (1/h)(w - alpha)", kar,
                                 form_to_string(karabegov_form(formal), g.n)));
  return rep;
}

CocycleReport cp1_two_chart_cocycle(AlphaKind kind) {
  auto g = cp1_geometry();
  AlphaForm a = alpha_form(*g, kind);
  HPoly u0 = u_function(*g, a, 0);
  // Chart 1 uses the same formulas in w = 1/z.
  RationalFn inv_z = RationalFn(1) / RationalFn::var(z_var(0));
  RationalFn inv_zb = RationalFn(1) / RationalFn::var(zb_var(0));
  std::array<const RationalFn*, kVars> img{};
  img[z_var(0)] = &inv_z;
  img[zb_var(0)] = &inv_zb;
  RationalFn dw_dz = -(inv_z * inv_z);
  RationalFn dwb_dzb = -(inv_zb * inv_zb);
  auto pull = [&](const HPoly& c, const RationalFn& factor) {
    HPoly r;
    for (const auto& [h, f] : c.coeffs()) r.add(h, f.substitute(img) * factor);
    return r;
  };
  CocycleReport rep;
  rep.cocycle = u0 - pull(u0, dw_dz);
  rep.holomorphic = !rep.cocycle.depends_on(zb_var(0));
  // A (1,0)-form in one variable is d-closed exactly when its coefficient is holomorphic.
  rep.d_closed = rep.cocycle.derivative(zb_var(0)).is_zero();
  rep.same_metric = g->omega[0][0] == g->omega[0][0].substitute(img) * dw_dz * dwb_dzb;
  rep.same_alpha = a.component(0, 0) == pull(a.component(0, 0), dw_dz * dwb_dzb);
  return rep;
}

}  // namespace fedq

namespace fedq {

namespace {

void fiber_indices(int n, int total, int from, FiberIndex& cur, std::vector<FiberIndex>& out) {
  if (from == n - 1) {
    cur[from] = static_cast<std::uint8_t>(total);
    out.push_back(cur);
    return;
  }
  for (int e = total; e >= 0; --e) {
    cur[from] = static_cast<std::uint8_t>(e);
    fiber_indices(n, total - e, from + 1, cur, out);
  }
}

std::vector<FiberIndex> fiber_indices(int n, int total) {
  std::vector<FiberIndex> out;
  FiberIndex cur{};
  fiber_indices(n, total, 0, cur, out);
  return out;
}

void monomials(const std::vector<int>& vars, std::size_t at, int left, Mono& cur, std::vector<Mono>& out) {
  if (at == vars.size()) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[vars[at]] = static_cast<std::uint8_t>(e);
    monomials(vars, at + 1, left - e, cur, out);
  }
  cur[vars[at]] = 0;
}

// All z, zb monomials of total degree <= max_degree.
std::vector<Mono> monomials(int n, int max_degree) {
  std::vector<int> vars;
  for (int i = 0; i < n; ++i) {
    vars.push_back(z_var(i));
    vars.push_back(zb_var(i));
  }
  std::vector<Mono> out;
  Mono cur{};
  monomials(vars, 0, max_degree, cur, out);
  return out;
}

std::size_t rank(std::vector<std::vector<Scalar>> rows, std::size_t ncols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    Scalar inv = rows[r][c].inverse();
    for (std::size_t k = c; k < ncols; ++k) rows[r][k] *= inv;
    for (std::size_t o = r + 1; o < rows.size(); ++o) {
      if (rows[o][c].is_zero()) continue;
      Scalar f = rows[o][c];
      for (std::size_t k = c; k < ncols; ++k) rows[o][k] -= f * rows[r][k];
    }
    ++r;
  }
  return r;
}

}  // namespace

int symbol_free_kernel_dimension(const FedosovData& fd, const Scalar& k, int degree, int coeff_degree) {
  const auto& g = fd.g();
  const int n = g.n;
  if (degree > fd.certified_y_degree()) throw FlatSectionError("ansatz degree exceeds the certified y-degree");
  FedosovData at = at_level(formal_connection(fd), k);
  std::vector<RationalFn> weights{RationalFn(1)};
  for (const auto& row : g.omega) {
    for (const auto& e : row) {
      if (!e.is_constant()) weights.push_back(e);
    }
  }
  const auto coeffs = monomials(n, coeff_degree);
  const int ycut = fd.certified_y_degree();
  std::vector<WeylSection> images;
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      if (a + b == 0) continue;
      for (const auto& ya : fiber_indices(n, a)) {
        for (const auto& yb : fiber_indices(n, b)) {
          for (const auto& w : weights) {
            for (const auto& m : coeffs) {
              TermIndex t;
              t.y = ya;
              t.yb = yb;
              WeylSection s = WeylSection::monomial(n, t, w * RationalFn(Poly::monomial(m, Scalar(1))));
              images.push_back(connection_apply(at, s).filter([ycut](const TermIndex& i) { return i.y_degree() <= ycut; }));
            }
          }
        }
      }
    }
  }
  std::vector<RationalFn::Factor> lcm;
  for (const auto& im : images) {
    for (const auto& [idx, c] : im.terms()) {
      for (const auto& f : c.den()) {
        auto it = std::find_if(lcm.begin(), lcm.end(), [&](const auto& e) { return e.p == f.p; });
        if (it == lcm.end()) {
          lcm.push_back(f);
        } else {
          it->e = std::max(it->e, f.e);
        }
      }
    }
  }
  RationalFn L(1);
  for (const auto& f : lcm) L *= RationalFn(f.p).pow(f.e);
  std::map<std::pair<TermIndex, Mono>, std::size_t> row_of;
  std::vector<std::vector<Scalar>> rows;
  for (std::size_t c = 0; c < images.size(); ++c) {
    for (const auto& [idx, v] : images[c].terms()) {
      RationalFn cleared = v * L;
      if (!cleared.is_polynomial()) throw FlatSectionError("could not clear denominators in the kernel system");
      for (const auto& [m, x] : cleared.num().terms()) {
        auto [it, fresh] = row_of.try_emplace({idx, m}, rows.size());
        if (fresh) rows.emplace_back(images.size());
        rows[it->second][c] += x;
      }
    }
  }
  return static_cast<int>(images.size() - rank(std::move(rows), images.size()));
}

UniquenessReport symbol_uniqueness_level(const FedosovData& fd, int kmax, int degree, int coeff_degree) {
  UniquenessReport r;
  for (int k = 1; k <= kmax; ++k) r.kernel_dims.push_back(symbol_free_kernel_dimension(fd, Scalar(k), degree, coeff_degree));
  for (int k = kmax; k >= 1 && r.kernel_dims[k - 1] == 0; --k) r.level = k;
  return r;
}

}  // namespace fedq
