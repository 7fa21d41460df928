#include "fedq/fedosov.hpp"

#include <set>
#include <sstream>

namespace fedq {

namespace {

Trunc fedosov_trunc(int maxY) { return Trunc{maxY, 64, 64}; }

WeylSection scalar_form_section(const ChartGeometry& g, const FormalForm& f) {
  WeylSection r(g.n);
  for (const auto& [h, m] : f) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) {
        TermIndex idx;
        idx.form = dz_bit(i) | dzb_bit(j);
        idx.h = h;
        r.add_term(idx, m[i][j]);
      }
    }
  }
  return r;
}

// The curvature of the solved connection, nabla gamma + (1/h) gamma*gamma + R.
WeylSection weyl_curvature(const FedosovData& fd) {
  const auto& g = fd.g();
  WeylSection gam = fd.gamma();
  WeylSection r = nabla(gam, g) + hbar_bracket(gam, gam, g) * Scalar::rational(1, 2);
  r += curvature_section(g, gam.trunc());
  return r.up_to_y_degree(fd.certified_y_degree());
}

}  // namespace

WeylSection gamma0_section(const ChartGeometry& g, Trunc t) {
  WeylSection r(g.n, t);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      TermIndex a;
      a.form = dzb_bit(j);
      a.y[i] = 1;
      r.add_term(a, -g.omega[i][j]);
      TermIndex b;
      b.form = dz_bit(i);
      b.yb[j] = 1;
      r.add_term(b, g.omega[i][j]);
    }
  }
  return r;
}

WeylSection dbar_phi_section(const ChartGeometry& g, const AlphaForm& a, Trunc t) {
  WeylSection r(g.n, t);
  for (const auto& [h, v] : a.dbar_phi) {
    for (int j = 0; j < g.n; ++j) {
      TermIndex idx;
      idx.form = dzb_bit(j);
      idx.h = h;
      r.add_term(idx, v[j]);
    }
  }
  return r;
}

WeylSection FedosovData::I_alpha() const {
  WeylSection s = I + J;
  return level ? evaluate_hbar(s, *level) : s;
}

WeylSection FedosovData::gamma() const {
  WeylSection s = gamma0 + I + J;
  return level ? evaluate_hbar(s, *level) : s;
}

FedosovData solve_fedosov(GeometryPtr gp, const AlphaForm& alpha, int maxY) {
  if (maxY < 2) throw std::invalid_argument("max y-degree must be at least 2");
  for (const auto& [h, m] : alpha.coeff) {
    if (h < 1) throw FedosovError("alpha is not admissible: it must be divisible by h");
  }
  const auto& g = *gp;
  FedosovData fd;
  fd.geometry = gp;
  fd.alpha = alpha;
  fd.maxY = maxY;
  Trunc t = fedosov_trunc(maxY);
  fd.gamma0 = gamma0_section(g, t);

  // I = (delta^{1,0})^{-1}(nabla^{1,0} I + R), one y-degree per pass.
  WeylSection R = curvature_section(g, t);
  WeylSection I(g.n, t);
  for (int pass = 0; pass <= maxY; ++pass) {
    WeylSection next = delta10_inv(nabla10(I, g) + R);
    ++fd.iterations;
    bool stable = next == I;
    I = std::move(next);
    if (stable) break;
  }
  fd.I = I;

  // J = sum_{m >= 1} (nabla-tilde^{1,0})^m (dbar phi).
  WeylSection term = dbar_phi_section(g, alpha, t);
  WeylSection J(g.n, t);
  for (int m = 1; m <= maxY + 1; ++m) {
    term = nabla_tilde10(term, g);
    J += term;
    if (term.is_zero()) break;
  }
  fd.J = J;

  WeylSection res = fedosov_residual(fd);
  if (!res.is_zero()) {
    throw FedosovError("Fedosov residual nonzero within truncation: " + res.to_string());
  }
  auto fails = fedosov_invariant_failures(fd);
  if (!fails.empty()) throw FedosovError("Fedosov invariant failed: " + fails.front());
  return fd;
}

FedosovData at_level(const FedosovData& fd, const Scalar& k) {
  if (k.is_zero()) throw std::domain_error("level must be nonzero");
  FedosovData r = fd;
  r.level = k;
  return r;
}

WeylSection fedosov_residual(const FedosovData& fd) {
  const auto& g = fd.g();
  WeylSection r = weyl_curvature(fd);
  WeylSection source = omega_form(g) - alpha_section(g, fd.alpha);
  if (fd.level) source = evaluate_hbar(source, *fd.level);
  r -= source;
  return r.up_to_y_degree(fd.certified_y_degree());
}

std::vector<std::string> fedosov_invariant_failures(const FedosovData& fd) {
  std::vector<std::string> out;
  for (const auto& [i, c] : fd.I.terms()) {
    if (i.dz_degree() != 0 || i.dzb_degree() != 1) out.push_back("I term not a (0,1)-form");
    if (i.yb_degree() != 1) out.push_back("I term with yb-degree != 1");
    if (i.h != 0) out.push_back("I term with h power");
    if (i.y_degree() == 0) out.push_back("I has a purely anti-holomorphic term");
  }
  for (const auto& [i, c] : fd.J.terms()) {
    if (i.dz_degree() != 0 || i.dzb_degree() != 1) out.push_back("J term not a (0,1)-form");
    if (i.yb_degree() != 0) out.push_back("J term with yb-degree != 0");
    if (i.h > fd.alpha.max_hbar()) out.push_back("J exceeds the h-degree of alpha");
  }
  if (!delta10_inv(fd.I).is_zero()) out.push_back("gauge condition fails");
  if (!pi_0star(fd.I).is_zero()) out.push_back("I has nonzero pi_0 part");
  return out;
}

FormalForm karabegov_form(const FedosovData& fd) {
  const auto& g = fd.g();
  FormalForm f;
  f[-1] = g.omega;
  for (const auto& [h, m] : fd.alpha.coeff) {
    Matrix& t = f.try_emplace(h - 1, Matrix(g.n, Vector(g.n))).first->second;
    for (int i = 0; i < g.n; ++i) {
      for (int j = 0; j < g.n; ++j) t[i][j] -= m[i][j];
    }
  }
  return f;
}

FormalForm karabegov_from_curvature(const FedosovData& fd) {
  if (fd.level) throw std::invalid_argument("Karabegov form needs the formal connection");
  const auto& g = fd.g();
  WeylSection omega = weyl_curvature(fd);
  FormalForm f;
  for (const auto& [i, c] : omega.terms()) {
    if (i.y_degree() != 0 || i.yb_degree() != 0 || i.dz_degree() != 1 || i.dzb_degree() != 1) {
      throw FedosovError("Weyl curvature has a non-central term");
    }
    int a = 0, b = 0;
    while (!(i.form & dz_bit(a))) ++a;
    while (!(i.form & dzb_bit(b))) ++b;
    Matrix& m = f.try_emplace(i.h - 1, Matrix(g.n, Vector(g.n))).first->second;
    m[a][b] += c;
  }
  return f;
}

bool forms_equal(const FormalForm& a, const FormalForm& b, int n) {
  auto get = [n](const FormalForm& f, int h, int i, int j) {
    auto it = f.find(h);
    return it == f.end() ? RationalFn() : it->second[i][j];
  };
  std::set<int> keys;
  for (const auto& [h, m] : a) keys.insert(h);
  for (const auto& [h, m] : b) keys.insert(h);
  for (int h : keys) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!(get(a, h, i, j) == get(b, h, i, j))) return false;
      }
    }
  }
  return true;
}

std::string form_to_string(const FormalForm& f, int n) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [h, m] : f) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (m[i][j].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << m[i][j].to_string() << ")";
        if (h != 0) os << "*h^" << h;
        os << "*dz" << i + 1 << "/\\dzb" << j + 1;
      }
    }
  }
  return first ? "0" : os.str();
}

WeylSection connection_apply(const FedosovData& fd, const WeylSection& a) {
  const auto& g = fd.g();
  WeylSection in = a;
  if (fd.level && !a.level()) in = evaluate_hbar(a, *fd.level);
  if (!fd.level && a.level()) throw std::invalid_argument("evaluated section with formal connection");
  return nabla(in, g) - delta(in) + hbar_bracket(fd.I_alpha(), in, g);
}

}  // namespace fedq
