#include "fedq/geometry.hpp"

#include <sstream>

namespace fedq {

namespace {

Matrix zeros(int n) { return Matrix(n, Vector(n)); }

std::string idx(std::initializer_list<int> ids) {
  std::string s = "(";
  bool first = true;
  for (int i : ids) {
    if (!first) s += ",";
    s += std::to_string(i + 1);
    first = false;
  }
  return s + ")";
}

void check_kahler(const Matrix& w, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(w[i][j].conj() == w[j][i])) {
        throw GeometryError("metric not Hermitian at (i,j)=" + idx({i, j}));
      }
      for (int k = 0; k < n; ++k) {
        if (!(w[i][j].derivative(z_var(k)) == w[k][j].derivative(z_var(i)))) {
          throw GeometryError("Kahler condition d_k w_{i jbar} = d_i w_{k jbar} fails at (i,j,k)=" +
                              idx({i, j, k}));
        }
      }
    }
  }
}

GeometryPtr assemble(std::string name, Matrix omega, Vector d_rho, Vector dbar_rho,
                     std::optional<Vector> d_rho1) {
  auto g = std::make_shared<ChartGeometry>();
  const int n = static_cast<int>(omega.size());
  if (n < 1 || n > kMaxDim) throw GeometryError("chart dimension must be between 1 and 4");
  if (static_cast<int>(d_rho.size()) != n || static_cast<int>(dbar_rho.size()) != n) {
    throw GeometryError("potential data has wrong length");
  }
  for (const auto& row : omega) {
    if (static_cast<int>(row.size()) != n) throw GeometryError("metric matrix is not square");
  }
  g->name = std::move(name);
  g->n = n;
  g->omega = std::move(omega);
  check_kahler(g->omega, n);
  Matrix inv = invert(g->omega);
  g->omega_inv = zeros(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g->omega_inv[i][j] = inv[j][i];
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(d_rho[i].derivative(zb_var(j)) == g->omega[i][j])) {
        throw GeometryError("potential inconsistency dbar_j d_i rho != w_{i jbar} at (i,j)=" +
                            idx({i, j}));
      }
      if (!(dbar_rho[j].derivative(z_var(i)) == g->omega[i][j])) {
        throw GeometryError("potential inconsistency d_i dbar_j rho != w_{i jbar} at (i,j)=" +
                            idx({i, j}));
      }
    }
  }
  g->d_rho = std::move(d_rho);
  g->dbar_rho = std::move(dbar_rho);

  g->christoffel.assign(n, zeros(n));
  g->christoffel_bar.assign(n, zeros(n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        RationalFn gam, gamb;
        for (int l = 0; l < n; ++l) {
          gam += g->omega_inv[k][l] * g->omega[j][l].derivative(z_var(i));
          gamb += g->omega_inv[l][k] * g->omega[l][j].derivative(zb_var(i));
        }
        g->christoffel[k][i][j] = gam;
        g->christoffel_bar[k][i][j] = gamb;
      }
    }
  }
  g->curvature.assign(n, std::vector<Matrix>(n, zeros(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int p = 0; p < n; ++p) {
          RationalFn dg = g->christoffel[p][i][k].derivative(zb_var(j));
          if (dg.is_zero()) continue;
          for (int l = 0; l < n; ++l) g->curvature[i][j][k][l] -= g->omega[p][l] * dg;
        }
      }
    }
  }
  g->ricci = zeros(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) g->ricci[i][j] += g->curvature[i][j][k][l] * g->omega_inv[k][l];
      }
    }
  }
  if (d_rho1) {
    g->d_rho1 = std::move(*d_rho1);
  } else {
    g->d_rho1.assign(n, RationalFn());
    for (int i = 0; i < n; ++i) {
      for (int p = 0; p < n; ++p) g->d_rho1[i] -= g->christoffel[p][i][p];
    }
  }
  return g;
}

}  // namespace

Matrix invert(const Matrix& m) {
  const int n = static_cast<int>(m.size());
  Matrix a = m;
  Matrix inv = zeros(n);
  for (int i = 0; i < n; ++i) inv[i][i] = RationalFn(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r) {
      if (!a[r][c].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw GeometryError("metric is not invertible (zero pivot in column " +
                                     std::to_string(c + 1) + ")");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    RationalFn p = a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] /= p;
      inv[c][j] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c].is_zero()) continue;
      RationalFn f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

GeometryPtr flat_geometry(int n) {
  Matrix w = zeros(n);
  Vector dr(n), dbr(n), dr1(n);
  for (int i = 0; i < n; ++i) {
    w[i][i] = RationalFn(1);
    dr[i] = RationalFn::var(zb_var(i));
    dbr[i] = RationalFn::var(z_var(i));
  }
  return assemble("flat:" + std::to_string(n), w, dr, dbr, dr1);
}

namespace {
// 1 + s z zb with s = +-1.
Poly one_plus(int s) {
  Mono m{};
  m[z_var(0)] = 1;
  m[zb_var(0)] = 1;
  return Poly(1) + Poly::monomial(m, Scalar(s));
}

GeometryPtr model_disc_like(const std::string& name, int s) {
  Poly q = one_plus(s);
  RationalFn inv_q = RationalFn::quotient(Poly(1), q);
  Matrix w{{inv_q.pow(2)}};
  Vector dr{RationalFn::var(zb_var(0)) * inv_q};
  Vector dbr{RationalFn::var(z_var(0)) * inv_q};
  // rho1 = -log det w = 2 log(1 + s z zb), so d rho1 = 2 s zb / (1 + s z zb).
  Vector dr1{RationalFn::var(zb_var(0)) * inv_q * Scalar(2 * s)};
  return assemble(name, w, dr, dbr, dr1);
}
}  // namespace

GeometryPtr cp1_geometry() { return model_disc_like("cp1", 1); }
GeometryPtr disc_geometry() { return model_disc_like("disc", -1); }

GeometryPtr custom_geometry(const CustomMetric& m) {
  Vector dbr;
  if (m.dbar_rho) {
    dbr = *m.dbar_rho;
  } else {
    for (const auto& f : m.d_rho) dbr.push_back(f.conj());
  }
  return assemble(m.name, m.omega, m.d_rho, dbr, std::nullopt);
}

GeometryPtr geometry_from_name(const std::string& name) {
  if (name == "cp1") return cp1_geometry();
  if (name == "disc") return disc_geometry();
  if (name == "flat") return flat_geometry(1);
  if (name.rfind("flat:", 0) == 0) {
    std::string rest = name.substr(5);
    if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad geometry preset: " + name);
    }
    int n = std::stoi(rest);
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("flat dimension must be 1..4");
    return flat_geometry(n);
  }
  throw std::invalid_argument("unknown geometry preset: " + name);
}

std::vector<std::string> geometry_invariant_failures(const ChartGeometry& g) {
  std::vector<std::string> out;
  const int n = g.n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      RationalFn s;
      for (int k = 0; k < n; ++k) s += g.omega_inv[k][i] * g.omega[k][j];
      if (!(s == RationalFn(i == j ? 1 : 0))) out.push_back("inverse " + idx({i, j}));
      if (!(g.omega[i][j].conj() == g.omega[j][i])) out.push_back("hermitian " + idx({i, j}));
      if (!(g.d_rho[i].derivative(zb_var(j)) == g.omega[i][j])) {
        out.push_back("potential " + idx({i, j}));
      }
      for (int k = 0; k < n; ++k) {
        if (!(g.omega[i][j].derivative(z_var(k)) == g.omega[k][j].derivative(z_var(i)))) {
          out.push_back("kahler " + idx({i, j, k}));
        }
        // Metric parallel: d_k w_{i jbar} = Gamma^p_{k i} w_{p jbar}.
        RationalFn par = g.omega[i][j].derivative(z_var(k));
        RationalFn parb = g.omega[i][j].derivative(zb_var(k));
        for (int p = 0; p < n; ++p) {
          par -= g.christoffel[p][k][i] * g.omega[p][j];
          parb -= g.christoffel_bar[p][k][j] * g.omega[i][p];
        }
        if (!par.is_zero() || !parb.is_zero()) out.push_back("parallel " + idx({i, j, k}));
        if (!(g.christoffel[k][i][j].conj() == g.christoffel_bar[k][i][j])) {
          out.push_back("christoffel conjugate " + idx({k, i, j}));
        }
        if (!(g.christoffel[k][i][j] == g.christoffel[k][j][i])) {
          out.push_back("christoffel symmetry " + idx({k, i, j}));
        }
      }
    }
    RationalFn tr = g.d_rho1[i];
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) tr += g.omega[i][j].derivative(z_var(k)) * g.omega_inv[k][j];
    }
    if (!tr.is_zero()) out.push_back("trace identity " + idx({i}));
    for (int j = 0; j < n; ++j) {
      if (!(g.d_rho1[i].derivative(zb_var(j)) == g.ricci[i][j])) {
        out.push_back("ricci potential " + idx({i, j}));
      }
    }
  }
  return out;
}

HPoly AlphaForm::component(int i, int j) const {
  HPoly r;
  for (const auto& [h, m] : coeff) r.add(h, m[i][j]);
  return r;
}

HPoly AlphaForm::d_phi_component(int i) const {
  HPoly r;
  for (const auto& [h, v] : d_phi) r.add(h, v[i]);
  return r;
}

HPoly AlphaForm::dbar_phi_component(int j) const {
  HPoly r;
  for (const auto& [h, v] : dbar_phi) r.add(h, v[j]);
  return r;
}

std::string alpha_kind_name(AlphaKind k) {
  switch (k) {
    case AlphaKind::kZero:
      return "zero";
    case AlphaKind::kHbarOmega:
      return "hbar_omega";
    case AlphaKind::kBerezinToeplitz:
      return "berezin_toeplitz";
    case AlphaKind::kCustom:
      return "custom";
  }
  return "?";
}

AlphaForm alpha_form(const ChartGeometry& g, AlphaKind kind) {
  AlphaForm a;
  a.kind = kind;
  a.name = alpha_kind_name(kind);
  const int n = g.n;
  switch (kind) {
    case AlphaKind::kZero:
      break;
    case AlphaKind::kHbarOmega:
      a.coeff[1] = g.omega;
      a.d_phi[1] = g.d_rho;
      a.dbar_phi[1] = g.dbar_rho;
      break;
    case AlphaKind::kBerezinToeplitz: {
      // alpha = h * ricci; phi = -h log det w, whose derivatives are traces of Gamma.
      bool flat = true;
      for (const auto& row : g.ricci) {
        for (const auto& f : row) flat = flat && f.is_zero();
      }
      if (flat) break;
      a.coeff[1] = g.ricci;
      Vector dp(n), dbp(n);
      for (int i = 0; i < n; ++i) {
        for (int p = 0; p < n; ++p) {
          dp[i] -= g.christoffel[p][i][p];
          dbp[i] -= g.christoffel_bar[p][i][p];
        }
      }
      a.d_phi[1] = dp;
      a.dbar_phi[1] = dbp;
      break;
    }
    case AlphaKind::kCustom:
      throw std::invalid_argument("use custom_alpha for custom forms");
  }
  return a;
}

AlphaForm alpha_from_name(const ChartGeometry& g, const std::string& name) {
  if (name == "zero" || name == "0") return alpha_form(g, AlphaKind::kZero);
  if (name == "hbar_omega") return alpha_form(g, AlphaKind::kHbarOmega);
  if (name == "berezin_toeplitz" || name == "bt") return alpha_form(g, AlphaKind::kBerezinToeplitz);
  throw std::invalid_argument("unknown alpha: " + name);
}

AlphaForm custom_alpha(const ChartGeometry& g, std::map<int, Matrix> coeff,
                       std::map<int, Vector> d_phi, std::map<int, Vector> dbar_phi) {
  AlphaForm a;
  a.kind = AlphaKind::kCustom;
  a.name = "custom";
  for (const auto& [h, m] : coeff) {
    if (h < 1) throw std::invalid_argument("custom alpha must be divisible by h (admissible class)");
    if (static_cast<int>(m.size()) != g.n) throw std::invalid_argument("custom alpha has wrong size");
  }
  a.coeff = std::move(coeff);
  a.d_phi = std::move(d_phi);
  a.dbar_phi = std::move(dbar_phi);
  auto fails = alpha_invariant_failures(g, a);
  if (!fails.empty()) throw std::invalid_argument("custom alpha rejected: " + fails.front());
  return a;
}

std::vector<std::string> alpha_invariant_failures(const ChartGeometry& g, const AlphaForm& a) {
  std::vector<std::string> out;
  const int n = g.n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      HPoly c = a.component(i, j);
      if (!(a.dbar_phi_component(j).derivative(z_var(i)) == c)) {
        out.push_back("d(dbar phi) != alpha at " + idx({i, j}));
      }
      if (!(a.d_phi_component(i).derivative(zb_var(j)) == c)) {
        out.push_back("dbar(d phi) != alpha at " + idx({i, j}));
      }
      for (int k = 0; k < n; ++k) {
        if (!(c.derivative(z_var(k)) == a.component(k, j).derivative(z_var(i)))) {
          out.push_back("alpha not d-closed at " + idx({i, j, k}));
        }
        if (!(c.derivative(zb_var(k)) == a.component(i, k).derivative(zb_var(j)))) {
          out.push_back("alpha not dbar-closed at " + idx({i, j, k}));
        }
      }
    }
  }
  return out;
}

RationalFn poisson_bracket(const ChartGeometry& g, const RationalFn& f, const RationalFn& h) {
  RationalFn s;
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      if (g.omega_inv[i][j].is_zero()) continue;
      s += g.omega_inv[i][j] * (f.derivative(z_var(i)) * h.derivative(zb_var(j)) -
                                f.derivative(zb_var(j)) * h.derivative(z_var(i)));
    }
  }
  return s * Scalar(0, -1);
}

}  // namespace fedq
