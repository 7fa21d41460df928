#include "fedq/integrate.hpp"

#include <stdexcept>

namespace fedq {

namespace {

// Polynomial in one variable with coefficients free of it.
struct UPoly {
  std::vector<RationalFn> c;

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  RationalFn at(int k) const { return k >= 0 && k < static_cast<int>(c.size()) ? c[k] : RationalFn(); }
  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
};

UPoly to_upoly(const Poly& p, int v) {
  UPoly u;
  for (const auto& [m, s] : p.terms()) {
    int k = m[v];
    Mono rest = m;
    rest[v] = 0;
    if (static_cast<int>(u.c.size()) <= k) u.c.resize(k + 1);
    u.c[k] += RationalFn(Poly::monomial(rest, s));
  }
  u.trim();
  return u;
}

RationalFn from_upoly(const UPoly& u, int v) {
  RationalFn r;
  for (int k = 0; k <= u.deg(); ++k) {
    if (!u.c[k].is_zero()) r += u.c[k] * RationalFn(Poly::var(v, k));
  }
  return r;
}

UPoly add(const UPoly& a, const UPoly& b, const Scalar& sb = Scalar(1)) {
  UPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (std::size_t k = 0; k < r.c.size(); ++k) r.c[k] = a.at(k) + b.at(k) * sb;
  r.trim();
  return r;
}

UPoly mul(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  UPoly r;
  r.c.resize(a.c.size() + b.c.size() - 1);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.trim();
  return r;
}

UPoly derivative(const UPoly& a) {
  UPoly r;
  for (int k = 1; k <= a.deg(); ++k) r.c.push_back(a.c[k] * Scalar(k));
  r.trim();
  return r;
}

UPoly monomial(int k) {
  UPoly r;
  r.c.assign(k + 1, RationalFn());
  r.c[k] = RationalFn(1);
  return r;
}

std::pair<UPoly, UPoly> divmod(UPoly a, const UPoly& b) {
  UPoly q;
  RationalFn lead_inv = RationalFn(1) / b.c.back();
  while (!a.is_zero() && a.deg() >= b.deg()) {
    int shift = a.deg() - b.deg();
    RationalFn f = a.c.back() * lead_inv;
    if (static_cast<int>(q.c.size()) <= shift) q.c.resize(shift + 1);
    q.c[shift] += f;
    for (int k = 0; k <= b.deg(); ++k) a.c[k + shift] -= f * b.c[k];
    a.c.pop_back();
    a.trim();
  }
  q.trim();
  return {q, a};
}

// Solves M x = rhs over the rational functions; nullopt when singular.
std::optional<std::vector<RationalFn>> solve(std::vector<std::vector<RationalFn>> m, std::vector<RationalFn> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    RationalFn inv = RationalFn(1) / m[col][col];
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      RationalFn f = m[r][col] * inv;
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<RationalFn> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

}  // namespace

std::optional<RationalFn> antiderivative(const RationalFn& f, int v) {
  if (f.is_zero()) return RationalFn();
  if (!f.depends_on(v)) return f * RationalFn::var(v);
  RationalFn outside(1);
  UPoly D{{RationalFn(1)}}, D1{{RationalFn(1)}}, D2{{RationalFn(1)}};
  for (const auto& fac : f.den()) {
    if (!fac.p.depends_on(v)) {
      outside /= RationalFn(fac.p.pow(fac.e));
      continue;
    }
    UPoly p = to_upoly(fac.p, v);
    for (int e = 0; e < fac.e; ++e) D = mul(D, p);
    for (int e = 0; e + 1 < fac.e; ++e) D1 = mul(D1, p);
    D2 = mul(D2, p);
  }
  auto [Q, R] = divmod(to_upoly(f.num(), v), D);
  UPoly intQ;
  for (int k = 0; k <= Q.deg(); ++k) {
    intQ.c.resize(k + 2);
    intQ.c[k + 1] = Q.c[k] * Scalar::rational(1, k + 1);
  }
  intQ.trim();
  RationalFn result = from_upoly(intQ, v);
  if (!R.is_zero()) {
    // R / D = (B / D1)' + C / D2 with deg B < deg D1, deg C < deg D2.
    const int m1 = D1.deg(), m2 = D2.deg(), size = m1 + m2;
    auto [H, rem] = divmod(mul(D2, derivative(D1)), D1);
    if (!rem.is_zero()) return std::nullopt;
    std::vector<UPoly> cols;
    for (int t = 0; t < m1; ++t) cols.push_back(add(mul(derivative(monomial(t)), D2), mul(monomial(t), H), Scalar(-1)));
    for (int t = 0; t < m2; ++t) cols.push_back(mul(monomial(t), D1));
    std::vector<std::vector<RationalFn>> m(size, std::vector<RationalFn>(size));
    std::vector<RationalFn> rhs(size);
    for (int row = 0; row < size; ++row) {
      for (int col = 0; col < size; ++col) m[row][col] = cols[col].at(row);
      rhs[row] = R.at(row);
    }
    auto x = solve(m, rhs);
    if (!x) return std::nullopt;
    for (int t = 0; t < m2; ++t) {
      if (!(*x)[m1 + t].is_zero()) return std::nullopt;
    }
    UPoly B;
    B.c.assign(x->begin(), x->begin() + m1);
    B.trim();
    result += from_upoly(B, v) / from_upoly(D1, v);
  }
  result *= outside;
  if (!(result.derivative(v) == f)) return std::nullopt;
  return result;
}

std::optional<RationalFn> potential_of_closed_form(int n, const Vector& dz, const Vector& dzb) {
  std::vector<std::pair<int, RationalFn>> parts;
  for (int i = 0; i < n; ++i) parts.emplace_back(z_var(i), dz[i]);
  for (int j = 0; j < n; ++j) parts.emplace_back(zb_var(j), dzb[j]);
  RationalFn F;
  for (const auto& [v, theta] : parts) {
    auto g = antiderivative(theta - F.derivative(v), v);
    if (!g) return std::nullopt;
    F += *g;
  }
  for (const auto& [v, theta] : parts) {
    if (!(F.derivative(v) == theta)) throw std::invalid_argument("1-form is not closed");
  }
  return F;
}

}  // namespace fedq
