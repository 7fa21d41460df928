#include "fedq/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace fedq {

std::string var_name(int v) {
  return v < kMaxDim ? "z" + std::to_string(v + 1) : "zb" + std::to_string(v - kMaxDim + 1);
}

Poly::Poly(const Scalar& c) {
  if (!c.is_zero()) terms_.emplace(Mono{}, c);
}

Poly Poly::var(int v, int power) {
  Mono m{};
  m[v] = static_cast<std::uint8_t>(power);
  return monomial(m, Scalar(1));
}

Poly Poly::monomial(const Mono& m, const Scalar& c) {
  Poly p;
  if (!c.is_zero()) p.terms_.emplace(m, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Mono{});
}

Scalar Poly::constant_term() const {
  auto it = terms_.find(Mono{});
  return it == terms_.end() ? Scalar() : it->second;
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

bool Poly::depends_on(int v) const {
  for (const auto& [m, c] : terms_) {
    if (m[v] != 0) return true;
  }
  return false;
}

Mono Poly::min_exponents() const {
  Mono r{};
  if (terms_.empty()) return r;
  r = terms_.begin()->first;
  for (const auto& [m, c] : terms_) {
    for (int v = 0; v < kVars; ++v) r[v] = std::min(r[v], m[v]);
  }
  return r;
}

void Poly::add_term(const Mono& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  if (s.is_one()) return *this;
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Mono m;
      for (int v = 0; v < kVars; ++v) m[v] = static_cast<std::uint8_t>(ma[v] + mb[v]);
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return a.terms_.size() <=> b.terms_.size();
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib) {
    if (auto c = ia->first <=> ib->first; c != 0) return c;
    if (auto c = ia->second <=> ib->second; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Poly Poly::pow(int e) const {
  if (e < 0) throw std::domain_error("negative polynomial power");
  Poly r(1), b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

Poly Poly::derivative(int v) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    if (m[v] == 0) continue;
    Mono d = m;
    --d[v];
    r.add_term(d, c * Scalar(static_cast<long>(m[v])));
  }
  return r;
}

Poly Poly::divide_mono(const Mono& dm) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    Mono q = m;
    for (int v = 0; v < kVars; ++v) {
      if (q[v] < dm[v]) throw std::logic_error("monomial does not divide");
      q[v] = static_cast<std::uint8_t>(q[v] - dm[v]);
    }
    r.terms_.emplace(q, c);
  }
  return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  Poly q, r = *this;
  const Mono& ld = d.leading_mono();
  Scalar inv = d.leading_coeff().inverse();
  while (!r.is_zero()) {
    const Mono& lr = r.leading_mono();
    Mono t;
    for (int v = 0; v < kVars; ++v) {
      if (lr[v] < ld[v]) return std::nullopt;
      t[v] = static_cast<std::uint8_t>(lr[v] - ld[v]);
    }
    Scalar c = r.leading_coeff() * inv;
    Poly step = Poly::monomial(t, c);
    q += step;
    r -= step * d;
  }
  return q;
}

Poly Poly::conj() const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    Mono s;
    for (int v = 0; v < kVars; ++v) s[v] = m[conj_var(v)];
    r.terms_.emplace(s, c.conj());
  }
  return r;
}

namespace {
std::string mono_string(const Mono& m, bool latex) {
  std::string s;
  for (int v = 0; v < kVars; ++v) {
    if (m[v] == 0) continue;
    if (!s.empty()) s += latex ? " " : "*";
    if (latex) {
      int idx = v < kMaxDim ? v + 1 : v - kMaxDim + 1;
      s += v < kMaxDim ? "z_{" + std::to_string(idx) + "}"
                       : "\\bar z_{" + std::to_string(idx) + "}";
      if (m[v] > 1) s += "^{" + std::to_string(m[v]) + "}";
    } else {
      s += var_name(v);
      if (m[v] > 1) s += "^" + std::to_string(m[v]);
    }
  }
  return s;
}

std::string join_terms(const Poly::Terms& terms, bool latex) {
  if (terms.empty()) return "0";
  std::string out;
  // Print highest terms first.
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [m, c] = *it;
    std::string ms = mono_string(m, latex);
    std::string cs = latex ? c.to_latex() : c.to_string();
    bool compound = !c.is_real() && !latex;
    std::string piece;
    if (ms.empty()) {
      piece = compound ? "(" + cs + ")" : cs;
    } else if (c.is_one()) {
      piece = ms;
    } else if (c == Scalar(-1)) {
      piece = "-" + ms;
    } else {
      piece = (compound ? "(" + cs + ")" : cs) + (latex ? " " : "*") + ms;
    }
    if (!out.empty()) {
      if (piece[0] == '-') {
        out += " - " + piece.substr(1);
      } else {
        out += " + " + piece;
      }
    } else {
      out = piece;
    }
  }
  return out;
}
}  // namespace

std::string Poly::to_string() const { return join_terms(terms_, false); }
std::string Poly::to_latex() const { return join_terms(terms_, true); }

}  // namespace fedq
