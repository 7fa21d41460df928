#include "fedq/rational_fn.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

namespace fedq {

namespace {

using Factor = RationalFn::Factor;

void add_factor(std::vector<Factor>& den, const Poly& p, int e) {
  if (e == 0) return;
  for (auto& f : den) {
    if (f.p == p) {
      f.e += e;
      return;
    }
  }
  den.push_back({p, e});
}

// m-th root of a monic polynomial, if it is an exact power.
std::optional<Poly> exact_root(const Poly& p, int m) {
  Mono lead = p.leading_mono();
  for (auto& e : lead) {
    if (e % m != 0) return std::nullopt;
    e = static_cast<std::uint8_t>(e / m);
  }
  Poly r = Poly::monomial(lead, Scalar(1));
  for (std::size_t step = 0; step <= p.size() * static_cast<std::size_t>(m) + 2; ++step) {
    Poly rem = p - r.pow(m);
    if (rem.is_zero()) return r;
    // Next term t solves lead(rem) = m * lead(r)^(m-1) * t.
    Poly denom = Poly::monomial(r.leading_mono(), Scalar(m)) * Poly::monomial(r.leading_mono(), Scalar(1)).pow(m - 2);
    auto t = Poly::monomial(rem.leading_mono(), rem.leading_coeff()).divide_exact(denom);
    if (!t || t->is_zero() || !(t->leading_mono() < r.terms().begin()->first)) return std::nullopt;
    r += *t;
  }
  return std::nullopt;
}

// Splits m into scalar * prod(monic factors). Monomial content becomes
// single-variable factors; the cofactor is divided by any existing factor it
// contains before being appended as a new factor.
Scalar factor_into(const Poly& m, int e, std::vector<Factor>& den) {
  if (m.is_zero()) throw std::domain_error("rational function division by zero");
  Scalar lc = m.leading_coeff();
  Poly rest = m * lc.inverse();
  Mono content = rest.min_exponents();
  if (content != Mono{}) {
    rest = rest.divide_mono(content);
    for (int v = 0; v < kVars; ++v) {
      if (content[v] > 0) add_factor(den, Poly::var(v), content[v] * e);
    }
  }
  bool progress = true;
  while (!rest.is_constant() && progress) {
    progress = false;
    for (auto& f : den) {
      if (f.p.size() == 1) continue;
      if (auto q = rest.divide_exact(f.p)) {
        rest = *q;
        f.e += e;
        progress = true;
        break;
      }
    }
  }
  if (!rest.is_constant()) {
    Scalar c = rest.leading_coeff();
    rest *= c.inverse();
    lc *= c;
    int power = 1;
    for (int k = rest.total_degree(); k >= 2; --k) {
      if (rest.total_degree() % k != 0) continue;
      if (auto r = exact_root(rest, k)) {
        rest = *r;
        power = k;
        break;
      }
    }
    add_factor(den, rest, e * power);
  }
  return pow(lc, e);
}

Poly expand(const std::vector<Factor>& den) {
  Poly r(1);
  for (const auto& f : den) r = r * f.p.pow(f.e);
  return r;
}

}  // namespace

RationalFn RationalFn::quotient(const Poly& num, const Poly& den) {
  RationalFn r;
  Scalar c = factor_into(den, 1, r.den_);
  r.num_ = num * c.inverse();
  r.normalize();
  return r;
}

Poly RationalFn::den_poly() const { return expand(den_); }

bool RationalFn::depends_on(int v) const {
  if (num_.depends_on(v)) return true;
  for (const auto& f : den_) {
    if (f.p.depends_on(v)) return true;
  }
  return false;
}

bool RationalFn::is_holomorphic() const {
  for (int i = 0; i < kMaxDim; ++i) {
    if (depends_on(zb_var(i))) return false;
  }
  return true;
}

void RationalFn::normalize() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& f : den_) {
    while (f.e > 0) {
      auto q = num_.divide_exact(f.p);
      if (!q) break;
      num_ = std::move(*q);
      --f.e;
    }
  }
  std::erase_if(den_, [](const Factor& f) { return f.e == 0; });
  std::sort(den_.begin(), den_.end(), [](const Factor& a, const Factor& b) { return a.p < b.p; });
}

RationalFn& RationalFn::operator+=(const RationalFn& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.empty()) normalize();
    return *this;
  }
  std::vector<Factor> common = den_;
  for (const auto& f : o.den_) {
    bool found = false;
    for (auto& c : common) {
      if (c.p == f.p) {
        c.e = std::max(c.e, f.e);
        found = true;
      }
    }
    if (!found) common.push_back(f);
  }
  auto lift = [&common](const Poly& n, const std::vector<Factor>& d) {
    Poly r = n;
    for (const auto& c : common) {
      int have = 0;
      for (const auto& f : d) {
        if (f.p == c.p) have = f.e;
      }
      if (c.e > have) r = r * c.p.pow(c.e - have);
    }
    return r;
  };
  num_ = lift(num_, den_) + lift(o.num_, o.den_);
  den_ = std::move(common);
  normalize();
  return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& o) { return *this += -o; }

RationalFn& RationalFn::operator*=(const RationalFn& o) {
  if (is_zero() || o.is_zero()) {
    *this = RationalFn();
    return *this;
  }
  num_ = num_ * o.num_;
  if (o.den_.empty() && den_.empty()) return *this;
  for (const auto& f : o.den_) add_factor(den_, f.p, f.e);
  normalize();
  return *this;
}

RationalFn& RationalFn::operator*=(const Scalar& s) {
  num_ *= s;
  if (num_.is_zero()) den_.clear();
  return *this;
}

RationalFn& RationalFn::operator/=(const RationalFn& o) {
  if (o.is_zero()) throw std::domain_error("rational function division by zero");
  if (is_zero()) return *this;
  num_ = num_ * expand(o.den_);
  Scalar c = factor_into(o.num_, 1, den_);
  num_ *= c.inverse();
  normalize();
  return *this;
}

RationalFn RationalFn::operator-() const {
  RationalFn r = *this;
  r.num_ = -r.num_;
  return r;
}

bool operator==(const RationalFn& a, const RationalFn& b) {
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return (a - b).is_zero();
}

RationalFn RationalFn::pow(int e) const {
  if (e < 0) return RationalFn(1) / pow(-e);
  RationalFn r;
  r.num_ = num_.pow(e);
  if (e > 0) {
    r.den_ = den_;
    for (auto& f : r.den_) f.e *= e;
  }
  return r;
}

RationalFn RationalFn::derivative(int v) const {
  RationalFn r;
  r.num_ = num_.derivative(v);
  r.den_ = den_;
  r.normalize();
  for (std::size_t k = 0; k < den_.size(); ++k) {
    Poly df = den_[k].p.derivative(v);
    if (df.is_zero()) continue;
    RationalFn t;
    t.num_ = num_ * df * Scalar(-den_[k].e);
    t.den_ = den_;
    t.den_[k].e += 1;
    t.normalize();
    r += t;
  }
  return r;
}

RationalFn RationalFn::conj() const {
  RationalFn r;
  r.num_ = num_.conj();
  Scalar scale(1);
  for (const auto& f : den_) {
    Poly c = f.p.conj();
    Scalar lc = c.leading_coeff();
    c *= lc.inverse();
    scale *= fedq::pow(lc, f.e);
    add_factor(r.den_, c, f.e);
  }
  r.num_ *= scale.inverse();
  r.normalize();
  return r;
}

RationalFn RationalFn::substitute(const std::array<const RationalFn*, kVars>& images) const {
  auto eval_poly = [&images](const Poly& p) {
    std::map<std::pair<int, int>, RationalFn> powers;
    auto power = [&](int v, int e) -> RationalFn {
      if (!images[v]) return RationalFn(Poly::var(v, e));
      auto key = std::make_pair(v, e);
      auto it = powers.find(key);
      if (it != powers.end()) return it->second;
      RationalFn r = images[v]->pow(e);
      powers.emplace(key, r);
      return r;
    };
    RationalFn acc;
    for (const auto& [m, c] : p.terms()) {
      RationalFn t(c);
      for (int v = 0; v < kVars; ++v) {
        if (m[v] > 0) t *= power(v, m[v]);
      }
      acc += t;
    }
    return acc;
  };
  RationalFn r = eval_poly(num_);
  for (const auto& f : den_) r /= eval_poly(f.p).pow(f.e);
  return r;
}

namespace {
std::string den_string(const std::vector<Factor>& den, bool latex) {
  std::string s;
  for (const auto& f : den) {
    if (!s.empty()) s += latex ? " " : "*";
    std::string body = latex ? f.p.to_latex() : f.p.to_string();
    bool wrap = f.p.size() > 1;
    if (latex) {
      s += (wrap ? "(" + body + ")" : body) + (f.e > 1 ? "^{" + std::to_string(f.e) + "}" : "");
    } else {
      s += (wrap ? "(" + body + ")" : body) + (f.e > 1 ? "^" + std::to_string(f.e) : "");
    }
  }
  return s;
}
}  // namespace

std::string RationalFn::to_string() const {
  if (den_.empty()) return num_.to_string();
  std::string n = num_.to_string();
  if (num_.size() > 1) n = "(" + n + ")";
  std::string d = den_string(den_, false);
  if (den_.size() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

std::string RationalFn::to_latex() const {
  if (den_.empty()) return num_.to_latex();
  return "\\frac{" + num_.to_latex() + "}{" + den_string(den_, true) + "}";
}

}  // namespace fedq
