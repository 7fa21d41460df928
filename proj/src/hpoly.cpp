#include "fedq/hpoly.hpp"

#include <stdexcept>

namespace fedq {

HPoly::HPoly(const RationalFn& f, int hpow) {
  if (!f.is_zero()) c_.emplace(hpow, f);
}

RationalFn HPoly::coeff(int h) const {
  auto it = c_.find(h);
  return it == c_.end() ? RationalFn() : it->second;
}

void HPoly::add(int h, const RationalFn& f) {
  if (f.is_zero()) return;
  auto [it, fresh] = c_.emplace(h, f);
  if (!fresh) {
    it->second += f;
    if (it->second.is_zero()) c_.erase(it);
  }
}

HPoly& HPoly::operator+=(const HPoly& o) {
  for (const auto& [h, f] : o.c_) add(h, f);
  return *this;
}

HPoly& HPoly::operator-=(const HPoly& o) {
  for (const auto& [h, f] : o.c_) add(h, -f);
  return *this;
}

HPoly& HPoly::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    c_.clear();
    return *this;
  }
  for (auto& [h, f] : c_) f *= s;
  return *this;
}

HPoly operator*(const HPoly& a, const HPoly& b) {
  HPoly r;
  for (const auto& [ha, fa] : a.c_) {
    for (const auto& [hb, fb] : b.c_) r.add(ha + hb, fa * fb);
  }
  return r;
}

HPoly HPoly::operator-() const {
  HPoly r = *this;
  for (auto& [h, f] : r.c_) f = -f;
  return r;
}

HPoly HPoly::shift(int dh) const {
  HPoly r;
  for (const auto& [h, f] : c_) r.c_.emplace(h + dh, f);
  return r;
}

HPoly HPoly::derivative(int v) const {
  HPoly r;
  for (const auto& [h, f] : c_) r.add(h, f.derivative(v));
  return r;
}

HPoly HPoly::conj() const {
  HPoly r;
  for (const auto& [h, f] : c_) r.add(h, f.conj());
  return r;
}

RationalFn HPoly::evaluate(const Scalar& k) const {
  if (k.is_zero()) throw std::domain_error("level must be nonzero");
  RationalFn r;
  for (const auto& [h, f] : c_) r += f * pow(k, -h);
  return r;
}

bool HPoly::depends_on(int v) const {
  for (const auto& [h, f] : c_) {
    if (f.depends_on(v)) return true;
  }
  return false;
}

namespace {
std::string hpow_string(int h, bool latex) {
  if (h == 0) return "";
  if (h == 1) return "h";
  if (latex) return "\\hbar^{" + std::to_string(h) + "}";
  return "h^" + std::to_string(h);
}
}  // namespace

std::string HPoly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (const auto& [h, f] : c_) {
    std::string fs = f.to_string();
    std::string hs = hpow_string(h, false);
    std::string piece;
    if (hs.empty()) {
      piece = fs;
    } else if (f == RationalFn(1)) {
      piece = hs;
    } else {
      piece = "(" + fs + ")*" + hs;
    }
    out += out.empty() ? piece : " + " + piece;
  }
  return out;
}

std::string HPoly::to_latex() const {
  if (c_.empty()) return "0";
  std::string out;
  for (const auto& [h, f] : c_) {
    std::string hs = h == 0 ? "" : (h == 1 ? "\\hbar" : "\\hbar^{" + std::to_string(h) + "}");
    std::string piece = hs.empty() ? f.to_latex() : "\\left(" + f.to_latex() + "\\right)" + hs;
    out += out.empty() ? piece : " + " + piece;
  }
  return out;
}

}  // namespace fedq
