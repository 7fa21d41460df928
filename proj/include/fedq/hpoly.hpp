#pragma once

#include <map>
#include <string>

#include "fedq/rational_fn.hpp"

namespace fedq {

// Laurent polynomial in h with RationalFn coefficients. Negative powers only
// show up in the Karabegov form.
class HPoly {
 public:
  using Coeffs = std::map<int, RationalFn>;

  HPoly() = default;
  HPoly(const RationalFn& f, int hpow = 0);  // NOLINT(google-explicit-constructor)
  HPoly(long c) : HPoly(RationalFn(c)) {}  // NOLINT
  static HPoly hbar() { return HPoly(RationalFn(1), 1); }

  const Coeffs& coeffs() const { return c_; }
  RationalFn coeff(int h) const;
  bool is_zero() const { return c_.empty(); }
  int max_power() const { return c_.empty() ? 0 : c_.rbegin()->first; }
  int min_power() const { return c_.empty() ? 0 : c_.begin()->first; }
  bool is_hbar_free() const { return c_.empty() || (c_.size() == 1 && c_.count(0)); }

  void add(int h, const RationalFn& f);
  HPoly& operator+=(const HPoly& o);
  HPoly& operator-=(const HPoly& o);
  HPoly& operator*=(const Scalar& s);
  friend HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
  friend HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }
  friend HPoly operator*(const HPoly& a, const HPoly& b);
  friend HPoly operator*(HPoly a, const Scalar& s) { return a *= s; }
  HPoly operator-() const;
  friend bool operator==(const HPoly& a, const HPoly& b) { return (a - b).is_zero(); }

  HPoly shift(int dh) const;
  HPoly derivative(int v) const;
  HPoly conj() const;
  // h -> 1/k.
  RationalFn evaluate(const Scalar& k) const;
  bool depends_on(int v) const;

  std::string to_string() const;
  std::string to_latex() const;

 private:
  Coeffs c_;
};

}  // namespace fedq
