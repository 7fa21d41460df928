#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "fedq/polynomial.hpp"

namespace fedq {

// Quotient num / prod(f_k^e_k). Each f_k is monic (leading coefficient 1 under
// the lexicographic order), free of monomial content unless it is a single
// variable, and no f_k divides num. Factors are kept in sorted order.
//
// Factors are taken as supplied; they are assumed irreducible. For every chart
// shipped here (1 +- z zb, single variables) that holds, so the representation
// is canonical there. Zero testing never depends on it.
class RationalFn {
 public:
  struct Factor {
    Poly p;
    int e = 0;
    friend bool operator==(const Factor&, const Factor&) = default;
  };

  RationalFn() = default;
  RationalFn(const Poly& p) : num_(p) {}  // NOLINT(google-explicit-constructor)
  RationalFn(const Scalar& c) : num_(c) {}  // NOLINT
  RationalFn(long c) : num_(Scalar(c)) {}  // NOLINT
  static RationalFn var(int v) { return RationalFn(Poly::var(v)); }
  // num / den with den an arbitrary nonzero polynomial.
  static RationalFn quotient(const Poly& num, const Poly& den);

  const Poly& num() const { return num_; }
  const std::vector<Factor>& den() const { return den_; }
  Poly den_poly() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  Scalar constant_value() const { return num_.constant_term(); }
  bool depends_on(int v) const;
  // No zb variable anywhere.
  bool is_holomorphic() const;

  RationalFn& operator+=(const RationalFn& o);
  RationalFn& operator-=(const RationalFn& o);
  RationalFn& operator*=(const RationalFn& o);
  RationalFn& operator*=(const Scalar& s);
  RationalFn& operator/=(const RationalFn& o);
  friend RationalFn operator+(RationalFn a, const RationalFn& b) { return a += b; }
  friend RationalFn operator-(RationalFn a, const RationalFn& b) { return a -= b; }
  friend RationalFn operator*(RationalFn a, const RationalFn& b) { return a *= b; }
  friend RationalFn operator*(RationalFn a, const Scalar& s) { return a *= s; }
  friend RationalFn operator*(const Scalar& s, RationalFn a) { return a *= s; }
  friend RationalFn operator/(RationalFn a, const RationalFn& b) { return a /= b; }
  RationalFn operator-() const;
  friend bool operator==(const RationalFn& a, const RationalFn& b);

  RationalFn pow(int e) const;
  RationalFn derivative(int v) const;
  RationalFn conj() const;
  // Replaces variable slot v by images[v] (identity where images[v] is unset).
  RationalFn substitute(const std::array<const RationalFn*, kVars>& images) const;

  std::string to_string() const;
  std::string to_latex() const;

 private:
  void normalize();

  Poly num_;
  std::vector<Factor> den_;
};

}  // namespace fedq
