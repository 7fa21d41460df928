#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "fedq/scalar.hpp"

namespace fedq {

// Chart dimension cap. Variable slot v < kMaxDim is z^{v+1}, slot kMaxDim + v is zb^{v+1}.
inline constexpr int kMaxDim = 4;
inline constexpr int kVars = 2 * kMaxDim;

inline constexpr int z_var(int i) { return i; }
inline constexpr int zb_var(int i) { return kMaxDim + i; }
inline constexpr int conj_var(int v) { return v < kMaxDim ? v + kMaxDim : v - kMaxDim; }

using Mono = std::array<std::uint8_t, kVars>;

// Sparse polynomial in z, zb over Gaussian rationals. Terms are ordered
// lexicographically on exponent vectors; the last term is the leading one.
class Poly {
 public:
  using Terms = std::map<Mono, Scalar>;

  Poly() = default;
  Poly(const Scalar& c);  // NOLINT(google-explicit-constructor)
  Poly(long c) : Poly(Scalar(c)) {}  // NOLINT
  static Poly var(int v, int power = 1);
  static Poly monomial(const Mono& m, const Scalar& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  std::size_t size() const { return terms_.size(); }
  const Mono& leading_mono() const { return terms_.rbegin()->first; }
  const Scalar& leading_coeff() const { return terms_.rbegin()->second; }
  int total_degree() const;
  bool depends_on(int v) const;
  // Minimum exponent of each variable over all terms (monomial content).
  Mono min_exponents() const;

  void add_term(const Mono& m, const Scalar& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Scalar& s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  Poly operator-() const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);

  Poly pow(int e) const;
  Poly derivative(int v) const;
  // Divides out x^m exactly; requires every term to contain x^m.
  Poly divide_mono(const Mono& m) const;
  // Quotient if `d` divides exactly, otherwise nullopt.
  std::optional<Poly> divide_exact(const Poly& d) const;
  // Swap z <-> zb and conjugate coefficients.
  Poly conj() const;

  std::string to_string() const;
  std::string to_latex() const;

 private:
  Terms terms_;
};

std::string var_name(int v);

}  // namespace fedq
