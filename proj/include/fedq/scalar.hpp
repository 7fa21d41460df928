#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace fedq {

// Gaussian rational re + im*i, exact.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& re, const mpq_class& im = 0) : re_(re), im_(im) {  // NOLINT
    re_.canonicalize();
    im_.canonicalize();
  }
  static Scalar rational(long num, long den) { return Scalar(mpq_class(num, den)); }
  static Scalar i() { return Scalar(0, 1); }
  // Parses "a", "a/b", optionally followed by an imaginary part "a/b+c/di" is not
  // accepted; use the expression parser for that.
  static Scalar from_string(const std::string& s);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  Scalar inverse() const;

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  Scalar operator-() const { return Scalar(-re_, -im_); }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  // Total order (real part first), used only for canonical container ordering.
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    int c = cmp(a.re_, b.re_);
    if (c == 0) c = cmp(a.im_, b.im_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  // "3/4", "-1/2+3/5*i", "i", "-2*i".
  std::string to_string() const;
  std::string to_latex() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

Scalar pow(const Scalar& s, int e);
Scalar factorial(int n);

}  // namespace fedq
