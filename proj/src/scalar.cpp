#include "fedq/scalar.hpp"

#include <stdexcept>

namespace fedq {

Scalar Scalar::from_string(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero scalar");
  mpq_class n = re_ * re_ + im_ * im_;
  return Scalar(re_ / n, -im_ / n);
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class m = re_ * o.im_ + im_ * o.re_;
  re_ = r;
  im_ = m;
  return *this;
}

std::string Scalar::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string im;
  if (im_ == 1) {
    im = "i";
  } else if (im_ == -1) {
    im = "-i";
  } else {
    im = im_.get_str() + "*i";
  }
  if (sgn(re_) == 0) return im;
  return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + im;
}

namespace {
std::string latex_q(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  std::string sign = sgn(q) < 0 ? "-" : "";
  mpz_class n = abs(q.get_num());
  return sign + "\\frac{" + n.get_str() + "}{" + q.get_den().get_str() + "}";
}
}  // namespace

std::string Scalar::to_latex() const {
  if (sgn(im_) == 0) return latex_q(re_);
  std::string im = im_ == 1 ? "i" : (im_ == -1 ? "-i" : latex_q(im_) + "i");
  if (sgn(re_) == 0) return im;
  return "(" + latex_q(re_) + (sgn(im_) > 0 ? "+" : "") + im + ")";
}

Scalar pow(const Scalar& s, int e) {
  if (e < 0) return pow(s.inverse(), -e);
  Scalar r(1), b = s;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

Scalar factorial(int n) {
  mpz_class f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Scalar(mpq_class(f));
}

}  // namespace fedq
