#include "fedq/parse.hpp"

#include <cctype>

namespace fedq {

ParseError::ParseError(std::size_t pos, const std::string& what)
    : std::runtime_error("parse error at position " + std::to_string(pos + 1) + ": " + what), pos_(pos) {}

namespace {

class Parser {
 public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  HPoly run() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "empty expression");
    HPoly v = expr();
    if (pos_ != s_.size()) throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      skip();
      return true;
    }
    return false;
  }

  HPoly expr() {
    HPoly v = term();
    for (;;) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  HPoly term() {
    HPoly v = unary();
    for (;;) {
      std::size_t at = pos_;
      if (accept('*')) {
        v = v * unary();
      } else if (accept('/')) {
        v = divide(v, unary(), at);
      } else {
        return v;
      }
    }
  }

  HPoly unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  HPoly power() {
    HPoly base = atom();
    std::size_t at = pos_;
    if (!accept('^')) return base;
    bool neg = accept('-');
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError(pos_, "expected an integer exponent");
    if (pos_ - start > 4) throw ParseError(start, "exponent too large");
    int e = std::stoi(s_.substr(start, pos_ - start));
    skip();
    HPoly r(1);
    for (int k = 0; k < e; ++k) r = r * base;
    return neg ? divide(HPoly(1), r, at) : r;
  }

  HPoly divide(const HPoly& a, const HPoly& b, std::size_t at) {
    if (b.is_zero()) throw ParseError(at, "division by zero");
    if (b.coeffs().size() != 1) throw ParseError(at, "division by an expression with several powers of h");
    const auto& [p, f] = *b.coeffs().begin();
    HPoly r;
    for (const auto& [h, c] : a.coeffs()) r.add(h - p, c / f);
    return r;
  }

  HPoly atom() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      HPoly v = expr();
      if (!accept(')')) throw ParseError(pos_, "expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  HPoly number() {
    std::size_t start = pos_;
    std::string digits;
    int frac = -1;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
      if (s_[pos_] == '.') {
        if (frac >= 0) throw ParseError(pos_, "second decimal point");
        frac = 0;
      } else {
        digits += s_[pos_];
        if (frac >= 0) ++frac;
      }
      ++pos_;
    }
    if (digits.empty()) throw ParseError(start, "malformed number");
    mpq_class v(mpz_class(digits, 10), 1);
    if (frac > 0) {
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac));
      v /= den;
    }
    skip();
    return HPoly(RationalFn(Scalar(v)));
  }

  HPoly name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string id = s_.substr(start, pos_ - start);
    skip();
    if (id == "h") return HPoly::hbar();
    if (id == "i") return HPoly(RationalFn(Scalar::i()));
    bool bar = id.rfind("zb", 0) == 0;
    std::size_t digit_at = bar ? 2 : 1;
    if ((bar || id[0] == 'z') && id.size() > digit_at) {
      std::string idx = id.substr(digit_at);
      bool numeric = idx.size() <= 2;
      for (char d : idx) numeric = numeric && std::isdigit(static_cast<unsigned char>(d));
      if (numeric) {
        int k = std::stoi(idx);
        if (k < 1 || k > n_) {
          throw ParseError(start, "variable " + id + " outside 1.." + std::to_string(n_));
        }
        return HPoly(RationalFn::var(bar ? zb_var(k - 1) : z_var(k - 1)));
      }
    }
    throw ParseError(start, "unknown identifier '" + id + "'");
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

HPoly parse_expression(const std::string& text, int n) { return Parser(text, n).run(); }

}  // namespace fedq
