#include "fedq/random.hpp"

namespace fedq {

int SectionGenerator::uniform(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

RationalFn SectionGenerator::coefficient(int n, const RandomSpec& s) {
  Poly p;
  int nt = uniform(1, 3);
  for (int t = 0; t < nt; ++t) {
    Mono m{};
    int deg = uniform(0, s.max_coeff_degree);
    for (int d = 0; d < deg; ++d) {
      int v = uniform(0, 2 * n - 1);
      ++m[v < n ? z_var(v) : zb_var(v - n)];
    }
    int re = uniform(-3, 3);
    int im = uniform(0, 3) == 0 ? uniform(-2, 2) : 0;
    if (re == 0 && im == 0) re = 1;
    p.add_term(m, Scalar(re, im));
  }
  RationalFn c(p);
  if (s.denominator_sign != 0 && uniform(0, 1) == 1) {
    Poly q = Poly(1) + Poly::var(z_var(0)) * Poly::var(zb_var(0)) * Scalar(s.denominator_sign);
    c = c / RationalFn(q.pow(uniform(1, 2)));
  }
  return c;
}

WeylSection SectionGenerator::section(int n, const RandomSpec& s, Trunc t) {
  WeylSection r(n, t);
  for (int k = 0; k < s.terms; ++k) {
    TermIndex idx;
    int yd = uniform(0, s.max_y);
    for (int d = 0; d < yd; ++d) ++idx.y[uniform(0, n - 1)];
    int ybd = uniform(0, s.max_yb);
    for (int d = 0; d < ybd; ++d) ++idx.yb[uniform(0, n - 1)];
    idx.h = uniform(0, s.max_h);
    std::vector<int> degs;
    for (int d = 0; d <= 2 * n; ++d) {
      if (s.form_degrees & (1u << d)) degs.push_back(d);
    }
    int fd = degs.empty() ? 0 : degs[uniform(0, static_cast<int>(degs.size()) - 1)];
    int slots = s.holomorphic_forms_only ? n : 2 * n;
    for (int tries = 0; idx.form_degree() < fd && tries < 64; ++tries) {
      int b = uniform(0, slots - 1);
      idx.form |= b < n ? dz_bit(b) : dzb_bit(b - n);
    }
    if (idx.form_degree() != fd) continue;
    r.add_term(idx, coefficient(n, s));
  }
  return r;
}

}  // namespace fedq
