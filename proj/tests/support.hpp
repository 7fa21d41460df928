#pragma once

#include "fedq/fedosov.hpp"

namespace fedq::testing {

inline std::vector<GeometryPtr> all_geometries() {
  return {flat_geometry(1), flat_geometry(2), cp1_geometry(), disc_geometry()};
}

inline const AlphaKind kAlphas[] = {AlphaKind::kZero, AlphaKind::kHbarOmega,
                                    AlphaKind::kBerezinToeplitz};

// Contraction of one yb^q with one y^p against w^{p qbar}.
inline WeylSection trace(const WeylSection& a, const ChartGeometry& g) {
  WeylSection r(g.n);
  for (int p = 0; p < g.n; ++p) {
    for (int q = 0; q < g.n; ++q) r += d_yb(d_y(a, p), q) * g.omega_inv[p][q];
  }
  return r;
}

inline WeylSection term(int n, std::uint8_t form, std::initializer_list<int> y,
                        std::initializer_list<int> yb, int h, const RationalFn& c) {
  TermIndex t;
  t.form = form;
  for (int i : y) ++t.y[i];
  for (int j : yb) ++t.yb[j];
  t.h = h;
  return WeylSection::monomial(n, t, c);
}

inline RationalFn z(int i = 0) { return RationalFn::var(z_var(i)); }
inline RationalFn zb(int i = 0) { return RationalFn::var(zb_var(i)); }

// Non-symmetric metric w = 1 + z zb (potential z zb + (z zb)^2 / 4).
inline GeometryPtr bumpy_geometry() {
  CustomMetric m;
  m.name = "bumpy";
  m.omega = {{RationalFn(1) + z() * zb()}};
  m.d_rho = {zb() + z() * zb() * zb() * Scalar::rational(1, 2)};
  return custom_geometry(m);
}

}  // namespace fedq::testing
