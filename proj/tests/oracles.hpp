#pragma once

// Independent reference implementations used as test oracles.

#include <utility>
#include <vector>

#include "fedq/weyl.hpp"

namespace fedq::oracle {

// Wick product by repeated application of the bidifferential operator
// P(A (x) B) = sum_{i,j} w^{i jbar} d_{y^i} A (x) d_{yb^j} B, summing
// h^k/k! P^k and then multiplying the tensor factors commutatively.
inline WeylSection wick_by_iteration(const WeylSection& a, const WeylSection& b,
                                     const ChartGeometry& g) {
  std::vector<std::pair<WeylSection, WeylSection>> level{{a, b}};
  WeylSection out = commutative_mul(a, b);
  Scalar fact(1);
  for (int k = 1; !level.empty(); ++k) {
    fact *= Scalar(k);
    std::vector<std::pair<WeylSection, WeylSection>> next;
    WeylSection acc(a.n(), meet(a.trunc(), b.trunc()), a.level() ? a.level() : b.level());
    for (const auto& [A, B] : level) {
      for (int i = 0; i < g.n; ++i) {
        WeylSection dA = d_y(A, i);
        if (dA.is_zero()) continue;
        for (int j = 0; j < g.n; ++j) {
          if (g.omega_inv[i][j].is_zero()) continue;
          WeylSection dB = d_yb(B, j);
          if (dB.is_zero()) continue;
          next.emplace_back(dA * g.omega_inv[i][j], dB);
          acc += commutative_mul(next.back().first, next.back().second);
        }
      }
    }
    out += acc.times_hbar(k) * fact.inverse();
    level = std::move(next);
  }
  return out;
}

// Graded commutator built from the oracle product.
inline WeylSection bracket_by_iteration(const WeylSection& a, const WeylSection& b,
                                        const ChartGeometry& g) {
  auto parity = [](const WeylSection& s, int p) {
    return s.filter([p](const TermIndex& i) { return i.form_degree() % 2 == p; });
  };
  WeylSection r = wick_by_iteration(a, b, g);
  for (int pa = 0; pa < 2; ++pa) {
    for (int pb = 0; pb < 2; ++pb) {
      WeylSection t = wick_by_iteration(parity(b, pb), parity(a, pa), g);
      if (pa * pb == 1) {
        r += t;
      } else {
        r -= t;
      }
    }
  }
  return r;
}

}  // namespace fedq::oracle
