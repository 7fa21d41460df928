#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedq/fedosov.hpp"
#include "fedq/flat_sections.hpp"
#include "fedq/report.hpp"

namespace fedq {

class FockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Section of W_X (x) L^k in the local frame e of L^k: yb-free, h evaluated at 1/level.
struct FockSection {
  WeylSection poly;
  Scalar level;

  // Validates that poly is yb-free and evaluated at k (or marks it so).
  static FockSection make(WeylSection poly, const Scalar& k);
  int n() const { return poly.n(); }
  bool is_zero() const { return poly.is_zero(); }
  friend bool operator==(const FockSection& a, const FockSection& b) {
    return a.level == b.level && a.poly == b.poly;
  }
};

// y^K yb^L acts as (-1/k)^{|L|} prod_l (w^{p lbar} d_{y^p}) after multiplication by y^K.
FockSection bf_act(const WeylSection& a, const FockSection& s, const ChartGeometry& g);

// D_F s = nabla s + k gamma (.) s + k d(rho) ^ s. Requires fd at level k and k alpha = Ricci.
FockSection fock_connection_apply(const FedosovData& fd, const FockSection& s);
// nabla^2 on the Fock factor alone.
FockSection fock_nabla_squared(const ChartGeometry& g, const FockSection& s);

// beta = sum_{m >= 1} (nabla-tilde^{1,0})^m rho, starting from d_i rho y^i.
WeylSection build_beta(const ChartGeometry& g, int maxY);
// e^{k beta} (x) e, truncated at fd.maxY.
FockSection coherent_section(const FedosovData& fd);
// D_F terms are reliable through this y-degree.
int fock_certified_degree(const FedosovData& fd);

// Holomorphic differential operator sum_b c_b(z) d^b.
class DiffOperator {
 public:
  using Coeffs = std::map<FiberIndex, RationalFn>;

  DiffOperator() = default;
  DiffOperator(int n, Coeffs c, Scalar level = Scalar(1));
  static DiffOperator multiplication(int n, const RationalFn& f, Scalar level = Scalar(1));
  static DiffOperator derivative(int n, int i, Scalar level = Scalar(1));

  int n() const { return n_; }
  const Coeffs& coeffs() const { return c_; }
  const Scalar& level() const { return level_; }
  int order() const;
  bool holomorphic() const;

  RationalFn apply(const RationalFn& f) const;
  // (this o other).
  DiffOperator compose(const DiffOperator& other) const;
  DiffOperator& operator+=(const DiffOperator& o);
  DiffOperator& operator*=(const Scalar& s);
  friend DiffOperator operator+(DiffOperator a, const DiffOperator& b) { return a += b; }
  friend DiffOperator operator*(DiffOperator a, const Scalar& s) { return a *= s; }
  friend bool operator==(const DiffOperator& a, const DiffOperator& b);

  std::string to_string() const;
  std::string to_latex() const;

 private:
  int n_ = 1;
  Coeffs c_;
  Scalar level_{1};
};

// The operator P of order <= N with q (.) (O_g e^{k beta}) = O_{P(g)} e^{k beta}, solved
// against monomials g = z^m, |m| <= max_test_degree.
DiffOperator quantize_to_diffop(const FlatSection& q, const FedosovData& fd, int max_test_degree);

// O_f e^{k beta} is D_F-flat with symbol f for holomorphic samples; f e^{k beta} is not
// flat for the non-holomorphic ones.
CheckReport symbol_iso_check(const FedosovData& fd, const std::vector<RationalFn>& holomorphic,
                             const std::vector<RationalFn>& non_holomorphic);

// Q_f = kappa nabla_{X_f} + f on L^k in the frame e, with kappa = sqrt(-1)/k and
// X_f(g) = {f, g}.
struct PrequantumOperator {
  int n = 1;
  Scalar level{1};
  Vector d;     // coefficient of d/dz^i
  Vector dbar;  // coefficient of d/dzb^j
  RationalFn zeroth;

  RationalFn apply(const RationalFn& s) const;
  bool preserves_holomorphy(const std::vector<RationalFn>& samples) const;
  std::string to_string() const;
};
PrequantumOperator prequantum_operator(const ChartGeometry& g, const RationalFn& f, const Scalar& k);

// d_i rho1 + w^{k jbar} d_k w_{i jbar}, one entry per i (zero on a Kahler chart).
Vector kahler_trace_defect(const ChartGeometry& g);

// Monomial operators z^a d^b (|a| + |b| <= max_order) not in the span of compositions of
// the generators of length <= max_word.
std::vector<std::string> missing_from_generated_span(const std::vector<DiffOperator>& gens,
                                                     int max_word, int max_order);

}  // namespace fedq
