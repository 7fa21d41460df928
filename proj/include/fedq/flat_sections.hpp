#pragma once

#include <climits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedq/fedosov.hpp"
#include "fedq/report.hpp"

namespace fedq {

class FlatSectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Provenance { kIteration, kHolomorphic, kGeneratorU, kProduct, kReconstructed, kMoment };
std::string provenance_name(Provenance p);

// A D-flat section. Terms with y-degree <= certified_degree and
// yb-degree + h-power <= exact_level are exact; D(section) vanishes on the
// part of that region it can be checked on.
struct FlatSection {
  WeylSection section;
  HPoly symbol;
  int certified_degree = 0;
  int exact_level = INT_MAX;
  Provenance provenance = Provenance::kIteration;
  // yb-degree bound known from the construction (generators and their products), or -1.
  int structural_bound = -1;

  // Nothing was dropped anywhere: the section is a genuine polynomial.
  bool complete() const;
};

struct FlatOptions {
  int maxYbar = 4;
  int maxH = 4;
};

// Formal version of an evaluated connection.
FedosovData formal_connection(const FedosovData& fd);

// sum_k (nabla-tilde^{1,0})^k f for holomorphic f.
FlatSection flat_prolong_holomorphic(const RationalFn& f, const FedosovData& fd);
// Fixpoint of O = f + delta^{-1}(nabla O + (1/h)[I_alpha, O]).
FlatSection flat_section_of_function(const HPoly& f, const FedosovData& fd, FlatOptions o = {});
// Unique (nabla^{1,0} - delta^{1,0})-closed prolongation of a yb-only section.
WeylSection reconstruct_from_antiholomorphic(const WeylSection& a0, const FedosovData& fd);

// u_j = d_j rho - sum_h h^h d_j phi_h.
HPoly u_function(const ChartGeometry& g, const AlphaForm& a, int j);
// O_{u_j}, reconstructed from its anti-holomorphic part u_j + w_{j mbar} yb^m.
FlatSection build_u(const FedosovData& fd, int j);
// a * b for flat sections; flat with yb-bound the sum of the bounds.
FlatSection star_product_section(const FlatSection& a, const FlatSection& b, const FedosovData& fd);
// Evaluate a flat section at h = 1/k (requires it to be polynomial in h and yb).
FlatSection evaluate_flat(const FlatSection& s, const Scalar& k);

// Terms of D(section) inside the region where they are reliable (zero for a flat section).
WeylSection flatness_defect(const FlatSection& s, const FedosovData& fd);

// sigma(O_f * O_g), exact through h^order.
HPoly star_of_functions(const HPoly& f, const HPoly& g, const FedosovData& fd, int order);

enum class Verdict { kBoundedBy, kUnboundedWithinTest, kExactBound };
struct QuantizabilityReport {
  int max_ybar_degree_observed = 0;
  int tested_through_y_degree = 0;
  Verdict verdict = Verdict::kBoundedBy;
  int bound = 0;
  std::string to_string() const;
};
QuantizabilityReport quantizability_check(const FlatSection& s);

// Top anti-holomorphic part with yb^l -> w^{p lbar} xi_p: a symmetric tangent field.
struct PsiField {
  int order = 0;
  std::map<FiberIndex, HPoly> coeffs;  // xi multi-index -> coefficient
  bool holomorphic = true;
  std::string to_string() const;
};
PsiField graded_symbol_psi(const FlatSection& s, const ChartGeometry& g);

// Filtration, psi/Poisson identification and Karabegov checks on sample functions.
struct TdoReport {
  CheckReport items;
  std::optional<Scalar> psi_constant;
};
TdoReport tdo_checks(const FedosovData& fd, const std::vector<RationalFn>& holomorphic_samples);

// cp1 with charts z and w = 1/z: the cocycle u^{(0)} - u^{(1)} on the overlap.
struct CocycleReport {
  HPoly cocycle;  // coefficient of dz
  bool holomorphic = false;
  bool d_closed = false;
  bool same_metric = false;
  bool same_alpha = false;
};
CocycleReport cp1_two_chart_cocycle(AlphaKind kind);

// Symbol-free sections c y^A yb^B with 0 < |A| + |B| <= degree and c a monomial of degree
// <= coeff_degree, optionally times an entry of w. Returns the dimension of the subspace
// that D_{alpha,k} annihilates through the certified y-degree.
int symbol_free_kernel_dimension(const FedosovData& fd, const Scalar& k, int degree, int coeff_degree);

struct UniquenessReport {
  std::vector<int> kernel_dims;  // index k - 1
  int level = 0;                 // smallest k0 with trivial kernel on k0..kmax, 0 if none
};
UniquenessReport symbol_uniqueness_level(const FedosovData& fd, int kmax, int degree = 2, int coeff_degree = 1);

}  // namespace fedq
