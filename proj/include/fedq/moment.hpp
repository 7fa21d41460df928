#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fedq/fedosov.hpp"
#include "fedq/flat_sections.hpp"
#include "fedq/report.hpp"

namespace fedq {

class MomentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The flat completion needs a primitive that is not a rational function.
class CompletionOutsideClass : public MomentError {
 public:
  using MomentError::MomentError;
};

// Real holomorphic vector field V = V^i d_i + conj(V^i) dbar_i with Hamiltonian mu:
// X_mu = V for {f, g} = X_f(g).
struct SymmetryDatum {
  std::string name;
  GeometryPtr geometry;
  Vector v;  // holomorphic components V^i
  RationalFn moment_fn;

  Vector v_bar() const;
};

// Validates the field (holomorphic, Killing) and finds its Hamiltonian.
SymmetryDatum symmetry_from_vector_field(GeometryPtr g, Vector v, std::string name = "custom");
// "rotation" (flat:1, cp1, disc) and "translation:i" (flat:n, 1-based i).
SymmetryDatum symmetry_from_name(GeometryPtr g, const std::string& name);
std::vector<std::string> symmetry_invariant_failures(const SymmetryDatum& s);
// Holomorphic part of the bracket of the real fields.
Vector vector_field_bracket(const ChartGeometry& g, const Vector& v, const Vector& w);

// Lie derivative on base functions, forms and fiber variables (y^i like dz^i).
WeylSection lie_derivative(const SymmetryDatum& s, const WeylSection& a);
// Contraction of the form part with V.
WeylSection contraction(const SymmetryDatum& s, const WeylSection& a);
// L_V - (D i_V + i_V D).
WeylSection moment_operator(const SymmetryDatum& s, const FedosovData& fd, const WeylSection& a);

// Fiberwise Moyal product: exp((h/2) w^{i jbar}(d_{y^i} (x) d_{yb^j} - d_{yb^j} (x) d_{y^i})).
WeylSection moyal_mul(const WeylSection& a, const WeylSection& b, const ChartGeometry& g);
enum class TransformDirection { kToWick, kToWeyl };
// e^{+-S} with S = (h/2) w^{i jbar} d_{y^i} d_{yb^j}; e^S(a o_Moyal b) = e^S(a) * e^S(b).
WeylSection weyl_wick_transform(const WeylSection& a, const ChartGeometry& g,
                                TransformDirection d = TransformDirection::kToWick);

struct MomentSection {
  SymmetryDatum symmetry;
  WeylSection quadratic_weyl;  // Moyal-ordered fiber-quadratic part
  WeylSection s;               // (1/h)[s, a] = L_V a - [D, i_V] a
  int certified_degree = 0;
};

// Throws MomentError when the bracket identity fails on the spanning set.
MomentSection build_moment_section(const SymmetryDatum& sym, const FedosovData& fd);
// Terms of (1/h)[s, a] - (L_V - [D, i_V]) a in the reliable region.
WeylSection moment_identity_defect(const MomentSection& ms, const FedosovData& fd, const WeylSection& a);
// s + F with dF = -D(s). Throws CompletionOutsideClass when F is not rational.
FlatSection complete_to_flat(const MomentSection& ms, const FedosovData& fd);

struct LieAlgebraReport {
  CheckReport items;
  std::vector<std::string> central_constants;  // one per pair, "a,b: c"
};
// (1/h)[O_a, O_b] = O_[a,b] + central constant for completed sections, plus G-invariance
// of D on sample sections.
LieAlgebraReport lie_algebra_check(const std::vector<SymmetryDatum>& syms, const FedosovData& fd);

}  // namespace fedq
