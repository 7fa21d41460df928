#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "fedq/weyl.hpp"

namespace fedq {

class FedosovError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solved Fedosov connection D = nabla + (1/h)[gamma, -] with
// gamma = gamma0 + I + J, gamma0 = -w_{i jbar}(dzb^j y^i - dz^i yb^j), so that
// (1/h)[gamma0, -] = -delta. gamma solves
//   nabla gamma + (1/h) gamma * gamma + R = w - alpha.
struct FedosovData {
  GeometryPtr geometry;
  AlphaForm alpha;
  int maxY = 5;
  WeylSection gamma0;
  WeylSection I;  // (0,1)-form, yb-degree 1, h-free
  WeylSection J;  // (0,1)-form, yb-degree 0
  int iterations = 0;
  std::optional<Scalar> level;  // set for the evaluated connection D_{alpha,k}

  const ChartGeometry& g() const { return *geometry; }
  // I + J, evaluated at the level when one is set.
  WeylSection I_alpha() const;
  WeylSection gamma() const;
  // Residual terms are reliable through this y-degree.
  int certified_y_degree() const { return maxY - 1; }
};

FedosovData solve_fedosov(GeometryPtr g, const AlphaForm& alpha, int maxY);
// Same connection with h evaluated at 1/k.
FedosovData at_level(const FedosovData& fd, const Scalar& k);

// nabla gamma + (1/h) gamma * gamma + R - w + alpha, kept through y-degree maxY - 1.
WeylSection fedosov_residual(const FedosovData& fd);
// Structural invariants of I and J; empty when all hold.
std::vector<std::string> fedosov_invariant_failures(const FedosovData& fd);

// Laurent (1,1)-form: power of h -> matrix of dz^i ^ dzb^j coefficients.
using FormalForm = std::map<int, Matrix>;
// (1/h)(w - alpha).
FormalForm karabegov_form(const FedosovData& fd);
// Central part of (1/h)(nabla gamma + (1/h) gamma * gamma + R), read off the
// solved connection. Throws if a non-central part survives within certification.
FormalForm karabegov_from_curvature(const FedosovData& fd);
bool forms_equal(const FormalForm& a, const FormalForm& b, int n);
std::string form_to_string(const FormalForm& f, int n);

// D a = nabla a - delta a + (1/h)[I_alpha, a] (or the level-k version).
WeylSection connection_apply(const FedosovData& fd, const WeylSection& a);

// gamma0 for a geometry.
WeylSection gamma0_section(const ChartGeometry& g, Trunc t = {});
// Section sum_h h^h dbar_j phi_h dzb^j.
WeylSection dbar_phi_section(const ChartGeometry& g, const AlphaForm& a, Trunc t = {});

}  // namespace fedq
