#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedq/hpoly.hpp"
#include "fedq/rational_fn.hpp"

namespace fedq {

using Vector = std::vector<RationalFn>;
using Matrix = std::vector<Vector>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One holomorphic chart of a Kahler manifold. Index conventions:
//   omega[i][j]            = w_{i jbar}
//   omega_inv[i][j]        = w^{i jbar}, with sum_i w^{i jbar} w_{i kbar} = delta_{jk}
//   christoffel[k][i][j]   = Gamma^k_{ij} = w^{k lbar} d_i w_{j lbar}
//   christoffel_bar[k][i][j] = conjugate block, w^{l kbar} dbar_i w_{l jbar}
//   curvature[i][j][k][l]  = R_{i jbar k lbar} = -w_{p lbar} dbar_j Gamma^p_{ik}
//   ricci[i][j]            = sum_{k,l} R_{i jbar k lbar} w^{k lbar}
// With these, nabla^2 = (1/h)[R, -] for R = R_{i jbar k lbar} dz^i dzb^j y^k yb^l.
struct ChartGeometry {
  std::string name;
  int n = 0;
  Matrix omega;
  Matrix omega_inv;
  std::vector<Matrix> christoffel;
  std::vector<Matrix> christoffel_bar;
  std::vector<std::vector<Matrix>> curvature;
  Matrix ricci;
  Vector d_rho;   // d rho / dz^i
  Vector dbar_rho;  // d rho / dzb^j
  Vector d_rho1;  // d rho1 / dz^i where dbar_j d_i rho1 = ricci_{i jbar}
};

using GeometryPtr = std::shared_ptr<const ChartGeometry>;

struct CustomMetric {
  std::string name = "custom";
  Matrix omega;
  Vector d_rho;
  std::optional<Vector> dbar_rho;  // defaults to the conjugate of d_rho (real potential)
};

GeometryPtr flat_geometry(int n);
GeometryPtr cp1_geometry();
GeometryPtr disc_geometry();
GeometryPtr custom_geometry(const CustomMetric& m);
// "flat:n", "flat" (= flat:1), "cp1", "disc".
GeometryPtr geometry_from_name(const std::string& name);

// Each failing invariant is returned as a message naming the index tuple.
std::vector<std::string> geometry_invariant_failures(const ChartGeometry& g);

Matrix invert(const Matrix& m);

enum class AlphaKind { kZero, kHbarOmega, kBerezinToeplitz, kCustom };

// Closed (1,1)-form alpha = sum_h h^h alpha_h[i][j] dz^i ^ dzb^j together with
// first derivatives of a potential phi (d_i dbar_j phi = alpha_{i jbar}).
struct AlphaForm {
  AlphaKind kind = AlphaKind::kZero;
  std::string name = "zero";
  std::map<int, Matrix> coeff;
  std::map<int, Vector> d_phi;
  std::map<int, Vector> dbar_phi;

  int max_hbar() const { return coeff.empty() ? 0 : coeff.rbegin()->first; }
  HPoly component(int i, int j) const;
  HPoly d_phi_component(int i) const;
  HPoly dbar_phi_component(int j) const;
};

AlphaForm alpha_form(const ChartGeometry& g, AlphaKind kind);
AlphaForm alpha_from_name(const ChartGeometry& g, const std::string& name);
AlphaForm custom_alpha(const ChartGeometry& g, std::map<int, Matrix> coeff,
                       std::map<int, Vector> d_phi, std::map<int, Vector> dbar_phi);
std::vector<std::string> alpha_invariant_failures(const ChartGeometry& g, const AlphaForm& a);
std::string alpha_kind_name(AlphaKind k);

// Poisson bracket of the real symplectic form sqrt(-1) w_{i jbar} dz^i ^ dzb^j:
// {f,g} = -sqrt(-1) w^{i jbar} (d_i f dbar_j g - dbar_j f d_i g).
RationalFn poisson_bracket(const ChartGeometry& g, const RationalFn& f, const RationalFn& h);

}  // namespace fedq
