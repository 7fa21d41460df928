#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fedq/geometry.hpp"
#include "fedq/hpoly.hpp"

namespace fedq {

using FiberIndex = std::array<std::uint8_t, kMaxDim>;

// Form generators are bits of one mask in the canonical order
// dz^1..dz^4 (bits 0..3), dzb^1..dzb^4 (bits 4..7).
inline constexpr std::uint8_t dz_bit(int i) { return static_cast<std::uint8_t>(1u << i); }
inline constexpr std::uint8_t dzb_bit(int j) { return static_cast<std::uint8_t>(1u << (kMaxDim + j)); }

struct TermIndex {
  std::uint8_t form = 0;
  FiberIndex y{};
  FiberIndex yb{};
  int h = 0;

  int dz_degree() const;
  int dzb_degree() const;
  int form_degree() const { return dz_degree() + dzb_degree(); }
  int y_degree() const;
  int yb_degree() const;
  // 2 * (yb-degree + h-power).
  int weight() const { return 2 * (yb_degree() + h); }
  friend auto operator<=>(const TermIndex&, const TermIndex&) = default;
};

// dz^I ^ dzb^J as the wedge of sorted lists (0-based indices).
std::uint8_t form_mask(const std::vector<int>& dz, const std::vector<int>& dzb);
// Koszul sign of mask_a ^ mask_b, or 0 when they overlap.
int wedge_sign(std::uint8_t a, std::uint8_t b);

struct Trunc {
  int maxY = 64;
  int maxYbar = 64;
  int maxH = 64;
  friend bool operator==(const Trunc&, const Trunc&) = default;
};

Trunc meet(const Trunc& a, const Trunc& b);

// Finite sum of terms dz^I dzb^J y^K yb^L h^m with rational coefficients.
// Terms beyond the truncation bounds are dropped on insertion; the matching
// exactness flag is then cleared. In evaluated mode h has been replaced by
// 1/level and every term has h = 0.
class WeylSection {
 public:
  using Terms = std::map<TermIndex, RationalFn>;

  struct Exact {
    bool y = true;
    bool ybar = true;
    bool h = true;
    friend bool operator==(const Exact&, const Exact&) = default;
  };

  WeylSection() = default;
  explicit WeylSection(int n, Trunc t = {}, std::optional<Scalar> level = std::nullopt);

  static WeylSection scalar(int n, const HPoly& f, Trunc t = {});
  static WeylSection monomial(int n, const TermIndex& idx, const RationalFn& c, Trunc t = {});
  static WeylSection y(int n, int i, Trunc t = {});
  static WeylSection yb(int n, int j, Trunc t = {});

  int n() const { return n_; }
  const Terms& terms() const { return terms_; }
  const Trunc& trunc() const { return trunc_; }
  const Exact& exact() const { return exact_; }
  const std::optional<Scalar>& level() const { return level_; }
  bool evaluated() const { return level_.has_value(); }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void set_trunc(Trunc t);  // drops terms beyond t
  void set_exact(Exact e) { exact_ = e; }
  void mark_truncated_y() { exact_.y = false; }
  void set_level(std::optional<Scalar> k) { level_ = std::move(k); }

  RationalFn coeff(const TermIndex& idx) const;
  void add_term(const TermIndex& idx, const RationalFn& c);

  int max_y_degree() const;
  int min_y_degree() const;
  int max_ybar_degree() const;
  int max_h() const;
  int max_form_degree() const;
  int weight() const;

  WeylSection filter(const std::function<bool(const TermIndex&)>& keep) const;
  WeylSection with_y_degree(int d) const;
  WeylSection with_ybar_degree(int d) const;
  WeylSection with_form_type(int p, int q) const;
  WeylSection up_to_y_degree(int d) const;

  WeylSection& operator+=(const WeylSection& o);
  WeylSection& operator-=(const WeylSection& o);
  WeylSection& operator*=(const Scalar& s);
  WeylSection& operator*=(const RationalFn& f);
  friend WeylSection operator+(WeylSection a, const WeylSection& b) { return a += b; }
  friend WeylSection operator-(WeylSection a, const WeylSection& b) { return a -= b; }
  friend WeylSection operator*(WeylSection a, const Scalar& s) { return a *= s; }
  friend WeylSection operator*(WeylSection a, const RationalFn& f) { return a *= f; }
  WeylSection operator-() const;
  // Multiplies by h^p (formal) or by level^-p (evaluated).
  WeylSection times_hbar(int p) const;
  // Same terms, ignoring truncation metadata.
  friend bool operator==(const WeylSection& a, const WeylSection& b);

  std::string to_string() const;
  std::string to_latex() const;

 private:
  int n_ = 1;
  Terms terms_;
  Trunc trunc_;
  Exact exact_;
  std::optional<Scalar> level_;
};

// Fiber-commutative product: forms wedged, fiber monomials multiplied.
WeylSection commutative_mul(const WeylSection& a, const WeylSection& b);
WeylSection wick_mul(const WeylSection& a, const WeylSection& b, const ChartGeometry& g);
// a * b - (-1)^{|a||b|} b * a.
WeylSection graded_bracket(const WeylSection& a, const WeylSection& b, const ChartGeometry& g);
// (1/h)[a, b], computed without dividing by h (multiplying by the level when evaluated).
WeylSection hbar_bracket(const WeylSection& a, const WeylSection& b, const ChartGeometry& g);

WeylSection d_y(const WeylSection& a, int i);
WeylSection d_yb(const WeylSection& a, int j);
// form generator ^ a.
WeylSection wedge_left(std::uint8_t bit, const WeylSection& a);
// Interior product with the vector dual to a single generator.
WeylSection interior(std::uint8_t bit, const WeylSection& a);

WeylSection delta10(const WeylSection& a);
WeylSection delta01(const WeylSection& a);
WeylSection delta(const WeylSection& a);
WeylSection delta10_inv(const WeylSection& a);
WeylSection delta01_inv(const WeylSection& a);
// Inverse of the full delta: (1/(total degree)) (y^k i_{dz^k} + yb^j i_{dzb^j}).
WeylSection delta_inv(const WeylSection& a);

// Terms with no dz and no y.
WeylSection pi_0star(const WeylSection& a);
// Terms with no forms and no fiber variables.
HPoly symbol(const WeylSection& a);
// Purely fiber-free 0-form part as a section.
WeylSection symbol_section(const WeylSection& a);

WeylSection nabla10(const WeylSection& a, const ChartGeometry& g);
WeylSection nabla01(const WeylSection& a, const ChartGeometry& g);
WeylSection nabla(const WeylSection& a, const ChartGeometry& g);
WeylSection nabla_tilde10(const WeylSection& a, const ChartGeometry& g);

WeylSection evaluate_hbar(const WeylSection& a, const Scalar& k);
WeylSection filtration_cut(const WeylSection& a, int max_weight);

// R = R_{i jbar k lbar} dz^i ^ dzb^j y^k yb^l.
WeylSection curvature_section(const ChartGeometry& g, Trunc t = {});
// w = w_{i jbar} dz^i ^ dzb^j.
WeylSection omega_form(const ChartGeometry& g, Trunc t = {});
// alpha as a scalar (1,1)-form with h powers.
WeylSection alpha_section(const ChartGeometry& g, const AlphaForm& a, Trunc t = {});

}  // namespace fedq
