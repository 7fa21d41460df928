#pragma once

#include <cstdint>
#include <random>

#include "fedq/weyl.hpp"

namespace fedq {

struct RandomSpec {
  int terms = 4;
  int max_y = 2;
  int max_yb = 2;
  int max_h = 0;
  // Form degrees allowed for each term (bit d set = degree d allowed).
  unsigned form_degrees = 1u;
  bool holomorphic_forms_only = false;
  int max_coeff_degree = 1;
  // Include 1/(1 + s z1 zb1) factors in coefficients (s = 0 disables).
  int denominator_sign = 0;
};

// Seeded generator of small bounded-degree sections for property checks.
class SectionGenerator {
 public:
  explicit SectionGenerator(std::uint64_t seed) : rng_(seed) {}

  RationalFn coefficient(int n, const RandomSpec& s);
  WeylSection section(int n, const RandomSpec& s, Trunc t = {});
  int uniform(int lo, int hi);

 private:
  std::mt19937_64 rng_;
};

}  // namespace fedq
