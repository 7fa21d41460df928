#pragma once

#include <optional>

#include "fedq/geometry.hpp"

namespace fedq {

// Rational antiderivative of f in variable v, or nullopt when every antiderivative
// has a logarithmic part. Denominator factors are assumed squarefree in v.
std::optional<RationalFn> antiderivative(const RationalFn& f, int v);

// F with d_i F = dz[i] and dbar_j F = dzb[j], unique up to a constant (chosen so that
// F has no constant term when F is a polynomial). Throws std::invalid_argument when the
// form is not closed; nullopt when F is outside the rational class.
std::optional<RationalFn> potential_of_closed_form(int n, const Vector& dz, const Vector& dzb);

}  // namespace fedq
