#pragma once

#include <span>
#include <vector>

#include "netred/types.hpp"

// Real polynomials stored as ascending coefficient vectors: c[0] + c[1] s + ...
namespace netred::poly {

using Coeffs = std::vector<double>;

/// Drops exactly-zero highest-order coefficients; the zero polynomial is {0}.
Coeffs trim(Coeffs c);

int degree(std::span<const double> c);
bool is_zero(std::span<const double> c);
double max_abs(std::span<const double> c);

/// Horner evaluation in complex arithmetic.
Complex eval(std::span<const double> c, Complex s);

Coeffs add(std::span<const double> a, std::span<const double> b);
Coeffs multiply(std::span<const double> a, std::span<const double> b);
Coeffs scale(std::span<const double> a, double factor);

}  // namespace netred::poly
