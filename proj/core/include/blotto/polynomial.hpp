#pragma once

#include <vector>

namespace blotto {

// Real roots of a*x^3 + b*x^2 + c*x + d in ascending order, repeated roots
// listed once. Lower-degree polynomials are handled when leading
// coefficients vanish; the zero polynomial yields no roots.
std::vector<double> real_cubic_roots(double a, double b, double c, double d);

}  // namespace blotto
