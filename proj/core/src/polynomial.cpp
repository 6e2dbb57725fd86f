#include "blotto/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace blotto {
namespace {

std::vector<double> quadratic_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  if (c == 0.0) {
    std::vector<double> r{0.0, -b / a};
    std::sort(r.begin(), r.end());
    if (r[0] == r[1]) r.pop_back();
    return r;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    // Treat a tiny negative discriminant as a double root.
    if (disc > -1e-14 * b * b) return {-b / (2.0 * a)};
    return {};
  }
  if (disc == 0.0) return {-b / (2.0 * a)};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a, c / q};
  std::sort(r.begin(), r.end());
  return r;
}

double eval(double a, double b, double c, double d, double x) {
  return ((a * x + b) * x + c) * x + d;
}

// A few Newton steps, kept only while they reduce the residual.
double polish(double a, double b, double c, double d, double x) {
  double fx = eval(a, b, c, d, x);
  for (int it = 0; it < 4 && fx != 0.0; ++it) {
    const double dfx = (3.0 * a * x + 2.0 * b) * x + c;
    if (dfx == 0.0) break;
    const double next = x - fx / dfx;
    const double fn = eval(a, b, c, d, next);
    if (!(std::abs(fn) < std::abs(fx))) break;
    x = next;
    fx = fn;
  }
  return x;
}

}  // namespace

std::vector<double> real_cubic_roots(double a, double b, double c, double d) {
  if (a == 0.0) return quadratic_roots(b, c, d);
  if (d == 0.0) {
    auto r = quadratic_roots(a, b, c);
    r.push_back(0.0);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }
  // Depressed cubic t^3 + p t + q with x = t - b / (3a).
  const double bn = b / a, cn = c / a, dn = d / a;
  const double shift = bn / 3.0;
  const double p = cn - bn * bn / 3.0;
  const double q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  const double scale = 4.0 * std::abs(p * p * p) + 27.0 * q * q;

  std::vector<double> t;
  if (std::abs(disc) <= 1e-14 * scale) {
    if (p == 0.0) {
      t = {0.0};
    } else {
      t = {3.0 * q / p, -1.5 * q / p};
    }
  } else if (disc > 0.0) {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      t.push_back(m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
    }
  } else {
    const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    const double u = std::cbrt(-q / 2.0 - std::copysign(s, q));
    t = {u == 0.0 ? 0.0 : u - p / (3.0 * u)};
  }
  std::vector<double> roots;
  for (double ti : t) roots.push_back(polish(a, b, c, d, ti - shift));
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace blotto
