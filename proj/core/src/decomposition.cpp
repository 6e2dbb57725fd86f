#include "blotto/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blotto/errors.hpp"

namespace blotto {
namespace {

constexpr double kSnap = 1e-14;
constexpr double kCubeTolerance = 1e-12;

bool fractional(double v) { return v > 0.0 && v < 1.0; }

double snap(double v) {
  if (v <= kSnap) return 0.0;
  if (v >= 1.0 - kSnap) return 1.0;
  return v;
}

void check_point(const HyperplaneSlice& slice, std::span<const double> x) {
  if (x.size() != slice.lengths.size()) {
    throw DimensionMismatchError("point and slice have different dimensions");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= -kCubeTolerance && x[i] <= 1.0 + kCubeTolerance)) {
      throw ValidationError("coordinate " + std::to_string(i) + " lies outside [0, 1]");
    }
  }
  if (!slice.contains(x)) throw ValidationError("point does not lie on the hyperplane");
}

}  // namespace

double HyperplaneSlice::evaluate(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += lengths[i] * x[i];
  return s;
}

bool HyperplaneSlice::contains(std::span<const double> x, double rel_tol) const {
  return std::abs(evaluate(x) - target) <= rel_tol * std::max(std::abs(target), 1e-300);
}

std::vector<double> ExtremePoint::dense() const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = (*this)[i];
  return out;
}

ExtremePoint ExtremePoint::from_dense(std::span<const double> x) {
  ExtremePoint e;
  e.ones.assign(x.size(), false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = snap(x[i]);
    if (v == 1.0) {
      e.ones[i] = true;
    } else if (v > 0.0) {
      if (e.frac_index != npos) throw ValidationError("point has two fractional coordinates");
      e.frac_index = i;
      e.frac_value = v;
    }
  }
  return e;
}

std::size_t fractional_count(std::span<const double> x) {
  return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), fractional));
}

namespace {

// One extremize step restricted to the fractional support `supp` (ascending
// indices); fixed_mass is the hyperplane contribution of all other
// coordinates, which the step leaves unchanged.
struct SupportStep {
  std::vector<double> y;
  std::vector<double> y_bar;
  double theta = 1.0;
};

SupportStep step_on_support(const HyperplaneSlice& slice, std::span<const double> x,
                            const std::vector<std::size_t>& supp, double fixed_mass) {
  const std::size_t m = supp.size();
  SupportStep out;
  // Vertex-like point: support coordinates filled to one in index order until
  // the budget is met, the last one fractional.
  out.y.assign(m, 0.0);
  double partial = fixed_mass;
  for (std::size_t k = 0; k < m; ++k) {
    const double l = slice.lengths[supp[k]];
    if (partial + l < slice.target) {
      out.y[k] = 1.0;
      partial += l;
    } else {
      out.y[k] = std::clamp((slice.target - partial) / l, 0.0, 1.0);
      break;
    }
  }

  // Walk from y through x until a support coordinate hits 0 or 1.
  double delta = std::numeric_limits<double>::infinity();
  std::size_t hit = m;
  for (std::size_t k = 0; k < m; ++k) {
    const double xi = x[supp[k]];
    if (xi == out.y[k]) continue;
    const double dk = xi > out.y[k] ? (1.0 - xi) / (xi - out.y[k]) : xi / (out.y[k] - xi);
    if (dk < delta) {
      delta = dk;
      hit = k;
    }
  }
  out.y_bar.resize(m);
  for (std::size_t k = 0; k < m; ++k) out.y_bar[k] = x[supp[k]];
  if (hit == m) return out;
  for (std::size_t k = 0; k < m; ++k) {
    const double xi = x[supp[k]];
    out.y_bar[k] = std::clamp(snap(xi + delta * (xi - out.y[k])), 0.0, 1.0);
  }
  out.y_bar[hit] = x[supp[hit]] > out.y[hit] ? 1.0 : 0.0;
  // Large delta amplifies roundoff; move the longest fractional coordinate
  // back onto the hyperplane.
  std::size_t fix = m;
  double value = fixed_mass;
  for (std::size_t k = 0; k < m; ++k) {
    value += slice.lengths[supp[k]] * out.y_bar[k];
    if (fractional(out.y_bar[k]) &&
        (fix == m || slice.lengths[supp[k]] > slice.lengths[supp[fix]])) {
      fix = k;
    }
  }
  if (fix != m) {
    const double v = out.y_bar[fix] + (slice.target - value) / slice.lengths[supp[fix]];
    if (fractional(v)) out.y_bar[fix] = v;
  }
  out.theta = delta / (1.0 + delta);
  return out;
}

ExtremePoint point_on_support(const std::vector<bool>& base_ones,
                              const std::vector<std::size_t>& supp,
                              const std::vector<double>& values) {
  ExtremePoint e;
  e.ones = base_ones;
  for (std::size_t k = 0; k < supp.size(); ++k) {
    const double v = snap(values[k]);
    if (v == 1.0) {
      e.ones[supp[k]] = true;
    } else if (v > 0.0) {
      if (e.frac_index != ExtremePoint::npos) {
        throw ValidationError("point has two fractional coordinates");
      }
      e.frac_index = supp[k];
      e.frac_value = v;
    }
  }
  return e;
}

}  // namespace

ExtremizeResult extremize(const HyperplaneSlice& slice, std::span<const double> x) {
  check_point(slice, x);
  ExtremizeResult out;
  out.y.assign(x.begin(), x.end());
  out.y_bar = out.y;
  if (fractional_count(x) <= 1) return out;
  std::vector<std::size_t> supp;
  double fixed_mass = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (fractional(x[i])) {
      supp.push_back(i);
    } else {
      fixed_mass += slice.lengths[i] * x[i];
    }
  }
  const SupportStep step = step_on_support(slice, x, supp, fixed_mass);
  for (std::size_t k = 0; k < supp.size(); ++k) {
    out.y[supp[k]] = step.y[k];
    out.y_bar[supp[k]] = step.y_bar[k];
  }
  out.theta = step.theta;
  return out;
}

MixtureDecomposition decompose(const HyperplaneSlice& slice, std::span<const double> p) {
  check_point(slice, p);
  MixtureDecomposition out;
  const std::size_t n = p.size();
  std::vector<double> residual(p.begin(), p.end());
  std::vector<std::size_t> supp;
  std::vector<bool> base_ones(n, false);
  double fixed_mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    residual[i] = std::clamp(snap(residual[i]), 0.0, 1.0);
    if (fractional(residual[i])) {
      supp.push_back(i);
    } else {
      base_ones[i] = residual[i] == 1.0;
      fixed_mass += slice.lengths[i] * residual[i];
    }
  }
  // Work stays on the shrinking fractional support.
  double remaining = 1.0;
  while (supp.size() >= 2) {
    const SupportStep step = step_on_support(slice, residual, supp, fixed_mass);
    const double q = remaining * step.theta;
    if (q > 0.0) {
      out.weights.push_back(q);
      out.components.push_back(point_on_support(base_ones, supp, step.y));
    }
    remaining *= 1.0 - step.theta;
    if (step.theta == 1.0) break;
    std::vector<std::size_t> next;
    next.reserve(supp.size());
    for (std::size_t k = 0; k < supp.size(); ++k) {
      const std::size_t i = supp[k];
      residual[i] = step.y_bar[k];
      if (fractional(residual[i])) {
        next.push_back(i);
      } else {
        base_ones[i] = residual[i] == 1.0;
        fixed_mass += slice.lengths[i] * residual[i];
      }
    }
    supp = std::move(next);
  }
  if (remaining > 0.0) {
    std::vector<double> values;
    for (std::size_t i : supp) values.push_back(residual[i]);
    out.weights.push_back(remaining);
    out.components.push_back(point_on_support(base_ones, supp, values));
  }
  return out;
}

}  // namespace blotto
