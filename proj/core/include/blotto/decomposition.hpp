#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace blotto {

// {x in [0,1]^n : <lengths, x> = target}.
struct HyperplaneSlice {
  std::vector<double> lengths;
  double target = 0.0;

  double evaluate(std::span<const double> x) const;
  bool contains(std::span<const double> x, double rel_tol = 1e-10) const;
};

struct ExtremizeResult {
  std::vector<double> y;
  std::vector<double> y_bar;
  double theta = 1.0;  // x = theta * y + (1 - theta) * y_bar
};

// Splits x along a segment in the slice whose ends have strictly smaller
// fractional support; y is an extreme point.
ExtremizeResult extremize(const HyperplaneSlice& slice, std::span<const double> x);

// Point of the cube with at most one coordinate strictly inside (0, 1),
// stored compactly so that n components of length n stay cheap.
struct ExtremePoint {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  std::vector<bool> ones;
  std::size_t frac_index = npos;
  double frac_value = 0.0;

  std::size_t size() const { return ones.size(); }
  double operator[](std::size_t i) const {
    return i == frac_index ? frac_value : (ones[i] ? 1.0 : 0.0);
  }
  std::vector<double> dense() const;
  static ExtremePoint from_dense(std::span<const double> x);
};

struct MixtureDecomposition {
  std::vector<double> weights;
  std::vector<ExtremePoint> components;
};

// Writes p as a convex combination of at most n extreme points of the slice.
MixtureDecomposition decompose(const HyperplaneSlice& slice, std::span<const double> p);

// Number of coordinates strictly inside (0, 1).
std::size_t fractional_count(std::span<const double> x);

}  // namespace blotto
