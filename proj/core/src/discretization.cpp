#include "blotto/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blotto/errors.hpp"

namespace blotto {
namespace {

// Ratios that are integers up to roundoff are treated as integers, so that
// e.g. 0.3 / 0.1 yields three cells rather than a sliver.
double snapped_ratio(double x, double h) {
  const double q = x / h;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) return r;
  return q;
}

double left_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// One correction can leave a last-bit residual in the left-to-right sum, and
// ulp steps on a single cell may straddle 1; cells are tried largest first.
void assign_residual(std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return v[x] > v[y]; });
  v[order[0]] += 1.0 - left_sum(v);
  for (std::size_t c : order) {
    const double base = v[c];
    double up = base, down = base;
    for (int step = 0; step < 64; ++step) {
      v[c] = up;
      if (left_sum(v) == 1.0) return;
      v[c] = down;
      if (left_sum(v) == 1.0) return;
      up = std::nextafter(up, 2.0);
      down = std::nextafter(down, 0.0);
    }
    v[c] = base;
  }
  // The final addend absorbs the remainder exactly when the prefix is >= 1/2.
  double prefix = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) prefix += v[i];
  v.back() = 1.0 - prefix;
}

}  // namespace

std::vector<double> uniform_cells(double b, double h) {
  if (!(h > 0.0)) throw ValidationError("grid step must be positive");
  if (b <= 0.0) return {1.0};
  const double q = snapped_ratio(b, h);
  const auto full = static_cast<std::size_t>(std::floor(q));
  const double frac = q - static_cast<double>(full);
  std::vector<double> cells(full, 1.0 / q);
  if (frac > 0.0) cells.push_back(frac / q);
  assign_residual(cells);
  return cells;
}

std::pair<long, std::vector<double>> anti_diagonal_cells(double budget, double p,
                                                         double b, double h) {
  if (!(h > 0.0)) throw ValidationError("grid step must be positive");
  const double s = snapped_ratio(budget, h);
  const long top = static_cast<long>(std::floor(s));
  if (p == 0.0 || b <= 0.0) return {top, {1.0}};
  if (b > budget * (1.0 + 1e-12)) {
    throw ValidationError("strict mixture support exceeds the budget");
  }
  const double r = std::max(0.0, snapped_ratio(budget - b, h));
  const long bottom = static_cast<long>(std::floor(r));
  const double span = s - r;  // b / h
  std::vector<double> cells;
  for (long m = bottom; m <= top; ++m) {
    const double len = std::min(static_cast<double>(m + 1), s) -
                       std::max(static_cast<double>(m), r);
    cells.push_back(p * std::max(len, 0.0) / span);
  }
  cells.back() += 1.0 - p;
  long offset = bottom;
  while (cells.size() > 1 && cells.back() == 0.0) cells.pop_back();
  std::size_t lead = 0;
  while (lead + 1 < cells.size() && cells[lead] == 0.0) ++lead;
  cells.erase(cells.begin(), cells.begin() + static_cast<long>(lead));
  offset += static_cast<long>(lead);
  assign_residual(cells);
  return {offset, std::move(cells)};
}

DiscreteMarginals discretize(const ReductionPlan& plan, double budget, double h) {
  if (!(h > 0.0)) throw ValidationError("grid step must be positive");
  for (int j = 0; j < 4; ++j) {
    const MarginalSpec m = marginal_of_reduced(plan, j);
    if (m.p > 0.0 && h > m.b * (1.0 + 1e-12)) {
      throw ValidationError("grid step " + std::to_string(h) +
                            " exceeds reduced length " + std::to_string(m.b) +
                            " of slot " + std::to_string(j + 1));
    }
  }
  DiscreteMarginals out;
  out.h = h;
  out.budget = budget;
  out.p_star4 = plan.i4.empty() ? 0.0 : plan.p_star4;
  for (int j = 0; j < 3; ++j) {
    const double b = plan.groups[j].empty() ? 0.0 : plan.b_star[j];
    out.b_star[j] = b;
    out.mu[j] = uniform_cells(b, h);
  }
  out.b_star[3] = plan.i4.empty() ? 0.0 : plan.b_star[3];
  auto [offset, cells] = anti_diagonal_cells(budget, out.p_star4, out.b_star[3], h);
  out.ell_min = offset;
  out.mu4 = std::move(cells);
  if (out.ell_min < 0 || out.ell_max() > out.reachable_max()) {
    throw ValidationError("sum law lies outside the reachable range of the grid");
  }
  return out;
}

}  // namespace blotto
