#include "blotto/mixability.hpp"

#include <algorithm>
#include <cmath>

namespace blotto {

double mixability_margin(std::span<const MarginalSpec> specs) {
  double half_mass = 0.0, max_b = 0.0;
  for (const auto& s : specs) {
    half_mass += s.p * s.b / 2.0;
    if (s.p > 0.0) max_b = std::max(max_b, s.b);
  }
  return half_mass - max_b;
}

bool is_jointly_mixable(std::span<const MarginalSpec> specs) {
  double half_mass = 0.0, max_b = 0.0;
  for (const auto& s : specs) {
    half_mass += s.p * s.b / 2.0;
    if (s.p > 0.0) max_b = std::max(max_b, s.b);
  }
  return max_b <= half_mass * (1.0 + kMixabilitySlack);
}

namespace {

double largest_clipped_value(const EquilibriumParams& params, const GameDatum& d) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    m = std::max(m, std::min(params.gamma * d.v_b[i], d.v_a[i]));
  }
  return m;
}

}  // namespace

double blotto_condition_margin(const EquilibriumParams& params, const GameDatum& d) {
  return params.lambda * d.t_b - largest_clipped_value(params, d);
}

bool check_blotto_condition(const EquilibriumParams& params, const GameDatum& d) {
  return largest_clipped_value(params, d) <=
         params.lambda * d.t_b * (1.0 + kMixabilitySlack);
}

bool symmetric_condition(const GameDatum& d) {
  const double m = *std::max_element(d.v_b.begin(), d.v_b.end());
  const double bound = d.t_b / (2.0 * d.t_a);
  return m <= bound * (1.0 + kMixabilitySlack);
}

BalancedCondition sufficient_condition_balanced(const GameDatum& d) {
  BalancedCondition out;
  out.r = std::sqrt(std::max(chi_squared(d.v_a, d.v_b), chi_squared(d.v_b, d.v_a)));
  if (!(out.r < 1.0)) return out;
  const double m = *std::max_element(d.v_b.begin(), d.v_b.end());
  out.holds = m <= (d.t_b / (2.0 * d.t_a)) * (1.0 - out.r);
  return out;
}

}  // namespace blotto
