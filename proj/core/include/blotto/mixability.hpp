#pragma once

#include <span>

#include "blotto/game_model.hpp"
#include "blotto/lotto_solver.hpp"

namespace blotto {

inline constexpr double kMixabilitySlack = 1e-12;

// Half the total expected mass minus the largest support length. The specs
// are jointly mixable iff this is nonnegative (up to kMixabilitySlack).
double mixability_margin(std::span<const MarginalSpec> specs);

bool is_jointly_mixable(std::span<const MarginalSpec> specs);

// max_i min(gamma v_B, v_A) <= lambda T_B, the condition for both players.
bool check_blotto_condition(const EquilibriumParams& params,
                            const GameDatum& datum);
double blotto_condition_margin(const EquilibriumParams& params,
                               const GameDatum& datum);

// Symmetric-value shortcut: max_i v_i <= T_B / (2 T_A).
bool symmetric_condition(const GameDatum& datum);

struct BalancedCondition {
  bool holds = false;
  double r = 0.0;
};

// Sufficient condition via r = sqrt(max chi-squared divergence).
BalancedCondition sufficient_condition_balanced(const GameDatum& datum);

}  // namespace blotto
