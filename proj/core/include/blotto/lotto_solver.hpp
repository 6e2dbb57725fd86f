#pragma once

#include <cstddef>
#include <vector>

#include "blotto/game_model.hpp"

namespace blotto {

struct EquilibriumParams {
  double gamma = 0.0;
  double lambda = 0.0;
  // Battlefields with v_A/v_B >= gamma.
  std::vector<std::size_t> n_gamma;
};

// (1 - p) * delta_0 + p * Unif[0, b].
struct MarginalSpec {
  double p = 1.0;
  double b = 1.0;

  double mean() const { return p * b / 2.0; }
  double cdf(double x) const;
  bool degenerate() const { return p == 0.0; }
};

struct GammaBracket {
  double lo = 0.0;
  double hi = 0.0;
};

double f_gamma(double gamma, const GameDatum& datum);

// Interval of admissible exchange rates implied by the chi-squared bounds.
GammaBracket gamma_bracket(const GameDatum& datum);

// v_A/v_B sorted ascending (stable on ties); the cubic pieces of f live
// between consecutive entries.
std::vector<double> sorted_ratios(const GameDatum& datum);

// lambda from player A's expected budget, resp. player B's.
double lambda_from_budget_a(double gamma, const GameDatum& datum);
double lambda_from_budget_b(double gamma, const GameDatum& datum);

// All equilibrium pairs, ascending in gamma. Throws NoRootError if none.
std::vector<EquilibriumParams> solve_gamma(const GameDatum& datum);

std::vector<MarginalSpec> lotto_marginals(const EquilibriumParams& params,
                                          const GameDatum& datum, Player player);

}  // namespace blotto
