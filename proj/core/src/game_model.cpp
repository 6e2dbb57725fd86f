#include "blotto/game_model.hpp"

#include <cmath>
#include <string>

#include "blotto/errors.hpp"

namespace blotto {
namespace {

constexpr double kSumTolerance = 1e-12;

std::vector<double> normalized(std::span<const double> raw, char label) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(raw[i] > 0.0) || !std::isfinite(raw[i])) {
      throw NonPositiveValueError("value " + std::to_string(i) + " of player " +
                                  label + " must be positive and finite");
    }
  }
  double sum = 0.0;
  for (double v : raw) sum += v;
  std::vector<double> out(raw.begin(), raw.end());
  // Already normalized vectors are kept as is so that the map is idempotent.
  if (std::abs(sum - 1.0) <= kSumTolerance) return out;
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace

bool same_game(const GameDatum& x, const GameDatum& y) {
  return x.n == y.n && x.v_a == y.v_a && x.v_b == y.v_b && x.t_a == y.t_a &&
         x.t_b == y.t_b;
}

GameDatum validate_game(std::span<const double> raw_values_a,
                        std::span<const double> raw_values_b, double budget_a,
                        double budget_b) {
  if (raw_values_a.size() != raw_values_b.size()) {
    throw DimensionMismatchError("value vectors have different lengths (" +
                                 std::to_string(raw_values_a.size()) + " vs " +
                                 std::to_string(raw_values_b.size()) + ")");
  }
  if (raw_values_a.size() < 2) {
    throw DimensionMismatchError("a game needs at least two battlefields");
  }
  if (!(budget_a > 0.0) || !std::isfinite(budget_a)) {
    throw NonPositiveBudgetError("budget of player A must be positive and finite");
  }
  if (!(budget_b > 0.0) || !std::isfinite(budget_b)) {
    throw NonPositiveBudgetError("budget of player B must be positive and finite");
  }
  GameDatum d;
  d.n = raw_values_a.size();
  d.v_a = normalized(raw_values_a, 'A');
  d.v_b = normalized(raw_values_b, 'B');
  d.t_a = budget_a;
  d.t_b = budget_b;
  if (budget_a < budget_b) {
    std::swap(d.v_a, d.v_b);
    std::swap(d.t_a, d.t_b);
    d.swapped = true;
  }
  return d;
}

Player canonical_player(const GameDatum& datum, Player input_label) {
  return datum.swapped ? opponent(input_label) : input_label;
}

double chi_squared(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw DimensionMismatchError("chi_squared: vectors have different lengths");
  }
  // sum (u - v)^2 / v equals sum u^2 / v - 1 for probability vectors and is
  // nonnegative in floating point as well.
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(v[i] > 0.0)) throw NonPositiveValueError("chi_squared: v must be positive");
    const double d = u[i] - v[i];
    s += d * d / v[i];
  }
  return s;
}

}  // namespace blotto
