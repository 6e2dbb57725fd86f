#include "blotto/lotto_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blotto/errors.hpp"
#include "blotto/polynomial.hpp"

namespace blotto {
namespace {

constexpr double kIntervalTolerance = 1e-12;
constexpr double kMergeTolerance = 1e-10;

std::vector<std::size_t> ratio_order(const GameDatum& d) {
  std::vector<std::size_t> order(d.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return d.v_a[x] / d.v_b[x] < d.v_a[y] / d.v_b[y];
  });
  return order;
}

}  // namespace

double MarginalSpec::cdf(double x) const {
  if (x < 0.0) return 0.0;
  if (b <= 0.0) return 1.0;
  return (1.0 - p) + p * std::min(x / b, 1.0);
}

double f_gamma(double gamma, const GameDatum& d) {
  double first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double va = d.v_a[i], vb = d.v_b[i];
    const double m = std::min(gamma * gamma * vb * vb / va, va);
    first += m;
    second += (va / vb) * m;
  }
  return gamma * d.t_a * first - d.t_b * second;
}

GammaBracket gamma_bracket(const GameDatum& d) {
  const double ratio = d.t_b / d.t_a;
  return {ratio / (1.0 + chi_squared(d.v_b, d.v_a)),
          ratio * (1.0 + chi_squared(d.v_a, d.v_b))};
}

std::vector<double> sorted_ratios(const GameDatum& d) {
  std::vector<double> r;
  for (std::size_t i : ratio_order(d)) r.push_back(d.v_a[i] / d.v_b[i]);
  return r;
}

double lambda_from_budget_a(double gamma, const GameDatum& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double va = d.v_a[i], vb = d.v_b[i];
    s += std::min(gamma * vb, va * va / (gamma * vb));
  }
  return s / (2.0 * d.t_a);
}

double lambda_from_budget_b(double gamma, const GameDatum& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double va = d.v_a[i], vb = d.v_b[i];
    s += std::min(gamma * gamma * vb * vb / va, va);
  }
  return s / (2.0 * d.t_b);
}

std::vector<EquilibriumParams> solve_gamma(const GameDatum& d) {
  const auto order = ratio_order(d);
  std::vector<double> ratio(d.n);
  for (std::size_t k = 0; k < d.n; ++k) ratio[k] = d.v_a[order[k]] / d.v_b[order[k]];

  // Suffix sums over battlefields in N (ratio >= gamma) and prefix sums over
  // the others; on interval k the first k sorted battlefields are outside N.
  std::vector<double> suf_b2a(d.n + 1, 0.0), suf_b(d.n + 1, 0.0);
  for (std::size_t k = d.n; k-- > 0;) {
    const std::size_t i = order[k];
    suf_b2a[k] = suf_b2a[k + 1] + d.v_b[i] * d.v_b[i] / d.v_a[i];
    suf_b[k] = suf_b[k + 1] + d.v_b[i];
  }
  double pre_a = 0.0, pre_a2b = 0.0;

  std::vector<double> roots;
  for (std::size_t k = 0; k <= d.n; ++k) {
    if (k > 0) {
      const std::size_t i = order[k - 1];
      pre_a += d.v_a[i];
      pre_a2b += d.v_a[i] * d.v_a[i] / d.v_b[i];
    }
    const double lo = k == 0 ? 0.0 : ratio[k - 1];
    const double hi = k == d.n ? std::numeric_limits<double>::infinity() : ratio[k];
    const double a3 = d.t_a * suf_b2a[k];
    const double a2 = -d.t_b * suf_b[k];
    const double a1 = d.t_a * pre_a;
    const double a0 = -d.t_b * pre_a2b;
    for (double r : real_cubic_roots(a3, a2, a1, a0)) {
      if (!(r > 0.0) || !std::isfinite(r)) continue;
      if (r < lo * (1.0 - kIntervalTolerance)) continue;
      if (r > hi * (1.0 + kIntervalTolerance)) continue;
      roots.push_back(r);
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && r - merged.back() <= kMergeTolerance * r) continue;
    merged.push_back(r);
  }
  if (merged.empty()) throw NoRootError("no positive root of the exchange-rate equation");

  std::vector<EquilibriumParams> out;
  for (double g : merged) {
    EquilibriumParams e;
    e.gamma = g;
    e.lambda = lambda_from_budget_a(g, d);
    for (std::size_t i = 0; i < d.n; ++i) {
      if (d.v_a[i] / d.v_b[i] >= g) e.n_gamma.push_back(i);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<MarginalSpec> lotto_marginals(const EquilibriumParams& params,
                                          const GameDatum& d, Player player) {
  std::vector<MarginalSpec> out(d.n);
  for (std::size_t i = 0; i < d.n; ++i) {
    const double gb = params.gamma * d.v_b[i];
    const double va = d.v_a[i];
    out[i].b = std::min(gb, va) / params.lambda;
    out[i].p = player == Player::A ? std::min(va / gb, 1.0) : std::min(gb / va, 1.0);
  }
  return out;
}

}  // namespace blotto
