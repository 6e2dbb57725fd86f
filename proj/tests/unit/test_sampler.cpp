#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "blotto/errors.hpp"
#include "blotto/lotto_solver.hpp"
#include "blotto/sampler.hpp"

using namespace blotto;

namespace {

GameDatum symmetric_game(double t_a, double t_b) {
  const std::vector<double> v(4, 0.25);
  return validate_game(v, v, t_a, t_b);
}

GameDatum spread_two_game() {
  const std::vector<double> va{0.2, 0.3, 0.2, 0.3}, vb{0.4, 0.15, 0.3, 0.15};
  return validate_game(va, vb, 1.0, 0.9);
}

double dkw(std::size_t n) { return std::sqrt(std::log(2.0 / 0.01) / (2.0 * n)); }

// Sup distance between the empirical CDF of xs and a MarginalSpec.
double ks_distance(std::vector<double> xs, const MarginalSpec& m) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = m.cdf(xs[i]);
    const double left = m.p == 0.0 || xs[i] > 0.0 ? f : 0.0;  // CDF just below xs[i]
    d = std::max({d, std::abs(static_cast<double>(i) / n - left),
                  std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return d;
}

ScalingState random_state(std::mt19937_64& gen, std::size_t d1, std::size_t d2,
                          std::size_t d3) {
  std::array<std::vector<double>, 4> targets{std::vector<double>(d1, 1.0 / d1),
                                             std::vector<double>(d2, 1.0 / d2),
                                             std::vector<double>(d3, 1.0 / d3),
                                             std::vector<double>(d1 + d2 + d3, 0.0)};
  targets[3][0] = 1.0;
  ScalingState s = initial_state(targets);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : s.log_xi) {
    for (double& l : v) l = g(gen);
    const double top = *std::max_element(v.begin(), v.end());
    for (double& l : v) l -= top;
  }
  return s;
}

}  // namespace

TEST(SelectParameters, SymmetricExample) {
  const GameDatum d = symmetric_game(2.0, 1.0);
  const auto params = solve_gamma(d).front();
  const auto g = select_parameters(0.05, d, params, ParameterMode::kSymmetric);
  EXPECT_NEAR(g.h, 0.0125, 1e-15);
  EXPECT_NEAR(g.eta, 0.0125, 1e-15);
  EXPECT_EQ(default_mode(d), ParameterMode::kSymmetric);
  // 8 (lambda / gamma) h = epsilon / 2 on symmetric games.
  const GameDatum u = symmetric_game(1.0, 1.0);
  const auto pu = solve_gamma(u).front();
  const auto gu = select_parameters(0.05, u, pu, ParameterMode::kSymmetric);
  EXPECT_NEAR(8.0 * pu.lambda / pu.gamma * gu.h, 0.025, 1e-12);
  EXPECT_NEAR(gu.eta, 0.0125, 1e-15);
}

TEST(SelectParameters, AsymmetricExample) {
  const GameDatum d = spread_two_game();
  EXPECT_DOUBLE_EQ(value_spread(d), 2.0);
  EXPECT_EQ(default_mode(d), ParameterMode::kAsymmetric);
  const auto params = solve_gamma(d).front();
  const auto g = select_parameters(0.12, d, params, ParameterMode::kAsymmetric);
  EXPECT_NEAR(g.eta, 0.0025, 1e-15);
  EXPECT_NEAR(g.h, params.gamma / params.lambda * 0.00125, 1e-15);
  EXPECT_THROW(select_parameters(0.0, d, params, ParameterMode::kAsymmetric), ValidationError);
}

TEST(TupleSampler, ExactFrequenciesOnThreeCube) {
  std::mt19937_64 gen(31);
  const ScalingState s = random_state(gen, 3, 3, 3);
  std::vector<double> x[4];
  for (int a = 0; a < 4; ++a) {
    for (double l : s.log_xi[a]) x[a].push_back(std::exp(l));
  }
  std::vector<double> gamma(81, 0.0);
  double z = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int e = 0; e < 3; ++e) {
          const double g = x[0][i] * x[1][j] * x[2][k] * x[3][i + j + k + e];
          gamma[((i * 3 + j) * 3 + k) * 3 + e] = g;
          z += g;
        }
  for (double& g : gamma) g /= z;

  const TupleSampler sampler(s);
  CounterRng rng(5, 0);
  const std::size_t n = 1'000'000;
  std::vector<double> count(81, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto d = sampler.draw(rng);
    ++count[((d.i * 3 + d.j) * 3 + d.k) * 3 + d.e];
  }
  for (std::size_t c = 0; c < 81; ++c) {
    const double se = std::sqrt(gamma[c] * (1.0 - gamma[c]) / n);
    EXPECT_NEAR(count[c] / n, gamma[c], 4.0 * se + 1e-12) << "cell " << c;
  }
  // Marginal of i against the tensor marginal.
  const auto m = tensor_marginals(s);
  double mass = 0.0;
  for (double v : m[0]) mass += v;
  double cum_emp = 0.0, cum_true = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < 27; ++c) cum_emp += count[i * 27 + c] / n;
    cum_true += m[0][i] / mass;
    EXPECT_LE(std::abs(cum_emp - cum_true), dkw(n));
  }
}

TEST(TupleSampler, SingleCellDrawsOnlySlack) {
  std::array<std::vector<double>, 4> targets{std::vector<double>{1.0}, std::vector<double>{1.0},
                                             std::vector<double>{1.0},
                                             std::vector<double>{0.2, 0.5, 0.3}};
  ScalingState s = initial_state(targets);
  s.log_xi[3] = {std::log(0.4), 0.0, std::log(0.6)};
  CounterRng rng(1, 0);
  std::array<double, 3> count{};
  const std::size_t n = 200'000;
  for (std::size_t t = 0; t < n; ++t) {
    const auto d = draw_discrete(s, rng);
    ASSERT_EQ(d.i + d.j + d.k, 0);
    ++count[d.e];
  }
  const std::array<double, 3> expect{0.4 / 2.0, 1.0 / 2.0, 0.6 / 2.0};
  for (int e = 0; e < 3; ++e) {
    EXPECT_NEAR(count[e] / n, expect[e], 4.0 * std::sqrt(expect[e] / n));
  }
}

TEST(Smooth, SumsToBudgetAndStaysInSupport) {
  const std::vector<MarginalSpec> specs{{1, 0.6}, {1, 0.4}, {1, 0.5}, {0.5, 0.9}};
  const auto plan = reduce_to_four(specs);
  const auto marg = discretize(plan, 1.0, 0.05);
  CounterRng rng(2, 0);
  std::mt19937_64 gen(3);
  for (int t = 0; t < 20000; ++t) {
    DiscreteTuple d;
    d.i = static_cast<int>(gen() % marg.dim(0));
    d.j = static_cast<int>(gen() % marg.dim(1));
    d.k = static_cast<int>(gen() % marg.dim(2));
    d.e = static_cast<int>(gen() % 3);
    const auto y = smooth(d, marg, rng);
    EXPECT_NEAR(y[0] + y[1] + y[2] + y[3], 1.0, 1e-12);
    for (int m = 0; m < 4; ++m) {
      EXPECT_GE(y[m], 0.0);
      EXPECT_LE(y[m], marg.b_star[m] + 1e-15);
    }
  }
}

TEST(Smooth, NoShiftInsideTheWindow) {
  DiscreteMarginals marg;
  marg.h = 0.1;
  marg.budget = 1.0;
  marg.b_star = {0.5, 0.5, 0.5, 0.5};
  const DiscreteTuple d{2, 2, 2, 1};  // S in [0.7, 0.8], inside [T - b*_4, T]
  CounterRng rng(4, 0);
  CounterRng copy = rng;
  const double u = copy.uniform();
  const auto y = smooth(d, marg, rng);
  for (int m = 0; m < 3; ++m) EXPECT_DOUBLE_EQ(y[m], (2 + 1.0 / 3 + u / 3) * 0.1);
  EXPECT_DOUBLE_EQ(y[3], 1.0 - (y[0] + y[1] + y[2]));
  const auto fixed = smooth(d, marg, rng, {.jitter = false});
  EXPECT_DOUBLE_EQ(fixed[0], (2 + 1.0 / 3) * 0.1);
}

TEST(Smooth, OverflowLandsOnTheAtom) {
  DiscreteMarginals marg;
  marg.h = 0.1;
  marg.budget = 1.0;
  marg.b_star = {0.5, 0.5, 0.5, 0.5};
  CounterRng rng(5, 0);
  const auto y = smooth(DiscreteTuple{4, 4, 3, 2}, marg, rng);
  EXPECT_EQ(y[3], 0.0);
  EXPECT_NEAR(y[0] + y[1] + y[2], 1.0, 1e-15);
}

TEST(BuildPipeline, SymmetricUnitGameHasOneComponent) {
  const GameDatum d = symmetric_game(1.0, 1.0);
  const auto params = solve_gamma(d).front();
  const auto art = build_pipeline(d, params, d.role(Player::A), 0.1, 7);
  EXPECT_EQ(art.components.size(), 1u);
  for (const auto& c : art.components) EXPECT_LE(c.state.l1_error, art.grid.eta);
}

TEST(BuildPipeline, ConditionViolationThrows) {
  const std::vector<double> v{0.5, 0.5};
  const GameDatum d = validate_game(v, v, 2.0, 1.0);
  const auto params = solve_gamma(d).front();
  EXPECT_THROW(build_pipeline(d, params, d.role(Player::A), 0.1, 0), MixabilityError);
}

TEST(SampleAllocation, BudgetSupportAndKolmogorovBound) {
  const GameDatum d = symmetric_game(1.0, 1.0);
  const auto params = solve_gamma(d).front();
  const auto art = build_pipeline(d, params, d.role(Player::A), 0.1, 7);
  CounterRng rng(7, 0);
  const std::size_t n = 100'000;
  std::vector<std::vector<double>> cols(d.n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto a = sample_allocation(art, rng);
    double s = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      ASSERT_GE(a.x[i], 0.0);
      ASSERT_LE(a.x[i], art.marginals[i].b);
      s += a.x[i];
      cols[i].push_back(a.x[i]);
    }
    ASSERT_NEAR(s, 1.0, 1e-10);
  }
  double b_max = 0.0;
  for (double b : art.components[0].plan.b_star) b_max = std::max(b_max, b);
  for (std::size_t i = 0; i < d.n; ++i) {
    const auto& m = art.marginals[i];
    EXPECT_NEAR(m.b, 2.0 * d.t_a * d.v_a[i], 1e-12);
    const double bound = params.lambda / (params.gamma * d.v_a[i]) *
                             (2.0 * art.grid.h + b_max * art.grid.eta) +
                         dkw(n);
    EXPECT_LE(ks_distance(cols[i], m), bound) << "battlefield " << i;
  }
}

TEST(SampleAllocation, WeakPlayerForfeitsAtTheExpectedRate) {
  const GameDatum d = symmetric_game(1.0, 0.8);
  const auto params = solve_gamma(d).front();
  const auto art = build_pipeline(d, params, d.role(Player::B), 0.1, 9);
  CounterRng rng(9, 0);
  const std::size_t n = 100'000;
  // Displacement is at most 2h + b* eta, so P(x <= delta) lies between
  // F(0) and F(2 delta).
  double b_max = 0.0;
  for (const auto& c : art.components) {
    for (double b : c.plan.b_star) b_max = std::max(b_max, b);
  }
  const double delta = 2.0 * art.grid.h + b_max * art.grid.eta;
  std::vector<double> zeros(d.n, 0.0), near(d.n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    const auto a = sample_allocation(art, rng);
    double s = 0.0;
    for (std::size_t i = 0; i < d.n; ++i) {
      if (a.x[i] == 0.0) ++zeros[i];
      if (a.x[i] <= delta) ++near[i];
      s += a.x[i];
    }
    ASSERT_NEAR(s, 0.8, 1e-10);
  }
  for (std::size_t i = 0; i < d.n; ++i) {
    const double forfeit = 1.0 - d.t_b / d.t_a;
    EXPECT_NEAR(zeros[i] / n, forfeit, dkw(n));
    EXPECT_GE(near[i] / n, forfeit - dkw(n));
    EXPECT_LE(near[i] / n, art.marginals[i].cdf(2.0 * delta) + dkw(n));
  }
}

TEST(SampleAllocation, DeterministicStreams) {
  const GameDatum d = spread_two_game();
  const auto params = solve_gamma(d).front();
  const auto art1 = build_pipeline(d, params, d.role(Player::A), 0.4, 3);
  const auto art2 = build_pipeline(d, params, d.role(Player::A), 0.4, 3);
  CounterRng r1(3, 0), r2(3, 0), r3(3, 1);
  bool differs = false;
  for (int t = 0; t < 1000; ++t) {
    const auto a = sample_allocation(art1, r1);
    const auto b = sample_allocation(art2, r2);
    const auto c = sample_allocation(art1, r3);
    ASSERT_EQ(a.x, b.x);
    differs = differs || a.x != c.x;
  }
  EXPECT_TRUE(differs);
}
