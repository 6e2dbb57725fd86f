#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "blotto/errors.hpp"
#include "blotto/lotto_solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace blotto;

namespace {

GameDatum example_game() {
  const std::vector<double> va{0.25, 0.75}, vb{0.5, 0.5};
  return validate_game(va, vb, 2.0, 1.0);
}

}  // namespace

TEST(FGamma, VanishesAtSymmetricRoot) {
  const std::vector<double> v{0.1, 0.2, 0.3, 0.4};
  const GameDatum d = validate_game(v, v, 2.0, 1.0);
  EXPECT_NEAR(f_gamma(0.5, d), 0.0, 1e-15);
}

TEST(FGamma, NegativeNearZero) {
  const GameDatum d = example_game();
  for (double g : {1e-3, 1e-4, 1e-5}) {
    EXPECT_LT(f_gamma(g, d), 0.0);
    EXPECT_NEAR(f_gamma(g, d) / (g * g), -d.t_b, 1e-2);
  }
}

TEST(FGamma, MatchesDirectBranchEvaluation) {
  const GameDatum d = example_game();
  for (double g = 0.05; g < 3.0; g += 0.0137) {
    EXPECT_NEAR(f_gamma(g, d), testkit::f_direct(g, d), 1e-13);
  }
  std::mt19937_64 gen(2);
  for (int t = 0; t < 100; ++t) {
    const GameDatum r = testkit::random_game(gen, 2 + gen() % 10, false);
    for (double g : {0.01, 0.3, 0.9, 1.7, 5.0}) {
      EXPECT_NEAR(f_gamma(g, r), testkit::f_direct(g, r), 1e-11 * std::max(1.0, g * g * g));
    }
  }
}

TEST(SolveGamma, SymmetricClosedForm) {
  const std::vector<double> v{0.5, 0.5};
  const auto roots = solve_gamma(validate_game(v, v, 2.0, 1.0));
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_NEAR(roots[0].gamma, 0.5, 1e-15);
  EXPECT_NEAR(roots[0].lambda, 0.125, 1e-15);
}

TEST(SolveGamma, EqualBudgetsSymmetric) {
  const std::vector<double> v{0.2, 0.3, 0.5};
  const auto roots = solve_gamma(validate_game(v, v, 1.5, 1.5));
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_NEAR(roots[0].gamma, 1.0, 1e-15);
  EXPECT_NEAR(roots[0].lambda, 1.0 / 3.0, 1e-15);
}

TEST(SolveGamma, ExampleMatchesBisectionOracle) {
  const GameDatum d = example_game();
  const auto roots = solve_gamma(d);
  const auto oracle =
      testkit::bisection_roots(d, testkit::bracket_lo(d), testkit::bracket_hi(d), 5000);
  ASSERT_EQ(roots.size(), oracle.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    EXPECT_NEAR(roots[i].gamma, oracle[i], 1e-9);
  }
}

TEST(SolveGamma, RandomGamesSatisfyBracketAndBothBudgetEquations) {
  std::mt19937_64 gen(10);
  for (int t = 0; t < 300; ++t) {
    const GameDatum d = testkit::random_game(gen, 2 + gen() % 19, false);
    const auto roots = solve_gamma(d);
    ASSERT_GE(roots.size(), 1u);
    ASSERT_LE(roots.size(), 3 * d.n + 3);
    const double lo = testkit::bracket_lo(d), hi = testkit::bracket_hi(d);
    for (std::size_t r = 0; r < roots.size(); ++r) {
      const auto& p = roots[r];
      if (r > 0) EXPECT_GT(p.gamma, roots[r - 1].gamma);
      EXPECT_GE(p.gamma, lo * (1 - 1e-12));
      EXPECT_LE(p.gamma, hi * (1 + 1e-12));
      EXPECT_LE(std::abs(f_gamma(p.gamma, d)), 1e-9 * d.t_a);
      EXPECT_GT(p.lambda, 0.0);
      EXPECT_NEAR(p.lambda, lambda_from_budget_b(p.gamma, d), 1e-9 * p.lambda);
      for (std::size_t i : p.n_gamma) EXPECT_GE(d.v_a[i] / d.v_b[i], p.gamma * (1 - 1e-12));
    }
  }
}

TEST(SolveGamma, SymmetricRandomUniqueRoot) {
  std::mt19937_64 gen(12);
  for (int t = 0; t < 200; ++t) {
    const GameDatum d = testkit::random_game(gen, 2 + gen() % 19, true);
    const auto roots = solve_gamma(d);
    ASSERT_EQ(roots.size(), 1u);
    EXPECT_NEAR(roots[0].gamma, d.t_b / d.t_a, 1e-12 * d.t_b / d.t_a);
  }
}

TEST(SortedRatios, StableAscending) {
  const std::vector<double> va{0.2, 0.2, 0.6}, vb{0.4, 0.4, 0.2};
  const auto r = sorted_ratios(validate_game(va, vb, 1.0, 1.0));
  ASSERT_EQ(r.size(), 3u);
  EXPECT_DOUBLE_EQ(r[0], 0.5);
  EXPECT_DOUBLE_EQ(r[1], 0.5);
  EXPECT_DOUBLE_EQ(r[2], 3.0);
}

TEST(GammaBracket, MatchesChiSquaredBounds) {
  const GameDatum d = example_game();
  const auto b = gamma_bracket(d);
  EXPECT_NEAR(b.lo, testkit::bracket_lo(d), 1e-15);
  EXPECT_NEAR(b.hi, testkit::bracket_hi(d), 1e-15);
}

TEST(LottoMarginals, SymmetricClosedFormValues) {
  const std::vector<double> v{0.5, 0.5};
  const GameDatum d = validate_game(v, v, 2.0, 1.0);
  const auto p = solve_gamma(d).front();
  const auto a = lotto_marginals(p, d, Player::A);
  const auto b = lotto_marginals(p, d, Player::B);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(a[i].p, 1.0, 1e-15);
    EXPECT_NEAR(a[i].b, 2.0, 1e-14);
    EXPECT_NEAR(b[i].p, 0.5, 1e-15);
    EXPECT_NEAR(b[i].b, 2.0, 1e-14);
  }
}

TEST(LottoMarginals, ExpectedSpendSaturatesBudget) {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 300; ++t) {
    const GameDatum d = testkit::random_game(gen, 2 + gen() % 19, t % 3 == 0);
    for (const auto& p : solve_gamma(d)) {
      for (Player who : {Player::A, Player::B}) {
        double spend = 0.0;
        for (const auto& s : lotto_marginals(p, d, who)) {
          EXPECT_GE(s.p, 0.0);
          EXPECT_LE(s.p, 1.0);
          EXPECT_GT(s.b, 0.0);
          spend += s.mean();
        }
        EXPECT_NEAR(spend, d.budget(who), 1e-9 * d.budget(who));
      }
    }
  }
}

TEST(MarginalSpec, CdfShape) {
  const MarginalSpec s{0.4, 2.0};
  EXPECT_EQ(s.cdf(-1.0), 0.0);
  EXPECT_NEAR(s.cdf(0.0), 0.6, 1e-15);
  EXPECT_NEAR(s.cdf(1.0), 0.8, 1e-15);
  EXPECT_EQ(s.cdf(3.0), 1.0);
  EXPECT_NEAR(s.mean(), 0.4, 1e-15);
}
