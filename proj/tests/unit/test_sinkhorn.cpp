#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "blotto/discretization.hpp"
#include "blotto/errors.hpp"
#include "blotto/reduction.hpp"
#include "blotto/sinkhorn.hpp"

using namespace blotto;

namespace {

using Marginals = std::array<std::vector<double>, 4>;

Marginals make(std::vector<double> a, std::vector<double> b, std::vector<double> c,
               std::vector<double> d) {
  return {std::move(a), std::move(b), std::move(c), std::move(d)};
}

// Marginals by materializing every entry of the 4-tensor.
Marginals brute_force_marginals(const ScalingState& s) {
  std::array<std::vector<double>, 4> x;
  for (int a = 0; a < 4; ++a) {
    for (double l : s.log_xi[a]) x[a].push_back(std::exp(l));
  }
  const double scale = std::exp(s.log_scale);
  Marginals out;
  for (int a = 0; a < 4; ++a) out[a].assign(x[a].size(), 0.0);
  for (std::size_t i = 0; i < x[0].size(); ++i) {
    for (std::size_t j = 0; j < x[1].size(); ++j) {
      for (std::size_t k = 0; k < x[2].size(); ++k) {
        for (std::size_t e = 0; e < 3; ++e) {
          const double g = scale * x[0][i] * x[1][j] * x[2][k] * x[3][i + j + k + e];
          out[0][i] += g;
          out[1][j] += g;
          out[2][k] += g;
          out[3][i + j + k + e] += g;
        }
      }
    }
  }
  return out;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

std::vector<double> random_probability(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) s += (x = u(gen));
  for (auto& x : v) x /= s;
  return v;
}

ScalingState random_state(std::mt19937_64& gen, std::size_t d1, std::size_t d2,
                          std::size_t d3) {
  const Marginals targets = make(random_probability(gen, d1), random_probability(gen, d2),
                                 random_probability(gen, d3),
                                 random_probability(gen, d1 + d2 + d3));
  ScalingState s = initial_state(targets);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : s.log_xi) {
    for (double& l : v) l = g(gen);
  }
  s.log_scale = g(gen);
  return s;
}

DiscreteMarginals symmetric_four_battlefield(double h) {
  const std::vector<MarginalSpec> specs(4, MarginalSpec{1.0, 0.5});
  return discretize(reduce_to_four(specs), 1.0, h);
}

}  // namespace

TEST(KlDivergence, Examples) {
  const std::vector<double> p{0.3, 0.7};
  EXPECT_EQ(kl_divergence(p, p), 0.0);
  EXPECT_NEAR(kl_divergence(std::vector<double>{1.0, 0.0}, std::vector<double>{0.5, 0.5}),
              std::log(2.0), 1e-15);
  EXPECT_NEAR(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75}),
              0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0), 1e-15);
  EXPECT_THROW(kl_divergence(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0}),
               ValidationError);
  EXPECT_THROW(kl_divergence(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}),
               DimensionMismatchError);
}

TEST(TensorMarginals, UnitCube) {
  const Marginals targets = make({1.0}, {1.0}, {1.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const ScalingState s = initial_state(targets);
  const auto m = tensor_marginals(s);
  ASSERT_EQ(m[3].size(), 3u);
  for (double x : m[3]) EXPECT_DOUBLE_EQ(x, 1.0);
  EXPECT_DOUBLE_EQ(m[0][0], 3.0);
}

TEST(TensorMarginals, AllOnesAxesAreUniform) {
  const Marginals targets = make(std::vector<double>(3, 1.0 / 3), std::vector<double>(4, 0.25),
                          std::vector<double>(2, 0.5), std::vector<double>(9, 1.0 / 9));
  const auto m = tensor_marginals(initial_state(targets));
  for (double x : m[0]) EXPECT_DOUBLE_EQ(x, 4.0 * 2.0 * 3.0);
  for (double x : m[1]) EXPECT_DOUBLE_EQ(x, 3.0 * 2.0 * 3.0);
  for (double x : m[2]) EXPECT_DOUBLE_EQ(x, 3.0 * 4.0 * 3.0);
}

TEST(TensorMarginals, MatchesMaterializedTensor) {
  std::mt19937_64 gen(21);
  std::uniform_int_distribution<std::size_t> dim(1, 21);
  int checked = 0;
  while (checked < 60) {
    const std::size_t d1 = dim(gen), d2 = dim(gen), d3 = dim(gen);
    if (d1 * d2 * d3 > 10000) continue;
    ++checked;
    const ScalingState s = random_state(gen, d1, d2, d3);
    const auto fast = tensor_marginals(s);
    const auto slow = brute_force_marginals(s);
    for (int a = 0; a < 4; ++a) {
      ASSERT_EQ(fast[a].size(), slow[a].size());
      double total = 0.0;
      for (double x : slow[a]) total += x;
      for (std::size_t i = 0; i < fast[a].size(); ++i) {
        EXPECT_NEAR(fast[a][i], slow[a][i], 1e-12 * std::max(1.0, total));
      }
    }
  }
}

TEST(ScaleAxis, MatchesTargetExactly) {
  std::mt19937_64 gen(22);
  for (int t = 0; t < 20; ++t) {
    ScalingState s = random_state(gen, 3 + t % 4, 2 + t % 3, 4);
    for (int axis = 0; axis < 4; ++axis) {
      scale_axis(s, axis, tensor_marginals(s));
      const auto m = tensor_marginals(s);
      for (std::size_t i = 0; i < m[axis].size(); ++i) {
        EXPECT_NEAR(m[axis][i], s.targets[axis][i], 1e-12);
      }
      for (double l : s.log_xi[axis]) EXPECT_LE(l, 0.0);
    }
  }
}

TEST(IterationCap, FromSmallestTargetEntry) {
  const Marginals targets = make({0.5, 0.5}, {1.0}, {1.0}, {0.0, 0.25, 0.75, 0.0});
  EXPECT_EQ(sinkhorn_iteration_cap(targets, 0.1),
            static_cast<std::size_t>(std::ceil(320.0 * (1.0 - std::log(0.25)))));
}

TEST(SinkhornScale, SingleCellAxes) {
  const Marginals targets = make({1.0}, {1.0}, {1.0}, {0.2, 0.5, 0.3});
  const ScalingState s = sinkhorn_scale(targets, 1e-12);
  EXPECT_LE(s.iterations, 4u);
  const auto m = tensor_marginals(s);
  for (int a = 0; a < 4; ++a) {
    for (std::size_t i = 0; i < m[a].size(); ++i) EXPECT_NEAR(m[a][i], targets[a][i], 1e-12);
  }
}

TEST(SinkhornScale, SymmetricGameWithinCap) {
  const auto d = symmetric_four_battlefield(0.1);
  const auto targets = tensor_targets(d);
  const ScalingState s = sinkhorn_scale(d, 0.05, {.record_trace = true});
  EXPECT_LE(s.l1_error, 0.05);
  EXPECT_EQ(s.cap, sinkhorn_iteration_cap(targets, 0.05));
  EXPECT_LE(s.iterations, s.cap);
  EXPECT_EQ(s.trace.size(), s.iterations);
  // Reported error is the error of the returned state.
  const auto m = tensor_marginals(s);
  double err = 0.0, mass = 0.0;
  for (double x : m[0]) mass += x;
  EXPECT_NEAR(mass, 1.0, 1e-12);
  for (int a = 0; a < 4; ++a) err += l1(m[a], targets[a]);
  EXPECT_NEAR(err, s.l1_error, 1e-12);
  // Greedy choice: the recorded axis has the largest KL, ties to the lowest.
  for (const auto& e : s.trace) {
    for (int a = 0; a < 4; ++a) {
      if (a < e.axis) EXPECT_LT(e.kl[a], e.kl[e.axis]);
      EXPECT_LE(e.kl[a], e.kl[e.axis]);
    }
  }
}

TEST(SinkhornScale, ConvergesOnRandomConsistentTargets) {
  // Targets taken from a random positive tensor are always reachable.
  std::mt19937_64 gen(23);
  for (int t = 0; t < 20; ++t) {
    ScalingState source = random_state(gen, 2 + t % 5, 3, 1 + t % 4);
    auto m = tensor_marginals(source);
    double mass = 0.0;
    for (double x : m[0]) mass += x;
    for (auto& v : m) {
      for (double& x : v) x /= mass;
    }
    const ScalingState s = sinkhorn_scale(m, 0.01);
    EXPECT_LE(s.l1_error, 0.01);
    EXPECT_LE(s.iterations, s.cap);
  }
}

TEST(SinkhornScale, InconsistentTargetsHitTheCap) {
  // Axes force i + j + k = 0, while the sum law sits at the top of the range.
  const double t = 1e-9;
  const Marginals targets =
      make({1 - t, t}, {1 - t, t}, {1 - t, t}, {t, t, t, t, t, 1 - 5 * t});
  EXPECT_THROW(sinkhorn_scale(targets, 0.01), IterationCapError);
}

TEST(SinkhornScale, RejectsNonPositiveEta) {
  const Marginals targets = make({1.0}, {1.0}, {1.0}, {0.2, 0.5, 0.3});
  EXPECT_THROW(sinkhorn_scale(targets, 0.0), ValidationError);
}
