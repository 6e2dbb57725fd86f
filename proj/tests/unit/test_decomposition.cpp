#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <vector>

#include "blotto/decomposition.hpp"
#include "blotto/errors.hpp"

using namespace blotto;

namespace {

HyperplaneSlice random_slice(std::mt19937_64& gen, std::size_t n, std::vector<double>& p) {
  std::uniform_real_distribution<double> u(0.0, 1.0), len(0.05, 3.0);
  HyperplaneSlice s;
  p.resize(n);
  s.target = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.lengths.push_back(len(gen));
    const double r = u(gen);
    p[i] = r < 0.1 ? 0.0 : (r < 0.2 ? 1.0 : u(gen));
    s.target += s.lengths[i] * p[i];
  }
  return s;
}

void expect_valid(const HyperplaneSlice& s, const std::vector<double>& p,
                  const MixtureDecomposition& d) {
  const std::size_t n = p.size();
  ASSERT_EQ(d.weights.size(), d.components.size());
  ASSERT_GE(d.weights.size(), 1u);
  EXPECT_LE(d.weights.size(), std::max<std::size_t>(n, 1));
  double wsum = 0.0;
  std::vector<double> recon(n, 0.0);
  for (std::size_t k = 0; k < d.weights.size(); ++k) {
    EXPECT_GE(d.weights[k], 0.0);
    wsum += d.weights[k];
    const auto c = d.components[k].dense();
    EXPECT_LE(fractional_count(c), 1u);
    EXPECT_TRUE(s.contains(c));
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(c[i], 0.0);
      EXPECT_LE(c[i], 1.0);
      recon[i] += d.weights[k] * c[i];
    }
  }
  EXPECT_NEAR(wsum, 1.0, 1e-12);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(recon[i], p[i], 1e-10);
}

}  // namespace

TEST(Extremize, HandExecutedExample) {
  const HyperplaneSlice s{{1, 1, 1}, 1.5};
  const std::vector<double> x{0.5, 0.5, 0.5};
  const auto r = extremize(s, x);
  EXPECT_EQ(r.y, (std::vector<double>{1.0, 0.5, 0.0}));
  EXPECT_EQ(r.y_bar, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_DOUBLE_EQ(r.theta, 0.5);
}

TEST(Extremize, ExtremeInputIsFixed) {
  const HyperplaneSlice s{{1, 2, 1}, 2.5};
  const std::vector<double> x{1.0, 0.25, 1.0};
  const auto r = extremize(s, x);
  EXPECT_EQ(r.y, x);
  EXPECT_EQ(r.y_bar, x);
  EXPECT_EQ(r.theta, 1.0);
}

TEST(Extremize, TwoCoordinatePostconditions) {
  const HyperplaneSlice s{{2, 1}, 2};
  const std::vector<double> x{0.75, 0.5};
  const auto r = extremize(s, x);
  EXPECT_LE(fractional_count(r.y), 1u);
  EXPECT_LT(fractional_count(r.y_bar), fractional_count(x));
  EXPECT_TRUE(s.contains(r.y));
  EXPECT_TRUE(s.contains(r.y_bar));
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(r.theta * r.y[i] + (1 - r.theta) * r.y_bar[i], x[i], 1e-12);
  }
}

TEST(Extremize, RejectsPointsOffTheSlice) {
  const HyperplaneSlice s{{1, 1}, 1};
  EXPECT_THROW(extremize(s, std::vector<double>{0.7, 0.7}), ValidationError);
  EXPECT_THROW(extremize(s, std::vector<double>{1.5, -0.5}), ValidationError);
}

TEST(Extremize, SupportStrictlyShrinks) {
  std::mt19937_64 gen(30);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> p;
    const auto s = random_slice(gen, 2 + gen() % 15, p);
    if (fractional_count(p) < 2) continue;
    const auto r = extremize(s, p);
    EXPECT_LT(fractional_count(r.y_bar), fractional_count(p));
    EXPECT_LE(fractional_count(r.y), 1u);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_NEAR(r.theta * r.y[i] + (1 - r.theta) * r.y_bar[i], p[i], 1e-10);
    }
  }
}

TEST(Decompose, ExtremeInputSingleComponent) {
  const HyperplaneSlice s{{0.5, 0.5, 0.5, 0.5}, 2.0};
  const std::vector<double> ones(4, 1.0);
  const auto d = decompose(s, ones);
  ASSERT_EQ(d.weights.size(), 1u);
  EXPECT_EQ(d.weights[0], 1.0);
  EXPECT_EQ(d.components[0].dense(), ones);
}

TEST(Decompose, RandomSlicesSatisfyIdentities) {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> p;
    const auto s = random_slice(gen, 1 + gen() % 12, p);
    expect_valid(s, p, decompose(s, p));
  }
}

TEST(ExtremePoint, DenseRoundTrip) {
  const std::vector<double> x{1.0, 0.0, 0.3, 1.0};
  const auto e = ExtremePoint::from_dense(x);
  EXPECT_EQ(e.dense(), x);
  EXPECT_EQ(e.frac_index, 2u);
  EXPECT_THROW(ExtremePoint::from_dense(std::vector<double>{0.5, 0.5}), ValidationError);
}

TEST(Decompose, LargeInstanceIsFast) {
  std::mt19937_64 gen(32);
  std::vector<double> p;
  const auto s = random_slice(gen, 10000, p);
  const auto t0 = std::chrono::steady_clock::now();
  const auto d = decompose(s, p);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  EXPECT_LE(d.weights.size(), 10000u);
  double wsum = 0.0;
  for (double w : d.weights) wsum += w;
  EXPECT_NEAR(wsum, 1.0, 1e-12);
}
