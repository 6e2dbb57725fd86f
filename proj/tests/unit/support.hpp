#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "blotto/game_model.hpp"
#include "blotto/lotto_solver.hpp"

namespace blotto::testkit {

// Test-side randomness is independent of the library generator.
inline std::vector<double> dirichlet(std::mt19937_64& gen, std::size_t n, double alpha = 1.0) {
  std::gamma_distribution<double> g(alpha, 1.0);
  std::vector<double> v(n);
  double s = 0.0;
  for (auto& x : v) {
    x = g(gen) + 1e-6;
    s += x;
  }
  for (auto& x : v) x /= s;
  return v;
}

inline double log_uniform(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(gen));
}

inline GameDatum random_game(std::mt19937_64& gen, std::size_t n, bool symmetric) {
  const auto va = dirichlet(gen, n);
  const auto vb = symmetric ? va : dirichlet(gen, n);
  const double ta = log_uniform(gen, 0.1, 10.0);
  const double ratio = log_uniform(gen, 1.0, 100.0);
  return validate_game(va, vb, ta, ta / ratio);
}

// Independent evaluation of f with explicit minimum branches.
inline double f_direct(double g, const GameDatum& d) {
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double a = g * g * d.v_b[i] * d.v_b[i] / d.v_a[i];
    const double m = a < d.v_a[i] ? a : d.v_a[i];
    s1 += m;
    s2 += d.v_a[i] / d.v_b[i] * m;
  }
  return g * d.t_a * s1 - d.t_b * s2;
}

}  // namespace blotto::testkit
