#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "blotto/discretization.hpp"

namespace blotto {

struct SinkhornTraceEntry {
  int axis = 0;
  double l1_error = 0.0;
  std::array<double, 4> kl{};
};

// Factored tensor G[i][j][k][e] = xi1[i] xi2[j] xi3[k] xi4[i+j+k+e], e in
// {0,1,2}, with scaling vectors kept in log space. Each log vector has max 0
// and log_scale carries the common factor. xi4 spans ell in [0, d1+d2+d3-1].
struct ScalingState {
  std::array<std::vector<double>, 4> log_xi;
  double log_scale = 0.0;
  std::array<std::vector<double>, 4> targets;
  std::size_t iterations = 0;
  std::size_t cap = 0;
  double l1_error = 0.0;
  double eta = 0.0;
  std::vector<SinkhornTraceEntry> trace;

  std::size_t dim(int axis) const { return log_xi[axis].size(); }
};

// Marginals of the implied tensor (axis 4 over the full ell-domain).
std::array<std::vector<double>, 4> tensor_marginals(const ScalingState& state);

// Sum of p log(p/q) with 0 log 0 = 0. Throws ValidationError if q = 0 where
// p > 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Targets in the tensor frame: mu1..mu3 and mu4 over [0, reachable_max].
std::array<std::vector<double>, 4> tensor_targets(const DiscreteMarginals& marginals);

// ceil(32 / eta * (1 - log mu_min)), mu_min over nonzero target entries.
std::size_t sinkhorn_iteration_cap(const std::array<std::vector<double>, 4>& targets,
                                   double eta);

// Initial state with unit scaling vectors.
ScalingState initial_state(const std::array<std::vector<double>, 4>& targets);

struct SinkhornOptions {
  bool record_trace = false;
};

// Greedy scaling until the summed l1 error is at most eta. Throws
// IterationCapError when the cap is exceeded.
ScalingState sinkhorn_scale(const DiscreteMarginals& marginals, double eta,
                            const SinkhornOptions& options = {});
ScalingState sinkhorn_scale(const std::array<std::vector<double>, 4>& targets,
                            double eta, const SinkhornOptions& options = {});

// Scales one axis exactly onto its target and renormalizes the total mass.
void scale_axis(ScalingState& state, int axis,
                const std::array<std::vector<double>, 4>& current);

}  // namespace blotto
