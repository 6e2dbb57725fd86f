#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "blotto/game_model.hpp"
#include "blotto/lotto_solver.hpp"
#include "blotto/rng.hpp"
#include "blotto/sampler.hpp"

namespace blotto {

using AllocationSampler = std::function<std::vector<double>(CounterRng&)>;

AllocationSampler pipeline_sampler(std::shared_ptr<const PipelineArtifact> artifact);

// Independent draws from each marginal; meets the budget only in expectation.
AllocationSampler independent_sampler(std::vector<MarginalSpec> specs);

struct UtilityEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct PairedUtility {
  UtilityEstimate a;
  UtilityEstimate b;
};

// Both players' utilities over the same `count` draws. Worker w uses rng
// streams 2w (player A) and 2w+1 (player B); results combine in worker order.
PairedUtility estimate_utilities(const AllocationSampler& sampler_a,
                                 const AllocationSampler& sampler_b,
                                 const GameDatum& datum, std::size_t count,
                                 std::uint64_t seed, unsigned workers = 1);

UtilityEstimate estimate_utility(const AllocationSampler& sampler_a,
                                 const AllocationSampler& sampler_b,
                                 const GameDatum& datum, std::size_t count,
                                 std::uint64_t seed, unsigned workers = 1);

// Supremum over pure allocations with sum x <= budget against independent
// opponent marginals.
double best_response_value(std::span<const MarginalSpec> opponent,
                           std::span<const double> values, double budget);

double dkw_band(std::size_t samples, double confidence = 0.99);

struct MarginalDistance {
  double ks = 0.0;
  double dkw_band = 0.0;
};

MarginalDistance marginal_distance(std::vector<double> column, const MarginalSpec& spec);
MarginalDistance marginal_distance(const std::vector<std::vector<double>>& samples,
                                   std::size_t battlefield, const MarginalSpec& spec);

// Per-battlefield displacement bound 2 theta_i h + theta_i b*_slot eta,
// maximized over decomposition components.
std::vector<double> displacement_bounds(const PipelineArtifact& artifact);

struct PlayerGap {
  UtilityEstimate utility;
  double best_response = 0.0;
  double gap = 0.0;
  double allowance = 0.0;  // epsilon target + 3 standard errors
  bool pass = false;
};

struct GapReport {
  PlayerGap a;
  PlayerGap b;
  double epsilon_target = 0.0;
};

GapReport evaluate_gaps(std::shared_ptr<const PipelineArtifact> artifact_a,
                        std::shared_ptr<const PipelineArtifact> artifact_b,
                        std::size_t count, std::uint64_t seed, unsigned workers = 1);

}  // namespace blotto
