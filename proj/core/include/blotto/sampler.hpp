#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "blotto/decomposition.hpp"
#include "blotto/discretization.hpp"
#include "blotto/game_model.hpp"
#include "blotto/lotto_solver.hpp"
#include "blotto/reduction.hpp"
#include "blotto/rng.hpp"
#include "blotto/sinkhorn.hpp"

namespace blotto {

enum class ParameterMode { kSymmetric, kAsymmetric };

struct GridParameters {
  double h = 0.0;
  double eta = 0.0;
};

ParameterMode default_mode(const GameDatum& datum);

// max_i max(v_A/v_B, v_B/v_A).
double value_spread(const GameDatum& datum);

GridParameters select_parameters(double epsilon, const GameDatum& datum,
                                 const EquilibriumParams& params, ParameterMode mode);

struct DiscreteTuple {
  int i = 0;
  int j = 0;
  int k = 0;
  int e = 0;
};

enum class TupleMode {
  kExact,         // ancestral sampling from the implied tensor
  kScalingProduct,  // independent draws proportional to xi1..xi3 (approximate)
};

// Precomputed conditional tables for drawing tuples from a ScalingState.
class TupleSampler {
 public:
  TupleSampler() = default;
  explicit TupleSampler(const ScalingState& state);

  DiscreteTuple draw(CounterRng& rng, TupleMode mode = TupleMode::kExact) const;

 private:
  std::array<std::size_t, 3> d_{};
  std::vector<double> cdf_i_;   // P(i)
  std::vector<double> cdf_j_;   // P(j | i), row-major d1 x d2
  std::vector<double> cdf_k_;   // P(k | i + j), rows indexed by i + j
  std::vector<double> cdf_e_;   // P(e | i + j + k), 3 per row
  std::array<std::vector<double>, 3> cdf_xi_;  // normalized xi1..xi3
};

DiscreteTuple draw_discrete(const ScalingState& state, CounterRng& rng);

struct SmoothingOptions {
  bool jitter = true;  // draw the shared U; false fixes U = 0
};

// Continuous reduced allocation (Y1, Y2, Y3, Y4) with Y1+Y2+Y3+Y4 = budget.
std::array<double, 4> smooth(const DiscreteTuple& tuple,
                             const DiscreteMarginals& marginals, CounterRng& rng,
                             const SmoothingOptions& options = {});

struct PipelineComponent {
  ReductionPlan plan;
  DiscreteMarginals marginals;
  ScalingState state;
  TupleSampler tuples;
};

struct PipelineOptions {
  TupleMode tuple_mode = TupleMode::kExact;
  SmoothingOptions smoothing;
  bool record_trace = false;
  // Overrides select_parameters when h > 0.
  GridParameters grid_override;
  ParameterMode mode = ParameterMode::kSymmetric;
  bool mode_from_datum = true;
};

struct PipelineArtifact {
  GameDatum datum;
  EquilibriumParams params;
  PlayerRole player;
  std::vector<MarginalSpec> marginals;
  MixtureDecomposition decomposition;
  std::vector<PipelineComponent> components;
  std::vector<double> component_cdf;
  double epsilon = 0.0;
  GridParameters grid;
  std::uint64_t seed = 0;
  PipelineOptions options;
};

// Throws MixabilityError when the player's marginals cannot be coupled.
PipelineArtifact build_pipeline(const GameDatum& datum, const EquilibriumParams& params,
                                PlayerRole player, double epsilon, std::uint64_t seed,
                                const PipelineOptions& options = {});

struct Allocation {
  std::vector<double> x;
  PlayerRole player;
};

Allocation sample_allocation(const PipelineArtifact& artifact, CounterRng& rng);

}  // namespace blotto
