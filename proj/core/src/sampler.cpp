#include "blotto/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blotto/errors.hpp"
#include "blotto/mixability.hpp"

namespace blotto {
namespace {

std::vector<double> exp_of(const std::vector<double>& log_v) {
  std::vector<double> out(log_v.size());
  for (std::size_t i = 0; i < log_v.size(); ++i) out[i] = std::exp(log_v[i]);
  return out;
}

// Turns weights into a cumulative table ending exactly at one. An all-zero
// row becomes uniform; such rows are unreachable.
void append_cdf(std::vector<double>& dst, const double* w, std::size_t len) {
  double total = 0.0;
  for (std::size_t i = 0; i < len; ++i) total += w[i];
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    acc += total > 0.0 ? w[i] : 1.0;
    dst.push_back(acc / (total > 0.0 ? total : static_cast<double>(len)));
  }
  dst.back() = 1.0;
}

std::size_t pick(const double* cdf, std::size_t len, double u) {
  return static_cast<std::size_t>(std::upper_bound(cdf, cdf + len, u) - cdf);
}

std::string diagnostic(const GameDatum& d, const EquilibriumParams& params) {
  std::ostringstream os;
  os.precision(12);
  if (d.symmetric()) {
    const double m = *std::max_element(d.v_a.begin(), d.v_a.end());
    os << "largest battlefield value " << m << " exceeds T_B/(2 T_A) = "
       << d.t_b / (2.0 * d.t_a);
  } else {
    os << "max_i min(gamma v_B, v_A) exceeds lambda T_B = " << params.lambda * d.t_b
       << " (margin " << blotto_condition_margin(params, d) << ")";
  }
  return "Lotto marginals cannot be coupled into a Blotto strategy: " + os.str();
}

}  // namespace

ParameterMode default_mode(const GameDatum& datum) {
  return datum.symmetric() ? ParameterMode::kSymmetric : ParameterMode::kAsymmetric;
}

double value_spread(const GameDatum& d) {
  double m = 1.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double r = d.v_a[i] / d.v_b[i];
    m = std::max({m, r, 1.0 / r});
  }
  return m;
}

GridParameters select_parameters(double epsilon, const GameDatum& datum,
                                 const EquilibriumParams& params, ParameterMode mode) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (mode == ParameterMode::kSymmetric) return {epsilon * datum.t_a / 8.0, epsilon / 4.0};
  const double m = value_spread(datum);
  return {(params.gamma / params.lambda) * epsilon / (48.0 * m), epsilon / (24.0 * m)};
}

TupleSampler::TupleSampler(const ScalingState& state) {
  const auto x1 = exp_of(state.log_xi[0]);
  const auto x2 = exp_of(state.log_xi[1]);
  const auto x3 = exp_of(state.log_xi[2]);
  const auto x4 = exp_of(state.log_xi[3]);
  d_ = {x1.size(), x2.size(), x3.size()};
  const std::size_t reach = d_[0] + d_[1] + d_[2] - 2;
  std::vector<double> t(reach);
  for (std::size_t m = 0; m < reach; ++m) t[m] = x4[m] + x4[m + 1] + x4[m + 2];

  // u[m] = sum_k x3[k] t[m + k] for m = i + j.
  std::vector<double> u(d_[0] + d_[1] - 1, 0.0);
  for (std::size_t m = 0; m < u.size(); ++m) {
    for (std::size_t k = 0; k < d_[2]; ++k) u[m] += x3[k] * t[m + k];
  }
  std::vector<double> w(d_[0]);
  for (std::size_t i = 0; i < d_[0]; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d_[1]; ++j) acc += x2[j] * u[i + j];
    w[i] = x1[i] * acc;
  }
  append_cdf(cdf_i_, w.data(), w.size());

  std::vector<double> row(std::max({d_[1], d_[2], std::size_t{3}}));
  for (std::size_t i = 0; i < d_[0]; ++i) {
    for (std::size_t j = 0; j < d_[1]; ++j) row[j] = x2[j] * u[i + j];
    append_cdf(cdf_j_, row.data(), d_[1]);
  }
  for (std::size_t m = 0; m < u.size(); ++m) {
    for (std::size_t k = 0; k < d_[2]; ++k) row[k] = x3[k] * t[m + k];
    append_cdf(cdf_k_, row.data(), d_[2]);
  }
  for (std::size_t s = 0; s < reach; ++s) {
    for (std::size_t e = 0; e < 3; ++e) row[e] = x4[s + e];
    append_cdf(cdf_e_, row.data(), 3);
  }
  const std::array<const std::vector<double>*, 3> xs{&x1, &x2, &x3};
  for (int a = 0; a < 3; ++a) append_cdf(cdf_xi_[a], xs[a]->data(), xs[a]->size());
}

DiscreteTuple TupleSampler::draw(CounterRng& rng, TupleMode mode) const {
  DiscreteTuple t;
  if (mode == TupleMode::kExact) {
    t.i = static_cast<int>(pick(cdf_i_.data(), d_[0], rng.uniform()));
    t.j = static_cast<int>(pick(cdf_j_.data() + t.i * d_[1], d_[1], rng.uniform()));
    t.k = static_cast<int>(
        pick(cdf_k_.data() + static_cast<std::size_t>(t.i + t.j) * d_[2], d_[2], rng.uniform()));
  } else {
    t.i = static_cast<int>(pick(cdf_xi_[0].data(), d_[0], rng.uniform()));
    t.j = static_cast<int>(pick(cdf_xi_[1].data(), d_[1], rng.uniform()));
    t.k = static_cast<int>(pick(cdf_xi_[2].data(), d_[2], rng.uniform()));
  }
  const std::size_t s = static_cast<std::size_t>(t.i + t.j + t.k);
  t.e = static_cast<int>(pick(cdf_e_.data() + 3 * s, 3, rng.uniform()));
  return t;
}

DiscreteTuple draw_discrete(const ScalingState& state, CounterRng& rng) {
  return TupleSampler(state).draw(rng);
}

std::array<double, 4> smooth(const DiscreteTuple& tuple, const DiscreteMarginals& marginals,
                             CounterRng& rng, const SmoothingOptions& options) {
  const double u = options.jitter ? rng.uniform() : 0.0;
  const double h = marginals.h;
  const double budget = marginals.budget;
  const std::array<int, 3> idx{tuple.i, tuple.j, tuple.k};
  std::array<double, 4> y{};
  std::array<bool, 3> active{};
  double s = 0.0;
  for (int m = 0; m < 3; ++m) {
    active[m] = marginals.b_star[m] > 0.0;
    if (!active[m]) continue;
    y[m] = std::min((idx[m] + tuple.e / 3.0 + u / 3.0) * h, marginals.b_star[m]);
    s += y[m];
  }
  // Shift the live coordinates equally so that Y4 = T - S lands in
  // [0, b*_4]; coordinates that would leave their support are pinned and the
  // rest is shared among the others.
  const double target = std::clamp(s, budget - marginals.b_star[3], budget);
  if (target != s) {
    std::array<bool, 3> free = active;
    for (int round = 0; round < 3; ++round) {
      double pinned = 0.0, loose = 0.0;
      int count = 0;
      for (int m = 0; m < 3; ++m) {
        if (!active[m]) continue;
        if (free[m]) {
          loose += y[m];
          ++count;
        } else {
          pinned += y[m];
        }
      }
      if (count == 0) break;
      const double zeta = (target - pinned - loose) / count;
      bool changed = false;
      for (int m = 0; m < 3; ++m) {
        if (!active[m] || !free[m]) continue;
        const double v = y[m] + zeta;
        if (v < 0.0 || v > marginals.b_star[m]) {
          y[m] = std::clamp(v, 0.0, marginals.b_star[m]);
          free[m] = false;
          changed = true;
        }
      }
      if (!changed) {
        for (int m = 0; m < 3; ++m) {
          if (active[m] && free[m]) y[m] += zeta;
        }
        break;
      }
    }
  }
  // A shift onto the upper end places Y4 on its atom at zero exactly.
  y[3] = target == budget && target != s
             ? 0.0
             : std::clamp(budget - (y[0] + y[1] + y[2]), 0.0, marginals.b_star[3]);
  return y;
}

PipelineArtifact build_pipeline(const GameDatum& datum, const EquilibriumParams& params,
                                PlayerRole player, double epsilon, std::uint64_t seed,
                                const PipelineOptions& options) {
  if (!check_blotto_condition(params, datum)) {
    throw MixabilityError(diagnostic(datum, params));
  }
  PipelineArtifact art;
  art.datum = datum;
  art.params = params;
  art.player = player;
  art.epsilon = epsilon;
  art.seed = seed;
  art.options = options;
  const ParameterMode mode = options.mode_from_datum ? default_mode(datum) : options.mode;
  art.grid = options.grid_override.h > 0.0
                 ? options.grid_override
                 : select_parameters(epsilon, datum, params, mode);
  art.marginals = lotto_marginals(params, datum, player.role);
  if (!is_jointly_mixable(art.marginals)) throw MixabilityError(diagnostic(datum, params));

  HyperplaneSlice slice;
  std::vector<double> p(datum.n);
  for (std::size_t i = 0; i < datum.n; ++i) {
    slice.lengths.push_back(art.marginals[i].b / 2.0);
    p[i] = art.marginals[i].p;
  }
  slice.target = datum.budget(player.role);
  art.decomposition = decompose(slice, p);

  double acc = 0.0;
  for (std::size_t c = 0; c < art.decomposition.components.size(); ++c) {
    const auto& point = art.decomposition.components[c];
    std::vector<MarginalSpec> specs(datum.n);
    for (std::size_t i = 0; i < datum.n; ++i) specs[i] = {point[i], art.marginals[i].b};
    PipelineComponent comp;
    comp.plan = reduce_to_four(specs);
    comp.marginals = discretize(comp.plan, slice.target, art.grid.h);
    comp.state = sinkhorn_scale(comp.marginals, art.grid.eta, {options.record_trace});
    comp.tuples = TupleSampler(comp.state);
    art.components.push_back(std::move(comp));
    acc += art.decomposition.weights[c];
    art.component_cdf.push_back(acc);
  }
  for (double& c : art.component_cdf) c /= acc;
  art.component_cdf.back() = 1.0;
  return art;
}

Allocation sample_allocation(const PipelineArtifact& art, CounterRng& rng) {
  const std::size_t c =
      art.components.size() == 1
          ? 0
          : pick(art.component_cdf.data(), art.component_cdf.size(), rng.uniform());
  const auto& comp = art.components[c];
  const DiscreteTuple t = comp.tuples.draw(rng, art.options.tuple_mode);
  const auto y = smooth(t, comp.marginals, rng, art.options.smoothing);
  Allocation out;
  out.player = art.player;
  out.x.assign(art.datum.n, 0.0);
  for (std::size_t i = 0; i < art.datum.n; ++i) {
    const int slot = comp.plan.slot_of[i];
    if (slot == kZeroSlot) continue;
    const double v = slot == kMixtureSlot ? y[3] : comp.plan.theta[i] * y[slot];
    out.x[i] = std::min(v, art.marginals[i].b);
  }
  return out;
}

}  // namespace blotto
