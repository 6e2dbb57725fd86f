#include "blotto/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "blotto/errors.hpp"
#include "blotto/reduction.hpp"

namespace blotto {
namespace {

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

// Count, sum and centered sum of squares of one worker's scores.
struct Moments {
  double n = 0.0;
  double sum = 0.0;
  double m2 = 0.0;
};

Moments moments(std::vector<double>& values) {
  Moments m;
  m.n = static_cast<double>(values.size());
  if (values.empty()) return m;
  m.sum = pairwise_sum(values.data(), values.size());
  const double mean = m.sum / m.n;
  for (double& v : values) v = (v - mean) * (v - mean);
  m.m2 = pairwise_sum(values.data(), values.size());
  return m;
}

// Combines workers in order with the pairwise update for centered moments.
UtilityEstimate finish(const std::vector<Moments>& parts, std::size_t count,
                       std::uint64_t seed) {
  Moments acc;
  for (const auto& m : parts) {
    if (m.n == 0.0) continue;
    if (acc.n == 0.0) {
      acc = m;
      continue;
    }
    const double delta = m.sum / m.n - acc.sum / acc.n;
    acc.m2 += m.m2 + delta * delta * acc.n * m.n / (acc.n + m.n);
    acc.sum += m.sum;
    acc.n += m.n;
  }
  UtilityEstimate out;
  out.samples = count;
  out.seed = seed;
  const double n = static_cast<double>(count);
  out.mean = acc.sum / n;
  if (count > 1) out.std_error = std::sqrt(acc.m2 / (n - 1.0) / n);
  return out;
}

}  // namespace

AllocationSampler pipeline_sampler(std::shared_ptr<const PipelineArtifact> artifact) {
  return [artifact](CounterRng& rng) { return sample_allocation(*artifact, rng).x; };
}

AllocationSampler independent_sampler(std::vector<MarginalSpec> specs) {
  return [specs = std::move(specs)](CounterRng& rng) {
    std::vector<double> x(specs.size(), 0.0);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const bool live = rng.uniform() < specs[i].p;
      const double u = rng.uniform();
      if (live) x[i] = u * specs[i].b;
    }
    return x;
  };
}

PairedUtility estimate_utilities(const AllocationSampler& sampler_a,
                                 const AllocationSampler& sampler_b,
                                 const GameDatum& datum, std::size_t count,
                                 std::uint64_t seed, unsigned workers) {
  if (count == 0) throw ValidationError("sample count must be positive");
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  std::vector<Moments> part_a(workers), part_b(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned w) {
    try {
      const std::size_t lo = count * w / workers;
      const std::size_t hi = count * (w + 1) / workers;
      CounterRng rng_a(seed, 2 * static_cast<std::uint64_t>(w));
      CounterRng rng_b(seed, 2 * static_cast<std::uint64_t>(w) + 1);
      std::vector<double> ua, ub;
      ua.reserve(hi - lo);
      ub.reserve(hi - lo);
      for (std::size_t s = lo; s < hi; ++s) {
        const auto xa = sampler_a(rng_a);
        const auto xb = sampler_b(rng_b);
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < datum.n; ++i) {
          if (xa[i] > xb[i]) {
            a += datum.v_a[i];
          } else if (xb[i] > xa[i]) {
            b += datum.v_b[i];
          } else {
            a += 0.5 * datum.v_a[i];
            b += 0.5 * datum.v_b[i];
          }
        }
        ua.push_back(a);
        ub.push_back(b);
      }
      part_a[w] = moments(ua);
      part_b[w] = moments(ub);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return {finish(part_a, count, seed), finish(part_b, count, seed)};
}

UtilityEstimate estimate_utility(const AllocationSampler& sampler_a,
                                 const AllocationSampler& sampler_b,
                                 const GameDatum& datum, std::size_t count,
                                 std::uint64_t seed, unsigned workers) {
  return estimate_utilities(sampler_a, sampler_b, datum, count, seed, workers).a;
}

double best_response_value(std::span<const MarginalSpec> opponent,
                           std::span<const double> values, double budget) {
  if (opponent.size() != values.size()) {
    throw DimensionMismatchError("opponent marginals and values differ in length");
  }
  double total = 0.0;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < opponent.size(); ++i) {
    // The atom at zero is beaten by any positive bid.
    total += values[i] * (1.0 - opponent[i].p);
    if (opponent[i].p > 0.0 && opponent[i].b > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return values[x] * opponent[x].p / opponent[x].b > values[y] * opponent[y].p / opponent[y].b;
  });
  double left = budget;
  for (std::size_t i : order) {
    if (left <= 0.0) break;
    const double spend = std::min(left, opponent[i].b);
    total += values[i] * opponent[i].p * spend / opponent[i].b;
    left -= spend;
  }
  return total;
}

double dkw_band(std::size_t samples, double confidence) {
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(samples)));
}

MarginalDistance marginal_distance(std::vector<double> column, const MarginalSpec& spec) {
  if (column.size() < 100) throw ValidationError("marginal_distance needs at least 100 samples");
  std::sort(column.begin(), column.end());
  const double n = static_cast<double>(column.size());
  auto cdf_left = [&](double x) { return x <= 0.0 ? 0.0 : spec.cdf(x); };
  double ks = 0.0;
  for (std::size_t i = 0; i < column.size();) {
    std::size_t j = i;
    while (j < column.size() && column[j] == column[i]) ++j;
    const double x = column[i];
    ks = std::max(ks, std::abs(static_cast<double>(j) / n - spec.cdf(x)));
    ks = std::max(ks, std::abs(static_cast<double>(i) / n - cdf_left(x)));
    i = j;
  }
  return {ks, dkw_band(column.size())};
}

MarginalDistance marginal_distance(const std::vector<std::vector<double>>& samples,
                                   std::size_t battlefield, const MarginalSpec& spec) {
  std::vector<double> column;
  column.reserve(samples.size());
  for (const auto& row : samples) column.push_back(row.at(battlefield));
  return marginal_distance(std::move(column), spec);
}

std::vector<double> displacement_bounds(const PipelineArtifact& artifact) {
  std::vector<double> out(artifact.datum.n, 0.0);
  const double h = artifact.grid.h;
  const double eta = artifact.grid.eta;
  for (const auto& comp : artifact.components) {
    for (std::size_t i = 0; i < artifact.datum.n; ++i) {
      const int slot = comp.plan.slot_of[i];
      if (slot == kZeroSlot) continue;
      const double theta = slot == kMixtureSlot ? 1.0 : comp.plan.theta[i];
      out[i] = std::max(out[i], 2.0 * theta * h + theta * comp.plan.b_star[slot] * eta);
    }
  }
  return out;
}

GapReport evaluate_gaps(std::shared_ptr<const PipelineArtifact> artifact_a,
                        std::shared_ptr<const PipelineArtifact> artifact_b,
                        std::size_t count, std::uint64_t seed, unsigned workers) {
  if (artifact_a->player.role != Player::A || artifact_b->player.role != Player::B) {
    throw ValidationError("evaluate_gaps expects artifacts for players A and B");
  }
  const GameDatum& datum = artifact_a->datum;
  const auto paired = estimate_utilities(pipeline_sampler(artifact_a),
                                         pipeline_sampler(artifact_b), datum, count, seed,
                                         workers);
  GapReport report;
  report.epsilon_target = artifact_a->epsilon;
  auto fill = [&](PlayerGap& g, const UtilityEstimate& u, const PipelineArtifact& own,
                  const PipelineArtifact& other) {
    const Player p = own.player.role;
    g.utility = u;
    g.best_response = best_response_value(other.marginals, datum.values(p), datum.budget(p));
    g.gap = g.best_response - u.mean;
    g.allowance = own.epsilon + 3.0 * u.std_error;
    g.pass = g.gap <= g.allowance;
  };
  fill(report.a, paired.a, *artifact_a, *artifact_b);
  fill(report.b, paired.b, *artifact_b, *artifact_a);
  return report;
}

}  // namespace blotto
