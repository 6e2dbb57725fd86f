#include "blotto/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blotto/errors.hpp"

namespace blotto {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTiny = std::numeric_limits<double>::min();

std::vector<double> exp_shifted(const std::vector<double>& log_v) {
  std::vector<double> out(log_v.size());
  for (std::size_t i = 0; i < log_v.size(); ++i) out[i] = std::exp(log_v[i]);
  return out;
}

std::vector<double> convolve(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) out[i + j] += xi * y[j];
  }
  return out;
}

// out[i] = x[i] * sum_s c[s] t[i + s]
std::vector<double> axis_marginal(const std::vector<double>& x, const std::vector<double>& c,
                                  const std::vector<double>& t) {
  std::vector<double> out(x.size(), 0.0);
  const std::size_t n = c.size();
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    // Four fixed accumulators keep the summation order deterministic.
    const double* tp = t.data() + i;
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    for (std::size_t s = 0; s < n4; s += 4) {
      a0 += c[s] * tp[s];
      a1 += c[s + 1] * tp[s + 1];
      a2 += c[s + 2] * tp[s + 2];
      a3 += c[s + 3] * tp[s + 3];
    }
    for (std::size_t s = n4; s < n; ++s) a0 += c[s] * tp[s];
    out[i] = x[i] * ((a0 + a1) + (a2 + a3));
  }
  return out;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

void check_targets(const std::array<std::vector<double>, 4>& targets) {
  for (int a = 0; a < 3; ++a) {
    if (targets[a].empty()) throw ValidationError("empty axis marginal");
    for (double v : targets[a]) {
      if (!(v > 0.0)) throw ValidationError("axis marginals must be strictly positive");
    }
  }
  const std::size_t d4 = targets[0].size() + targets[1].size() + targets[2].size();
  if (targets[3].size() != d4) {
    throw ValidationError("sum marginal must span the reachable range of length " +
                          std::to_string(d4));
  }
  for (double v : targets[3]) {
    if (!(v >= 0.0)) throw ValidationError("sum marginal must be nonnegative");
  }
}

}  // namespace

std::array<std::vector<double>, 4> tensor_marginals(const ScalingState& state) {
  const auto x1 = exp_shifted(state.log_xi[0]);
  const auto x2 = exp_shifted(state.log_xi[1]);
  const auto x3 = exp_shifted(state.log_xi[2]);
  const auto x4 = exp_shifted(state.log_xi[3]);
  const std::size_t reach = x1.size() + x2.size() + x3.size() - 2;  // values of i+j+k
  std::vector<double> t(reach, 0.0);
  for (std::size_t m = 0; m < reach; ++m) t[m] = x4[m] + x4[m + 1] + x4[m + 2];

  std::array<std::vector<double>, 4> out;
  out[0] = axis_marginal(x1, convolve(x2, x3), t);
  out[1] = axis_marginal(x2, convolve(x1, x3), t);
  out[2] = axis_marginal(x3, convolve(x1, x2), t);
  const auto c = convolve(convolve(x1, x2), x3);
  out[3].assign(x4.size(), 0.0);
  for (std::size_t l = 0; l < x4.size(); ++l) {
    double acc = 0.0;
    for (std::size_t e = 0; e < 3; ++e) {
      if (l >= e && l - e < c.size()) acc += c[l - e];
    }
    out[3][l] = x4[l] * acc;
  }
  const double scale = std::exp(state.log_scale);
  for (auto& v : out) {
    for (double& x : v) x *= scale;
  }
  return out;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionMismatchError("kl_divergence: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (!(q[i] > 0.0)) {
      throw ValidationError("kl_divergence: q vanishes where p is positive");
    }
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

std::array<std::vector<double>, 4> tensor_targets(const DiscreteMarginals& m) {
  std::array<std::vector<double>, 4> targets{m.mu[0], m.mu[1], m.mu[2], {}};
  const long reach = m.reachable_max();
  if (m.ell_min < 0 || m.ell_max() > reach) {
    throw ValidationError("sum marginal has cells outside the reachable range");
  }
  targets[3].assign(static_cast<std::size_t>(reach + 1), 0.0);
  for (std::size_t c = 0; c < m.mu4.size(); ++c) {
    targets[3][static_cast<std::size_t>(m.ell_min) + c] = m.mu4[c];
  }
  return targets;
}

std::size_t sinkhorn_iteration_cap(const std::array<std::vector<double>, 4>& targets,
                                   double eta) {
  double mu_min = 1.0;
  for (const auto& v : targets) {
    for (double x : v) {
      if (x > 0.0) mu_min = std::min(mu_min, x);
    }
  }
  return static_cast<std::size_t>(std::ceil(32.0 / eta * (1.0 - std::log(mu_min))));
}

ScalingState initial_state(const std::array<std::vector<double>, 4>& targets) {
  check_targets(targets);
  ScalingState s;
  for (int a = 0; a < 4; ++a) s.log_xi[a].assign(targets[a].size(), 0.0);
  s.targets = targets;
  return s;
}

void scale_axis(ScalingState& state, int axis,
                const std::array<std::vector<double>, 4>& current) {
  auto& lx = state.log_xi[axis];
  const auto& mu = state.targets[axis];
  for (std::size_t i = 0; i < lx.size(); ++i) {
    if (mu[i] == 0.0) {
      lx[i] = kNegInf;
    } else {
      lx[i] += std::log(mu[i]) - std::log(current[axis][i]);
    }
  }
  const double shift = *std::max_element(lx.begin(), lx.end());
  for (double& v : lx) v -= shift;
  state.log_scale += shift;
  // Targets sum to one, so the new mass is sum(mu) up to roundoff.
  double mass = 0.0;
  for (double v : mu) mass += v;
  state.log_scale -= std::log(mass);
}

ScalingState sinkhorn_scale(const std::array<std::vector<double>, 4>& targets, double eta,
                            const SinkhornOptions& options) {
  if (!(eta > 0.0)) throw ValidationError("eta must be positive");
  ScalingState state = initial_state(targets);
  state.eta = eta;
  state.cap = sinkhorn_iteration_cap(targets, eta);
  for (;;) {
    auto g = tensor_marginals(state);
    double mass = 0.0;
    for (double v : g[0]) mass += v;
    state.log_scale -= std::log(mass);
    for (int a = 0; a < 4; ++a) {
      for (std::size_t i = 0; i < g[a].size(); ++i) {
        g[a][i] /= mass;
        // Cells that underflowed stay finite in log space.
        if (targets[a][i] > 0.0 && !(g[a][i] >= kTiny)) g[a][i] = kTiny;
      }
    }
    double err = 0.0;
    for (int a = 0; a < 4; ++a) err += l1_distance(g[a], targets[a]);
    state.l1_error = err;
    if (err <= eta) break;
    if (state.iterations >= state.cap) {
      throw IterationCapError("tensor scaling did not reach l1 error " + std::to_string(eta) +
                              " within " + std::to_string(state.cap) +
                              " iterations (last error " + std::to_string(err) + ")");
    }
    SinkhornTraceEntry entry;
    entry.l1_error = err;
    int tau = 0;
    for (int a = 0; a < 4; ++a) {
      entry.kl[a] = kl_divergence(targets[a], g[a]);
      if (entry.kl[a] > entry.kl[tau]) tau = a;
    }
    entry.axis = tau;
    if (options.record_trace) state.trace.push_back(entry);
    scale_axis(state, tau, g);
    ++state.iterations;
  }
  return state;
}

ScalingState sinkhorn_scale(const DiscreteMarginals& marginals, double eta,
                            const SinkhornOptions& options) {
  return sinkhorn_scale(tensor_targets(marginals), eta, options);
}

}  // namespace blotto
