#include "blotto/reduction.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <tuple>

#include "blotto/errors.hpp"
#include "blotto/mixability.hpp"

namespace blotto {
namespace {

struct Group {
  double length = 0.0;
  std::size_t first = 0;  // smallest original index, the tie-breaker
  std::vector<std::size_t> members;
};

}  // namespace

ReductionPlan reduce_to_four(std::span<const MarginalSpec> specs) {
  ReductionPlan plan;
  const std::size_t n = specs.size();
  plan.slot_of.assign(n, kZeroSlot);
  plan.theta.assign(n, 0.0);

  std::vector<Group> groups;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = specs[i];
    if (!(s.p >= 0.0 && s.p <= 1.0)) {
      throw ValidationError("weight of battlefield " + std::to_string(i) + " outside [0, 1]");
    }
    if (s.p > 0.0 && !(s.b > 0.0)) {
      throw ValidationError("support length of battlefield " + std::to_string(i) +
                            " must be positive");
    }
    if (s.p == 0.0) {
      plan.i0.push_back(i);
    } else if (s.p < 1.0) {
      if (!plan.i4.empty()) throw ValidationError("more than one strict mixture");
      plan.i4.push_back(i);
      plan.slot_of[i] = kMixtureSlot;
      plan.b_star[kMixtureSlot] = s.b;
      plan.p_star4 = s.p;
    } else {
      groups.push_back({s.b, i, {i}});
    }
  }
  if (!is_jointly_mixable(specs)) {
    throw MixabilityError("marginals violate the joint-mixability condition");
  }

  // Merge the two shortest groups until three remain.
  using Key = std::tuple<double, std::size_t, std::size_t>;  // length, first, id
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
  for (std::size_t g = 0; g < groups.size(); ++g) heap.emplace(groups[g].length, groups[g].first, g);
  std::size_t alive = groups.size();
  while (alive > 3) {
    const auto [la, fa, ga] = heap.top();
    heap.pop();
    const auto [lb, fb, gb] = heap.top();
    heap.pop();
    Group merged;
    merged.length = la + lb;
    merged.first = std::min(fa, fb);
    merged.members = groups[ga].members;
    merged.members.insert(merged.members.end(), groups[gb].members.begin(),
                          groups[gb].members.end());
    std::sort(merged.members.begin(), merged.members.end());
    groups[ga].members.clear();
    groups[gb].members.clear();
    groups.push_back(std::move(merged));
    heap.emplace(groups.back().length, groups.back().first, groups.size() - 1);
    --alive;
  }
  std::vector<Group> final_groups;
  for (auto& g : groups) {
    if (!g.members.empty()) final_groups.push_back(std::move(g));
  }
  std::sort(final_groups.begin(), final_groups.end(),
            [](const Group& x, const Group& y) { return x.first < y.first; });

  for (std::size_t slot = 0; slot < final_groups.size(); ++slot) {
    const auto& g = final_groups[slot];
    plan.groups[slot] = g.members;
    plan.b_star[slot] = g.length;
    for (std::size_t i : g.members) {
      plan.slot_of[i] = static_cast<int>(slot);
      plan.theta[i] = specs[i].b / g.length;
    }
  }
  return plan;
}

MarginalSpec marginal_of_reduced(const ReductionPlan& plan, int slot) {
  if (slot < 0 || slot > kMixtureSlot) throw ValidationError("slot index out of range");
  if (slot == kMixtureSlot) {
    if (plan.i4.empty()) return {0.0, 0.0};
    return {plan.p_star4, plan.b_star[kMixtureSlot]};
  }
  if (plan.groups[slot].empty()) return {0.0, 0.0};
  return {1.0, plan.b_star[slot]};
}

}  // namespace blotto
