#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "blotto/lotto_solver.hpp"

namespace blotto {

inline constexpr int kZeroSlot = -1;
inline constexpr int kMixtureSlot = 3;

// Battlefields sorted into sure zeros, three merged uniform groups (slots
// 0..2) and at most one strict mixture (slot 3). Empty slots are padded
// with length zero.
struct ReductionPlan {
  std::vector<std::size_t> i0;
  std::array<std::vector<std::size_t>, 3> groups;
  std::vector<std::size_t> i4;
  std::vector<int> slot_of;     // per battlefield: kZeroSlot, 0..2 or 3
  std::vector<double> theta;    // b_i / b*_slot on merged indices, else 0
  std::array<double, 4> b_star{};
  double p_star4 = 0.0;

  std::size_t n() const { return slot_of.size(); }
};

// Requires at most one p in (0, 1) and jointly mixable specs.
ReductionPlan reduce_to_four(std::span<const MarginalSpec> specs);

// Reduced marginal of a slot; padded slots are point masses (p = 0, b = 0).
MarginalSpec marginal_of_reduced(const ReductionPlan& plan, int slot);

}  // namespace blotto
