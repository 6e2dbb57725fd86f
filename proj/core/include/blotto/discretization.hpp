#pragma once

#include <array>
#include <vector>

#include "blotto/reduction.hpp"

namespace blotto {

// Laws of the quantized reduced variables. Axis j holds floor(Y_j / h);
// mu4[m] is the law of ell = floor((T - Y_4) / h) at ell = ell_min + m.
struct DiscreteMarginals {
  double h = 0.0;
  double budget = 0.0;
  std::array<double, 4> b_star{};
  double p_star4 = 0.0;
  std::array<std::vector<double>, 3> mu;
  std::vector<double> mu4;
  long ell_min = 0;

  long ell_max() const { return ell_min + static_cast<long>(mu4.size()) - 1; }
  std::size_t dim(int axis) const { return mu[axis].size(); }
  // Largest reachable i + j + k + e.
  long reachable_max() const {
    return static_cast<long>(dim(0) + dim(1) + dim(2)) - 3 + 2;
  }
};

// Cell masses of floor(Y / h) for Y ~ Unif[0, b]; trailing empty cell dropped.
std::vector<double> uniform_cells(double b, double h);

// Law of floor((T - Y) / h) for Y ~ (1 - p) delta_0 + p Unif[0, b], as
// (offset, masses).
std::pair<long, std::vector<double>> anti_diagonal_cells(double budget, double p,
                                                         double b, double h);

DiscreteMarginals discretize(const ReductionPlan& plan, double budget, double h);

}  // namespace blotto
