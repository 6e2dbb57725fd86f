#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "blotto/rng.hpp"

namespace blotto {

using Rational = boost::multiprecision::cpp_rational;

// Unif{0..l_i} variables to be coupled with a constant sum.
struct DiscreteMixProblem {
  std::vector<long> lengths;

  long total() const;
};

// 2 max l <= sum l and sum l even.
bool discrete_mixable(const DiscreteMixProblem& problem);

struct CouplingNode;
using CouplingNodePtr = std::shared_ptr<const CouplingNode>;

// Node of a coupling DAG. Coordinate i ranges over 0..lengths[i] and all
// atoms sum to `sum`. Coupling nodes have Unif{0..lengths[i]} marginals;
// explicit boundary pieces inside a mixture need not. Subtrees are shared.
struct CouplingNode {
  enum class Kind { kAtoms, kMixture, kGlue };

  // Child coordinate c is placed at parent coordinate coord[c] + offset[c].
  struct Branch {
    Rational weight;
    CouplingNodePtr child;
    std::vector<int> coord;
    std::vector<long> offset;
  };

  Kind kind = Kind::kAtoms;
  std::vector<long> lengths;
  long sum = 0;
  std::string label;

  // kAtoms
  std::vector<std::vector<long>> atoms;
  std::vector<Rational> weights;

  // kMixture
  std::vector<Branch> branches;

  // kGlue: `outer` couples (M, rest...) where rest maps to outer_coords;
  // `pair` couples (Z_a, Z_b, W) with Z_a + Z_b + W = l_a + l_b, and
  // conditionally on M = m the pair is drawn given W = l_a + l_b - m.
  CouplingNodePtr outer;
  CouplingNodePtr pair;
  std::vector<int> outer_coords;
  int coord_a = 0;
  int coord_b = 0;
};

struct DiscreteCoupling {
  std::vector<long> lengths;
  long sum = 0;
  CouplingNodePtr root;
};

// Explicit joint mix; throws ValidationError unless discrete_mixable.
DiscreteCoupling build_discrete_joint_mix(const DiscreteMixProblem& problem);

using AtomMap = std::map<std::vector<long>, Rational>;

// Full joint law; throws ValidationError when more than max_atoms atoms.
AtomMap flatten(const DiscreteCoupling& coupling, std::size_t max_atoms = 2'000'000);

// Exact per-coordinate marginals.
std::vector<std::vector<Rational>> exact_marginals(const DiscreteCoupling& coupling);

struct CouplingCheck {
  bool weights_stochastic = false;
  bool sums_constant = false;
  bool marginals_uniform = false;
  std::size_t nodes = 0;

  bool ok() const { return weights_stochastic && sums_constant && marginals_uniform; }
};

// Exact verification: leaf atoms and every branch embedding are checked for
// the constant sum, weights for stochasticity, marginals against uniform.
CouplingCheck verify_coupling(const DiscreteCoupling& coupling);

std::vector<long> sample_coupling(const DiscreteCoupling& coupling, CounterRng& rng);

// JSON description: node list with atoms, branch weights as "p/q" strings.
std::string coupling_to_json(const DiscreteCoupling& coupling);

// LP feasibility over atoms of the hyperplane sum z = sum l / 2 with uniform
// marginal constraints. Requires prod (l_i + 1) <= 1e6.
bool brute_force_mix_feasible(const DiscreteMixProblem& problem);

struct DiscreteLaw {
  std::vector<long> support;
  std::vector<Rational> weights;
};

// Unif{0, 2, ..., 2m} and Unif{1, 3, ..., 2m - 1}.
DiscreteLaw uniform_even(long m);
DiscreteLaw uniform_odd(long m);

}  // namespace blotto
