#include "blotto/discrete_blotto.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "blotto/errors.hpp"

namespace blotto {
namespace {

using Node = CouplingNode;
using Atom = std::vector<long>;

Rational frac(long num, long den) { return Rational(num) / Rational(den); }

std::string lengths_text(const std::vector<long>& l) {
  std::string s = "(";
  for (std::size_t i = 0; i < l.size(); ++i) s += (i ? "," : "") + std::to_string(l[i]);
  return s + ")";
}

CouplingNodePtr atoms_node(std::vector<long> lengths, std::string label,
                           std::vector<Atom> atoms, std::vector<Rational> weights = {}) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kAtoms;
  n->lengths = std::move(lengths);
  n->label = std::move(label);
  n->sum = std::accumulate(atoms.front().begin(), atoms.front().end(), 0L);
  if (weights.empty()) weights.assign(atoms.size(), frac(1, static_cast<long>(atoms.size())));
  n->atoms = std::move(atoms);
  n->weights = std::move(weights);
  return n;
}

// Atoms with coordinate `fixed` at `value`, coordinate `run` over [lo, hi]
// and coordinate `rest` completing the sum.
std::vector<Atom> segment(int fixed, long value, int run, long lo, long hi, int rest,
                          long sum) {
  std::vector<Atom> out;
  for (long z = lo; z <= hi; ++z) {
    Atom a(3, 0);
    a[fixed] = value;
    a[run] = z;
    a[rest] = sum - value - z;
    out.push_back(std::move(a));
  }
  return out;
}

class Builder {
 public:
  CouplingNodePtr general(const std::vector<long>& lengths);
  CouplingNodePtr triple(const std::array<long, 3>& lengths);

 private:
  CouplingNodePtr sorted_triple(long l1, long l2, long l3);
  CouplingNodePtr equal_case(long l);
  CouplingNodePtr pair_case(long a, long m);
  CouplingNodePtr increasing_case(long l1, long l2, long l3);

  // Adds a branch placing a coupling of `sub` (indexed by parent coordinate)
  // shifted by `offset` into a 3-coordinate mixture.
  void embed(Node& parent, Rational weight, const std::array<long, 3>& sub,
             const std::array<long, 3>& offset);
  void explicit_piece(Node& parent, Rational weight, std::string label,
                      std::vector<Atom> atoms);

  std::map<std::array<long, 3>, CouplingNodePtr> memo_;
};

void Builder::explicit_piece(Node& parent, Rational weight, std::string label,
                             std::vector<Atom> atoms) {
  if (weight == 0) return;
  Node::Branch b;
  b.weight = std::move(weight);
  b.child = atoms_node(parent.lengths, std::move(label), std::move(atoms));
  b.coord = {0, 1, 2};
  b.offset = {0, 0, 0};
  parent.branches.push_back(std::move(b));
}

void Builder::embed(Node& parent, Rational weight, const std::array<long, 3>& sub,
                    const std::array<long, 3>& offset) {
  if (weight == 0) return;
  if (weight < 0) throw std::logic_error("negative branch weight in " + parent.label);
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return sub[x] < sub[y]; });
  long total = sub[0] + sub[1] + sub[2];
  if (total % 2 != 0 || 2 * sub[order[2]] > total || sub[order[0]] < 0) {
    throw std::logic_error("non-mixable sub-problem " +
                           lengths_text({sub[0], sub[1], sub[2]}) + " in " + parent.label);
  }
  Node::Branch b;
  b.weight = std::move(weight);
  b.child = sorted_triple(sub[order[0]], sub[order[1]], sub[order[2]]);
  for (int c = 0; c < 3; ++c) {
    b.coord.push_back(order[c]);
    b.offset.push_back(offset[order[c]]);
  }
  parent.branches.push_back(std::move(b));
}

CouplingNodePtr Builder::triple(const std::array<long, 3>& lengths) {
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return lengths[x] < lengths[y]; });
  auto child = sorted_triple(lengths[order[0]], lengths[order[1]], lengths[order[2]]);
  if (order == std::array<int, 3>{0, 1, 2}) return child;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kMixture;
  n->lengths = {lengths[0], lengths[1], lengths[2]};
  n->sum = child->sum;
  n->label = "permute" + lengths_text(n->lengths);
  Node::Branch b;
  b.weight = 1;
  b.child = child;
  b.coord = {order[0], order[1], order[2]};
  b.offset = {0, 0, 0};
  n->branches.push_back(std::move(b));
  return n;
}

CouplingNodePtr Builder::sorted_triple(long l1, long l2, long l3) {
  const std::array<long, 3> key{l1, l2, l3};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  CouplingNodePtr out;
  if (l1 == 0) {
    // The two remaining variables sit on an anti-diagonal.
    out = atoms_node({0, l2, l3}, "anti-diagonal" + lengths_text({0, l2, l3}),
                     segment(0, 0, 1, 0, l2, 2, l2));
  } else if (l1 == l3) {
    out = equal_case(l1);
  } else if (l2 == l3) {
    out = pair_case(l1, l2);
  } else {
    out = increasing_case(l1, l2, l3);
  }
  memo_[key] = out;
  return out;
}

CouplingNodePtr Builder::equal_case(long l) {
  const std::vector<long> lengths{l, l, l};
  if (l == 2) {
    return atoms_node(lengths, "three-cycle", {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  }
  if (l == 4) {
    return atoms_node(lengths, "ten-atom",
                      {{3, 3, 0}, {3, 0, 3}, {0, 3, 3}, {4, 1, 1}, {1, 4, 1},
                       {1, 1, 4}, {0, 2, 4}, {2, 4, 0}, {4, 0, 2}, {2, 2, 2}});
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kMixture;
  n->lengths = lengths;
  n->sum = 3 * l / 2;
  n->label = "equal" + lengths_text(lengths);
  const long half = l / 2;
  const Rational edge = frac(1, l + 1);
  for (int k = 0; k < 3; ++k) {
    const int a = k == 0 ? 1 : 0;
    const int b = k == 2 ? 1 : 2;
    explicit_piece(*n, edge, "X" + std::to_string(k + 1) + "-",
                   segment(k, 0, a, half + 1, l - 1, b, n->sum));
    explicit_piece(*n, edge, "X" + std::to_string(k + 1) + "+",
                   segment(k, l, a, 1, half - 1, b, n->sum));
  }
  explicit_piece(*n, frac(4, (l + 1) * (l - 2)), "center", {{half, half, half}});
  embed(*n, frac((l - 1) * (l - 6), (l + 1) * (l - 2)), {l - 2, l - 2, l - 2}, {1, 1, 1});
  return n;
}

CouplingNodePtr Builder::pair_case(long a, long m) {
  const std::vector<long> lengths{a, m, m};
  if (a == 2 && m == 3) {
    return atoms_node(lengths, "special(2,3,3)",
                      {{0, 3, 1}, {0, 1, 3}, {2, 2, 0}, {2, 0, 2},
                       {1, 3, 0}, {1, 0, 3}, {1, 1, 2}, {1, 2, 1}},
                      {frac(1, 6), frac(1, 6), frac(1, 6), frac(1, 6),
                       frac(1, 12), frac(1, 12), frac(1, 12), frac(1, 12)});
  }
  if (a == 2 && m == 4) {
    return atoms_node(lengths, "special(2,4,4)",
                      {{2, 3, 0}, {2, 0, 3}, {0, 4, 1}, {0, 1, 4}, {1, 2, 2},
                       {1, 0, 4}, {1, 4, 0}, {0, 3, 2}, {2, 2, 1}, {1, 1, 3}},
                      {frac(2, 15), frac(2, 15), frac(2, 15), frac(2, 15), frac(2, 15),
                       frac(1, 15), frac(1, 15), frac(1, 15), frac(1, 15), frac(1, 15)});
  }
  if (a % 2 != 0) throw std::logic_error("odd short length in " + lengths_text(lengths));
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kMixture;
  n->lengths = lengths;
  n->sum = a / 2 + m;
  n->label = "pair" + lengths_text(lengths);
  const long half = a / 2;
  const Rational edge = frac(1, m + 1);
  // Endpoints of the two long coordinates.
  explicit_piece(*n, edge, "X3-", segment(2, 0, 1, m - half, m - 1, 0, n->sum));
  explicit_piece(*n, edge, "X3+", segment(2, m, 1, 1, half, 0, n->sum));
  explicit_piece(*n, edge, "X2-", segment(1, 0, 2, m - half, m - 1, 0, n->sum));
  explicit_piece(*n, edge, "X2+", segment(1, m, 2, 1, half, 0, n->sum));
  if (a == 2) {
    explicit_piece(*n, frac(2, m + 1), "Z1", segment(0, 1, 1, 2, m - 2, 2, n->sum));
    embed(*n, frac(m - 5, m + 1), {2, m - 4, m - 4}, {0, 2, 2});
    return n;
  }
  explicit_piece(*n, frac(4, a * (m + 1)), "Y1", segment(0, half, 1, 1, m - 1, 2, n->sum));
  const Rational side = frac(2 * (m - a - 1), a * (m + 1));
  embed(*n, side, {a, m - a - 2, m - 2}, {0, half + 1, 1});
  embed(*n, side, {a, m - 2, m - a - 2}, {0, 1, half + 1});
  embed(*n, frac(m * (a - 4) + a, a * (m + 1)), {a, m - 2, m - 2}, {0, 1, 1});
  return n;
}

CouplingNodePtr Builder::increasing_case(long l1, long l2, long l3) {
  const std::vector<long> lengths{l1, l2, l3};
  if ((l1 + l2 - l3) % 2 != 0 || l1 + l2 < l3) {
    throw std::logic_error("parity bookkeeping failed for " + lengths_text(lengths));
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kMixture;
  n->lengths = lengths;
  n->sum = (l1 + l2 + l3) / 2;
  n->label = "increasing" + lengths_text(lengths);
  const long c = (l1 + l2 - l3) / 2;
  const Rational edge = frac(1, l3 + 1);
  explicit_piece(*n, edge, "X-", segment(2, 0, 0, l1 - c, l1, 1, n->sum));
  explicit_piece(*n, edge, "X+", segment(2, l3, 0, 0, c, 1, n->sum));
  const Rational p1 = frac(l3 - l2 - 1, (l3 + 1) * (c + 1));
  const Rational p2 = frac(l3 - l1 - 1, (l3 + 1) * (c + 1));
  const Rational p3 = 1 - 2 * edge - p1 - p2;
  embed(*n, p1, {l3 - l2 - 2, l2, l3 - 2}, {c + 1, 0, 1});
  embed(*n, p2, {l1, l3 - l1 - 2, l3 - 2}, {0, c + 1, 1});
  embed(*n, p3, {l1, l2, l3 - 2}, {0, 0, 1});
  return n;
}

CouplingNodePtr Builder::general(const std::vector<long>& lengths) {
  std::vector<int> live;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] > 0) live.push_back(static_cast<int>(i));
  }
  const long sum = std::accumulate(lengths.begin(), lengths.end(), 0L) / 2;
  CouplingNodePtr core;
  std::vector<long> live_lengths;
  for (int i : live) live_lengths.push_back(lengths[i]);
  if (live.empty()) {
    return atoms_node(lengths, "zero", {Atom(lengths.size(), 0)});
  } else if (live.size() == 2) {
    core = atoms_node(live_lengths, "anti-diagonal" + lengths_text(live_lengths),
                      [&] {
                        std::vector<Atom> atoms;
                        for (long z = 0; z <= live_lengths[0]; ++z) {
                          atoms.push_back({z, live_lengths[0] - z});
                        }
                        return atoms;
                      }());
  } else if (live.size() == 3) {
    core = triple({live_lengths[0], live_lengths[1], live_lengths[2]});
  } else {
    // Merge the two shortest (lowest index on ties) into one variable.
    std::vector<int> order(live_lengths.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return live_lengths[x] < live_lengths[y]; });
    const int ia = std::min(order[0], order[1]);
    const int ib = std::max(order[0], order[1]);
    const long merged = live_lengths[ia] + live_lengths[ib];
    std::vector<long> outer_lengths{merged};
    std::vector<int> outer_coords;
    for (int c = 0; c < static_cast<int>(live_lengths.size()); ++c) {
      if (c == ia || c == ib) continue;
      outer_lengths.push_back(live_lengths[c]);
      outer_coords.push_back(c);
    }
    auto g = std::make_shared<Node>();
    g->kind = Node::Kind::kGlue;
    g->lengths = live_lengths;
    g->label = "merge" + lengths_text(live_lengths);
    g->outer = general(outer_lengths);
    g->pair = triple({live_lengths[ia], live_lengths[ib], merged});
    g->outer_coords = std::move(outer_coords);
    g->coord_a = ia;
    g->coord_b = ib;
    g->sum = g->outer->sum;
    core = g;
  }
  if (live.size() == lengths.size()) return core;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::kMixture;
  n->lengths = lengths;
  n->sum = sum;
  n->label = "embed" + lengths_text(lengths);
  Node::Branch b;
  b.weight = 1;
  b.child = core;
  b.coord = live;
  b.offset.assign(live.size(), 0);
  n->branches.push_back(std::move(b));
  return n;
}

// Conditional law of the first two pair coordinates given the third.
std::vector<std::vector<std::pair<std::array<long, 2>, Rational>>> pair_conditionals(
    const AtomMap& pair, long merged) {
  std::vector<std::vector<std::pair<std::array<long, 2>, Rational>>> by_w(merged + 1);
  std::vector<Rational> mass(merged + 1);
  for (const auto& [atom, w] : pair) {
    by_w[atom[2]].push_back({{atom[0], atom[1]}, w});
    mass[atom[2]] += w;
  }
  for (long w = 0; w <= merged; ++w) {
    for (auto& entry : by_w[w]) entry.second /= mass[w];
  }
  return by_w;
}

class Flattener {
 public:
  explicit Flattener(std::size_t max_atoms) : max_atoms_(max_atoms) {}

  const AtomMap& run(const Node* node) {
    if (auto it = memo_.find(node); it != memo_.end()) return it->second;
    AtomMap out;
    switch (node->kind) {
      case Node::Kind::kAtoms:
        for (std::size_t a = 0; a < node->atoms.size(); ++a) {
          out[node->atoms[a]] += node->weights[a];
        }
        break;
      case Node::Kind::kMixture:
        for (const auto& b : node->branches) {
          const AtomMap& child = run(b.child.get());
          for (const auto& [atom, w] : child) {
            Atom z(node->lengths.size(), 0);
            for (std::size_t c = 0; c < atom.size(); ++c) z[b.coord[c]] = atom[c] + b.offset[c];
            out[z] += b.weight * w;
          }
          check(out);
        }
        break;
      case Node::Kind::kGlue: {
        const long merged = node->lengths[node->coord_a] + node->lengths[node->coord_b];
        const auto cond = pair_conditionals(run(node->pair.get()), merged);
        const AtomMap& outer = run(node->outer.get());
        for (const auto& [atom, w] : outer) {
          Atom z(node->lengths.size(), 0);
          for (std::size_t c = 1; c < atom.size(); ++c) z[node->outer_coords[c - 1]] = atom[c];
          for (const auto& [ab, pw] : cond[merged - atom[0]]) {
            z[node->coord_a] = ab[0];
            z[node->coord_b] = ab[1];
            out[z] += w * pw;
          }
          check(out);
        }
        break;
      }
    }
    return memo_.emplace(node, std::move(out)).first->second;
  }

 private:
  void check(const AtomMap& m) const {
    if (m.size() > max_atoms_) throw ValidationError("coupling has too many atoms to flatten");
  }

  std::size_t max_atoms_;
  std::unordered_map<const Node*, AtomMap> memo_;
};

using Marginals = std::vector<std::vector<Rational>>;

class MarginalComputer {
 public:
  const Marginals& run(const Node* node) {
    if (auto it = memo_.find(node); it != memo_.end()) return it->second;
    Marginals out(node->lengths.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].assign(static_cast<std::size_t>(node->lengths[i] + 1), Rational(0));
    }
    switch (node->kind) {
      case Node::Kind::kAtoms:
        for (std::size_t a = 0; a < node->atoms.size(); ++a) {
          for (std::size_t i = 0; i < out.size(); ++i) {
            out[i].at(static_cast<std::size_t>(node->atoms[a][i])) += node->weights[a];
          }
        }
        break;
      case Node::Kind::kMixture:
        for (const auto& b : node->branches) {
          const Marginals& child = run(b.child.get());
          std::vector<bool> covered(out.size(), false);
          for (std::size_t c = 0; c < child.size(); ++c) {
            covered[b.coord[c]] = true;
            for (std::size_t v = 0; v < child[c].size(); ++v) {
              out[b.coord[c]].at(v + static_cast<std::size_t>(b.offset[c])) +=
                  b.weight * child[c][v];
            }
          }
          for (std::size_t i = 0; i < out.size(); ++i) {
            if (!covered[i]) out[i][0] += b.weight;
          }
        }
        break;
      case Node::Kind::kGlue: {
        const Marginals& outer = run(node->outer.get());
        for (std::size_t c = 1; c < outer.size(); ++c) out[node->outer_coords[c - 1]] = outer[c];
        const long merged = node->lengths[node->coord_a] + node->lengths[node->coord_b];
        const auto cond = pair_conditionals(Flattener(2'000'000).run(node->pair.get()), merged);
        for (long m = 0; m <= merged; ++m) {
          const Rational& pm = outer[0][static_cast<std::size_t>(m)];
          for (const auto& [ab, pw] : cond[merged - m]) {
            out[node->coord_a][static_cast<std::size_t>(ab[0])] += pm * pw;
            out[node->coord_b][static_cast<std::size_t>(ab[1])] += pm * pw;
          }
        }
        break;
      }
    }
    return memo_.emplace(node, std::move(out)).first->second;
  }

 private:
  std::unordered_map<const Node*, Marginals> memo_;
};

bool node_is_consistent(const Node& n) {
  const std::size_t k = n.lengths.size();
  switch (n.kind) {
    case Node::Kind::kAtoms: {
      if (n.atoms.size() != n.weights.size() || n.atoms.empty()) return false;
      Rational total = 0;
      for (std::size_t a = 0; a < n.atoms.size(); ++a) {
        const auto& z = n.atoms[a];
        if (z.size() != k || n.weights[a] < 0) return false;
        long s = 0;
        for (std::size_t i = 0; i < k; ++i) {
          if (z[i] < 0 || z[i] > n.lengths[i]) return false;
          s += z[i];
        }
        if (s != n.sum) return false;
        total += n.weights[a];
      }
      return total == 1;
    }
    case Node::Kind::kMixture: {
      if (n.branches.empty()) return false;
      Rational total = 0;
      for (const auto& b : n.branches) {
        if (b.weight < 0 || !b.child) return false;
        const auto& c = *b.child;
        if (b.coord.size() != c.lengths.size() || b.offset.size() != c.lengths.size()) {
          return false;
        }
        std::set<int> seen;
        long s = c.sum;
        for (std::size_t j = 0; j < b.coord.size(); ++j) {
          const int p = b.coord[j];
          if (p < 0 || static_cast<std::size_t>(p) >= k || !seen.insert(p).second) return false;
          if (b.offset[j] < 0 || b.offset[j] + c.lengths[j] > n.lengths[p]) return false;
          s += b.offset[j];
        }
        if (s != n.sum) return false;
        total += b.weight;
      }
      return total == 1;
    }
    case Node::Kind::kGlue: {
      if (!n.outer || !n.pair) return false;
      const long merged = n.lengths[n.coord_a] + n.lengths[n.coord_b];
      if (n.pair->lengths != std::vector<long>{n.lengths[n.coord_a], n.lengths[n.coord_b], merged}) {
        return false;
      }
      if (n.pair->sum != merged || n.outer->lengths.empty() || n.outer->lengths[0] != merged) {
        return false;
      }
      if (n.outer_coords.size() + 1 != n.outer->lengths.size()) return false;
      for (std::size_t c = 0; c < n.outer_coords.size(); ++c) {
        if (n.outer->lengths[c + 1] != n.lengths[n.outer_coords[c]]) return false;
      }
      return n.outer->sum == n.sum;
    }
  }
  return false;
}

void collect(const Node* n, std::vector<const Node*>& order,
             std::unordered_map<const Node*, std::size_t>& ids) {
  if (ids.count(n)) return;
  ids[n] = order.size();
  order.push_back(n);
  for (const auto& b : n->branches) collect(b.child.get(), order, ids);
  if (n->outer) collect(n->outer.get(), order, ids);
  if (n->pair) collect(n->pair.get(), order, ids);
}

std::size_t pick_weight(const std::vector<Rational>& weights, CounterRng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i].convert_to<double>();
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

Atom sample_node(const Node& n, CounterRng& rng) {
  switch (n.kind) {
    case Node::Kind::kAtoms:
      return n.atoms[pick_weight(n.weights, rng)];
    case Node::Kind::kMixture: {
      std::vector<Rational> w;
      for (const auto& b : n.branches) w.push_back(b.weight);
      const auto& b = n.branches[pick_weight(w, rng)];
      const Atom child = sample_node(*b.child, rng);
      Atom z(n.lengths.size(), 0);
      for (std::size_t c = 0; c < child.size(); ++c) z[b.coord[c]] = child[c] + b.offset[c];
      return z;
    }
    case Node::Kind::kGlue: {
      const Atom outer = sample_node(*n.outer, rng);
      const long merged = n.lengths[n.coord_a] + n.lengths[n.coord_b];
      // W is uniform, so rejection needs merged + 1 tries on average.
      Atom pair;
      do {
        pair = sample_node(*n.pair, rng);
      } while (pair[2] != merged - outer[0]);
      Atom z(n.lengths.size(), 0);
      for (std::size_t c = 1; c < outer.size(); ++c) z[n.outer_coords[c - 1]] = outer[c];
      z[n.coord_a] = pair[0];
      z[n.coord_b] = pair[1];
      return z;
    }
  }
  return {};
}

std::string rational_text(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

}  // namespace

long DiscreteMixProblem::total() const {
  return std::accumulate(lengths.begin(), lengths.end(), 0L);
}

bool discrete_mixable(const DiscreteMixProblem& problem) {
  if (problem.lengths.empty()) return false;
  for (long l : problem.lengths) {
    if (l < 0) throw ValidationError("lengths must be nonnegative");
  }
  const long total = problem.total();
  const long mx = *std::max_element(problem.lengths.begin(), problem.lengths.end());
  return 2 * mx <= total && total % 2 == 0;
}

DiscreteCoupling build_discrete_joint_mix(const DiscreteMixProblem& problem) {
  if (!discrete_mixable(problem)) {
    throw ValidationError("lengths " + lengths_text(problem.lengths) + " are not jointly mixable");
  }
  Builder builder;
  DiscreteCoupling out;
  out.lengths = problem.lengths;
  out.sum = problem.total() / 2;
  out.root = builder.general(problem.lengths);
  return out;
}

AtomMap flatten(const DiscreteCoupling& coupling, std::size_t max_atoms) {
  Flattener f(max_atoms);
  return f.run(coupling.root.get());
}

std::vector<std::vector<Rational>> exact_marginals(const DiscreteCoupling& coupling) {
  MarginalComputer m;
  return m.run(coupling.root.get());
}

CouplingCheck verify_coupling(const DiscreteCoupling& coupling) {
  CouplingCheck out;
  std::vector<const Node*> nodes;
  std::unordered_map<const Node*, std::size_t> ids;
  collect(coupling.root.get(), nodes, ids);
  out.nodes = nodes.size();
  out.weights_stochastic = true;
  out.sums_constant = coupling.root->sum == coupling.sum &&
                      coupling.root->lengths == coupling.lengths;
  for (const Node* n : nodes) {
    if (!node_is_consistent(*n)) {
      out.sums_constant = false;
      out.weights_stochastic = false;
    }
  }
  const auto marg = exact_marginals(coupling);
  out.marginals_uniform = marg.size() == coupling.lengths.size();
  for (std::size_t i = 0; out.marginals_uniform && i < marg.size(); ++i) {
    const Rational expected = frac(1, coupling.lengths[i] + 1);
    for (const auto& m : marg[i]) {
      if (m != expected) {
        out.marginals_uniform = false;
        break;
      }
    }
  }
  return out;
}

std::vector<long> sample_coupling(const DiscreteCoupling& coupling, CounterRng& rng) {
  return sample_node(*coupling.root, rng);
}

std::string coupling_to_json(const DiscreteCoupling& coupling) {
  using nlohmann::json;
  std::vector<const Node*> nodes;
  std::unordered_map<const Node*, std::size_t> ids;
  collect(coupling.root.get(), nodes, ids);
  json j;
  j["lengths"] = coupling.lengths;
  j["sum"] = coupling.sum;
  j["root"] = 0;
  json list = json::array();
  for (const Node* n : nodes) {
    json e;
    e["id"] = ids[n];
    e["label"] = n->label;
    e["lengths"] = n->lengths;
    e["sum"] = n->sum;
    switch (n->kind) {
      case Node::Kind::kAtoms: {
        e["kind"] = "atoms";
        json atoms = json::array();
        for (std::size_t a = 0; a < n->atoms.size(); ++a) {
          atoms.push_back({{"atom", n->atoms[a]}, {"weight", rational_text(n->weights[a])}});
        }
        e["atoms"] = std::move(atoms);
        break;
      }
      case Node::Kind::kMixture: {
        e["kind"] = "mixture";
        json branches = json::array();
        for (const auto& b : n->branches) {
          branches.push_back({{"weight", rational_text(b.weight)},
                              {"child", ids[b.child.get()]},
                              {"coord", b.coord},
                              {"offset", b.offset}});
        }
        e["branches"] = std::move(branches);
        break;
      }
      case Node::Kind::kGlue:
        e["kind"] = "merge";
        e["outer"] = ids[n->outer.get()];
        e["pair"] = ids[n->pair.get()];
        e["outer_coords"] = n->outer_coords;
        e["coord_a"] = n->coord_a;
        e["coord_b"] = n->coord_b;
        break;
    }
    list.push_back(std::move(e));
  }
  j["nodes"] = std::move(list);
  return j.dump(2);
}

DiscreteLaw uniform_even(long m) {
  if (m < 0) throw ValidationError("uniform_even: m must be nonnegative");
  DiscreteLaw law;
  for (long z = 0; z <= m; ++z) law.support.push_back(2 * z);
  law.weights.assign(law.support.size(), frac(1, m + 1));
  return law;
}

DiscreteLaw uniform_odd(long m) {
  if (m < 1) throw ValidationError("uniform_odd: m must be positive");
  DiscreteLaw law;
  for (long z = 1; z <= m; ++z) law.support.push_back(2 * z - 1);
  law.weights.assign(law.support.size(), frac(1, m));
  return law;
}

}  // namespace blotto
