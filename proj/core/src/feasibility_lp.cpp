#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "blotto/discrete_blotto.hpp"
#include "blotto/errors.hpp"

namespace blotto {
namespace {

// Phase-1 revised simplex with column generation. Rows are (coordinate i,
// value v) with right-hand side 1/(l_i + 1); an atom column has one 1 per
// coordinate. Artificial columns leave the basis for good once they exit.
class Phase1 {
 public:
  explicit Phase1(const std::vector<long>& lengths) : lengths_(lengths) {
    for (long l : lengths_) {
      row_offset_.push_back(rows_);
      rows_ += l + 1;
    }
    target_ = std::accumulate(lengths_.begin(), lengths_.end(), 0L) / 2;
    rhs_.resize(rows_);
    for (std::size_t i = 0; i < lengths_.size(); ++i) {
      for (long v = 0; v <= lengths_[i]; ++v) {
        rhs_(row_offset_[i] + v) = 1.0 / static_cast<double>(lengths_[i] + 1);
      }
    }
    basis_.assign(rows_, {});
    artificial_.assign(rows_, true);
    binv_ = Eigen::MatrixXd::Identity(rows_, rows_);
    xb_ = rhs_;
  }

  double solve(int max_iterations) {
    for (int it = 0; it < max_iterations; ++it) {
      if (it % kRefactor == kRefactor - 1) refactor();
      Eigen::VectorXd cb(rows_);
      for (long r = 0; r < rows_; ++r) cb(r) = artificial_[r] ? 1.0 : 0.0;
      const Eigen::VectorXd y = binv_.transpose() * cb;
      std::vector<long> atom;
      const double best = price(y, atom);
      // Reduced cost of the atom column is -best.
      if (best <= kPricingTol) return objective();
      const Eigen::VectorXd d = binv_ * column(atom);
      long leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (long r = 0; r < rows_; ++r) {
        if (d(r) <= kPivotTol) continue;
        const double t = std::max(0.0, xb_(r)) / d(r);
        if (t < ratio - 1e-15 || (t <= ratio + 1e-15 && leave >= 0 && d(r) > d(leave))) {
          ratio = t;
          leave = r;
        }
      }
      if (leave < 0) throw NumericalError("phase-1 simplex found an unbounded direction");
      pivot(leave, d, ratio);
      basis_[leave] = atom;
      artificial_[leave] = false;
    }
    throw IterationCapError("phase-1 simplex exceeded its iteration cap");
  }

 private:
  static constexpr int kRefactor = 50;
  static constexpr double kPricingTol = 1e-10;
  static constexpr double kPivotTol = 1e-11;

  double objective() const {
    double s = 0.0;
    for (long r = 0; r < rows_; ++r) {
      if (artificial_[r]) s += std::max(0.0, xb_(r));
    }
    return s;
  }

  Eigen::VectorXd column(const std::vector<long>& atom) const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(rows_);
    for (std::size_t i = 0; i < atom.size(); ++i) a(row_offset_[i] + atom[i]) = 1.0;
    return a;
  }

  void pivot(long leave, const Eigen::VectorXd& d, double step) {
    xb_ -= step * d;
    xb_(leave) = step;
    const Eigen::RowVectorXd pivot_row = binv_.row(leave) / d(leave);
    for (long r = 0; r < rows_; ++r) {
      if (r != leave && d(r) != 0.0) binv_.row(r) -= d(r) * pivot_row;
    }
    binv_.row(leave) = pivot_row;
  }

  void refactor() {
    Eigen::MatrixXd b(rows_, rows_);
    for (long r = 0; r < rows_; ++r) {
      if (artificial_[r]) {
        b.col(r) = Eigen::VectorXd::Unit(rows_, r);
      } else {
        b.col(r) = column(basis_[r]);
      }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
    binv_ = lu.inverse();
    xb_ = binv_ * rhs_;
  }

  // Maximizes sum_i y[i, z_i] over z in the box with sum z = target.
  double price(const Eigen::VectorXd& y, std::vector<long>& atom) const {
    const std::size_t k = lengths_.size();
    const double neg = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(k + 1, std::vector<double>(target_ + 1, neg));
    std::vector<std::vector<long>> choice(k + 1, std::vector<long>(target_ + 1, -1));
    best[0][0] = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      for (long s = 0; s <= target_; ++s) {
        if (best[i][s] == neg) continue;
        for (long v = 0; v <= lengths_[i] && s + v <= target_; ++v) {
          const double val = best[i][s] + y(row_offset_[i] + v);
          if (val > best[i + 1][s + v]) {
            best[i + 1][s + v] = val;
            choice[i + 1][s + v] = v;
          }
        }
      }
    }
    atom.assign(k, 0);
    long s = target_;
    for (std::size_t i = k; i > 0; --i) {
      atom[i - 1] = choice[i][s];
      s -= atom[i - 1];
    }
    return best[k][target_];
  }

  std::vector<long> lengths_;
  std::vector<long> row_offset_;
  long rows_ = 0;
  long target_ = 0;
  Eigen::VectorXd rhs_;
  std::vector<std::vector<long>> basis_;
  std::vector<bool> artificial_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
};

}  // namespace

bool brute_force_mix_feasible(const DiscreteMixProblem& problem) {
  if (problem.lengths.empty()) throw ValidationError("no lengths given");
  double cells = 1.0;
  for (long l : problem.lengths) {
    if (l < 0) throw ValidationError("lengths must be nonnegative");
    cells *= static_cast<double>(l + 1);
  }
  if (cells > 1e6) throw ValidationError("brute-force feasibility limited to 1e6 cells");
  if (problem.total() % 2 != 0) return false;
  Phase1 lp(problem.lengths);
  return lp.solve(100'000) <= 1e-9;
}

}  // namespace blotto
