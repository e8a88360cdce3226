#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "metricdtw/errors.hpp"
#include "metricdtw/learner.hpp"

namespace metricdtw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounded-variable revised simplex for
//   max 1'lambda  s.t.  D lambda + s = b,  0 <= lambda <= u,  s >= 0,
// the dual of the slack-eliminated metric program. Rows are scaled to unit
// magnitude for stable tolerances. Returns the row prices y at optimality,
// which are the primal weights omega.
class DualSimplex {
public:
  DualSimplex(Eigen::MatrixXd D, Eigen::VectorXd b, Eigen::VectorXd upper)
      : D_(std::move(D)), b_(std::move(b)), upper_(std::move(upper)) {
    n_ = static_cast<int>(D_.rows());
    T_ = static_cast<int>(D_.cols());
    rowScale_ = Eigen::VectorXd::Ones(n_);
    for (int m = 0; m < n_; ++m) {
      double mag = std::abs(b_[m]);
      for (int t = 0; t < T_; ++t) mag = std::max(mag, std::abs(D_(m, t)));
      if (mag > 0.0) {
        rowScale_[m] = mag;
        D_.row(m) /= mag;
        b_[m] /= mag;
      }
    }
  }

  Eigen::VectorXd solve() {
    const int cols = T_ + n_;
    basis_.resize(n_);
    std::vector<bool> isBasic(cols, false);
    std::vector<bool> atUpper(cols, false);
    for (int m = 0; m < n_; ++m) {
      basis_[m] = T_ + m;  // slack basis, feasible since b >= 0
      isBasic[T_ + m] = true;
    }
    Eigen::VectorXd xB = b_;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);

    const long maxIter = 10000 + 200L * cols;
    int degenerateStreak = 0;
    bool bland = false;

    for (long iter = 0; iter < maxIter; ++iter) {
      // Prices from the current basis.
      Eigen::MatrixXd B(n_, n_);
      Eigen::VectorXd cB(n_);
      for (int m = 0; m < n_; ++m) {
        B.col(m) = column(basis_[m]);
        cB[m] = cost(basis_[m]);
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      y = lu.transpose().solve(cB);

      // Pricing: Dantzig by default, Bland while degenerate.
      const double tol = 1e-9;
      int entering = -1;
      double bestScore = tol;
      for (int j = 0; j < cols; ++j) {
        if (isBasic[j]) continue;
        const double r = cost(j) - y.dot(column(j));
        const bool eligible = atUpper[j] ? (r < -tol) : (r > tol);
        if (!eligible) continue;
        if (bland) {
          entering = j;
          break;
        }
        if (std::abs(r) > bestScore) {
          bestScore = std::abs(r);
          entering = j;
        }
      }
      if (entering < 0) break;  // optimal

      const double sigma = atUpper[entering] ? -1.0 : 1.0;
      const Eigen::VectorXd w = lu.solve(column(entering));

      // Ratio test over basic bounds plus the entering variable's own span.
      double tMax = upperOf(entering);
      int leave = -1;
      bool leaveAtUpper = false;
      for (int m = 0; m < n_; ++m) {
        const double delta = sigma * w[m];
        if (delta > 1e-11) {
          const double limit = std::max(0.0, xB[m]) / delta;
          if (limit < tMax) {
            tMax = limit;
            leave = m;
            leaveAtUpper = false;
          }
        } else if (delta < -1e-11) {
          const double ub = upperOf(basis_[m]);
          if (ub == kInf) continue;
          const double limit = std::max(0.0, ub - xB[m]) / (-delta);
          if (limit < tMax) {
            tMax = limit;
            leave = m;
            leaveAtUpper = true;
          }
        }
      }
      if (tMax == kInf) throw ValidationError("solveMetricLp: dual unbounded");

      if (tMax < 1e-12) {
        ++degenerateStreak;
        if (degenerateStreak > 64) bland = true;
      } else {
        degenerateStreak = 0;
        bland = false;
      }

      xB -= sigma * tMax * w;
      const double enteringValue = atUpper[entering] ? upperOf(entering) - tMax : tMax;
      if (leave < 0) {
        // The entering variable traverses to its opposite bound.
        atUpper[entering] = !atUpper[entering];
      } else {
        const int leaving = basis_[leave];
        isBasic[leaving] = false;
        atUpper[leaving] = leaveAtUpper;
        basis_[leave] = entering;
        isBasic[entering] = true;
        atUpper[entering] = false;
        xB[leave] = enteringValue;
      }
    }

    // Undo row scaling; clip the tiny negative prices optimality leaves.
    Eigen::VectorXd omega(n_);
    for (int m = 0; m < n_; ++m) omega[m] = std::max(0.0, y[m] / rowScale_[m]);
    return omega;
  }

private:
  Eigen::VectorXd column(int j) const {
    if (j < T_) return D_.col(j);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
    e[j - T_] = 1.0;
    return e;
  }
  double cost(int j) const { return j < T_ ? 1.0 : 0.0; }
  double upperOf(int j) const { return j < T_ ? upper_[j] : kInf; }

  Eigen::MatrixXd D_;
  Eigen::VectorXd b_;
  Eigen::VectorXd upper_;
  Eigen::VectorXd rowScale_;
  std::vector<int> basis_;
  int n_ = 0;
  int T_ = 0;
};

}  // namespace

LpSolution solveMetricLp(const std::vector<Eigen::VectorXd>& pullFeatures,
                         const std::vector<Eigen::VectorXd>& diffFeatures, double mu) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw ValidationError("solveMetricLp: mu must lie strictly inside (0, 1)");
  }
  Eigen::Index dim = -1;
  for (const auto& f : {std::cref(pullFeatures), std::cref(diffFeatures)}) {
    for (const auto& v : f.get()) {
      if (dim < 0) dim = v.size();
      if (v.size() != dim) throw ValidationError("solveMetricLp: feature dimensions differ");
      if (!v.allFinite()) throw ValidationError("solveMetricLp: non-finite feature");
    }
  }
  if (dim < 0) throw ValidationError("solveMetricLp: no features given");

  Eigen::VectorXd pull = Eigen::VectorXd::Zero(dim);
  for (const auto& v : pullFeatures) pull += v;
  if ((pull.array() < 0.0).any()) {
    throw ValidationError("solveMetricLp: pull features must be nonnegative");
  }

  // Identical hinge columns collapse into one with a multiplied weight.
  std::map<std::vector<double>, double> merged;
  for (const auto& d : diffFeatures) {
    std::vector<double> key(d.data(), d.data() + d.size());
    merged[key] += mu;
  }

  const int T = static_cast<int>(merged.size());
  Eigen::MatrixXd D(dim, T);
  Eigen::VectorXd upper(T);
  {
    int t = 0;
    for (const auto& [key, weight] : merged) {
      D.col(t) = Eigen::Map<const Eigen::VectorXd>(key.data(), dim);
      upper[t] = weight;
      ++t;
    }
  }

  const Eigen::VectorXd b = (1.0 - mu) * pull;
  LpSolution sol;
  sol.omega = DualSimplex(D, b, upper).solve();

  double hinge = 0.0;
  for (const auto& d : diffFeatures) hinge += std::max(0.0, 1.0 - sol.omega.dot(d));
  sol.objective = (1.0 - mu) * pull.dot(sol.omega) + mu * hinge;
  return sol;
}

}  // namespace metricdtw
