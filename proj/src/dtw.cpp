#include "metricdtw/dtw.hpp"

#include <algorithm>
#include <limits>

#include "metricdtw/clustering.hpp"
#include "metricdtw/errors.hpp"
#include "metricdtw/parallel.hpp"

namespace metricdtw {

bool isValidPath(const AlignmentPath& path, Eigen::Index lenP, Eigen::Index lenQ) {
  if (path.empty()) return false;
  if (path.front() != IndexPair{0, 0}) return false;
  if (path.back() != IndexPair{lenP - 1, lenQ - 1}) return false;
  for (std::size_t t = 1; t < path.size(); ++t) {
    const Eigen::Index di = path[t].first - path[t - 1].first;
    const Eigen::Index dj = path[t].second - path[t - 1].second;
    const bool ok = (di == 1 && dj == 0) || (di == 1 && dj == 1) || (di == 0 && dj == 1);
    if (!ok) return false;
  }
  return true;
}

DtwResult align(const DescriptorSeries& P, const DescriptorSeries& Q) {
  const Eigen::Index lp = P.rows();
  const Eigen::Index lq = Q.rows();
  if (lp == 0 || lq == 0) throw ValidationError("align: empty descriptor series");
  if (P.cols() != Q.cols()) {
    throw ValidationError("align: descriptor dimensions differ (" + std::to_string(P.cols()) +
                          " vs " + std::to_string(Q.cols()) + ")");
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd acc(lp, lq);
  for (Eigen::Index i = 0; i < lp; ++i) {
    for (Eigen::Index j = 0; j < lq; ++j) {
      const double d = cellCost(P, Q, i, j);
      if (i == 0 && j == 0) {
        acc(i, j) = d;
        continue;
      }
      const double diag = (i > 0 && j > 0) ? acc(i - 1, j - 1) : kInf;
      const double up = (i > 0) ? acc(i - 1, j) : kInf;
      const double left = (j > 0) ? acc(i, j - 1) : kInf;
      acc(i, j) = d + std::min({diag, up, left});
    }
  }

  // Backtrack; among equal-cost predecessors prefer diagonal, then up,
  // then left.
  AlignmentPath path;
  Eigen::Index i = lp - 1;
  Eigen::Index j = lq - 1;
  path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    const double diag = (i > 0 && j > 0) ? acc(i - 1, j - 1) : kInf;
    const double up = (i > 0) ? acc(i - 1, j) : kInf;
    const double left = (j > 0) ? acc(i, j - 1) : kInf;
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
    path.emplace_back(i, j);
  }
  std::reverse(path.begin(), path.end());
  return {std::move(path), acc(lp - 1, lq - 1)};
}

double pathCost(const DescriptorSeries& P, const DescriptorSeries& Q, const AlignmentPath& path) {
  if (P.cols() != Q.cols()) throw ValidationError("pathCost: descriptor dimensions differ");
  if (!isValidPath(path, P.rows(), Q.rows())) throw ValidationError("pathCost: invalid path");
  double total = 0.0;
  for (const auto& [i, j] : path) total += cellCost(P, Q, i, j);
  return total;
}

double pathCost(const DescriptorSeries& P, const DescriptorSeries& Q, const AlignmentPath& path,
                const Eigen::VectorXd& omega, const Eigen::VectorXi& clustersP,
                const Eigen::VectorXi& clustersQ, int k) {
  if (P.cols() != Q.cols()) throw ValidationError("pathCost: descriptor dimensions differ");
  if (!isValidPath(path, P.rows(), Q.rows())) throw ValidationError("pathCost: invalid path");
  if (clustersP.size() != P.rows() || clustersQ.size() != Q.rows()) {
    throw ValidationError("pathCost: cluster assignment size mismatch");
  }
  if (omega.size() != numPairs(k)) throw ValidationError("pathCost: omega length != (k^2+k)/2");
  double total = 0.0;
  for (const auto& [i, j] : path) {
    total += omega[pairIndex(clustersP[i], clustersQ[j], k)] * cellCost(P, Q, i, j);
  }
  return total;
}

Eigen::MatrixXd pairwiseDtw(const std::vector<DescriptorSeries>& series, int threads) {
  const std::size_t n = series.size();
  for (std::size_t a = 1; a < n; ++a) {
    if (series[a].cols() != series[0].cols()) {
      throw ValidationError("pairwiseDtw: descriptor dimensions differ across series");
    }
  }
  Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(n));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  parallelFor(pairs.size(), threads, [&](std::size_t t) {
    const auto [a, b] = pairs[t];
    const double d = align(series[a], series[b]).distance;
    dist(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = d;
    dist(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = d;
  });
  return dist;
}

void writePathCsv(std::ostream& out, const AlignmentPath& path) {
  out << "i,j\n";
  for (const auto& [i, j] : path) out << i << ',' << j << '\n';
}

}  // namespace metricdtw
