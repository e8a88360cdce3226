#pragma once

#include <Eigen/Core>
#include <ostream>
#include <utility>
#include <vector>

#include "metricdtw/descriptors.hpp"

namespace metricdtw {

// Matched index pair (i into P, j into Q).
using IndexPair = std::pair<Eigen::Index, Eigen::Index>;

// Monotone unit-step alignment: starts at (0,0), ends at (Lp-1, Lq-1),
// consecutive steps in {(1,0),(1,1),(0,1)}.
using AlignmentPath = std::vector<IndexPair>;

bool isValidPath(const AlignmentPath& path, Eigen::Index lenP, Eigen::Index lenQ);

struct DtwResult {
  AlignmentPath path;
  double distance = 0.0;
};

// Squared Euclidean cost between row i of P and row j of Q. Single source of
// per-cell cost for the whole library, so path costs recomputed elsewhere
// match the DP accumulation bit for bit.
inline double cellCost(const DescriptorSeries& P, const DescriptorSeries& Q, Eigen::Index i,
                       Eigen::Index j) {
  return (P.row(i) - Q.row(j)).squaredNorm();
}

// Minimum-cost alignment under the unit step pattern with no warping window.
// Ties between equal-cost predecessors break diagonal > up > left, making
// the returned path deterministic.
DtwResult align(const DescriptorSeries& P, const DescriptorSeries& Q);

// Sum of cellCost along `path`. Throws if the path is invalid.
double pathCost(const DescriptorSeries& P, const DescriptorSeries& Q, const AlignmentPath& path);

// Weighted sum: each matched pair contributes omega[pairIndex(cP[i], cQ[j])]
// times its squared descriptor distance. `clustersP`/`clustersQ` assign each
// row to one of k clusters.
double pathCost(const DescriptorSeries& P, const DescriptorSeries& Q, const AlignmentPath& path,
                const Eigen::VectorXd& omega, const Eigen::VectorXi& clustersP,
                const Eigen::VectorXi& clustersQ, int k);

// Symmetric distance matrix with zero diagonal; entries for a < b are
// computed once and mirrored. Cells are independent, so the computation is
// data-parallel and deterministic for any thread count.
Eigen::MatrixXd pairwiseDtw(const std::vector<DescriptorSeries>& series, int threads = 1);

// CSV rows "i,j", one per matched pair.
void writePathCsv(std::ostream& out, const AlignmentPath& path);

}  // namespace metricdtw
