#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace metricdtw {

// k-means codebook over descriptor space; one centroid per row.
struct Codebook {
  Eigen::MatrixXd centroids;

  int k() const { return static_cast<int>(centroids.rows()); }
  Eigen::Index dim() const { return centroids.cols(); }
};

// Lloyd's algorithm from k-means++ seeding (seeded RNG), run to assignment
// fixpoint or 100 iterations. Empty clusters are reseeded to the point
// farthest from its current centroid. Deterministic given the seed. Points
// are rows of `points`; if there are more than 100,000 rows, fitting runs
// on a uniform subsample of 100,000 (assignment afterwards still sees every
// point). Throws if k exceeds the number of distinct points.
Codebook fitKmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed);

// Index of the nearest centroid by squared Euclidean distance; ties go to
// the lowest index.
int assign(const Codebook& cb, const Eigen::Ref<const Eigen::VectorXd>& v);

// Row-wise assignment.
Eigen::VectorXi assignAll(const Codebook& cb, const Eigen::MatrixXd& points);

inline int numPairs(int k) { return k * (k + 1) / 2; }

// Canonical flat index of the unordered cluster pair {a, b}: with
// (lo, hi) = (min, max), index = lo*k - lo*(lo-1)/2 + (hi - lo). Bijective
// onto 0..(k^2+k)/2 - 1 and symmetric in its arguments.
int pairIndex(int a, int b, int k);

// JSON form {k, dim, centroids[][]}.
std::string codebookToJson(const Codebook& cb);
Codebook codebookFromJson(const std::string& text);

}  // namespace metricdtw
