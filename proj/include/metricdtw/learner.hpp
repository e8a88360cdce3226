#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "metricdtw/clustering.hpp"
#include "metricdtw/dataset.hpp"
#include "metricdtw/descriptors.hpp"
#include "metricdtw/dtw.hpp"

namespace metricdtw {

// (i, j) a same-class target-neighbor pair, l a differently-labeled
// impostor; indices into the train split.
struct Triplet {
  int i = 0;
  int j = 0;
  int l = 0;
};

// Learned local metric: cluster codebook plus one nonnegative weight per
// unordered cluster pair. The weighted DTW distance between two series is
// dot(omega, pairFeature(...)).
struct MetricModel {
  Codebook codebook;
  Eigen::VectorXd omega;
  double mu = 0.5;
  DescriptorConfig descriptorCfg;
};

std::string metricModelToJson(const MetricModel& m);
MetricModel metricModelFromJson(const std::string& text);

// Accumulated squared descriptor distances along `path`, split by unordered
// cluster pair of the matched points' assignments. Entry m collects the
// matched pairs whose flat cluster-pair index is m; the vector has length
// (k^2+k)/2 and sums to the unit-weight path cost.
Eigen::VectorXd pairFeature(const DescriptorSeries& P, const DescriptorSeries& Q,
                            const AlignmentPath& path, const Codebook& cb);

// Same, with precomputed cluster assignments.
Eigen::VectorXd pairFeature(const DescriptorSeries& P, const DescriptorSeries& Q,
                            const AlignmentPath& path, const Eigen::VectorXi& clustersP,
                            const Eigen::VectorXi& clustersQ, int k);

// For each train index, the kappa nearest same-class indices by the given
// distances (ties to the lower index). Classes with fewer than kappa+1
// members contribute all available same-class indices; a singleton class
// yields an empty list and a warning on `log`.
std::vector<std::vector<int>> selectTargetNeighbors(const Eigen::MatrixXd& dists,
                                                    const std::vector<int>& labels, int kappa = 3,
                                                    std::ostream* log = nullptr);

// Active-set triplet construction: for each target pair (i, j), impostors
// are all differently-labeled l with dists(i,l) <= dists(i,j) + slack,
// where slack is the 90th percentile (nearest rank) of all target-neighbor
// distances. Target pairs with no impostor in range fall back to the single
// nearest differently-labeled point.
std::vector<Triplet> buildTriplets(const std::vector<std::vector<int>>& targets,
                                   const std::vector<int>& labels, const Eigen::MatrixXd& dists);

struct LpSolution {
  Eigen::VectorXd omega;
  double objective = 0.0;
};

// Minimizes over omega >= 0
//   (1-mu) * sum_pull dot(omega, phi_ij)
//   + mu * sum_triplets max(0, 1 - dot(omega, phi_il - phi_ij)),
// the slack-eliminated form of the max-margin metric program. Solved
// exactly as a linear program (bounded-variable revised simplex on the
// dual).
LpSolution solveMetricLp(const std::vector<Eigen::VectorXd>& pullFeatures,
                         const std::vector<Eigen::VectorXd>& diffFeatures, double mu);

struct FitConfig {
  DescriptorConfig alignDescriptor;
  DescriptorConfig learnDescriptor;
  int kClusters = 5;
  int kappa = 3;
  std::vector<double> muGrid = {0.1, 0.3, 0.5, 0.7, 0.9};
  int folds = 5;
  std::uint64_t seed = 0;
  int threads = 1;
};

// Full training pipeline: descriptors, unit-metric alignment of all train
// pairs, codebook, per-pair features, triplets, then one LP solve per mu in
// the grid scored by stratified cross-validated 1NN accuracy on train.
// Returns the model for the best-scoring mu (ties to the smaller mu).
// Deterministic given cfg.seed.
MetricModel fit(const Dataset& data, const FitConfig& cfg, std::ostream* log = nullptr);

// Per-pair feature table over one set of sequences, used by fit and shared
// with the evaluation harness. Row pairIndex(a, b, n) of `phi` holds the
// feature of pair (a, b); `unitDist(a, b)` is the unit-weight distance
// (equal to phi.row(pairIndex(a,b,n)).sum()).
struct PairFeatureTable {
  Eigen::MatrixXd phi;
  Eigen::MatrixXd unitDist;
};

PairFeatureTable computePairFeatures(const std::vector<DescriptorSeries>& alignSeries,
                                     const std::vector<DescriptorSeries>& learnSeries,
                                     const std::vector<Eigen::VectorXi>& assignments, int k,
                                     int threads = 1);

}  // namespace metricdtw
