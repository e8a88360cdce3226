#include "metricdtw/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "metricdtw/errors.hpp"
#include "metricdtw/random.hpp"
#include "json.hpp"

namespace metricdtw {

namespace {

constexpr Eigen::Index kMaxFitPoints = 100000;
constexpr int kMaxLloydIterations = 100;

Eigen::Index countDistinctRows(const Eigen::MatrixXd& points, Eigen::Index cap) {
  std::set<std::vector<double>> seen;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::vector<double> row(points.row(i).begin(), points.row(i).end());
    seen.insert(std::move(row));
    if (static_cast<Eigen::Index>(seen.size()) >= cap) break;
  }
  return static_cast<Eigen::Index>(seen.size());
}

int nearestCentroid(const Eigen::MatrixXd& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& p,
                    double* bestDist = nullptr) {
  int best = 0;
  double bd = (centroids.row(0) - p).squaredNorm();
  for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
    const double d = (centroids.row(c) - p).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(c);
    }
  }
  if (bestDist) *bestDist = bd;
  return best;
}

}  // namespace

Codebook fitKmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
  if (points.rows() == 0) throw ValidationError("fitKmeans: no points");
  if (k < 1) throw ValidationError("fitKmeans: k < 1");
  if (!points.allFinite()) throw ValidationError("fitKmeans: non-finite point");
  if (countDistinctRows(points, k) < k) {
    throw ValidationError("fitKmeans: k = " + std::to_string(k) +
                          " exceeds the number of distinct points");
  }

  RandomStream rng(seed);

  Eigen::MatrixXd data;
  if (points.rows() > kMaxFitPoints) {
    // Uniform subsample without replacement (partial Fisher-Yates).
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(points.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    for (Eigen::Index i = 0; i < kMaxFitPoints; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng.below(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    data.resize(kMaxFitPoints, points.cols());
    for (Eigen::Index i = 0; i < kMaxFitPoints; ++i) data.row(i) = points.row(idx[i]);
  } else {
    data = points;
  }
  const Eigen::Index n = data.rows();

  // k-means++ seeding.
  Eigen::MatrixXd centroids(k, data.cols());
  centroids.row(0) = data.row(static_cast<Eigen::Index>(rng.below(n)));
  Eigen::VectorXd minDist(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    minDist[i] = (data.row(i) - centroids.row(0)).squaredNorm();
  }
  for (int c = 1; c < k; ++c) {
    const double total = minDist.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        cum += minDist[i];
        if (cum >= target) {
          pick = i;
          break;
        }
      }
      // Zero-weight picks can only arise from rounding; move to the next
      // point with positive weight.
      while (minDist[pick] == 0.0) pick = (pick + 1) % n;
    } else {
      pick = static_cast<Eigen::Index>(rng.below(n));
    }
    centroids.row(c) = data.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      minDist[i] = std::min(minDist[i], (data.row(i) - centroids.row(c)).squaredNorm());
    }
  }

  // Lloyd iterations to assignment fixpoint. The update phase recomputes
  // means after every empty-cluster reseed, so when an assignment pass
  // leaves labels unchanged, the centroids are exactly the member means.
  Eigen::VectorXi labels = Eigen::VectorXi::Constant(n, -1);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = nearestCentroid(centroids, data.row(i));
      if (c != labels[i]) {
        labels[i] = c;
        changed = true;
      }
    }
    if (!changed) break;

    for (int round = 0; round <= k; ++round) {
      Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, data.cols());
      Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
      for (Eigen::Index i = 0; i < n; ++i) {
        sums.row(labels[i]) += data.row(i);
        ++counts[labels[i]];
      }
      int empty = -1;
      for (int c = 0; c < k; ++c) {
        if (counts[c] > 0) {
          centroids.row(c) = sums.row(c) / counts[c];
        } else if (empty < 0) {
          empty = c;
        }
      }
      if (empty < 0) break;
      // Reseed the empty cluster to the point farthest from its centroid,
      // never orphaning a singleton cluster.
      Eigen::Index far = -1;
      double fd = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (counts[labels[i]] < 2) continue;
        const double d = (data.row(i) - centroids.row(labels[i])).squaredNorm();
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      if (far < 0) break;
      centroids.row(empty) = data.row(far);
      labels[far] = empty;
    }
  }
  return Codebook{std::move(centroids)};
}

int assign(const Codebook& cb, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != cb.dim()) {
    throw ValidationError("assign: vector dimension " + std::to_string(v.size()) +
                          " != codebook dimension " + std::to_string(cb.dim()));
  }
  return nearestCentroid(cb.centroids, v.transpose());
}

Eigen::VectorXi assignAll(const Codebook& cb, const Eigen::MatrixXd& points) {
  if (points.cols() != cb.dim()) throw ValidationError("assignAll: dimension mismatch");
  Eigen::VectorXi labels(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    labels[i] = nearestCentroid(cb.centroids, points.row(i));
  }
  return labels;
}

int pairIndex(int a, int b, int k) {
  if (a < 0 || b < 0 || a >= k || b >= k) {
    throw ValidationError("pairIndex: cluster index out of range for k = " + std::to_string(k));
  }
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  return lo * k - lo * (lo - 1) / 2 + (hi - lo);
}

std::string codebookToJson(const Codebook& cb) {
  nlohmann::json j;
  j["k"] = cb.k();
  j["dim"] = cb.dim();
  auto& rows = j["centroids"] = nlohmann::json::array();
  for (Eigen::Index c = 0; c < cb.centroids.rows(); ++c) {
    rows.push_back(std::vector<double>(cb.centroids.row(c).begin(), cb.centroids.row(c).end()));
  }
  return j.dump();
}

Codebook codebookFromJson(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const int k = j.at("k").get<int>();
  const Eigen::Index dim = j.at("dim").get<Eigen::Index>();
  const auto& rows = j.at("centroids");
  if (static_cast<int>(rows.size()) != k) throw ValidationError("codebook json: k mismatch");
  Codebook cb;
  cb.centroids.resize(k, dim);
  for (int c = 0; c < k; ++c) {
    const auto row = rows[c].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != dim) {
      throw ValidationError("codebook json: centroid dimension mismatch");
    }
    cb.centroids.row(c) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), dim);
  }
  if (!cb.centroids.allFinite()) throw ValidationError("codebook json: non-finite centroid");
  return cb;
}

}  // namespace metricdtw
