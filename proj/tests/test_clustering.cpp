#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "metricdtw/clustering.hpp"
#include "metricdtw/errors.hpp"
#include "metricdtw/random.hpp"

using namespace metricdtw;

namespace {

Eigen::MatrixXd randomPoints(RandomStream& rng, int n, int dim) {
  Eigen::MatrixXd m(n, dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < dim; ++j) m(i, j) = rng.gaussian();
  }
  return m;
}

void checkLloydFixpoint(const Eigen::MatrixXd& points, const Codebook& cb) {
  const int k = cb.k();
  const Eigen::VectorXi labels = assignAll(cb, points);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    // Condition 1: every point sits with its nearest centroid.
    double bestDist = (cb.centroids.row(0) - points.row(i)).squaredNorm();
    for (int c = 1; c < k; ++c) {
      bestDist = std::min(bestDist, (cb.centroids.row(c) - points.row(i)).squaredNorm());
    }
    CHECK((cb.centroids.row(labels[i]) - points.row(i)).squaredNorm() ==
          doctest::Approx(bestDist).epsilon(1e-12));
    sums.row(labels[i]) += points.row(i);
    ++counts[labels[i]];
  }
  // Condition 2: every centroid is the mean of its members.
  for (int c = 0; c < k; ++c) {
    REQUIRE(counts[c] > 0);
    CHECK((cb.centroids.row(c) - sums.row(c) / counts[c]).norm() < 1e-9);
  }
}

}  // namespace

TEST_CASE("k=1 gives the global mean") {
  RandomStream rng(1);
  const Eigen::MatrixXd points = randomPoints(rng, 20, 3);
  const Codebook cb = fitKmeans(points, 1, 42);
  CHECK((cb.centroids.row(0) - points.colwise().mean()).norm() < 1e-12);
}

TEST_CASE("two separated blobs are recovered exactly") {
  RandomStream rng(2);
  Eigen::MatrixXd points(16, 2);
  for (int i = 0; i < 8; ++i) points.row(i) = Eigen::RowVector2d(0, 0) + 0.1 * randomPoints(rng, 1, 2);
  for (int i = 8; i < 16; ++i) points.row(i) = Eigen::RowVector2d(50, 50) + 0.1 * randomPoints(rng, 1, 2);
  const Codebook cb = fitKmeans(points, 2, 7);

  const Eigen::RowVector2d meanA = points.topRows(8).colwise().mean();
  const Eigen::RowVector2d meanB = points.bottomRows(8).colwise().mean();
  const bool ordered = (cb.centroids.row(0) - meanA).norm() < 1e-9;
  const auto& c0 = ordered ? meanA : meanB;
  const auto& c1 = ordered ? meanB : meanA;
  CHECK((cb.centroids.row(0) - c0).norm() < 1e-9);
  CHECK((cb.centroids.row(1) - c1).norm() < 1e-9);
}

TEST_CASE("lloyd fixpoint conditions hold on random data") {
  RandomStream rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 10 + static_cast<int>(rng.below(30));
    const Eigen::MatrixXd points = randomPoints(rng, n, 2);
    const int k = 2 + static_cast<int>(rng.below(3));
    const Codebook cb = fitKmeans(points, k, 100 + trial);
    checkLloydFixpoint(points, cb);
  }
}

TEST_CASE("determinism: same seed, same codebook; k above distinct count rejected") {
  RandomStream rng(4);
  const Eigen::MatrixXd points = randomPoints(rng, 25, 3);
  const Codebook a = fitKmeans(points, 4, 9);
  const Codebook b = fitKmeans(points, 4, 9);
  CHECK(a.centroids == b.centroids);

  Eigen::MatrixXd dup(4, 2);
  dup << 1, 1, 1, 1, 2, 2, 2, 2;
  CHECK_THROWS_AS(fitKmeans(dup, 3, 0), ValidationError);
  CHECK(fitKmeans(dup, 2, 0).k() == 2);
}

TEST_CASE("assign: exact centroid, tie to the lower index, oracle scan") {
  Codebook cb;
  cb.centroids.resize(3, 2);
  cb.centroids << 0, 0, 2, 0, 4, 0;
  CHECK(assign(cb, Eigen::Vector2d(4, 0)) == 2);
  CHECK(assign(cb, Eigen::Vector2d(1, 5)) == 0);  // equidistant from 0 and 1

  RandomStream rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Vector2d v(rng.gaussian() * 3, rng.gaussian() * 3);
    int expected = 0;
    double bd = (cb.centroids.row(0).transpose() - v).squaredNorm();
    for (int c = 1; c < 3; ++c) {
      const double d = (cb.centroids.row(c).transpose() - v).squaredNorm();
      if (d < bd) {
        bd = d;
        expected = c;
      }
    }
    CHECK(assign(cb, v) == expected);
  }
  CHECK_THROWS_AS(assign(cb, Eigen::Vector3d(0, 0, 0)), ValidationError);
}

TEST_CASE("pair index: closed form matches derived values") {
  CHECK(pairIndex(0, 0, 5) == 0);
  CHECK(pairIndex(4, 4, 5) == 14);
  CHECK(numPairs(5) == 15);
  CHECK(pairIndex(1, 3, 5) == pairIndex(3, 1, 5));
  // Closed form: lo*k - lo*(lo-1)/2 + (hi-lo) = 1*5 - 0 + 2.
  CHECK(pairIndex(1, 3, 5) == 7);
}

TEST_CASE("pair index is a symmetric bijection for many k") {
  for (int k = 1; k <= 12; ++k) {
    std::set<int> seen;
    for (int a = 0; a < k; ++a) {
      for (int b = a; b < k; ++b) {
        const int idx = pairIndex(a, b, k);
        CHECK(idx == pairIndex(b, a, k));
        CHECK(idx >= 0);
        CHECK(idx < numPairs(k));
        seen.insert(idx);
      }
    }
    CHECK(static_cast<int>(seen.size()) == numPairs(k));
  }
  CHECK_THROWS_AS(pairIndex(0, 5, 5), ValidationError);
  CHECK_THROWS_AS(pairIndex(-1, 0, 5), ValidationError);
}

TEST_CASE("codebook json round trip") {
  RandomStream rng(6);
  const Eigen::MatrixXd points = randomPoints(rng, 12, 3);
  const Codebook cb = fitKmeans(points, 3, 11);
  const Codebook back = codebookFromJson(codebookToJson(cb));
  CHECK(back.k() == cb.k());
  CHECK(back.centroids == cb.centroids);
}
