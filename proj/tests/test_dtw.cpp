#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "metricdtw/clustering.hpp"
#include "metricdtw/dtw.hpp"
#include "metricdtw/errors.hpp"
#include "metricdtw/random.hpp"
#include "oracles.hpp"

using namespace metricdtw;

namespace {

DescriptorSeries randomSeries(RandomStream& rng, Eigen::Index rows, Eigen::Index cols) {
  DescriptorSeries m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  }
  return m;
}

}  // namespace

TEST_CASE("aligning a series with itself gives zero along the diagonal") {
  RandomStream rng(3);
  const DescriptorSeries P = randomSeries(rng, 7, 4);
  const DtwResult r = align(P, P);
  CHECK(r.distance == 0.0);
  REQUIRE(r.path.size() == 7);
  for (Eigen::Index t = 0; t < 7; ++t) {
    CHECK(r.path[static_cast<std::size_t>(t)] == IndexPair{t, t});
  }
}

TEST_CASE("length-1 P forces a single-row path") {
  RandomStream rng(4);
  const DescriptorSeries P = randomSeries(rng, 1, 3);
  const DescriptorSeries Q = randomSeries(rng, 5, 3);
  const DtwResult r = align(P, Q);
  REQUIRE(r.path.size() == 5);
  double expected = 0.0;
  for (Eigen::Index j = 0; j < 5; ++j) {
    CHECK(r.path[static_cast<std::size_t>(j)] == IndexPair{0, j});
    expected += (P.row(0) - Q.row(j)).squaredNorm();
  }
  CHECK(r.distance == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("distance matches exhaustive enumeration on random small instances") {
  RandomStream rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto lp = 2 + static_cast<Eigen::Index>(rng.below(5));
    const auto lq = 2 + static_cast<Eigen::Index>(rng.below(5));
    const auto dim = 1 + static_cast<Eigen::Index>(rng.below(3));
    const DescriptorSeries P = randomSeries(rng, lp, dim);
    const DescriptorSeries Q = randomSeries(rng, lq, dim);
    const DtwResult r = align(P, Q);
    const double brute = oracles::bruteForceDtw(P, Q);
    CHECK(r.distance == doctest::Approx(brute).epsilon(1e-12));
    CHECK(isValidPath(r.path, lp, lq));
  }
}

TEST_CASE("alignment distance is symmetric and nonnegative") {
  RandomStream rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const DescriptorSeries P = randomSeries(rng, 2 + rng.below(8), 3);
    const DescriptorSeries Q = randomSeries(rng, 2 + rng.below(8), 3);
    const double ab = align(P, Q).distance;
    const double ba = align(Q, P).distance;
    CHECK(ab >= 0.0);
    CHECK(ab == ba);
  }
}

TEST_CASE("dimension mismatch rejected") {
  RandomStream rng(5);
  const DescriptorSeries P = randomSeries(rng, 4, 3);
  const DescriptorSeries Q = randomSeries(rng, 4, 2);
  CHECK_THROWS_AS(align(P, Q), ValidationError);
}

TEST_CASE("path validation catches malformed paths") {
  CHECK(isValidPath({{0, 0}, {1, 1}, {2, 2}}, 3, 3));
  CHECK_FALSE(isValidPath({}, 1, 1));
  CHECK_FALSE(isValidPath({{0, 0}, {1, 1}}, 3, 3));          // wrong endpoint
  CHECK_FALSE(isValidPath({{0, 1}, {1, 1}, {2, 2}}, 3, 3));  // wrong start
  CHECK_FALSE(isValidPath({{0, 0}, {2, 1}, {2, 2}}, 3, 3));  // step too long
  CHECK_FALSE(isValidPath({{0, 0}, {1, 1}, {0, 2}, {2, 2}}, 3, 3));  // not monotone
}

TEST_CASE("unit path cost reproduces the DP distance exactly") {
  RandomStream rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const DescriptorSeries P = randomSeries(rng, 2 + rng.below(10), 4);
    const DescriptorSeries Q = randomSeries(rng, 2 + rng.below(10), 4);
    const DtwResult r = align(P, Q);
    CHECK(pathCost(P, Q, r.path) == r.distance);
  }
}

TEST_CASE("all-ones weights equal the unit cost exactly") {
  RandomStream rng(22);
  const DescriptorSeries P = randomSeries(rng, 6, 3);
  const DescriptorSeries Q = randomSeries(rng, 8, 3);
  const DtwResult r = align(P, Q);
  const int k = 2;
  Eigen::VectorXi cp(6), cq(8);
  for (int i = 0; i < 6; ++i) cp[i] = static_cast<int>(rng.below(k));
  for (int i = 0; i < 8; ++i) cq[i] = static_cast<int>(rng.below(k));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(numPairs(k));
  CHECK(pathCost(P, Q, r.path, ones, cp, cq, k) == pathCost(P, Q, r.path));
}

TEST_CASE("weighted cost on a hand-built 2x2 instance") {
  // Two 2-point series, descriptors 1-D; clusters P = [0,1], Q = [0,1].
  DescriptorSeries P(2, 1), Q(2, 1);
  P << 0.0, 1.0;
  Q << 1.0, 3.0;
  const AlignmentPath path = {{0, 0}, {1, 1}};
  Eigen::VectorXi cp(2), cq(2);
  cp << 0, 1;
  cq << 0, 1;
  // omega over pairs (0,0),(0,1),(1,1) = [2, 0, 1]; matched pairs hit
  // (0,0) with squared distance 1 and (1,1) with squared distance 4:
  // total = 2*1 + 1*4 = 6.
  Eigen::VectorXd omega(3);
  omega << 2.0, 0.0, 1.0;
  CHECK(pathCost(P, Q, path, omega, cp, cq, 2) == 6.0);
  CHECK(pathCost(P, Q, path) == 5.0);

  const AlignmentPath bad = {{0, 0}, {0, 0}, {1, 1}};
  CHECK_THROWS_AS(pathCost(P, Q, bad), ValidationError);
}

TEST_CASE("pairwise distance matrix mirrors independent aligns") {
  RandomStream rng(31);
  std::vector<DescriptorSeries> series;
  for (int i = 0; i < 3; ++i) series.push_back(randomSeries(rng, 3 + rng.below(5), 2));

  const Eigen::MatrixXd m = pairwiseDtw(series, 2);
  REQUIRE(m.rows() == 3);
  CHECK(m.diagonal().isZero());
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      CHECK(m(a, b) == align(series[a], series[b]).distance);
      CHECK(m(a, b) == m(b, a));
    }
  }

  const Eigen::MatrixXd one = pairwiseDtw({series[0]});
  CHECK(one == Eigen::MatrixXd::Zero(1, 1));

  const Eigen::MatrixXd twin = pairwiseDtw({series[1], series[1]});
  CHECK(twin == Eigen::MatrixXd::Zero(2, 2));
}

TEST_CASE("pairwise result is thread-count invariant") {
  RandomStream rng(32);
  std::vector<DescriptorSeries> series;
  for (int i = 0; i < 6; ++i) series.push_back(randomSeries(rng, 4 + rng.below(6), 3));
  CHECK(pairwiseDtw(series, 1) == pairwiseDtw(series, 4));
}

TEST_CASE("path csv export") {
  std::ostringstream out;
  writePathCsv(out, {{0, 0}, {1, 0}, {1, 1}});
  CHECK(out.str() == "i,j\n0,0\n1,0\n1,1\n");
}
