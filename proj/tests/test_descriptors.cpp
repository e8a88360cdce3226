#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "metricdtw/descriptors.hpp"
#include "metricdtw/errors.hpp"
#include "metricdtw/random.hpp"

using namespace metricdtw;

namespace {

Sequence seq(std::initializer_list<double> values) {
  Sequence s;
  s.values = Eigen::Map<const Eigen::VectorXd>(values.begin(),
                                               static_cast<Eigen::Index>(values.size()));
  s.id = "test";
  return s;
}

}  // namespace

TEST_CASE("extract window: interior, edges, derived padding") {
  Eigen::VectorXd s(5);
  s << 1, 2, 3, 4, 5;
  CHECK(extractWindow(s, 2, 3) == Eigen::Vector3d(2, 3, 4));

  Eigen::VectorXd s3(3);
  s3 << 1, 2, 3;
  CHECK(extractWindow(s3, 0, 3) == Eigen::Vector3d(1, 1, 2));

  Eigen::VectorXd s10(10);
  for (int i = 0; i < 10; ++i) s10[i] = i;
  Eigen::VectorXd expected(5);
  expected << 7, 8, 9, 9, 9;  // padding rule applied by hand
  CHECK(extractWindow(s10, 9, 5) == expected);

  CHECK_THROWS_AS(extractWindow(s, 5, 3), ValidationError);
  CHECK_THROWS_AS(extractWindow(s, -1, 3), ValidationError);
}

TEST_CASE("even windows take one fewer point on the left") {
  Eigen::VectorXd s(8);
  for (int i = 0; i < 8; ++i) s[i] = i;
  const Eigen::VectorXd w = extractWindow(s, 4, 4);
  Eigen::VectorXd expected(4);
  expected << 3, 4, 5, 6;
  CHECK(w == expected);
}

TEST_CASE("derivative of constant and linear windows") {
  CHECK(derivativeDescriptor(Eigen::Vector4d(7, 7, 7, 7)).isZero());
  CHECK(derivativeDescriptor(Eigen::Vector4d(0, 1, 2, 3)) == Eigen::Vector4d(1, 1, 1, 1));
  CHECK_THROWS_AS(derivativeDescriptor(Eigen::Vector2d(0, 1)), ValidationError);
}

TEST_CASE("derivative of a zigzag window, hand-evaluated") {
  Eigen::VectorXd w(5);
  w << 0, 1, 0, 1, 0;
  // Interior: d[1] = ((1-0) + (0-0)/2)/2 = 0.5, d[2] = ((0-1) + (1-1)/2)/2
  // = -0.5, d[3] = 0.5; boundaries copy their nearest interior value.
  Eigen::VectorXd expected(5);
  expected << 0.5, 0.5, -0.5, 0.5, 0.5;
  CHECK(derivativeDescriptor(w) == expected);
}

TEST_CASE("hog1d: constant window mass sits on the two central bins") {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::Hog1d;
  const Eigen::VectorXd h = hog1dDescriptor(Eigen::VectorXd::Constant(30, 3.0), cfg);
  REQUIRE(h.size() == 16);
  for (int block = 0; block < 2; ++block) {
    const auto hist = h.segment(block * 8, 8);
    CHECK(hist[3] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(hist[4] == doctest::Approx(1.0 / std::sqrt(2.0)));
    for (int b : {0, 1, 2, 5, 6, 7}) CHECK(hist[b] == 0.0);
  }
}

TEST_CASE("hog1d: dimension law") {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::Hog1d;
  cfg.hogIntervals = 1;
  cfg.hogBins = 4;
  CHECK(hog1dDescriptor(Eigen::VectorXd::LinSpaced(10, 0, 1), cfg).size() == 4);
  CHECK(descriptorDim(cfg) == 4);
}

TEST_CASE("hog1d: steep ramp saturates the top bin") {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::Hog1d;
  Eigen::VectorXd ramp(12);
  for (int i = 0; i < 12; ++i) ramp[i] = 10.0 * i;  // gradient 10, sigma 0.1
  const Eigen::VectorXd h = hog1dDescriptor(ramp, cfg);
  for (int block = 0; block < 2; ++block) {
    const auto hist = h.segment(block * 8, 8);
    CHECK(hist[7] == doctest::Approx(1.0));
    for (int b = 0; b < 7; ++b) CHECK(hist[b] == doctest::Approx(0.0));
  }
}

TEST_CASE("hog1d rejects bad inputs") {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::Hog1d;
  CHECK_THROWS_AS(hog1dDescriptor(Eigen::Vector3d(0, 1, 2), cfg), ValidationError);
  cfg.hogSigma = 0.0;
  CHECK_THROWS_AS(hog1dDescriptor(Eigen::VectorXd::Zero(30), cfg), ValidationError);
}

TEST_CASE("extract_all: raw windows with padding on a length-3 sequence") {
  DescriptorConfig cfg;
  cfg.windowLength = 3;
  const DescriptorSeries d = extractAll(seq({1, 2, 3}), cfg);
  REQUIRE(d.rows() == 3);
  REQUIRE(d.cols() == 3);
  CHECK(d.row(0) == Eigen::RowVector3d(1, 1, 2));
  CHECK(d.row(1) == Eigen::RowVector3d(1, 2, 3));
  CHECK(d.row(2) == Eigen::RowVector3d(2, 3, 3));
}

TEST_CASE("extract_all: derivative of a constant sequence is all zero") {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::Derivative;
  cfg.windowLength = 5;
  const DescriptorSeries d = extractAll(seq({4, 4, 4, 4, 4, 4}), cfg);
  CHECK(d.isZero());
}

TEST_CASE("extract_all: hog1d dimension law on a long sequence") {
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::Hog1d;
  Sequence s;
  s.values = Eigen::VectorXd::LinSpaced(100, 0, 5);
  s.id = "long";
  const DescriptorSeries d = extractAll(s, cfg);
  CHECK(d.rows() == 100);
  CHECK(d.cols() == 16);
}

TEST_CASE("dimension law over randomized configs") {
  RandomStream rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    DescriptorConfig cfg;
    const int kindDraw = static_cast<int>(rng.below(3));
    cfg.kind = kindDraw == 0   ? DescriptorKind::Raw
               : kindDraw == 1 ? DescriptorKind::Derivative
                               : DescriptorKind::Hog1d;
    cfg.windowLength = 3 + static_cast<int>(rng.below(40));
    cfg.hogIntervals = 1 + static_cast<int>(rng.below(3));
    cfg.hogBins = 2 + static_cast<int>(rng.below(10));
    if (cfg.windowLength < 2 * cfg.hogIntervals) cfg.hogIntervals = 1;

    const int len = 5 + static_cast<int>(rng.below(30));
    Sequence s;
    s.values.resize(len);
    for (int i = 0; i < len; ++i) s.values[i] = rng.gaussian();
    s.id = "rand";

    const DescriptorSeries d = extractAll(s, cfg);
    CHECK(d.rows() == len);
    CHECK(d.cols() == descriptorDim(cfg));
    CHECK(d.allFinite());
  }
}

TEST_CASE("translation invariance of derivative and hog1d; raw shifts") {
  RandomStream rng(99);
  Sequence s;
  s.values.resize(40);
  for (int i = 0; i < 40; ++i) s.values[i] = rng.gaussian();
  s.id = "base";
  Sequence shifted = s;
  shifted.values.array() += 11.25;

  DescriptorConfig raw;
  raw.windowLength = 7;
  const DescriptorSeries r0 = extractAll(s, raw);
  const DescriptorSeries r1 = extractAll(shifted, raw);
  CHECK(((r1 - r0).array() - 11.25).abs().maxCoeff() < 1e-12);

  DescriptorConfig deriv = raw;
  deriv.kind = DescriptorKind::Derivative;
  CHECK(extractAll(s, deriv) == extractAll(shifted, deriv));

  DescriptorConfig hog = raw;
  hog.kind = DescriptorKind::Hog1d;
  hog.windowLength = 16;
  CHECK(extractAll(s, hog) == extractAll(shifted, hog));
}

TEST_CASE("hog1d histograms are nonnegative with per-block norm 0 or 1") {
  RandomStream rng(7);
  DescriptorConfig cfg;
  cfg.kind = DescriptorKind::Hog1d;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w(30);
    for (int i = 0; i < 30; ++i) w[i] = 5.0 * rng.gaussian();
    const Eigen::VectorXd h = hog1dDescriptor(w, cfg);
    CHECK((h.array() >= 0.0).all());
    for (int block = 0; block < cfg.hogIntervals; ++block) {
      const double norm = h.segment(block * cfg.hogBins, cfg.hogBins).norm();
      CHECK((std::abs(norm - 1.0) < 1e-12 || norm == 0.0));
    }
  }
}

TEST_CASE("point series is the sequence itself") {
  const DescriptorSeries p = pointSeries(seq({1.5, 2.5, 3.5}));
  REQUIRE(p.rows() == 3);
  REQUIRE(p.cols() == 1);
  CHECK(p(1, 0) == 2.5);
}

TEST_CASE("descriptor kind parsing") {
  CHECK(parseDescriptorKind("raw") == DescriptorKind::Raw);
  CHECK(parseDescriptorKind("derivative") == DescriptorKind::Derivative);
  CHECK(parseDescriptorKind("hog1d") == DescriptorKind::Hog1d);
  CHECK(toString(DescriptorKind::Hog1d) == "hog1d");
  CHECK_THROWS_AS(parseDescriptorKind("hog"), ValidationError);
}
