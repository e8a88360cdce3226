#pragma once

#include <Eigen/Core>
#include <string>

#include "metricdtw/dataset.hpp"

namespace metricdtw {

// Descriptor matrix: one row per temporal point of the source sequence.
using DescriptorSeries = Eigen::MatrixXd;

enum class DescriptorKind { Raw, Derivative, Hog1d };

DescriptorKind parseDescriptorKind(const std::string& s);
std::string toString(DescriptorKind kind);

struct DescriptorConfig {
  DescriptorKind kind = DescriptorKind::Raw;
  int windowLength = 30;
  int hogIntervals = 2;
  int hogBins = 8;
  double hogSigma = 0.1;

  friend bool operator==(const DescriptorConfig&, const DescriptorConfig&) = default;
};

// Output dimension implied by the config: windowLength for raw and
// derivative, hogIntervals * hogBins for hog1d.
int descriptorDim(const DescriptorConfig& cfg);

// Window of `windowLength` samples centered at `center`. Even lengths cover
// floor((w-1)/2) points left of center and the remainder right. Positions
// outside the sequence replicate the nearest endpoint sample.
Eigen::VectorXd extractWindow(const Eigen::VectorXd& s, Eigen::Index center, int windowLength);

// First-order derivative estimate of Keogh & Pazzani:
//   d[i] = ((x[i] - x[i-1]) + (x[i+1] - x[i-1]) / 2) / 2
// at interior points; the two boundary points copy their nearest interior
// derivative. Requires window length >= 3.
Eigen::VectorXd derivativeDescriptor(const Eigen::VectorXd& window);

// 1-D histogram of oriented gradients. The window splits into hogIntervals
// contiguous equal blocks (remainder samples go to the last block). Per
// block: point gradients by central differences (one-sided at block edges),
// orientation theta = atan(g / sigma), soft vote with weight
// sqrt(1 + (g/sigma)^2) into hogBins uniform bins over [-pi/2, pi/2]
// (linear interpolation between the two nearest bin centers, edge bins
// absorb out-of-range mass), then per-block L2 normalization. Blocks are
// concatenated. Requires window length >= 2 * hogIntervals.
Eigen::VectorXd hog1dDescriptor(const Eigen::VectorXd& window, const DescriptorConfig& cfg);

// Descriptor series of a sequence: extractWindow at every index followed by
// the configured transform (identity for raw).
DescriptorSeries extractAll(const Sequence& s, const DescriptorConfig& cfg);

// L x 1 series of the raw samples themselves; point-to-point alignment with
// no descriptor (the 1NN-DTW baseline).
DescriptorSeries pointSeries(const Sequence& s);

}  // namespace metricdtw
