#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "metricdtw/dataset.hpp"
#include "metricdtw/dtw.hpp"
#include "metricdtw/learner.hpp"

namespace metricdtw {

// Paired 1NN test errors for one dataset under one experimental condition.
struct ExperimentResult {
  std::string dataset;
  std::string condition;
  double errorEuclidean = 0.0;
  double errorLearned = 0.0;
};

struct DatasetSource {
  std::string name;
  std::string trainPath;
  std::string testPath;
};

// Per dataset: fit on train under cfg, classify the test split under the
// unit and the learned metric, and emit the paired errors. Failures are
// logged to `log` and the dataset skipped; the batch never aborts. Results
// are ordered by dataset name.
std::vector<ExperimentResult> runComparison(const std::vector<DatasetSource>& sources,
                                            const FitConfig& cfg, const std::string& condition,
                                            bool normalize = false, std::ostream* log = nullptr);

// Same over datasets already in memory.
std::vector<ExperimentResult> runComparison(const std::vector<Dataset>& datasets,
                                            const FitConfig& cfg, const std::string& condition,
                                            std::ostream* log = nullptr);

// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero
// differences are dropped; fewer than 5 nonzero differences is an error.
// Exact evaluation: full sign enumeration for n <= 12 (handles ties via
// average ranks), count distribution for tie-free n <= 50. Otherwise the
// normal approximation with tie and continuity corrections.
double wilcoxonSignedRank(const std::vector<double>& x, const std::vector<double>& y);

// Original sequence, its time-warped version, and the simulation's
// ground-truth alignment.
struct WarpedPair {
  Sequence original;
  Sequence warped;
  AlignmentPath truth;
};

// Smooth monotone time warp: the output length is L*(1+u) (u uniform in
// (0, strength]), the warp map is piecewise linear over 8 segments with
// slopes uniform in [1-strength, 1+strength] renormalized to land on the
// last sample, values are linearly interpolated, and (optionally) amplitude
// is modulated by a smooth factor in [0.9, 1.1]. The truth path is the
// unit-step rasterization of the warp map. Deterministic given the seed.
WarpedPair simulateWarpedPair(const Sequence& s, std::uint64_t seed, double stretchStrength,
                              bool amplitudeScaling = true);

// Mean over found pairs (i, j) of the distance to the nearest truth column
// in the same row: min over truth pairs (i, j') of |j - j'|.
double alignmentError(const AlignmentPath& found, const AlignmentPath& truth);

// CSV rows "dataset,condition,error_euclidean,error_learned".
void writeResultsCsv(std::ostream& out, const std::vector<ExperimentResult>& results);

// Per-condition Wilcoxon p-value (null when undefined) and win/draw/loss
// counts of learned vs Euclidean.
std::string resultsSummaryJson(const std::vector<ExperimentResult>& results);

}  // namespace metricdtw
