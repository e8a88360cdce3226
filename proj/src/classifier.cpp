#include "metricdtw/classifier.hpp"

#include <cstdio>
#include <functional>

#include "metricdtw/errors.hpp"
#include "metricdtw/parallel.hpp"

namespace metricdtw {

namespace {

// Shared 1NN driver: per test sequence, align against every train sequence
// and score the frozen path with `cost`. Each test item is independent.
std::vector<Prediction> nearestNeighbor(
    const std::vector<LabeledSequence>& test, const std::vector<LabeledSequence>& train,
    const std::vector<DescriptorSeries>& testAlign, const std::vector<DescriptorSeries>& trainAlign,
    const std::function<double(std::size_t, std::size_t, const AlignmentPath&)>& cost,
    int threads) {
  if (train.empty()) throw ValidationError("classify: empty train set");
  std::vector<Prediction> preds(test.size());
  parallelFor(test.size(), threads, [&](std::size_t t) {
    int best = -1;
    double bestDist = 0.0;
    for (std::size_t r = 0; r < train.size(); ++r) {
      const AlignmentPath path = align(testAlign[t], trainAlign[r]).path;
      const double d = cost(t, r, path);
      if (best < 0 || d < bestDist) {
        best = static_cast<int>(r);
        bestDist = d;
      }
    }
    preds[t] = {test[t].sequence.id, test[t].label, train[static_cast<std::size_t>(best)].label,
                train[static_cast<std::size_t>(best)].sequence.id, bestDist};
  });
  return preds;
}

std::vector<DescriptorSeries> extractSeries(const std::vector<LabeledSequence>& records,
                                            const DescriptorConfig& cfg, int threads) {
  std::vector<DescriptorSeries> out(records.size());
  parallelFor(records.size(), threads,
              [&](std::size_t i) { out[i] = extractAll(records[i].sequence, cfg); });
  return out;
}

}  // namespace

std::vector<Prediction> classify(const std::vector<LabeledSequence>& test,
                                 const std::vector<LabeledSequence>& train,
                                 const MetricModel& model, const DescriptorConfig& alignCfg,
                                 int threads) {
  const auto testAlign = extractSeries(test, alignCfg, threads);
  const auto trainAlign = extractSeries(train, alignCfg, threads);
  const bool sameSpace = alignCfg == model.descriptorCfg;
  const auto testLearn = sameSpace ? testAlign : extractSeries(test, model.descriptorCfg, threads);
  const auto trainLearn =
      sameSpace ? trainAlign : extractSeries(train, model.descriptorCfg, threads);

  const int k = model.codebook.k();
  if (model.omega.size() != numPairs(k)) {
    throw ValidationError("classify: omega length != (k^2+k)/2");
  }
  std::vector<Eigen::VectorXi> testClusters(test.size()), trainClusters(train.size());
  parallelFor(test.size(), threads,
              [&](std::size_t i) { testClusters[i] = assignAll(model.codebook, testLearn[i]); });
  parallelFor(train.size(), threads,
              [&](std::size_t i) { trainClusters[i] = assignAll(model.codebook, trainLearn[i]); });

  return nearestNeighbor(test, train, testAlign, trainAlign,
                         [&](std::size_t t, std::size_t r, const AlignmentPath& path) {
                           return pathCost(testLearn[t], trainLearn[r], path, model.omega,
                                           testClusters[t], trainClusters[r], k);
                         },
                         threads);
}

std::vector<Prediction> classifyUnit(const std::vector<LabeledSequence>& test,
                                     const std::vector<LabeledSequence>& train,
                                     const DescriptorConfig& alignCfg,
                                     const DescriptorConfig& learnCfg, int threads) {
  const auto testAlign = extractSeries(test, alignCfg, threads);
  const auto trainAlign = extractSeries(train, alignCfg, threads);
  const bool sameSpace = alignCfg == learnCfg;
  const auto testLearn = sameSpace ? testAlign : extractSeries(test, learnCfg, threads);
  const auto trainLearn = sameSpace ? trainAlign : extractSeries(train, learnCfg, threads);

  return nearestNeighbor(test, train, testAlign, trainAlign,
                         [&](std::size_t t, std::size_t r, const AlignmentPath& path) {
                           return pathCost(testLearn[t], trainLearn[r], path);
                         },
                         threads);
}

std::vector<Prediction> classifyBaseline(const std::vector<LabeledSequence>& test,
                                         const std::vector<LabeledSequence>& train, int threads) {
  std::vector<DescriptorSeries> testPoints(test.size()), trainPoints(train.size());
  for (std::size_t i = 0; i < test.size(); ++i) testPoints[i] = pointSeries(test[i].sequence);
  for (std::size_t i = 0; i < train.size(); ++i) trainPoints[i] = pointSeries(train[i].sequence);
  return nearestNeighbor(test, train, testPoints, trainPoints,
                         [&](std::size_t t, std::size_t r, const AlignmentPath& path) {
                           return pathCost(testPoints[t], trainPoints[r], path);
                         },
                         threads);
}

double errorRate(const std::vector<Prediction>& preds,
                 const std::vector<LabeledSequence>& truth) {
  if (preds.size() != truth.size()) throw ValidationError("errorRate: prediction count mismatch");
  if (preds.empty()) throw ValidationError("errorRate: no predictions");
  int wrong = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].testId != truth[i].sequence.id) {
      throw ValidationError("errorRate: id mismatch at index " + std::to_string(i));
    }
    if (preds[i].predictedLabel != truth[i].label) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(preds.size());
}

void writePredictionsCsv(std::ostream& out, const std::vector<Prediction>& preds) {
  char buf[64];
  out << "test_id,true,pred,nn_id,distance\n";
  for (const auto& p : preds) {
    std::snprintf(buf, sizeof buf, "%.17g", p.distance);
    out << p.testId << ',' << p.trueLabel << ',' << p.predictedLabel << ',' << p.nearestTrainId
        << ',' << buf << '\n';
  }
}

}  // namespace metricdtw
