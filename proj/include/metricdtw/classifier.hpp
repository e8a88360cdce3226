#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "metricdtw/dataset.hpp"
#include "metricdtw/learner.hpp"

namespace metricdtw {

struct Prediction {
  std::string testId;
  int trueLabel = 0;
  int predictedLabel = 0;
  std::string nearestTrainId;
  double distance = 0.0;
};

// 1NN under the learned metric: test and train sequences are aligned in the
// alignCfg descriptor space under unit-weight costs, and each frozen path
// is re-weighted with the model's omega over its descriptor space. Distance
// ties break to the lower train index.
std::vector<Prediction> classify(const std::vector<LabeledSequence>& test,
                                 const std::vector<LabeledSequence>& train,
                                 const MetricModel& model, const DescriptorConfig& alignCfg,
                                 int threads = 1);

// 1NN under the unit (Euclidean) metric: same alignment, unweighted costs
// over the learnCfg descriptor space.
std::vector<Prediction> classifyUnit(const std::vector<LabeledSequence>& test,
                                     const std::vector<LabeledSequence>& train,
                                     const DescriptorConfig& alignCfg,
                                     const DescriptorConfig& learnCfg, int threads = 1);

// Raw-point 1NN-DTW baseline: no descriptors, squared Euclidean
// point-to-point costs.
std::vector<Prediction> classifyBaseline(const std::vector<LabeledSequence>& test,
                                         const std::vector<LabeledSequence>& train,
                                         int threads = 1);

// Fraction of predictions whose label differs from the truth.
double errorRate(const std::vector<Prediction>& preds,
                 const std::vector<LabeledSequence>& truth);

// CSV rows "test_id,true,pred,nn_id,distance".
void writePredictionsCsv(std::ostream& out, const std::vector<Prediction>& preds);

}  // namespace metricdtw
