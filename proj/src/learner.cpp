#include "metricdtw/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "metricdtw/errors.hpp"
#include "metricdtw/parallel.hpp"
#include "metricdtw/random.hpp"
#include "json.hpp"

namespace metricdtw {

namespace {

nlohmann::json descriptorConfigToJson(const DescriptorConfig& cfg) {
  return nlohmann::json{{"kind", toString(cfg.kind)},
                        {"window_length", cfg.windowLength},
                        {"hog_intervals", cfg.hogIntervals},
                        {"hog_bins", cfg.hogBins},
                        {"hog_sigma", cfg.hogSigma}};
}

DescriptorConfig descriptorConfigFromJson(const nlohmann::json& j) {
  DescriptorConfig cfg;
  cfg.kind = parseDescriptorKind(j.at("kind").get<std::string>());
  cfg.windowLength = j.at("window_length").get<int>();
  cfg.hogIntervals = j.at("hog_intervals").get<int>();
  cfg.hogBins = j.at("hog_bins").get<int>();
  cfg.hogSigma = j.at("hog_sigma").get<double>();
  return cfg;
}

// Nearest-rank percentile of a copy of `values`.
double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(values.size())));
  return values[std::min(values.size() - 1, std::max<std::size_t>(rank, 1) - 1)];
}

}  // namespace

std::string metricModelToJson(const MetricModel& m) {
  nlohmann::json j;
  j["codebook"] = nlohmann::json::parse(codebookToJson(m.codebook));
  j["omega"] = std::vector<double>(m.omega.data(), m.omega.data() + m.omega.size());
  j["mu"] = m.mu;
  j["descriptor_cfg"] = descriptorConfigToJson(m.descriptorCfg);
  return j.dump(2);
}

MetricModel metricModelFromJson(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  MetricModel m;
  m.codebook = codebookFromJson(j.at("codebook").dump());
  const auto omega = j.at("omega").get<std::vector<double>>();
  m.omega = Eigen::Map<const Eigen::VectorXd>(omega.data(),
                                              static_cast<Eigen::Index>(omega.size()));
  m.mu = j.at("mu").get<double>();
  m.descriptorCfg = descriptorConfigFromJson(j.at("descriptor_cfg"));
  if (m.omega.size() != numPairs(m.codebook.k())) {
    throw ValidationError("model json: omega length != (k^2+k)/2");
  }
  if ((m.omega.array() < 0.0).any()) throw ValidationError("model json: negative omega entry");
  return m;
}

Eigen::VectorXd pairFeature(const DescriptorSeries& P, const DescriptorSeries& Q,
                            const AlignmentPath& path, const Eigen::VectorXi& clustersP,
                            const Eigen::VectorXi& clustersQ, int k) {
  if (P.cols() != Q.cols()) throw ValidationError("pairFeature: descriptor dimensions differ");
  if (!isValidPath(path, P.rows(), Q.rows())) throw ValidationError("pairFeature: invalid path");
  if (clustersP.size() != P.rows() || clustersQ.size() != Q.rows()) {
    throw ValidationError("pairFeature: cluster assignment size mismatch");
  }
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(numPairs(k));
  for (const auto& [i, j] : path) {
    phi[pairIndex(clustersP[i], clustersQ[j], k)] += cellCost(P, Q, i, j);
  }
  return phi;
}

Eigen::VectorXd pairFeature(const DescriptorSeries& P, const DescriptorSeries& Q,
                            const AlignmentPath& path, const Codebook& cb) {
  return pairFeature(P, Q, path, assignAll(cb, P), assignAll(cb, Q), cb.k());
}

std::vector<std::vector<int>> selectTargetNeighbors(const Eigen::MatrixXd& dists,
                                                    const std::vector<int>& labels, int kappa,
                                                    std::ostream* log) {
  const int n = static_cast<int>(labels.size());
  if (dists.rows() != n || dists.cols() != n) {
    throw ValidationError("selectTargetNeighbors: distance matrix size mismatch");
  }
  std::vector<std::vector<int>> targets(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> sameClass;
    for (int j = 0; j < n; ++j) {
      if (j != i && labels[j] == labels[i]) sameClass.push_back(j);
    }
    if (sameClass.empty()) {
      if (log) {
        *log << "warning: train index " << i << " is the only member of its class; "
             << "no target neighbors\n";
      }
      continue;
    }
    std::sort(sameClass.begin(), sameClass.end(), [&](int a, int b) {
      if (dists(i, a) != dists(i, b)) return dists(i, a) < dists(i, b);
      return a < b;
    });
    if (static_cast<int>(sameClass.size()) > kappa) sameClass.resize(kappa);
    targets[i] = std::move(sameClass);
  }
  return targets;
}

std::vector<Triplet> buildTriplets(const std::vector<std::vector<int>>& targets,
                                   const std::vector<int>& labels, const Eigen::MatrixXd& dists) {
  const int n = static_cast<int>(labels.size());
  std::vector<double> targetDists;
  for (int i = 0; i < n; ++i) {
    for (int j : targets[i]) targetDists.push_back(dists(i, j));
  }
  const double slack = percentile(targetDists, 0.9);

  std::vector<Triplet> triplets;
  for (int i = 0; i < n; ++i) {
    for (int j : targets[i]) {
      bool found = false;
      for (int l = 0; l < n; ++l) {
        if (labels[l] == labels[i]) continue;
        if (dists(i, l) <= dists(i, j) + slack) {
          triplets.push_back({i, j, l});
          found = true;
        }
      }
      if (!found) {
        // Nearest differently-labeled point keeps every target pair
        // represented by at least one constraint.
        int best = -1;
        for (int l = 0; l < n; ++l) {
          if (labels[l] == labels[i]) continue;
          if (best < 0 || dists(i, l) < dists(i, best)) best = l;
        }
        if (best >= 0) triplets.push_back({i, j, best});
      }
    }
  }
  return triplets;
}

PairFeatureTable computePairFeatures(const std::vector<DescriptorSeries>& alignSeries,
                                     const std::vector<DescriptorSeries>& learnSeries,
                                     const std::vector<Eigen::VectorXi>& assignments, int k,
                                     int threads) {
  const int n = static_cast<int>(alignSeries.size());
  if (static_cast<int>(learnSeries.size()) != n || static_cast<int>(assignments.size()) != n) {
    throw ValidationError("computePairFeatures: series/assignment counts differ");
  }
  PairFeatureTable table;
  table.phi = Eigen::MatrixXd::Zero(numPairs(n), numPairs(k));
  table.unitDist = Eigen::MatrixXd::Zero(n, n);

  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  }
  parallelFor(pairs.size(), threads, [&](std::size_t t) {
    const auto [a, b] = pairs[t];
    const AlignmentPath path = align(alignSeries[a], alignSeries[b]).path;
    const Eigen::VectorXd phi =
        pairFeature(learnSeries[a], learnSeries[b], path, assignments[a], assignments[b], k);
    table.phi.row(pairIndex(a, b, n)) = phi.transpose();
    const double unit = phi.sum();
    table.unitDist(a, b) = unit;
    table.unitDist(b, a) = unit;
  });
  return table;
}

MetricModel fit(const Dataset& data, const FitConfig& cfg, std::ostream* log) {
  const auto& train = data.train;
  const int n = static_cast<int>(train.size());
  if (n == 0) throw ValidationError("fit: empty train split");

  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = train[i].label;

  // Descriptor series in the alignment and learning spaces; shared when the
  // configs coincide.
  const bool sameSpace = cfg.alignDescriptor == cfg.learnDescriptor;
  std::vector<DescriptorSeries> learnSeries(n);
  std::vector<DescriptorSeries> alignSeries;
  parallelFor(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t i) {
    learnSeries[i] = extractAll(train[i].sequence, cfg.learnDescriptor);
  });
  if (!sameSpace) {
    alignSeries.resize(n);
    parallelFor(static_cast<std::size_t>(n), cfg.threads, [&](std::size_t i) {
      alignSeries[i] = extractAll(train[i].sequence, cfg.alignDescriptor);
    });
  }
  const auto& alignRef = sameSpace ? learnSeries : alignSeries;

  // Codebook over all pooled training descriptors.
  Eigen::Index totalPoints = 0;
  for (const auto& s : learnSeries) totalPoints += s.rows();
  Eigen::MatrixXd pooled(totalPoints, learnSeries[0].cols());
  Eigen::Index at = 0;
  for (const auto& s : learnSeries) {
    pooled.middleRows(at, s.rows()) = s;
    at += s.rows();
  }
  const Codebook cb = fitKmeans(pooled, cfg.kClusters, deriveSeed(cfg.seed, 0));

  std::vector<Eigen::VectorXi> assignments(n);
  parallelFor(static_cast<std::size_t>(n), cfg.threads,
              [&](std::size_t i) { assignments[i] = assignAll(cb, learnSeries[i]); });

  const PairFeatureTable table =
      computePairFeatures(alignRef, learnSeries, assignments, cfg.kClusters, cfg.threads);

  const auto targets = selectTargetNeighbors(table.unitDist, labels, cfg.kappa, log);
  const auto triplets = buildTriplets(targets, labels, table.unitDist);

  std::vector<Eigen::VectorXd> pullFeatures;
  for (int i = 0; i < n; ++i) {
    for (int j : targets[i]) pullFeatures.push_back(table.phi.row(pairIndex(i, j, n)));
  }
  std::vector<Eigen::VectorXd> diffFeatures;
  diffFeatures.reserve(triplets.size());
  for (const auto& t : triplets) {
    diffFeatures.push_back(table.phi.row(pairIndex(t.i, t.l, n)) -
                           table.phi.row(pairIndex(t.i, t.j, n)));
  }

  std::vector<double> muGrid = cfg.muGrid;
  if (muGrid.empty()) throw ValidationError("fit: empty mu grid");

  // Fold count shrinks to the smallest class size; below 2 usable folds the
  // cross-validation is skipped and the smallest mu wins.
  int smallestClass = n;
  {
    std::map<int, int> counts;
    for (int l : labels) ++counts[l];
    for (const auto& [l, c] : counts) smallestClass = std::min(smallestClass, c);
  }
  int folds = std::min(cfg.folds, smallestClass);
  if (folds < 2 && static_cast<int>(muGrid.size()) > 1) {
    if (log) {
      *log << "warning: smallest class has " << smallestClass
           << " member(s); skipping cross-validation and using the smallest mu\n";
    }
  }

  double bestMu = 0.0;
  Eigen::VectorXd bestOmega;
  if (folds < 2 || muGrid.size() == 1) {
    bestMu = *std::min_element(muGrid.begin(), muGrid.end());
    bestOmega = solveMetricLp(pullFeatures, diffFeatures, bestMu).omega;
  } else {
    if (folds < cfg.folds && log) {
      *log << "warning: fold count reduced to " << folds << " (smallest class size)\n";
    }
    // Stratified fold assignment: shuffle within class, deal round-robin.
    std::vector<int> fold(n, 0);
    {
      RandomStream rng(deriveSeed(cfg.seed, 1));
      std::map<int, std::vector<int>> byClass;
      for (int i = 0; i < n; ++i) byClass[labels[i]].push_back(i);
      for (auto& [label, members] : byClass) {
        for (std::size_t i = members.size(); i > 1; --i) {
          std::swap(members[i - 1], members[rng.below(i)]);
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
          fold[members[i]] = static_cast<int>(i % folds);
        }
      }
    }

    double bestAccuracy = -1.0;
    for (double mu : muGrid) {
      const Eigen::VectorXd omega = solveMetricLp(pullFeatures, diffFeatures, mu).omega;
      int correct = 0;
      for (int v = 0; v < n; ++v) {
        int nearest = -1;
        double nearestDist = 0.0;
        for (int t = 0; t < n; ++t) {
          if (t == v || fold[t] == fold[v]) continue;
          const double d = omega.dot(table.phi.row(pairIndex(v, t, n)));
          if (nearest < 0 || d < nearestDist) {
            nearest = t;
            nearestDist = d;
          }
        }
        if (nearest >= 0 && labels[nearest] == labels[v]) ++correct;
      }
      const double accuracy = static_cast<double>(correct) / n;
      if (accuracy > bestAccuracy || (accuracy == bestAccuracy && mu < bestMu)) {
        bestAccuracy = accuracy;
        bestMu = mu;
        bestOmega = omega;
      }
    }
  }

  MetricModel model;
  model.codebook = cb;
  model.omega = std::move(bestOmega);
  model.mu = bestMu;
  model.descriptorCfg = cfg.learnDescriptor;
  return model;
}

}  // namespace metricdtw
