#include "metricdtw/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "metricdtw/classifier.hpp"
#include "metricdtw/errors.hpp"
#include "metricdtw/random.hpp"
#include "json.hpp"

namespace metricdtw {

namespace {

struct RankedDiffs {
  std::vector<double> ranks;  // average ranks of |d|, aligned with signs
  std::vector<bool> positive;
  double wPlus = 0.0;
  double tieCorrection = 0.0;  // sum over tie groups of (t^3 - t)
  bool hasTies = false;
};

RankedDiffs rankDifferences(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("wilcoxonSignedRank: sample sizes differ");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.size() < 5) {
    throw ValidationError("wilcoxonSignedRank: fewer than 5 nonzero differences");
  }

  const std::size_t n = diffs.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(diffs[a]) < std::abs(diffs[b]);
  });

  RankedDiffs r;
  r.ranks.resize(n);
  r.positive.resize(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
    const double avgRank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    const auto t = static_cast<double>(j - i + 1);
    if (t > 1.0) {
      r.hasTies = true;
      r.tieCorrection += t * t * t - t;
    }
    for (std::size_t u = i; u <= j; ++u) r.ranks[order[u]] = avgRank;
    i = j + 1;
  }
  for (std::size_t u = 0; u < n; ++u) {
    r.positive[u] = diffs[u] > 0.0;
    if (r.positive[u]) r.wPlus += r.ranks[u];
  }
  return r;
}

// Exact two-sided p by full sign enumeration (any rank values).
double exactEnumerationP(const RankedDiffs& r) {
  const std::size_t n = r.ranks.size();
  const double total = std::accumulate(r.ranks.begin(), r.ranks.end(), 0.0);
  const double dev = std::abs(r.wPlus - total / 2.0);
  const std::uint64_t combos = std::uint64_t{1} << n;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    double w = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::uint64_t{1} << b)) w += r.ranks[b];
    }
    if (std::abs(w - total / 2.0) >= dev - 1e-12) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(combos);
}

// Exact two-sided p via the count distribution of W+ over integer ranks
// 1..n (tie-free case). Probabilities are dyadic, well within double
// precision for n <= 50.
double exactCountP(const RankedDiffs& r) {
  const int n = static_cast<int>(r.ranks.size());
  const int total = n * (n + 1) / 2;
  std::vector<double> prob(static_cast<std::size_t>(total) + 1, 0.0);
  prob[0] = 1.0;
  for (int rank = 1; rank <= n; ++rank) {
    for (int w = total; w >= rank; --w) {
      prob[w] = 0.5 * prob[w] + 0.5 * prob[w - rank];
    }
    for (int w = rank - 1; w >= 0; --w) prob[w] *= 0.5;
  }
  const double center = static_cast<double>(total) / 2.0;
  const double dev = std::abs(r.wPlus - center);
  double p = 0.0;
  for (int w = 0; w <= total; ++w) {
    if (std::abs(w - center) >= dev - 1e-12) p += prob[w];
  }
  return p;
}

double normalApproximationP(const RankedDiffs& r) {
  const auto n = static_cast<double>(r.ranks.size());
  const double mean = n * (n + 1.0) / 4.0;
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - r.tieCorrection / 48.0;
  const double dev = std::max(0.0, std::abs(r.wPlus - mean) - 0.5);  // continuity correction
  const double z = dev / std::sqrt(var);
  return std::erfc(z / std::sqrt(2.0));
}

double interpolate(const Eigen::VectorXd& v, double pos) {
  const auto lo = static_cast<Eigen::Index>(std::floor(pos));
  if (lo >= v.size() - 1) return v[v.size() - 1];
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return v[lo];
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

}  // namespace

double wilcoxonSignedRank(const std::vector<double>& x, const std::vector<double>& y) {
  const RankedDiffs r = rankDifferences(x, y);
  const std::size_t n = r.ranks.size();
  double p;
  if (n <= 12) {
    p = exactEnumerationP(r);
  } else if (!r.hasTies && n <= 50) {
    p = exactCountP(r);
  } else {
    p = normalApproximationP(r);
  }
  return std::min(1.0, p);
}

WarpedPair simulateWarpedPair(const Sequence& s, std::uint64_t seed, double stretchStrength,
                              bool amplitudeScaling) {
  validateSequence(s);
  const Eigen::Index len = s.values.size();
  if (len < 10) throw ValidationError("simulateWarpedPair: sequence shorter than 10");
  if (!(stretchStrength > 0.0 && stretchStrength <= 1.0)) {
    throw ValidationError("simulateWarpedPair: stretch strength outside (0, 1]");
  }

  RandomStream rng(seed);
  const double u = rng.uniform(0.0, stretchStrength);
  const auto outLen = static_cast<Eigen::Index>(std::ceil(static_cast<double>(len) * (1.0 + u)));

  // Monotone piecewise-linear warp map [0, outLen-1] -> [0, len-1] over 8
  // equal segments; slopes drawn then renormalized to land exactly on the
  // last input sample.
  constexpr int kSegments = 8;
  double slopes[kSegments];
  double rise = 0.0;
  const double span = static_cast<double>(outLen - 1) / kSegments;
  for (double& sl : slopes) {
    sl = rng.uniform(1.0 - stretchStrength, 1.0 + stretchStrength);
    rise += sl * span;
  }
  const double scale = rise > 0.0 ? static_cast<double>(len - 1) / rise : 0.0;
  for (double& sl : slopes) sl *= scale;

  const double ampFreq = rng.uniform(0.5, 2.0);
  const double ampPhase = rng.uniform(0.0, 1.0);

  Eigen::VectorXd warped(outLen);
  std::vector<Eigen::Index> preimage(static_cast<std::size_t>(outLen));
  for (Eigen::Index j = 0; j < outLen; ++j) {
    // Evaluate the warp map at j.
    double pos = 0.0;
    double t = 0.0;
    for (int seg = 0; seg < kSegments; ++seg) {
      const double segEnd = span * (seg + 1);
      const double hi = std::min(static_cast<double>(j), segEnd);
      if (hi > t) {
        pos += slopes[seg] * (hi - t);
        t = hi;
      }
      if (segEnd >= static_cast<double>(j)) break;
    }
    pos = std::clamp(pos, 0.0, static_cast<double>(len - 1));
    double value = interpolate(s.values, pos);
    if (amplitudeScaling) {
      value *= 1.0 + 0.1 * std::sin(2.0 * M_PI * (ampFreq * static_cast<double>(j) /
                                                      static_cast<double>(outLen) +
                                                  ampPhase));
    }
    warped[j] = value;
    preimage[static_cast<std::size_t>(j)] =
        std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::llround(pos)), 0, len - 1);
  }

  // Rasterize the map into a valid unit-step path.
  AlignmentPath truth;
  truth.emplace_back(0, 0);
  for (Eigen::Index j = 1; j < outLen; ++j) {
    Eigen::Index prev = truth.back().first;
    const Eigen::Index target = std::max(preimage[static_cast<std::size_t>(j)], prev);
    while (prev + 1 < target) {
      ++prev;
      truth.emplace_back(prev, j - 1);
    }
    truth.emplace_back(target, j);
  }
  if (truth.back().first != len - 1) {
    Eigen::Index i = truth.back().first;
    const Eigen::Index j = truth.back().second;
    while (i < len - 1) truth.emplace_back(++i, j);
  }

  WarpedPair pair;
  pair.original = s;
  pair.warped = Sequence{std::move(warped), s.id + "#warped"};
  pair.truth = std::move(truth);
  return pair;
}

double alignmentError(const AlignmentPath& found, const AlignmentPath& truth) {
  if (found.empty() || truth.empty()) throw ValidationError("alignmentError: empty path");
  if (found.front() != truth.front() || found.back() != truth.back()) {
    throw ValidationError("alignmentError: paths cover different index ranges");
  }
  std::map<Eigen::Index, std::vector<Eigen::Index>> byRow;
  for (const auto& [i, j] : truth) byRow[i].push_back(j);
  double sum = 0.0;
  for (const auto& [i, j] : found) {
    const auto it = byRow.find(i);
    if (it == byRow.end()) throw ValidationError("alignmentError: truth path misses a row");
    double best = std::abs(static_cast<double>(j - it->second.front()));
    for (const Eigen::Index jt : it->second) {
      best = std::min(best, std::abs(static_cast<double>(j - jt)));
    }
    sum += best;
  }
  return sum / static_cast<double>(found.size());
}

std::vector<ExperimentResult> runComparison(const std::vector<Dataset>& datasets,
                                            const FitConfig& cfg, const std::string& condition,
                                            std::ostream* log) {
  std::vector<ExperimentResult> results;
  for (const auto& d : datasets) {
    try {
      const MetricModel model = fit(d, cfg, log);
      const auto unitPreds =
          classifyUnit(d.test, d.train, cfg.alignDescriptor, cfg.learnDescriptor, cfg.threads);
      const auto learnedPreds = classify(d.test, d.train, model, cfg.alignDescriptor, cfg.threads);
      results.push_back({d.name, condition, errorRate(unitPreds, d.test),
                         errorRate(learnedPreds, d.test)});
    } catch (const std::exception& e) {
      if (log) *log << "warning: skipping dataset '" << d.name << "': " << e.what() << "\n";
    }
  }
  std::sort(results.begin(), results.end(),
            [](const ExperimentResult& a, const ExperimentResult& b) {
              return a.dataset < b.dataset;
            });
  return results;
}

std::vector<ExperimentResult> runComparison(const std::vector<DatasetSource>& sources,
                                            const FitConfig& cfg, const std::string& condition,
                                            bool normalize, std::ostream* log) {
  std::vector<Dataset> datasets;
  for (const auto& src : sources) {
    try {
      Dataset d = loadUcrSplit(src.trainPath, src.testPath, src.name);
      if (normalize) zNormalize(d);
      datasets.push_back(std::move(d));
    } catch (const std::exception& e) {
      if (log) *log << "warning: skipping dataset '" << src.name << "': " << e.what() << "\n";
    }
  }
  return runComparison(datasets, cfg, condition, log);
}

void writeResultsCsv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  char buf[64];
  out << "dataset,condition,error_euclidean,error_learned\n";
  for (const auto& r : results) {
    out << r.dataset << ',' << r.condition << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.errorEuclidean);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", r.errorLearned);
    out << buf << '\n';
  }
}

std::string resultsSummaryJson(const std::vector<ExperimentResult>& results) {
  std::map<std::string, std::vector<const ExperimentResult*>> byCondition;
  for (const auto& r : results) byCondition[r.condition].push_back(&r);

  nlohmann::json j;
  for (const auto& [condition, rows] : byCondition) {
    nlohmann::json entry;
    int win = 0, draw = 0, loss = 0;
    std::vector<double> euc, learned;
    for (const auto* r : rows) {
      euc.push_back(r->errorEuclidean);
      learned.push_back(r->errorLearned);
      if (r->errorLearned < r->errorEuclidean) {
        ++win;
      } else if (r->errorLearned == r->errorEuclidean) {
        ++draw;
      } else {
        ++loss;
      }
    }
    entry["win"] = win;
    entry["draw"] = draw;
    entry["loss"] = loss;
    entry["datasets"] = rows.size();
    try {
      entry["wilcoxon_p"] = wilcoxonSignedRank(euc, learned);
    } catch (const ValidationError&) {
      entry["wilcoxon_p"] = nullptr;
    }
    j[condition] = entry;
  }
  return j.dump(2);
}

}  // namespace metricdtw
