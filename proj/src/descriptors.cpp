#include "metricdtw/descriptors.hpp"

#include <cmath>

#include "metricdtw/errors.hpp"

namespace metricdtw {

DescriptorKind parseDescriptorKind(const std::string& s) {
  if (s == "raw") return DescriptorKind::Raw;
  if (s == "derivative") return DescriptorKind::Derivative;
  if (s == "hog1d") return DescriptorKind::Hog1d;
  throw ValidationError("unknown descriptor kind '" + s + "' (expected raw|derivative|hog1d)");
}

std::string toString(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::Raw: return "raw";
    case DescriptorKind::Derivative: return "derivative";
    case DescriptorKind::Hog1d: return "hog1d";
  }
  return "?";
}

int descriptorDim(const DescriptorConfig& cfg) {
  if (cfg.kind == DescriptorKind::Hog1d) return cfg.hogIntervals * cfg.hogBins;
  return cfg.windowLength;
}

Eigen::VectorXd extractWindow(const Eigen::VectorXd& s, Eigen::Index center, int windowLength) {
  const Eigen::Index n = s.size();
  if (center < 0 || center >= n) {
    throw ValidationError("extractWindow: center " + std::to_string(center) +
                          " out of range [0, " + std::to_string(n) + ")");
  }
  if (windowLength < 1) throw ValidationError("extractWindow: window length < 1");

  const Eigen::Index left = (windowLength - 1) / 2;  // even windows take one fewer on the left
  Eigen::VectorXd w(windowLength);
  for (Eigen::Index t = 0; t < windowLength; ++t) {
    Eigen::Index idx = center - left + t;
    idx = std::clamp<Eigen::Index>(idx, 0, n - 1);
    w[t] = s[idx];
  }
  return w;
}

Eigen::VectorXd derivativeDescriptor(const Eigen::VectorXd& window) {
  const Eigen::Index n = window.size();
  if (n < 3) throw ValidationError("derivativeDescriptor: window shorter than 3");
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    d[i] = ((window[i] - window[i - 1]) + (window[i + 1] - window[i - 1]) / 2.0) / 2.0;
  }
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

Eigen::VectorXd hog1dDescriptor(const Eigen::VectorXd& window, const DescriptorConfig& cfg) {
  const Eigen::Index n = window.size();
  const int intervals = cfg.hogIntervals;
  const int bins = cfg.hogBins;
  if (intervals < 1 || bins < 1) throw ValidationError("hog1dDescriptor: bad interval/bin count");
  if (n < 2 * intervals) {
    throw ValidationError("hog1dDescriptor: window length " + std::to_string(n) +
                          " < 2 * hogIntervals");
  }
  if (!(cfg.hogSigma > 0.0)) throw ValidationError("hog1dDescriptor: sigma must be positive");

  const double binWidth = M_PI / bins;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(intervals) * bins);

  const Eigen::Index base = n / intervals;
  for (int b = 0; b < intervals; ++b) {
    const Eigen::Index lo = static_cast<Eigen::Index>(b) * base;
    const Eigen::Index hi = (b == intervals - 1) ? n : lo + base;  // remainder to last block
    auto hist = out.segment(static_cast<Eigen::Index>(b) * bins, bins);

    for (Eigen::Index i = lo; i < hi; ++i) {
      double g;
      if (i == lo) {
        g = window[i + 1] - window[i];
      } else if (i == hi - 1) {
        g = window[i] - window[i - 1];
      } else {
        g = (window[i + 1] - window[i - 1]) / 2.0;
      }
      const double scaled = g / cfg.hogSigma;
      const double theta = std::atan(scaled);
      const double weight = std::sqrt(1.0 + scaled * scaled);

      // Fractional position among bin centers; edge bins absorb the
      // out-of-range share (the orientation range does not wrap).
      const double t = (theta + M_PI / 2.0) / binWidth - 0.5;
      const int b0 = static_cast<int>(std::floor(t));
      const double frac = t - b0;
      const int lowBin = std::clamp(b0, 0, bins - 1);
      const int highBin = std::clamp(b0 + 1, 0, bins - 1);
      hist[lowBin] += weight * (1.0 - frac);
      hist[highBin] += weight * frac;
    }
    const double norm = hist.norm();
    if (norm > 0.0) hist /= norm;
  }
  return out;
}

DescriptorSeries extractAll(const Sequence& s, const DescriptorConfig& cfg) {
  validateSequence(s);
  const Eigen::Index n = s.values.size();
  const int dim = descriptorDim(cfg);
  DescriptorSeries series(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd w = extractWindow(s.values, i, cfg.windowLength);
    switch (cfg.kind) {
      case DescriptorKind::Raw:
        series.row(i) = w.transpose();
        break;
      case DescriptorKind::Derivative:
        series.row(i) = derivativeDescriptor(w).transpose();
        break;
      case DescriptorKind::Hog1d:
        series.row(i) = hog1dDescriptor(w, cfg).transpose();
        break;
    }
  }
  return series;
}

DescriptorSeries pointSeries(const Sequence& s) {
  validateSequence(s);
  DescriptorSeries series(s.values.size(), 1);
  series.col(0) = s.values;
  return series;
}

}  // namespace metricdtw
