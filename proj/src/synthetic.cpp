#include "metricdtw/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "metricdtw/errors.hpp"
#include "metricdtw/random.hpp"

namespace metricdtw {

namespace {

Eigen::VectorXd noise(RandomStream& rng, int length, double sd) {
  Eigen::VectorXd v(length);
  for (int t = 0; t < length; ++t) v[t] = sd * rng.gaussian();
  return v;
}

// Cylinder, bell, funnel (Saito's recipe): a plateau / rising ramp /
// falling ramp of random extent and height over unit noise.
Eigen::VectorXd cbf(RandomStream& rng, int cls, int length) {
  const double scale = static_cast<double>(length) / 128.0;
  const double a = rng.uniform(16.0, 32.0) * scale;
  const double b = a + rng.uniform(32.0, 96.0) * scale;
  const double height = 6.0 + rng.gaussian();
  Eigen::VectorXd v = noise(rng, length, 1.0);
  for (int t = 0; t < length; ++t) {
    if (t < a || t > b) continue;
    double shape = 1.0;
    if (cls == 1) shape = (t - a) / (b - a);            // bell
    if (cls == 2) shape = (b - t) / (b - a);            // funnel
    v[t] += height * shape;
  }
  return v;
}

// Six control-chart patterns (normal, cyclic, up/down trend, up/down
// shift) around a constant level.
Eigen::VectorXd controlChart(RandomStream& rng, int cls, int length) {
  Eigen::VectorXd v(length);
  const double mean = 30.0;
  const double spread = 2.0;
  const double amp = rng.uniform(10.0, 15.0);
  const double period = rng.uniform(10.0, 15.0);
  const double grad = rng.uniform(0.2, 0.5);
  const double shift = rng.uniform(7.5, 20.0);
  const double at = rng.uniform(length / 3.0, 2.0 * length / 3.0);
  for (int t = 0; t < length; ++t) {
    double x = mean + spread * rng.uniform(-3.0, 3.0);
    switch (cls) {
      case 0: break;
      case 1: x += amp * std::sin(2.0 * M_PI * t / period); break;
      case 2: x += grad * t; break;
      case 3: x -= grad * t; break;
      case 4: x += (t >= at) ? shift : 0.0; break;
      case 5: x -= (t >= at) ? shift : 0.0; break;
      default: break;
    }
    v[t] = x;
  }
  return v;
}

void addStep(Eigen::VectorXd& v, int from, int width, double sign) {
  const int half = width / 2;
  for (int t = 0; t < width; ++t) {
    const int at = from + t;
    if (at < 0 || at >= v.size()) continue;
    v[at] += (t < half ? -sign : sign) * 5.0;
  }
}

// Two step-shaped events; the class is the ordered combination of their
// directions (UU, UD, DU, DD).
Eigen::VectorXd twoPattern(RandomStream& rng, int cls, int length) {
  Eigen::VectorXd v = noise(rng, length, 1.0);
  const int width = std::max(8, length / 8);
  const int firstAt = static_cast<int>(rng.uniform(0.05, 0.35) * length);
  const int secondAt = static_cast<int>(rng.uniform(0.55, 0.85) * length);
  addStep(v, firstAt, width, (cls & 2) ? -1.0 : 1.0);
  addStep(v, secondAt, width, (cls & 1) ? -1.0 : 1.0);
  return v;
}

void addBump(Eigen::VectorXd& v, double center, double width, double height) {
  for (int t = 0; t < v.size(); ++t) {
    const double z = (t - center) / width;
    v[t] += height * std::exp(-0.5 * z * z);
  }
}

// Every sequence carries one common bump; a second bump is single-peaked
// for class 0 and twin-peaked for class 1. Class membership lives in the
// local shape of that key bump, not in its position.
Eigen::VectorXd bumpKey(RandomStream& rng, int cls, int length) {
  Eigen::VectorXd v = noise(rng, length, 0.1);
  const double common = rng.uniform(0.15, 0.35) * length;
  addBump(v, common, length / 24.0, 2.0);
  const double key = rng.uniform(0.55, 0.85) * length;
  if (cls == 0) {
    addBump(v, key, length / 18.0, 2.0);
  } else {
    addBump(v, key - length / 24.0, length / 40.0, 1.6);
    addBump(v, key + length / 24.0, length / 40.0, 1.6);
  }
  return v;
}

// Two nearby oscillation frequencies with random phase and mild amplitude
// jitter.
Eigen::VectorXd sineFreq(RandomStream& rng, int cls, int length) {
  const double cycles = (cls == 0) ? 3.0 : 4.0;
  const double phase = rng.uniform(0.0, 2.0 * M_PI);
  const double amp = rng.uniform(0.9, 1.1);
  Eigen::VectorXd v = noise(rng, length, 0.25);
  for (int t = 0; t < length; ++t) {
    v[t] += amp * std::sin(2.0 * M_PI * cycles * t / length + phase);
  }
  return v;
}

struct Family {
  std::string name;
  int classes;
  Eigen::VectorXd (*generate)(RandomStream&, int, int);
};

const Family kFamilies[] = {
    {"cbf", 3, cbf},
    {"controlchart", 6, controlChart},
    {"twopattern", 4, twoPattern},
    {"bumpkey", 2, bumpKey},
    {"sinefreq", 2, sineFreq},
};

const Family& familyByName(const std::string& name) {
  for (const auto& f : kFamilies) {
    if (f.name == name) return f;
  }
  throw ValidationError("unknown synthetic family '" + name + "'");
}

LabeledSequence makeRecord(const Family& family, int cls, int length, std::uint64_t seed,
                           const std::string& id) {
  RandomStream rng(seed);
  LabeledSequence r;
  r.label = cls;
  r.sequence.values = family.generate(rng, cls, length);
  r.sequence.id = id;
  zNormalize(r.sequence);
  return r;
}

}  // namespace

std::vector<std::string> syntheticFamilies() {
  std::vector<std::string> names;
  for (const auto& f : kFamilies) names.push_back(f.name);
  return names;
}

std::vector<SyntheticSpec> defaultSyntheticSpecs() {
  return {
      {"cbf", 10, 20, 128},
      {"controlchart", 8, 10, 60},
      {"twopattern", 10, 15, 128},
      {"bumpkey", 15, 30, 96},
      {"sinefreq", 15, 30, 100},
  };
}

Dataset makeSynthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  const Family& family = familyByName(spec.family);
  if (spec.length < 16) throw ValidationError("makeSynthetic: length < 16");
  if (spec.trainPerClass < 1 || spec.testPerClass < 0) {
    throw ValidationError("makeSynthetic: bad class sizes");
  }
  Dataset d;
  d.name = spec.family;
  for (int c = 0; c < family.classes; ++c) d.rawLabels.push_back(c + 1);

  std::uint64_t counter = 0;
  for (int c = 0; c < family.classes; ++c) {
    for (int i = 0; i < spec.trainPerClass; ++i) {
      const std::string id = spec.family + "/train[" + std::to_string(d.train.size()) + "]";
      d.train.push_back(makeRecord(family, c, spec.length, deriveSeed(seed, counter++), id));
    }
  }
  for (int c = 0; c < family.classes; ++c) {
    for (int i = 0; i < spec.testPerClass; ++i) {
      const std::string id = spec.family + "/test[" + std::to_string(d.test.size()) + "]";
      d.test.push_back(makeRecord(family, c, spec.length, deriveSeed(seed, counter++), id));
    }
  }
  return d;
}

Dataset makeSynthetic(const std::string& family, int trainPerClass, int testPerClass, int length,
                      std::uint64_t seed) {
  return makeSynthetic(SyntheticSpec{family, trainPerClass, testPerClass, length}, seed);
}

Sequence smoothRandomSignal(int length, std::uint64_t seed) {
  if (length < 10) throw ValidationError("smoothRandomSignal: length < 10");
  RandomStream rng(seed);
  Sequence s;
  s.id = "smooth[" + std::to_string(seed) + "]";
  s.values = Eigen::VectorXd::Zero(length);
  const int components = 3 + static_cast<int>(rng.below(3));
  for (int c = 0; c < components; ++c) {
    const double cycles = rng.uniform(1.0, 4.0);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const double amp = rng.uniform(0.4, 1.0) / (c + 1);
    for (int t = 0; t < length; ++t) {
      s.values[t] += amp * std::sin(2.0 * M_PI * cycles * t / length + phase);
    }
  }
  zNormalize(s);
  return s;
}

}  // namespace metricdtw
