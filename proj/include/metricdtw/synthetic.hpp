#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "metricdtw/dataset.hpp"

namespace metricdtw {

// Families of generated classification datasets in the UCR train/test
// convention. All generators are deterministic given the seed and
// z-normalize each sequence.
//   cbf          cylinder/bell/funnel shapes (3 classes)
//   controlchart control-chart patterns: normal, cyclic, trends, shifts
//                (6 classes)
//   twopattern   ordered combinations of up/down step events (4 classes)
//   bumpkey      shared bump plus a class-keyed local bump shape (2 classes)
//   sinefreq     nearby oscillation frequencies (2 classes)
std::vector<std::string> syntheticFamilies();

struct SyntheticSpec {
  std::string family;
  int trainPerClass = 10;
  int testPerClass = 20;
  int length = 128;
};

// Desk-scale default sizes per family.
std::vector<SyntheticSpec> defaultSyntheticSpecs();

Dataset makeSynthetic(const SyntheticSpec& spec, std::uint64_t seed);
Dataset makeSynthetic(const std::string& family, int trainPerClass, int testPerClass, int length,
                      std::uint64_t seed);

// Smooth aperiodic base signal (mixture of sinusoids) for the warp
// simulation study.
Sequence smoothRandomSignal(int length, std::uint64_t seed);

}  // namespace metricdtw
