#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

namespace metricdtw {

// Univariate real-valued series. Valid sequences have length >= 2 and only
// finite samples.
struct Sequence {
  Eigen::VectorXd values;
  std::string id;

  Eigen::Index length() const { return values.size(); }
};

struct LabeledSequence {
  Sequence sequence;
  int label = 0;  // contiguous class id in 0..C-1
};

// Train/test split in the UCR convention. `rawLabels[c]` records the
// original label value mapped to class id c.
struct Dataset {
  std::vector<LabeledSequence> train;
  std::vector<LabeledSequence> test;
  std::string name;
  std::vector<double> rawLabels;
};

// Throws ValidationError if the sequence is shorter than 2 samples or
// contains non-finite values.
void validateSequence(const Sequence& s);

// Parses one UCR-style file: one record per line, first field the class
// label, remaining fields the samples. The separator (comma, tab, or any
// whitespace) is auto-detected per file. Returns raw labels alongside the
// sequences; sequence ids are "<name>[<line index>]".
struct RawRecords {
  std::vector<Sequence> sequences;
  std::vector<double> labels;
};
RawRecords loadUcrFile(const std::string& path, const std::string& name);

// Loads a train/test pair, remaps labels to 0..C-1 (sorted ascending order
// of the distinct raw train labels), and validates that every test label
// appears in the train label set. An empty test path yields an empty test
// split.
Dataset loadUcrSplit(const std::string& trainPath, const std::string& testPath,
                     const std::string& name = "");

// Plain sequence file: numeric samples separated by commas, whitespace, or
// newlines; no label field.
Sequence loadSequenceFile(const std::string& path);

// Writes records back to UCR text (comma-separated, full double precision),
// using the dataset's raw label values.
void writeUcrFile(const std::string& path, const std::vector<LabeledSequence>& records,
                  const std::vector<double>& rawLabels);

// Per-label sequence counts over the train split.
std::map<int, int> classCounts(const Dataset& d);

// JSON form {name, labels[], series[][]} for one split.
std::string recordsToJson(const std::string& name, const std::vector<LabeledSequence>& records);
std::vector<LabeledSequence> recordsFromJson(const std::string& text, std::string* name = nullptr);

// Per-sequence z-normalization: subtract mean, divide by population std.
// A constant sequence maps to all zeros.
void zNormalize(Sequence& s);
void zNormalize(Dataset& d);

}  // namespace metricdtw
