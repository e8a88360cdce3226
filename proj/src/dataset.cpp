#include "metricdtw/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "metricdtw/errors.hpp"
#include "json.hpp"

namespace metricdtw {

namespace {

std::vector<std::string> splitLine(const std::string& line, char sep) {
  std::vector<std::string> fields;
  if (sep == ' ') {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) fields.push_back(tok);
    return fields;
  }
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

bool parseDouble(const std::string& tok, double* out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) return false;
  *out = v;
  return true;
}

// Separator detection per file: first separator that yields >= 2 numeric
// fields on the first non-empty line wins. Order: comma, tab, whitespace.
char detectSeparator(const std::string& firstLine, const std::string& path) {
  for (char sep : {',', '\t', ' '}) {
    const auto fields = splitLine(firstLine, sep);
    if (fields.size() < 2) continue;
    bool numeric = true;
    double v;
    for (const auto& f : fields) {
      if (!parseDouble(f, &v)) {
        numeric = false;
        break;
      }
    }
    if (numeric) return sep;
  }
  throw ParseError(path + ":1: cannot detect a separator yielding two or more numeric fields");
}

std::string trimCr(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  return line;
}

}  // namespace

void validateSequence(const Sequence& s) {
  if (s.values.size() < 2) {
    throw ValidationError("sequence '" + s.id + "': length " + std::to_string(s.values.size()) +
                          " < 2");
  }
  if (!s.values.allFinite()) {
    throw ValidationError("sequence '" + s.id + "': non-finite sample");
  }
}

RawRecords loadUcrFile(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  RawRecords out;
  std::string line;
  char sep = 0;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    line = trimCr(line);
    if (line.empty()) continue;
    if (sep == 0) sep = detectSeparator(line, path);

    const auto fields = splitLine(line, sep);
    if (fields.size() < 2) {
      throw ParseError(path + ":" + std::to_string(lineNo) + ": fewer than two fields");
    }
    std::vector<double> parsed(fields.size());
    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (!parseDouble(fields[f], &parsed[f])) {
        throw ParseError(path + ":" + std::to_string(lineNo) + ": non-numeric field '" +
                         fields[f] + "'");
      }
    }
    Sequence s;
    s.id = name + "[" + std::to_string(out.sequences.size()) + "]";
    s.values = Eigen::Map<const Eigen::VectorXd>(parsed.data() + 1,
                                                 static_cast<Eigen::Index>(parsed.size() - 1));
    validateSequence(s);
    out.sequences.push_back(std::move(s));
    out.labels.push_back(parsed[0]);
  }
  return out;
}

Dataset loadUcrSplit(const std::string& trainPath, const std::string& testPath,
                     const std::string& name) {
  Dataset d;
  d.name = name.empty() ? trainPath : name;

  const RawRecords trainRaw = loadUcrFile(trainPath, d.name + "/train");
  const RawRecords testRaw =
      testPath.empty() ? RawRecords{} : loadUcrFile(testPath, d.name + "/test");
  if (trainRaw.sequences.empty()) throw ValidationError("'" + trainPath + "': empty train split");

  std::set<double> distinct(trainRaw.labels.begin(), trainRaw.labels.end());
  d.rawLabels.assign(distinct.begin(), distinct.end());
  std::map<double, int> toClass;
  for (std::size_t c = 0; c < d.rawLabels.size(); ++c) toClass[d.rawLabels[c]] = static_cast<int>(c);

  for (std::size_t i = 0; i < trainRaw.sequences.size(); ++i) {
    d.train.push_back({trainRaw.sequences[i], toClass.at(trainRaw.labels[i])});
  }
  for (std::size_t i = 0; i < testRaw.sequences.size(); ++i) {
    const auto it = toClass.find(testRaw.labels[i]);
    if (it == toClass.end()) {
      throw ValidationError(d.name + ": test label " + std::to_string(testRaw.labels[i]) +
                            " does not appear in the train label set");
    }
    d.test.push_back({testRaw.sequences[i], it->second});
  }
  return d;
}

Sequence loadSequenceFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<double> samples;
  std::string tok;
  int lineNo = 1;
  char c;
  while (in.get(c)) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!tok.empty()) {
        double v;
        if (!parseDouble(tok, &v)) {
          throw ParseError(path + ":" + std::to_string(lineNo) + ": non-numeric field '" + tok +
                           "'");
        }
        samples.push_back(v);
        tok.clear();
      }
      if (c == '\n') ++lineNo;
    } else {
      tok += c;
    }
  }
  if (!tok.empty()) {
    double v;
    if (!parseDouble(tok, &v)) {
      throw ParseError(path + ":" + std::to_string(lineNo) + ": non-numeric field '" + tok + "'");
    }
    samples.push_back(v);
  }
  Sequence s;
  s.id = path;
  s.values = Eigen::Map<const Eigen::VectorXd>(samples.data(),
                                               static_cast<Eigen::Index>(samples.size()));
  validateSequence(s);
  return s;
}

void writeUcrFile(const std::string& path, const std::vector<LabeledSequence>& records,
                  const std::vector<double>& rawLabels) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  char buf[64];
  for (const auto& r : records) {
    const double raw = rawLabels.at(static_cast<std::size_t>(r.label));
    std::snprintf(buf, sizeof buf, "%.17g", raw);
    out << buf;
    for (Eigen::Index i = 0; i < r.sequence.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", r.sequence.values[i]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

std::map<int, int> classCounts(const Dataset& d) {
  std::map<int, int> counts;
  for (const auto& r : d.train) ++counts[r.label];
  return counts;
}

std::string recordsToJson(const std::string& name, const std::vector<LabeledSequence>& records) {
  nlohmann::json j;
  j["name"] = name;
  auto& labels = j["labels"] = nlohmann::json::array();
  auto& series = j["series"] = nlohmann::json::array();
  for (const auto& r : records) {
    labels.push_back(r.label);
    series.push_back(std::vector<double>(r.sequence.values.data(),
                                         r.sequence.values.data() + r.sequence.values.size()));
  }
  return j.dump();
}

std::vector<LabeledSequence> recordsFromJson(const std::string& text, std::string* name) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (name) *name = j.at("name").get<std::string>();
  const auto& labels = j.at("labels");
  const auto& series = j.at("series");
  if (labels.size() != series.size()) {
    throw ValidationError("records json: labels and series lengths differ");
  }
  std::vector<LabeledSequence> records;
  for (std::size_t i = 0; i < series.size(); ++i) {
    LabeledSequence r;
    const auto vals = series[i].get<std::vector<double>>();
    r.sequence.values = Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                                          static_cast<Eigen::Index>(vals.size()));
    r.sequence.id = j.at("name").get<std::string>() + "[" + std::to_string(i) + "]";
    r.label = labels[i].get<int>();
    validateSequence(r.sequence);
    records.push_back(std::move(r));
  }
  return records;
}

void zNormalize(Sequence& s) {
  const double mean = s.values.mean();
  const double var = (s.values.array() - mean).square().mean();
  const double sd = std::sqrt(var);
  if (sd > 0.0) {
    s.values = (s.values.array() - mean) / sd;
  } else {
    s.values.setZero();
  }
}

void zNormalize(Dataset& d) {
  for (auto& r : d.train) zNormalize(r.sequence);
  for (auto& r : d.test) zNormalize(r.sequence);
}

}  // namespace metricdtw
