#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "metricdtw/classifier.hpp"
#include "metricdtw/dataset.hpp"
#include "metricdtw/descriptors.hpp"
#include "metricdtw/dtw.hpp"
#include "metricdtw/errors.hpp"
#include "metricdtw/evaluation.hpp"
#include "metricdtw/learner.hpp"
#include "metricdtw/random.hpp"
#include "metricdtw/synthetic.hpp"

namespace fs = std::filesystem;
using namespace metricdtw;

namespace {

std::string formatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct DescriptorFlags {
  std::string kind = "raw";
  std::string alignKind;  // empty = same as kind
  int window = 30;
  int hogIntervals = 2;
  int hogBins = 8;
  double hogSigma = 0.1;

  DescriptorConfig learnConfig() const {
    return {parseDescriptorKind(kind), window, hogIntervals, hogBins, hogSigma};
  }
  DescriptorConfig alignConfig() const {
    DescriptorConfig cfg = learnConfig();
    if (!alignKind.empty()) cfg.kind = parseDescriptorKind(alignKind);
    return cfg;
  }
};

void addDescriptorOptions(CLI::App* cmd, DescriptorFlags& flags) {
  cmd->add_option("--descriptor", flags.kind, "descriptor kind (raw|derivative|hog1d)")
      ->check(CLI::IsMember({"raw", "derivative", "hog1d"}));
  cmd->add_option("--align-descriptor", flags.alignKind,
                  "descriptor kind for the alignment step (default: --descriptor)")
      ->check(CLI::IsMember({"raw", "derivative", "hog1d"}));
  cmd->add_option("--window", flags.window, "descriptor window length");
  cmd->add_option("--hog-intervals", flags.hogIntervals, "HOG-1D interval count");
  cmd->add_option("--hog-bins", flags.hogBins, "HOG-1D bin count");
  cmd->add_option("--hog-sigma", flags.hogSigma, "HOG-1D orientation scale sigma");
}

struct LearnFlags {
  int kClusters = 5;
  int kappa = 3;
  std::vector<double> muGrid = {0.1, 0.3, 0.5, 0.7, 0.9};
  int folds = 5;
};

void addLearnOptions(CLI::App* cmd, LearnFlags& flags) {
  cmd->add_option("--k-clusters", flags.kClusters, "descriptor cluster count");
  cmd->add_option("--kappa", flags.kappa, "target neighbors per train sequence");
  cmd->add_option("--mu-grid", flags.muGrid, "mu values for cross-validation")->delimiter(',');
  cmd->add_option("--folds", flags.folds, "cross-validation fold count");
}

FitConfig makeFitConfig(const DescriptorFlags& d, const LearnFlags& l, std::uint64_t seed,
                        int threads) {
  FitConfig cfg;
  cfg.alignDescriptor = d.alignConfig();
  cfg.learnDescriptor = d.learnConfig();
  cfg.kClusters = l.kClusters;
  cfg.kappa = l.kappa;
  cfg.muGrid = l.muGrid;
  cfg.folds = l.folds;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

std::vector<DatasetSource> discoverDatasets(const std::string& dataDir,
                                            const std::vector<std::string>& only) {
  std::vector<DatasetSource> sources;
  if (!fs::is_directory(dataDir)) {
    throw ValidationError("data directory '" + dataDir + "' does not exist");
  }
  auto tryAdd = [&](const std::string& name, const fs::path& trainPath) {
    std::string test = trainPath.string();
    const auto at = test.rfind("_TRAIN");
    if (at == std::string::npos) return;
    test.replace(at, 6, "_TEST");
    if (fs::exists(test)) sources.push_back({name, trainPath.string(), test});
  };
  for (const auto& entry : fs::directory_iterator(dataDir)) {
    if (entry.is_directory()) {
      for (const auto& inner : fs::directory_iterator(entry.path())) {
        if (!inner.is_regular_file()) continue;
        if (inner.path().filename().string().find("_TRAIN") != std::string::npos) {
          tryAdd(entry.path().filename().string(), inner.path());
        }
      }
    } else if (entry.is_regular_file()) {
      const std::string fn = entry.path().filename().string();
      const auto at = fn.find("_TRAIN");
      if (at != std::string::npos) tryAdd(fn.substr(0, at), entry.path());
    }
  }
  if (!only.empty()) {
    std::vector<DatasetSource> filtered;
    for (const auto& s : sources) {
      if (std::find(only.begin(), only.end(), s.name) != only.end()) filtered.push_back(s);
    }
    sources = std::move(filtered);
  }
  std::sort(sources.begin(), sources.end(),
            [](const DatasetSource& a, const DatasetSource& b) { return a.name < b.name; });
  return sources;
}

void writeFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << content;
}

// ---- align ----------------------------------------------------------------

struct AlignArgs {
  std::string fileA, fileB;
  std::string space = "point";
  DescriptorFlags desc;
  bool normalize = false;
  std::string out = "dtw_path.csv";
};

int runAlign(const AlignArgs& a) {
  Sequence sa = loadSequenceFile(a.fileA);
  Sequence sb = loadSequenceFile(a.fileB);
  if (a.normalize) {
    zNormalize(sa);
    zNormalize(sb);
  }
  DescriptorSeries P, Q;
  if (a.space == "point") {
    P = pointSeries(sa);
    Q = pointSeries(sb);
  } else {
    DescriptorConfig cfg = a.desc.learnConfig();
    cfg.kind = parseDescriptorKind(a.space);
    P = extractAll(sa, cfg);
    Q = extractAll(sb, cfg);
  }
  const DtwResult r = align(P, Q);
  std::ofstream out(a.out);
  if (!out) throw ValidationError("cannot write '" + a.out + "'");
  writePathCsv(out, r.path);
  std::cout << formatDouble(r.distance) << "\n";
  return 0;
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
  std::string train, test, name;
  DescriptorFlags desc;
  LearnFlags learn;
  std::uint64_t seed = 0;
  int threads = 1;
  bool normalize = false;
  std::string out = "model.json";
};

int runFit(const FitArgs& a) {
  Dataset d = loadUcrSplit(a.train, a.test, a.name);
  if (a.normalize) zNormalize(d);
  const FitConfig cfg = makeFitConfig(a.desc, a.learn, a.seed, a.threads);
  const MetricModel model = fit(d, cfg, &std::cerr);
  writeFile(a.out, metricModelToJson(model) + "\n");
  return 0;
}

// ---- classify ---------------------------------------------------------------

struct ClassifyArgs {
  std::string train, test, name;
  std::string modelPath;
  bool baseline = false;
  DescriptorFlags desc;
  int threads = 1;
  bool normalize = false;
  std::string out = "out";
};

int runClassify(const ClassifyArgs& a) {
  Dataset d = loadUcrSplit(a.train, a.test, a.name);
  if (a.normalize) zNormalize(d);

  std::vector<Prediction> preds;
  if (a.baseline) {
    preds = classifyBaseline(d.test, d.train, a.threads);
  } else if (!a.modelPath.empty()) {
    std::ifstream in(a.modelPath);
    if (!in) throw ValidationError("cannot open model '" + a.modelPath + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const MetricModel model = metricModelFromJson(text);
    DescriptorConfig alignCfg = model.descriptorCfg;
    if (!a.desc.alignKind.empty()) alignCfg.kind = parseDescriptorKind(a.desc.alignKind);
    preds = classify(d.test, d.train, model, alignCfg, a.threads);
  } else {
    preds = classifyUnit(d.test, d.train, a.desc.alignConfig(), a.desc.learnConfig(), a.threads);
  }

  const double err = errorRate(preds, d.test);
  fs::create_directories(a.out);
  {
    std::ofstream out(fs::path(a.out) / "predictions.csv");
    writePredictionsCsv(out, preds);
  }
  writeFile(fs::path(a.out) / "error.txt", formatDouble(err) + "\n");
  std::cout << "error_rate " << formatDouble(err) << "\n";
  return 0;
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string study;
  std::string dataDir;
  std::vector<std::string> datasets;
  DescriptorFlags desc;
  LearnFlags learn;
  std::vector<int> kList = {5, 10};
  int count = 100;
  double strength = 0.3;
  int length = 128;
  std::uint64_t seed = 0;
  int threads = 1;
  bool normalize = false;
  std::string out = "results";
};

int runWarpStudy(const EvaluateArgs& a) {
  // Alignment quality of point vs descriptor alignment against simulated
  // ground truth.
  struct Condition {
    std::string name;
    bool point;
    DescriptorKind kind;
  };
  const std::vector<Condition> conditions = {
      {"point", true, DescriptorKind::Raw},
      {"raw", false, DescriptorKind::Raw},
      {"derivative", false, DescriptorKind::Derivative},
      {"hog1d", false, DescriptorKind::Hog1d},
  };

  std::string csv = "pair,condition,alignment_error\n";
  std::map<std::string, double> sums;
  for (int i = 0; i < a.count; ++i) {
    const Sequence base = smoothRandomSignal(a.length, deriveSeed(a.seed, 1000 + i));
    const WarpedPair pair = simulateWarpedPair(base, deriveSeed(a.seed, i), a.strength);
    for (const auto& c : conditions) {
      DescriptorSeries P, Q;
      if (c.point) {
        P = pointSeries(pair.original);
        Q = pointSeries(pair.warped);
      } else {
        DescriptorConfig cfg = a.desc.learnConfig();
        cfg.kind = c.kind;
        P = extractAll(pair.original, cfg);
        Q = extractAll(pair.warped, cfg);
      }
      const double err = alignmentError(align(P, Q).path, pair.truth);
      sums[c.name] += err;
      csv += std::to_string(i) + "," + c.name + "," + formatDouble(err) + "\n";
    }
  }
  nlohmann::json summary;
  for (const auto& [name, sum] : sums) summary[name]["mean_alignment_error"] = sum / a.count;
  writeFile(fs::path(a.out) / "alignment_errors.csv", csv);
  writeFile(fs::path(a.out) / "summary.json", summary.dump(2) + "\n");
  return 0;
}

int runEvaluate(const EvaluateArgs& a) {
  if (a.study == "fig4right") return runWarpStudy(a);

  const auto sources = discoverDatasets(a.dataDir, a.datasets);
  if (sources.empty()) throw ValidationError("no datasets found under '" + a.dataDir + "'");

  std::vector<ExperimentResult> results;
  const std::vector<std::string> descriptorNames = {"raw", "derivative", "hog1d"};

  if (a.study == "fig3") {
    // Align and learn under the same descriptor, one condition per kind.
    for (const auto& name : descriptorNames) {
      DescriptorFlags d = a.desc;
      d.kind = name;
      d.alignKind = name;
      const FitConfig cfg = makeFitConfig(d, a.learn, a.seed, a.threads);
      const auto part =
          runComparison(sources, cfg, "fig3:descriptor=" + name, a.normalize, &std::cerr);
      results.insert(results.end(), part.begin(), part.end());
    }
  } else if (a.study == "fig4") {
    // Align under each descriptor, always learn under the derivative.
    for (const auto& name : descriptorNames) {
      DescriptorFlags d = a.desc;
      d.kind = "derivative";
      d.alignKind = name;
      const FitConfig cfg = makeFitConfig(d, a.learn, a.seed, a.threads);
      const auto part = runComparison(sources, cfg, "fig4:align=" + name, a.normalize, &std::cerr);
      results.insert(results.end(), part.begin(), part.end());
    }
  } else if (a.study == "fig5") {
    // Cluster-count sweep, align and learn under the derivative.
    for (int k : a.kList) {
      DescriptorFlags d = a.desc;
      d.kind = "derivative";
      d.alignKind = "derivative";
      LearnFlags l = a.learn;
      l.kClusters = k;
      const FitConfig cfg = makeFitConfig(d, l, a.seed, a.threads);
      const auto part =
          runComparison(sources, cfg, "fig5:k=" + std::to_string(k), a.normalize, &std::cerr);
      results.insert(results.end(), part.begin(), part.end());
    }
  } else if (a.study == "fig6") {
    // HOG-1D descriptor pipeline (unit and learned) against the raw-point
    // 1NN-DTW baseline.
    DescriptorFlags d = a.desc;
    d.kind = "hog1d";
    d.alignKind = "hog1d";
    const FitConfig cfg = makeFitConfig(d, a.learn, a.seed, a.threads);
    for (const auto& src : sources) {
      try {
        Dataset data = loadUcrSplit(src.trainPath, src.testPath, src.name);
        if (a.normalize) zNormalize(data);
        const double errBaseline =
            errorRate(classifyBaseline(data.test, data.train, a.threads), data.test);
        const double errUnit =
            errorRate(classifyUnit(data.test, data.train, cfg.alignDescriptor,
                                   cfg.learnDescriptor, a.threads),
                      data.test);
        const MetricModel model = fit(data, cfg, &std::cerr);
        const double errLearned = errorRate(
            classify(data.test, data.train, model, cfg.alignDescriptor, a.threads), data.test);
        results.push_back({src.name, "fig6:unit-vs-baseline", errBaseline, errUnit});
        results.push_back({src.name, "fig6:learned-vs-baseline", errBaseline, errLearned});
      } catch (const std::exception& e) {
        std::cerr << "warning: skipping dataset '" << src.name << "': " << e.what() << "\n";
      }
    }
  }

  std::ostringstream csv;
  writeResultsCsv(csv, results);
  writeFile(fs::path(a.out) / "results.csv", csv.str());
  writeFile(fs::path(a.out) / "summary.json", resultsSummaryJson(results) + "\n");
  return 0;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string train;
  int count = 20;
  int length = 128;
  double strength = 0.3;
  bool noAmplitude = false;
  std::uint64_t seed = 0;
  std::string out = "warped_pairs.json";
};

int runSimulate(const SimulateArgs& a) {
  std::vector<Sequence> bases;
  if (!a.train.empty()) {
    const RawRecords raw = loadUcrFile(a.train, "bases");
    bases = raw.sequences;
    if (bases.empty()) throw ValidationError("'" + a.train + "' contains no sequences");
  } else {
    for (int i = 0; i < a.count; ++i) {
      bases.push_back(smoothRandomSignal(a.length, deriveSeed(a.seed, 1000 + i)));
    }
  }

  nlohmann::json j;
  j["strength"] = a.strength;
  j["seed"] = a.seed;
  auto& pairs = j["pairs"] = nlohmann::json::array();
  for (int i = 0; i < a.count; ++i) {
    const Sequence& base = bases[static_cast<std::size_t>(i) % bases.size()];
    const WarpedPair p =
        simulateWarpedPair(base, deriveSeed(a.seed, i), a.strength, !a.noAmplitude);
    nlohmann::json entry;
    entry["original"] = std::vector<double>(p.original.values.data(),
                                            p.original.values.data() + p.original.values.size());
    entry["warped"] = std::vector<double>(p.warped.values.data(),
                                          p.warped.values.data() + p.warped.values.size());
    auto& truth = entry["truth"] = nlohmann::json::array();
    for (const auto& [pi, pj] : p.truth) truth.push_back({pi, pj});
    pairs.push_back(std::move(entry));
  }
  writeFile(a.out, j.dump() + "\n");
  return 0;
}

// ---- gendata ----------------------------------------------------------------

struct GendataArgs {
  std::vector<std::string> families;
  std::uint64_t seed = 7;
  std::string out = "data";
};

int runGendata(const GendataArgs& a) {
  std::uint64_t familyIndex = 0;
  for (const auto& spec : defaultSyntheticSpecs()) {
    ++familyIndex;
    if (!a.families.empty() &&
        std::find(a.families.begin(), a.families.end(), spec.family) == a.families.end()) {
      continue;
    }
    const Dataset d = makeSynthetic(spec, deriveSeed(a.seed, familyIndex));
    const fs::path dir = fs::path(a.out) / spec.family;
    fs::create_directories(dir);
    writeUcrFile((dir / (spec.family + "_TRAIN.txt")).string(), d.train, d.rawLabels);
    writeUcrFile((dir / (spec.family + "_TEST.txt")).string(), d.test, d.rawLabels);
    std::cout << spec.family << " train=" << d.train.size() << " test=" << d.test.size()
              << " length=" << spec.length << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1NN time-series classification under DTW with learned local metrics"};
  app.require_subcommand(1);

  AlignArgs alignArgs;
  auto* alignCmd = app.add_subcommand("align", "align two sequence files and report the distance");
  alignCmd->set_config("--config");
  alignCmd->add_option("fileA", alignArgs.fileA, "first sequence file")->required();
  alignCmd->add_option("fileB", alignArgs.fileB, "second sequence file")->required();
  alignCmd
      ->add_option("--descriptor", alignArgs.space, "point costs (point) or a descriptor space")
      ->check(CLI::IsMember({"point", "raw", "derivative", "hog1d"}));
  alignCmd->add_option("--window", alignArgs.desc.window, "descriptor window length");
  alignCmd->add_option("--hog-intervals", alignArgs.desc.hogIntervals, "HOG-1D interval count");
  alignCmd->add_option("--hog-bins", alignArgs.desc.hogBins, "HOG-1D bin count");
  alignCmd->add_option("--hog-sigma", alignArgs.desc.hogSigma, "HOG-1D orientation scale");
  alignCmd->add_flag("--normalize", alignArgs.normalize, "z-normalize both sequences");
  alignCmd->add_option("--out", alignArgs.out, "alignment path CSV output");

  FitArgs fitArgs;
  auto* fitCmd = app.add_subcommand("fit", "learn a metric model from a training split");
  fitCmd->set_config("--config");
  fitCmd->add_option("--train", fitArgs.train, "UCR train file")->required();
  fitCmd->add_option("--test", fitArgs.test, "UCR test file (optional, unused by fit)");
  fitCmd->add_option("--name", fitArgs.name, "dataset name");
  addDescriptorOptions(fitCmd, fitArgs.desc);
  addLearnOptions(fitCmd, fitArgs.learn);
  fitCmd->add_option("--seed", fitArgs.seed, "random seed");
  fitCmd->add_option("--threads", fitArgs.threads, "worker threads");
  fitCmd->add_flag("--normalize", fitArgs.normalize, "z-normalize sequences");
  fitCmd->add_option("--out", fitArgs.out, "model JSON output path");

  ClassifyArgs classifyArgs;
  auto* classifyCmd = app.add_subcommand("classify", "1NN-classify a test split");
  classifyCmd->set_config("--config");
  classifyCmd->add_option("--train", classifyArgs.train, "UCR train file")->required();
  classifyCmd->add_option("--test", classifyArgs.test, "UCR test file")->required();
  classifyCmd->add_option("--name", classifyArgs.name, "dataset name");
  classifyCmd->add_option("--model", classifyArgs.modelPath, "metric model JSON");
  classifyCmd->add_flag("--baseline", classifyArgs.baseline,
                        "raw-point 1NN-DTW baseline (no descriptors)");
  addDescriptorOptions(classifyCmd, classifyArgs.desc);
  classifyCmd->add_option("--threads", classifyArgs.threads, "worker threads");
  classifyCmd->add_flag("--normalize", classifyArgs.normalize, "z-normalize sequences");
  classifyCmd->add_option("--out", classifyArgs.out, "output directory");

  EvaluateArgs evalArgs;
  auto* evalCmd = app.add_subcommand("evaluate", "run a named study over a dataset directory");
  evalCmd->set_config("--config");
  evalCmd->add_option("--study", evalArgs.study, "study name")
      ->check(CLI::IsMember({"fig3", "fig4", "fig4right", "fig5", "fig6"}))
      ->required();
  evalCmd->add_option("--data-dir", evalArgs.dataDir, "directory of UCR datasets");
  evalCmd->add_option("--datasets", evalArgs.datasets, "restrict to these dataset names")
      ->delimiter(',');
  addDescriptorOptions(evalCmd, evalArgs.desc);
  addLearnOptions(evalCmd, evalArgs.learn);
  evalCmd->add_option("--k-list", evalArgs.kList, "cluster counts for fig5")->delimiter(',');
  evalCmd->add_option("--count", evalArgs.count, "warped pair count for fig4right");
  evalCmd->add_option("--strength", evalArgs.strength, "warp strength for fig4right");
  evalCmd->add_option("--length", evalArgs.length, "base length for fig4right");
  evalCmd->add_option("--seed", evalArgs.seed, "random seed");
  evalCmd->add_option("--threads", evalArgs.threads, "worker threads");
  evalCmd->add_flag("--normalize", evalArgs.normalize, "z-normalize sequences");
  evalCmd->add_option("--out", evalArgs.out, "output directory");

  SimulateArgs simArgs;
  auto* simCmd = app.add_subcommand("simulate", "write a corpus of warped alignment pairs");
  simCmd->set_config("--config");
  simCmd->add_option("--train", simArgs.train, "UCR file providing base sequences");
  simCmd->add_option("--count", simArgs.count, "number of pairs");
  simCmd->add_option("--length", simArgs.length, "generated base length");
  simCmd->add_option("--strength", simArgs.strength, "stretch strength in (0,1]");
  simCmd->add_flag("--no-amplitude", simArgs.noAmplitude, "disable amplitude scaling");
  simCmd->add_option("--seed", simArgs.seed, "random seed");
  simCmd->add_option("--out", simArgs.out, "output JSON path");

  GendataArgs genArgs;
  auto* genCmd = app.add_subcommand("gendata", "generate the bundled synthetic UCR datasets");
  genCmd->set_config("--config");
  genCmd->add_option("--families", genArgs.families, "families to generate (default: all)")
      ->delimiter(',');
  genCmd->add_option("--seed", genArgs.seed, "random seed");
  genCmd->add_option("--out", genArgs.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (alignCmd->parsed()) return runAlign(alignArgs);
    if (fitCmd->parsed()) return runFit(fitArgs);
    if (classifyCmd->parsed()) return runClassify(classifyArgs);
    if (evalCmd->parsed()) return runEvaluate(evalArgs);
    if (simCmd->parsed()) return runSimulate(simArgs);
    if (genCmd->parsed()) return runGendata(genArgs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
