// Copyright 2026 The sparsefx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "sparsefx/errors.hpp"
#include "sparsefx/matrix_io.hpp"
#include "sparsefx/pca.hpp"
#include "sparsefx/pipeline.hpp"
#include "sparsefx/reports.hpp"
#include "sparsefx/synth.hpp"

namespace sparsefx::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kTimingsFile = "stage_timings.json";

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// Times one staged subcommand and records it in stage_timings.json so that
// evaluate can report every stage.
class StageTimer {
 public:
  StageTimer(const PipelineConfig& cfg, std::string stage)
      : dir_(cfg.out_dir), stage_(std::move(stage)), enabled_(cfg.record_timings),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(dir_);
    fs::remove(dir_ / kIncompleteMarker);
  }
  void done() {
    if (!enabled_) return;
    json t = fs::exists(dir_ / kTimingsFile) ? read_json(dir_ / kTimingsFile) : json::object();
    const std::chrono::duration<double, std::milli> ms =
        std::chrono::steady_clock::now() - start_;
    t[stage_] = ms.count();
    write_json(dir_ / kTimingsFile, t);
  }

 private:
  fs::path dir_;
  std::string stage_;
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

// Runs body; on failure leaves an INCOMPLETE marker naming the stage.
template <typename Body>
void staged(const PipelineConfig& cfg, const std::string& stage, Body&& body) {
  StageTimer timer(cfg, stage);
  try {
    body();
  } catch (const std::exception& e) {
    std::ofstream(cfg.out_dir / kIncompleteMarker, std::ios::trunc)
        << "stage '" << stage << "': " << e.what() << '\n';
    throw;
  }
  timer.done();
}

std::vector<ksvd::IterationLog> read_training_log(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<ksvd::IterationLog> log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string it, obj, rep;
    std::getline(fields, it, ',');
    std::getline(fields, obj, ',');
    std::getline(fields, rep, ',');
    try {
      log.push_back({std::stol(it), 0.0, std::stod(obj), std::stol(rep)});
    } catch (const std::exception&) {
      throw DataError(path.string() + ": malformed row '" + line + "'");
    }
  }
  return log;
}

}  // namespace

PipelineConfig resolve_config(const CommonOptions& o) {
  ConfigMap values;
  if (!o.config_file.empty()) values = load_config_file(o.config_file);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    values[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  PipelineConfig cfg = apply_config(values);
  if (!o.manifests.empty()) {
    cfg.manifests.assign(o.manifests.begin(), o.manifests.end());
  }
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  cfg.apply_seeds();
  cfg.rffd.threads = cfg.threads;
  cfg.ksvd.threads = cfg.threads;
  return cfg;
}

void ingest(const PipelineConfig& cfg) {
  staged(cfg, "ingest", [&] {
    ManifestOptions opts;
    opts.resize = cfg.resize;
    opts.threads = cfg.threads;
    const LabeledDataset ds = load_manifests(cfg.manifests, opts);
    const Split parts = split(ds, cfg.split);
    save_dataset(parts.train, cfg.out_dir, "train");
    save_dataset(parts.test, cfg.out_dir, "test");
    std::cout << "ingest: " << ds.size() << " images, d=" << ds.dim() << ", "
              << ds.num_classes() << " classes -> train " << parts.train.size()
              << ", test " << parts.test.size() << '\n';
  });
}

void project(const PipelineConfig& cfg, const ProjectOptions& options) {
  staged(cfg, "project", [&] {
    const LabeledDataset train = load_dataset(cfg.out_dir, "train");
    LabeledDataset test = load_dataset(cfg.out_dir, "test");
    DenseMatrix projection;
    LabeledDataset projected;
    if (options.method == "rffd") {
      const rffd::SearchResult r = rffd::search(train, cfg.rffd);
      write_rffd_report(r.report, cfg.out_dir / "report.csv");
      projection = r.best.projection;
      projected = r.projected;
      std::cout << "project: rffd picked m=" << r.best.dim << " candidate "
                << r.best.index << " (cv accuracy " << r.best.cv_accuracy.value_or(0)
                << ")\n";
    } else if (options.method == "pca") {
      Index m = options.dim;
      if (m == 0) m = *std::min_element(cfg.rffd.dims.begin(), cfg.rffd.dims.end());
      // The principal directions act as an (uncentred) linear projection so
      // the bundle keeps a single projection matrix.
      projection = rffd::fit_pca(train.features, m).components;
      projected = train;
      projected.features = projection * train.features;
      rffd::CandidateScore row;
      row.m = m;
      row.quality_ok = true;
      row.cv_accuracy = svm::cross_validate(projected.features, projected.labels,
                                            projected.num_classes(), cfg.rffd.svm_C,
                                            cfg.rffd.cv)
                            .mean_accuracy;
      row.winner_for_m = row.global_winner = true;
      const std::vector<rffd::CandidateScore> report = {row};
      write_rffd_report(report, cfg.out_dir / "report.csv");
      std::cout << "project: pca m=" << m << " (cv accuracy " << *row.cv_accuracy
                << ")\n";
    } else {
      throw ConfigError("project: unknown method '" + options.method +
                        "' (expected rffd or pca)");
    }
    save_matrix(projection, cfg.out_dir / "projection.smx");
    save_dataset(projected, cfg.out_dir, "train_projected");
    if (test.size() > 0) test.features = rffd::project(projection, test.features);
    else test.features.resize(projection.rows(), 0);
    save_dataset(test, cfg.out_dir, "test_projected");
  });
}

void train_dict(const PipelineConfig& cfg) {
  staged(cfg, "train-dict", [&] {
    const LabeledDataset train = load_dataset(cfg.out_dir, "train_projected");
    ksvd::Dictionary init = ksvd::init_dictionary(train.features);
    init.class_names = train.class_names;
    const Index l = cfg.sparsity.resolve(init.size());
    if (l > std::min(init.dim(), init.size())) {
      throw ConfigError("sparsity " + std::to_string(l) + " exceeds min(n, K) = " +
                        std::to_string(std::min(init.dim(), init.size())));
    }
    const ksvd::KsvdResult r = ksvd::refine(init, train.features, l, cfg.ksvd);
    save_matrix(r.dictionary.atoms, cfg.out_dir / "dictionary.smx");
    write_training_log(r.dictionary.training_log, cfg.out_dir / "training_log.csv");
    json meta;
    meta["K"] = r.dictionary.size();
    meta["L"] = l;
    meta["iterations"] = r.dictionary.training_log.size();
    write_json(cfg.out_dir / "dictionary.json", meta);
    std::cout << "train-dict: K=" << r.dictionary.size() << ", L=" << l << ", "
              << r.dictionary.training_log.size() << " iterations, objective "
              << r.dictionary.training_log.back().objective << '\n';
  });
}

void encode(const PipelineConfig& cfg) {
  staged(cfg, "encode", [&] {
    const DenseMatrix dict = load_matrix(cfg.out_dir / "dictionary.smx");
    const Index l = read_json(cfg.out_dir / "dictionary.json").at("L").get<Index>();
    const LabeledDataset train = load_dataset(cfg.out_dir, "train_projected");
    const LabeledDataset test = load_dataset(cfg.out_dir, "test_projected");
    std::vector<omp::SparseCode> train_details, test_details;
    const DenseMatrix train_codes =
        omp::batch_encode(dict, train.features, l, 0.0, cfg.threads, &train_details);
    save_matrix(train_codes, cfg.out_dir / "train_codes.smx");
    if (test.size() > 0) {
      const DenseMatrix test_codes =
          omp::batch_encode(dict, test.features, l, 0.0, cfg.threads, &test_details);
      save_matrix(test_codes, cfg.out_dir / "test_codes.smx");
    }
    write_codes_stats(train_details, test_details, cfg.out_dir / "codes_stats.csv");
    std::cout << "encode: " << train.size() << " train, " << test.size()
              << " test signals at L=" << l << '\n';
  });
}

void train_svm(const PipelineConfig& cfg) {
  staged(cfg, "train-svm", [&] {
    const LabeledDataset train = load_dataset(cfg.out_dir, "train_projected");
    const DenseMatrix codes = load_matrix(cfg.out_dir / "train_codes.smx");
    if (codes.cols() != train.size()) {
      throw DimensionError("train_codes.smx does not match the training set");
    }
    const svm::GridSearchResult grid = svm::grid_search(
        codes, train.labels, train.num_classes(), cfg.c_grid, cfg.svm_cv);
    const svm::LinearSvmModel model =
        svm::train(codes, train.labels, train.class_names, grid.best_C);
    write_grid_report(grid, cfg.out_dir / "grid_report.csv");
    save_matrix(model.weights, cfg.out_dir / "svm_weights.smx");
    save_matrix(model.bias, cfg.out_dir / "svm_bias.smx");
    json meta;
    meta["C"] = model.C;
    write_json(cfg.out_dir / "svm.json", meta);
    std::cout << "train-svm: C=" << model.C << '\n';
  });
}

void evaluate(const PipelineConfig& cfg) {
  staged(cfg, "evaluate", [&] {
    const fs::path& dir = cfg.out_dir;
    PipelineResult r;
    r.seeds = SeedSet::derive(cfg.master_seed);
    const LabeledDataset train = load_dataset(dir, "train_projected");
    const LabeledDataset test = load_dataset(dir, "test_projected");
    if (test.size() == 0) throw DataError("evaluate: the test set is empty");
    r.train_size = train.size();
    r.test_size = test.size();
    r.test_labels = test.labels;
    r.test_projected = test.features;

    for (const auto& row : read_rffd_report(dir / "report.csv")) {
      if (row.global_winner) {
        r.rffd.best.dim = row.m;
        r.rffd.best.index = row.index;
        r.rffd.best.seed = row.seed;
        r.rffd.best.cv_accuracy = row.cv_accuracy;
      }
    }
    r.rffd.best.projection = load_matrix(dir / "projection.smx");
    r.rffd.best.dim = r.rffd.best.projection.rows();

    r.dictionary.atoms = load_matrix(dir / "dictionary.smx");
    r.dictionary.sparsity = read_json(dir / "dictionary.json").at("L").get<Index>();
    r.dictionary.class_names = train.class_names;
    r.dictionary.training_log = read_training_log(dir / "training_log.csv");
    r.sparsity = r.dictionary.sparsity;
    r.test_codes = load_matrix(dir / "test_codes.smx");

    r.model.weights = load_matrix(dir / "svm_weights.smx");
    r.model.bias = load_matrix(dir / "svm_bias.smx").col(0);
    r.model.class_names = train.class_names;
    r.model.C = read_json(dir / "svm.json").at("C").get<double>();

    r.predicted = svm::predict(r.model, r.test_codes);
    r.rates = confusion_and_rates(r.test_labels, r.predicted, train.class_names);

    save_model_bundle({r.rffd.best.projection, r.dictionary, r.model, r.seeds}, dir);
    emit_plots_data(dir);
    if (cfg.record_timings && fs::exists(dir / kTimingsFile)) {
      for (const auto& [stage, ms] : read_json(dir / kTimingsFile).items()) {
        r.stage_timings_ms.emplace_back(stage, ms.get<double>());
      }
    }
    std::ofstream(dir / "results.json", std::ios::trunc)
        << results_json(r, cfg.record_timings);
    std::cout << "evaluate: average recognition rate " << r.rates.average << '\n';
  });
}

void pipeline(const PipelineConfig& cfg) {
  const PipelineResult r = run_pipeline(cfg);
  std::cout << "pipeline: m=" << r.rffd.best.dim << ", K=" << r.dictionary.size()
            << ", L=" << r.sparsity << ", C=" << r.model.C
            << ", average recognition rate " << r.rates.average << '\n';
  for (int c = 0; c < static_cast<int>(r.rates.per_class.size()); ++c) {
    std::cout << "  " << r.rates.confusion.class_names[c] << ": ";
    if (r.rates.per_class[c]) std::cout << *r.rates.per_class[c] << '\n';
    else std::cout << "n/a\n";
  }
}

void synth(const PipelineConfig& cfg, const SynthOptions& o) {
  fs::create_directories(cfg.out_dir);
  if (o.kind == "dictionary") {
    synth::SynthSpec spec{o.n, o.K, o.L, o.N, o.noise, cfg.master_seed, std::nullopt};
    const synth::SynthData data = synth::generate(spec);
    save_matrix(data.dictionary, cfg.out_dir / "dictionary.smx");
    save_matrix(data.codes, cfg.out_dir / "codes.smx");
    save_matrix(data.signals, cfg.out_dir / "signals.smx");
    std::cout << "synth: " << o.N << " signals of dimension " << o.n << " over "
              << o.K << " atoms, L=" << o.L << '\n';
  } else if (o.kind == "blobs") {
    synth::BlobSpec spec;
    spec.classes = o.classes;
    spec.per_class = o.per_class;
    spec.width = o.width;
    spec.height = o.height;
    spec.subjects = o.subjects;
    spec.sigma = o.sigma;
    spec.separation = o.separation;
    spec.seed = cfg.master_seed;
    const auto manifest = synth::write_image_corpus(synth::blobs(spec), spec.width,
                                                    spec.height, cfg.out_dir);
    std::cout << "synth: wrote " << manifest.string() << '\n';
  } else {
    throw ConfigError("synth: unknown kind '" + o.kind +
                      "' (expected blobs or dictionary)");
  }
}

}  // namespace sparsefx::cli
