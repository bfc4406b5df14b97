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

#include "sparsefx/pipeline.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "sparsefx/errors.hpp"
#include "sparsefx/matrix_io.hpp"
#include "sparsefx/reports.hpp"

namespace sparsefx {
namespace {

// Runs one named stage, recording its wall time. Errors are rethrown with
// the stage name prepended (keeping their category) after an INCOMPLETE
// marker has been written to the output directory.
class StageRunner {
 public:
  StageRunner(std::filesystem::path out, PipelineResult& result)
      : out_(std::move(out)), result_(result) {}

  template <typename Body>
  void run(const std::string& stage, Body&& body) {
    const auto start = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const ConfigError& e) {
      fail<ConfigError>(stage, e);
    } catch (const DimensionError& e) {
      fail<DimensionError>(stage, e);
    } catch (const DataError& e) {
      fail<DataError>(stage, e);
    } catch (const NumericalError& e) {
      fail<NumericalError>(stage, e);
    } catch (const std::exception& e) {
      fail<Error>(stage, e);
    }
    const std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - start;
    result_.stage_timings_ms.emplace_back(stage, elapsed.count());
  }

 private:
  template <typename E>
  [[noreturn]] void fail(const std::string& stage, const std::exception& e) {
    const std::string message = "stage '" + stage + "': " + e.what();
    std::error_code ec;
    std::filesystem::create_directories(out_, ec);
    std::ofstream marker(out_ / kIncompleteMarker, std::ios::trunc);
    marker << message << '\n';
    throw E(message);
  }

  std::filesystem::path out_;
  PipelineResult& result_;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  LabeledDataset ds;
  {
    PipelineResult scratch;
    StageRunner runner(cfg.out_dir, scratch);
    runner.run("ingest", [&] {
      ManifestOptions opts;
      opts.resize = cfg.resize;
      opts.threads = cfg.threads;
      ds = load_manifests(cfg.manifests, opts);
    });
  }
  return run_pipeline(ds, cfg);
}

PipelineResult run_pipeline(const LabeledDataset& ds, const PipelineConfig& config) {
  PipelineConfig cfg = config;
  PipelineResult result;
  result.seeds = cfg.apply_seeds();
  cfg.rffd.threads = cfg.threads;
  cfg.ksvd.threads = cfg.threads;

  std::filesystem::create_directories(cfg.out_dir);
  std::filesystem::remove(cfg.out_dir / kIncompleteMarker);
  StageRunner runner(cfg.out_dir, result);

  Split parts;
  runner.run("split", [&] {
    if (cfg.split.per_class_test < 1) {
      throw ConfigError("the pipeline needs at least one test sample per class");
    }
    parts = split(ds, cfg.split);
    result.train_size = parts.train.size();
    result.test_size = parts.test.size();
    result.test_labels = parts.test.labels;
  });

  runner.run("rffd", [&] {
    result.rffd = rffd::search(parts.train, cfg.rffd);
    result.test_projected = rffd::project(result.rffd.best.projection,
                                          parts.test.features);
  });

  ksvd::Dictionary initial;
  runner.run("dictionary", [&] {
    initial = ksvd::init_dictionary(result.rffd.projected.features);
    initial.class_names = ds.class_names;
    result.sparsity = cfg.sparsity.resolve(initial.size());
    const Index limit = std::min(initial.dim(), initial.size());
    if (result.sparsity > limit) {
      throw ConfigError("sparsity " + std::to_string(result.sparsity) +
                        " exceeds min(n, K) = " + std::to_string(limit));
    }
  });

  runner.run("ksvd", [&] {
    auto refined = ksvd::refine(initial, result.rffd.projected.features,
                                result.sparsity, cfg.ksvd);
    result.dictionary = std::move(refined.dictionary);
  });

  runner.run("encode", [&] {
    result.train_codes = omp::batch_encode(result.dictionary.atoms,
                                           result.rffd.projected.features,
                                           result.sparsity, 0.0, cfg.threads,
                                           &result.train_code_details);
    result.test_codes =
        omp::batch_encode(result.dictionary.atoms, result.test_projected,
                          result.sparsity, 0.0, cfg.threads,
                          &result.test_code_details);
  });

  runner.run("svm", [&] {
    const auto& labels = result.rffd.projected.labels;
    result.grid = svm::grid_search(result.train_codes, labels, ds.num_classes(),
                                   cfg.c_grid, cfg.svm_cv);
    result.model = svm::train(result.train_codes, labels, ds.class_names,
                              result.grid.best_C);
  });

  runner.run("evaluate", [&] {
    result.predicted = svm::predict(result.model, result.test_codes);
    result.rates = confusion_and_rates(result.test_labels, result.predicted,
                                       ds.class_names);
  });

  runner.run("write", [&] {
    const auto& out = cfg.out_dir;
    ModelBundle bundle{result.rffd.best.projection, result.dictionary,
                       result.model, result.seeds};
    save_model_bundle(bundle, out);
    save_matrix(result.test_projected, out / "test_projected.smx");
    save_matrix(result.test_codes, out / "test_codes.smx");
    save_matrix(result.train_codes, out / "train_codes.smx");
    write_rffd_report(result.rffd.report, out / "report.csv");
    write_training_log(result.dictionary.training_log, out / "training_log.csv");
    write_grid_report(result.grid, out / "grid_report.csv");
    write_codes_stats(result.train_code_details, result.test_code_details,
                      out / "codes_stats.csv");
    emit_plots_data(out);
  });
  // Written last so the timings cover every stage.
  write_text(cfg.out_dir / "results.json",
             results_json(result, cfg.record_timings));
  return result;
}

std::string results_json(const PipelineResult& r, bool with_timings) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["class_names"] = r.rates.confusion.class_names;
  auto rates = nlohmann::ordered_json::array();
  for (const auto& rate : r.rates.per_class) {
    rates.push_back(rate ? nlohmann::ordered_json(*rate) : nlohmann::ordered_json());
  }
  j["per_class_rate"] = rates;
  j["average_rate"] = r.rates.average;
  auto confusion = nlohmann::ordered_json::array();
  const auto& counts = r.rates.confusion.counts;
  for (Index i = 0; i < counts.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Index k = 0; k < counts.cols(); ++k) row.push_back(counts(i, k));
    confusion.push_back(row);
  }
  j["confusion"] = confusion;
  j["m"] = r.rffd.best.dim;
  j["C"] = r.model.C;
  j["L"] = r.sparsity;
  j["K"] = r.dictionary.size();
  j["seeds"] = {{"master", r.seeds.master}, {"split", r.seeds.split},
                {"rffd", r.seeds.rffd},     {"rffd_cv", r.seeds.rffd_cv},
                {"ksvd", r.seeds.ksvd},     {"svm_cv", r.seeds.svm_cv}};
  auto timings = nlohmann::ordered_json::object();
  if (with_timings) {
    for (const auto& [stage, ms] : r.stage_timings_ms) timings[stage] = ms;
  }
  j["stage_timings_ms"] = timings;
  j["train_size"] = r.train_size;
  j["test_size"] = r.test_size;
  j["rffd_candidate_index"] = r.rffd.best.index;
  j["rffd_cv_accuracy"] = r.rffd.best.cv_accuracy.value_or(0.0);
  j["ksvd_iterations"] = r.dictionary.training_log.size();
  return j.dump(2) + "\n";
}

}  // namespace sparsefx
