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

#include <filesystem>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "sparsefx/errors.hpp"

namespace {

using namespace sparsefx;

enum ExitCode {
  kOk = 0,
  kOther = 1,
  kConfig = 2,
  kData = 3,
  kNumerical = 4,
};

void add_common(CLI::App* sub, cli::CommonOptions& o) {
  sub->add_option("--config", o.config_file, "key = value configuration file")
      ->check(CLI::ExistingFile);
  sub->add_option("--set", o.overrides, "override a config key (key=value)")
      ->allow_extra_args(false);
  sub->add_option("--out", o.out, "output / working directory");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

int run(int argc, char** argv) {
  CLI::App app{"Sparse-representation facial expression recognition"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sparsefx 0.1.0");

  cli::CommonOptions common;
  cli::ProjectOptions project_opts;
  cli::SynthOptions synth_opts;
  std::function<void(const PipelineConfig&)> action;

  auto* ingest = app.add_subcommand("ingest", "load manifests and split train/test");
  add_common(ingest, common);
  ingest->add_option("--manifest", common.manifests, "CSV manifest (repeatable)");
  ingest->callback([&] { action = cli::ingest; });

  auto* project = app.add_subcommand("project", "search or fit the feature projection");
  add_common(project, common);
  project->add_option("--method", project_opts.method, "rffd or pca")
      ->check(CLI::IsMember({"rffd", "pca"}));
  project->add_option("--dim", project_opts.dim, "PCA output dimension");
  project->callback([&] {
    action = [&](const PipelineConfig& c) { cli::project(c, project_opts); };
  });

  auto* train_dict = app.add_subcommand("train-dict", "initialise and refine the dictionary");
  add_common(train_dict, common);
  train_dict->callback([&] { action = cli::train_dict; });

  auto* encode = app.add_subcommand("encode", "sparse-code train and test features");
  add_common(encode, common);
  encode->callback([&] { action = cli::encode; });

  auto* train_svm = app.add_subcommand("train-svm", "grid-search C and train the classifier");
  add_common(train_svm, common);
  train_svm->callback([&] { action = cli::train_svm; });

  auto* evaluate = app.add_subcommand("evaluate", "score the test set and write results.json");
  add_common(evaluate, common);
  evaluate->callback([&] { action = cli::evaluate; });

  auto* pipeline = app.add_subcommand("pipeline", "run every stage end to end");
  add_common(pipeline, common);
  pipeline->add_option("--manifest", common.manifests, "CSV manifest (repeatable)");
  pipeline->callback([&] { action = cli::pipeline; });

  auto* synth = app.add_subcommand("synth", "generate synthetic data");
  add_common(synth, common);
  synth->add_option("--kind", synth_opts.kind, "blobs or dictionary")
      ->check(CLI::IsMember({"blobs", "dictionary"}));
  synth->add_option("--n", synth_opts.n, "signal dimension");
  synth->add_option("--K", synth_opts.K, "atoms");
  synth->add_option("--L", synth_opts.L, "nonzeros per signal");
  synth->add_option("--N", synth_opts.N, "signals");
  synth->add_option("--noise", synth_opts.noise, "noise standard deviation");
  synth->add_option("--classes", synth_opts.classes, "blob classes");
  synth->add_option("--per-class", synth_opts.per_class, "images per class");
  synth->add_option("--width", synth_opts.width, "image width");
  synth->add_option("--height", synth_opts.height, "image height");
  synth->add_option("--subjects", synth_opts.subjects, "identities per class");
  synth->add_option("--sigma", synth_opts.sigma, "per-pixel noise");
  synth->add_option("--separation", synth_opts.separation,
                    "minimum mean distance in units of sigma");
  synth->callback([&] {
    action = [&](const PipelineConfig& c) { cli::synth(c, synth_opts); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  action(cli::resolve_config(common));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
}
