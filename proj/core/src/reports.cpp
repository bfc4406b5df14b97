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

#include "sparsefx/reports.hpp"

#include <fstream>

#include <json.hpp>

#include "csv.hpp"
#include "format.hpp"
#include "sparsefx/errors.hpp"
#include "sparsefx/matrix_io.hpp"

namespace sparsefx {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace

void write_rffd_report(std::span<const rffd::CandidateScore> rows,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "m,candidate_index,seed,quality_ok,cv_accuracy,winner_for_m,global_winner\n";
  for (const auto& r : rows) {
    out << r.m << ',' << r.index << ',' << r.seed << ',' << (r.quality_ok ? 1 : 0)
        << ',' << (r.cv_accuracy ? format_double(*r.cv_accuracy) : "") << ','
        << (r.winner_for_m ? 1 : 0) << ',' << (r.global_winner ? 1 : 0) << '\n';
  }
  finish(out, path);
}

std::vector<rffd::CandidateScore> read_rffd_report(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  const char* names[] = {"m", "candidate_index", "seed", "quality_ok",
                         "cv_accuracy", "winner_for_m", "global_winner"};
  int col[7];
  for (int k = 0; k < 7; ++k) {
    col[k] = table.column(names[k]);
    if (col[k] < 0) {
      throw DataError(path.string() + ": missing column '" + names[k] + "'");
    }
  }
  std::vector<rffd::CandidateScore> rows;
  try {
    for (const auto& rec : table.rows) {
      rffd::CandidateScore r;
      r.m = std::stoll(rec[col[0]]);
      r.index = std::stoll(rec[col[1]]);
      r.seed = std::stoull(rec[col[2]]);
      r.quality_ok = rec[col[3]] == "1";
      if (!rec[col[4]].empty()) r.cv_accuracy = std::stod(rec[col[4]]);
      r.winner_for_m = rec[col[5]] == "1";
      r.global_winner = rec[col[6]] == "1";
      rows.push_back(r);
    }
  } catch (const std::logic_error& e) {
    throw DataError(path.string() + ": malformed number (" + e.what() + ")");
  }
  return rows;
}

void write_training_log(std::span<const ksvd::IterationLog> log,
                        const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "iteration,objective,atoms_replaced\n";
  for (const auto& row : log) {
    out << row.iteration << ',' << format_double(row.objective) << ','
        << row.atoms_replaced << '\n';
  }
  finish(out, path);
}

void write_grid_report(const svm::GridSearchResult& grid,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "C,mean_accuracy,std_accuracy\n";
  for (const auto& p : grid.scores) {
    out << format_double(p.C) << ',' << format_double(p.mean_accuracy) << ','
        << format_double(p.std_accuracy) << '\n';
  }
  finish(out, path);
}

void write_codes_stats(std::span<const omp::SparseCode> train,
                       std::span<const omp::SparseCode> test,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "split,sample_index,support_size,residual_norm\n";
  auto emit = [&](const char* name, std::span<const omp::SparseCode> codes) {
    for (std::size_t i = 0; i < codes.size(); ++i) {
      out << name << ',' << i << ',' << codes[i].support.size() << ','
          << format_double(codes[i].residual_norm) << '\n';
    }
  };
  emit("train", train);
  emit("test", test);
  finish(out, path);
}

void save_model_bundle(const ModelBundle& bundle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_matrix(bundle.projection, dir / "projection.smx");
  save_matrix(bundle.dictionary.atoms, dir / "dictionary.smx");
  save_matrix(bundle.svm.weights, dir / "svm_weights.smx");
  save_matrix(bundle.svm.bias, dir / "svm_bias.smx");
  nlohmann::ordered_json meta;
  meta["schema"] = 1;
  meta["class_names"] = bundle.svm.class_names;
  meta["d"] = bundle.projection.cols();
  meta["m"] = bundle.projection.rows();
  meta["K"] = bundle.dictionary.size();
  meta["L"] = bundle.dictionary.sparsity;
  meta["C"] = bundle.svm.C;
  meta["seeds"] = {{"master", bundle.seeds.master},   {"split", bundle.seeds.split},
                   {"rffd", bundle.seeds.rffd},       {"rffd_cv", bundle.seeds.rffd_cv},
                   {"ksvd", bundle.seeds.ksvd},       {"svm_cv", bundle.seeds.svm_cv}};
  const auto path = dir / "meta.json";
  auto out = open_out(path);
  out << meta.dump(2) << '\n';
  finish(out, path);
}

ModelBundle load_model_bundle(const std::filesystem::path& dir) {
  ModelBundle b;
  b.projection = load_matrix(dir / "projection.smx");
  b.dictionary.atoms = load_matrix(dir / "dictionary.smx");
  b.svm.weights = load_matrix(dir / "svm_weights.smx");
  const DenseMatrix bias = load_matrix(dir / "svm_bias.smx");
  const auto meta_path = dir / "meta.json";
  std::ifstream in(meta_path);
  if (!in) throw DataError("cannot open " + meta_path.string());
  try {
    const auto meta = nlohmann::json::parse(in);
    b.svm.class_names = meta.at("class_names").get<std::vector<std::string>>();
    b.svm.C = meta.at("C").get<double>();
    b.dictionary.sparsity = meta.at("L").get<Index>();
    b.dictionary.class_names = b.svm.class_names;
    const auto& s = meta.at("seeds");
    b.seeds.master = s.at("master").get<std::uint64_t>();
    b.seeds.split = s.at("split").get<std::uint64_t>();
    b.seeds.rffd = s.at("rffd").get<std::uint64_t>();
    b.seeds.rffd_cv = s.at("rffd_cv").get<std::uint64_t>();
    b.seeds.ksvd = s.at("ksvd").get<std::uint64_t>();
    b.seeds.svm_cv = s.at("svm_cv").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(meta_path.string() + ": " + e.what());
  }
  const Index classes = static_cast<Index>(b.svm.class_names.size());
  if (bias.cols() != 1 || bias.rows() != classes ||
      b.svm.weights.rows() != classes ||
      b.svm.weights.cols() != b.dictionary.size() ||
      b.dictionary.dim() != b.projection.rows()) {
    throw DimensionError(dir.string() + ": model bundle shapes are inconsistent");
  }
  b.svm.bias = bias.col(0);
  return b;
}

void emit_plots_data(const std::filesystem::path& dir) {
  if (std::filesystem::exists(dir / kIncompleteMarker)) {
    throw DataError(dir.string() + ": bundle is marked INCOMPLETE");
  }
  for (const char* name : {"dictionary.smx", "test_projected.smx", "test_codes.smx",
                           "report.csv"}) {
    if (!std::filesystem::exists(dir / name)) {
      throw DataError(dir.string() + ": incomplete bundle, missing " + name);
    }
  }
  const DenseMatrix dict = load_matrix(dir / "dictionary.smx");
  const DenseMatrix signals = load_matrix(dir / "test_projected.smx");
  const DenseMatrix codes = load_matrix(dir / "test_codes.smx");
  const auto errors = omp::reconstruction_errors(dict, signals, codes);
  {
    const auto path = dir / "reconstruction_error.csv";
    auto out = open_out(path);
    out << "sample_index,absolute_error\n";
    for (Index i = 0; i < errors.per_sample.size(); ++i) {
      out << i << ',' << format_double(errors.per_sample(i)) << '\n';
    }
    finish(out, path);
  }
  {
    const auto rows = read_rffd_report(dir / "report.csv");
    const auto path = dir / "rffd_curves.csv";
    auto out = open_out(path);
    out << "m,candidate_index,accuracy,winner_for_m\n";
    for (const auto& r : rows) {
      if (!r.quality_ok || !r.cv_accuracy) continue;
      out << r.m << ',' << r.index << ',' << format_double(*r.cv_accuracy) << ','
          << (r.winner_for_m ? 1 : 0) << '\n';
    }
    finish(out, path);
  }
}

}  // namespace sparsefx
