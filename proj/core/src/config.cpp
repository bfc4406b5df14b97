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

#include "sparsefx/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sparsefx/errors.hpp"
#include "sparsefx/random.hpp"

namespace sparsefx {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return i;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const unsigned long long i = std::stoull(v, &used);
      if (used == v.size()) return i;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError("config: '" + key + "' expects an unsigned integer, got '" +
                    v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace

SparsityLevel SparsityLevel::parse(const std::string& text) {
  const std::string t = trim(text);
  SparsityLevel s;
  if (!t.empty() && t.back() == '%') {
    s.percentage = true;
    s.value = parse_double("sparsity", trim(t.substr(0, t.size() - 1)));
    if (!(s.value > 0.0) || s.value > 100.0) {
      throw ConfigError("config: sparsity percentage must be in (0, 100]");
    }
  } else {
    s.percentage = false;
    s.value = static_cast<double>(parse_int("sparsity", t));
    if (s.value < 1) throw ConfigError("config: sparsity must be >= 1");
  }
  return s;
}

std::string SparsityLevel::to_string() const {
  std::ostringstream out;
  out << value << (percentage ? "%" : "");
  return out.str();
}

Index SparsityLevel::resolve(Index atoms) const {
  Index l = percentage
                ? static_cast<Index>(std::floor(value * static_cast<double>(atoms) / 100.0 + 1e-9))
                : static_cast<Index>(value);
  if (l < 1) {
    throw ConfigError("sparsity " + to_string() + " of " + std::to_string(atoms) +
                      " atoms resolves to " + std::to_string(l) + " (< 1)");
  }
  return l;
}

SeedSet SeedSet::derive(std::uint64_t master) {
  SeedSet s;
  s.master = master;
  s.split = derive_seed(master, "split");
  s.rffd = derive_seed(master, "rffd");
  s.rffd_cv = derive_seed(master, "rffd-cv");
  s.ksvd = derive_seed(master, "ksvd");
  s.svm_cv = derive_seed(master, "svm-cv");
  return s;
}

SeedSet PipelineConfig::apply_seeds() {
  const SeedSet s = SeedSet::derive(master_seed);
  split.shuffle_seed = s.split;
  rffd.master_seed = s.rffd;
  rffd.cv.seed = s.rffd_cv;
  ksvd.seed = s.ksvd;
  svm_cv.seed = s.svm_cv;
  return s;
}

ConfigMap parse_config_text(std::string_view text, const std::string& source) {
  ConfigMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(source + ":" + std::to_string(number) + ": empty key");
    }
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

ConfigMap load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "manifest",         "resize",          "split.train",
      "split.test",       "split.identity_disjoint",
      "rffd.dims",        "rffd.candidates", "rffd.quality_threshold",
      "rffd.cv",          "rffd.svm_c",      "sparsity",
      "ksvd.max_iters",   "ksvd.rel_tol",    "ksvd.unused_atoms",
      "svm.c_grid",       "svm.cv",          "out",
      "seed",             "threads",         "timings"};
  return keys;
}

PipelineConfig apply_config(const ConfigMap& values, PipelineConfig cfg) {
  const auto& keys = known_config_keys();
  for (const auto& [key, value] : values) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  auto get = [&](const char* key) -> const std::string* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  if (auto v = get("manifest")) {
    cfg.manifests.clear();
    for (const auto& p : split_list(*v)) cfg.manifests.emplace_back(p);
  }
  if (auto v = get("resize")) {
    const auto x = v->find('x');
    if (x == std::string::npos) {
      throw ConfigError("config: resize expects WIDTHxHEIGHT, got '" + *v + "'");
    }
    const auto w = parse_int("resize", trim(v->substr(0, x)));
    const auto h = parse_int("resize", trim(v->substr(x + 1)));
    if (w < 1 || h < 1) throw ConfigError("config: resize must be positive");
    cfg.resize = std::make_pair(static_cast<Index>(w), static_cast<Index>(h));
  }
  if (auto v = get("split.train")) cfg.split.per_class_train = parse_int("split.train", *v);
  if (auto v = get("split.test")) cfg.split.per_class_test = parse_int("split.test", *v);
  if (auto v = get("split.identity_disjoint")) {
    cfg.split.identity_disjoint = parse_bool("split.identity_disjoint", *v);
  }
  if (auto v = get("rffd.dims")) {
    cfg.rffd.dims.clear();
    for (const auto& item : split_list(*v)) {
      cfg.rffd.dims.push_back(parse_int("rffd.dims", item));
    }
  }
  if (auto v = get("rffd.candidates")) {
    cfg.rffd.candidates_per_dim = parse_int("rffd.candidates", *v);
  }
  if (auto v = get("rffd.quality_threshold")) {
    if (*v == "auto") {
      cfg.rffd.quality_threshold.reset();
    } else {
      cfg.rffd.quality_threshold = parse_double("rffd.quality_threshold", *v);
    }
  }
  if (auto v = get("rffd.cv")) cfg.rffd.cv = svm::CvSpec::parse(*v, 0);
  if (auto v = get("rffd.svm_c")) cfg.rffd.svm_C = parse_double("rffd.svm_c", *v);
  if (auto v = get("sparsity")) cfg.sparsity = SparsityLevel::parse(*v);
  if (auto v = get("ksvd.max_iters")) cfg.ksvd.max_iters = parse_int("ksvd.max_iters", *v);
  if (auto v = get("ksvd.rel_tol")) cfg.ksvd.rel_tol = parse_double("ksvd.rel_tol", *v);
  if (auto v = get("ksvd.unused_atoms")) {
    if (*v == "replace") {
      cfg.ksvd.unused_atoms = ksvd::UnusedAtomPolicy::kReplaceWithWorstSignal;
    } else if (*v == "keep") {
      cfg.ksvd.unused_atoms = ksvd::UnusedAtomPolicy::kKeep;
    } else {
      throw ConfigError("config: ksvd.unused_atoms expects replace|keep");
    }
  }
  if (auto v = get("svm.c_grid")) {
    cfg.c_grid.clear();
    for (const auto& item : split_list(*v)) {
      cfg.c_grid.push_back(parse_double("svm.c_grid", item));
    }
  }
  if (auto v = get("svm.cv")) cfg.svm_cv = svm::CvSpec::parse(*v, 0);
  if (auto v = get("out")) cfg.out_dir = *v;
  if (auto v = get("seed")) cfg.master_seed = parse_u64("seed", *v);
  if (auto v = get("threads")) {
    const auto t = parse_int("threads", *v);
    if (t < 0) throw ConfigError("config: threads must be >= 0");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (auto v = get("timings")) cfg.record_timings = parse_bool("timings", *v);
  return cfg;
}

}  // namespace sparsefx
