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

// Minimal RFC-4180 style CSV reading shared by the manifest and report
// loaders. Private to the library.

#ifndef SPARSEFX_SRC_CSV_HPP_
#define SPARSEFX_SRC_CSV_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace sparsefx::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based line number of each row in the source file.
  std::vector<std::size_t> line_numbers;

  // Column index of name, or -1.
  int column(const std::string& name) const;
};

Table parse(const std::string& text, const std::string& source_name);
Table read(const std::filesystem::path& path);

// Quotes a field if it contains a comma, quote or newline.
std::string escape(const std::string& field);

}  // namespace sparsefx::csv

#endif  // SPARSEFX_SRC_CSV_HPP_
