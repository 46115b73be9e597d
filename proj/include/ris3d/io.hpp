// SPDX-License-Identifier: Apache-2.0
//
// ris3d - shape and configuration optimization for conformal reconfigurable
// intelligent surfaces under a mutual-coupling impedance model
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ris3d/analysis.hpp"
#include "ris3d/impedance.hpp"
#include "ris3d/shape_optimizer.hpp"

namespace ris3d {

/// Comma-separated table with a header row; numbers printed with 17
/// significant digits, LF line endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string format_number(double v);
std::string format_number(long long v);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

CsvTable layout_table(const DipoleLayout& layout);
CsvTable reactance_table(const RisConfig& config);
CsvTable trace_table(const OptimizerTrace& trace);
CsvTable element_steps_table(const OptimizerTrace& trace);
CsvTable beampattern_table(const Beampattern& pattern);
CsvTable spacing_table(const SpacingHistogram& histogram);

/// Positions (3 x N) from a layout table (index, x, y, z).
Mat3X read_layout(const std::filesystem::path& path);
/// (b, r0) from a reactance table (index, b_ohm, r0_ohm).
RisConfig read_reactances(const std::filesystem::path& path);

}  // namespace ris3d
