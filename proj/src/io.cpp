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

#include "ris3d/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ris3d/errors.hpp"

namespace ris3d {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_number(long long v) { return std::to_string(v); }

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  if (!out) throw IoError("failed while writing " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

namespace {

std::string num(double v) { return format_number(v); }
std::string num(long long v) { return format_number(v); }
std::string num(int v) { return format_number(static_cast<long long>(v)); }
std::string num(Eigen::Index v) { return format_number(static_cast<long long>(v)); }

double parse_double(const std::string& s, const std::filesystem::path& path) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("malformed number '" + s + "' in " + path.string());
  }
  return v;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& header,
                   const std::filesystem::path& path) {
  if (t.header != header) throw IoError("unexpected header in " + path.string());
  for (const auto& row : t.rows) {
    if (row.size() != header.size()) throw IoError("ragged row in " + path.string());
  }
}

}  // namespace

CsvTable layout_table(const DipoleLayout& layout) {
  CsvTable t{{"index", "x_m", "y_m", "z_m"}, {}};
  for (Eigen::Index n = 0; n < layout.size(); ++n) {
    const Vec3 q = layout.position(n);
    t.add({num(n), num(q.x()), num(q.y()), num(q.z())});
  }
  return t;
}

CsvTable reactance_table(const RisConfig& config) {
  CsvTable t{{"index", "b_ohm", "r0_ohm"}, {}};
  for (Eigen::Index n = 0; n < config.b.size(); ++n) {
    t.add({num(n), num(config.b(n)), num(config.r0)});
  }
  return t;
}

CsvTable trace_table(const OptimizerTrace& trace) {
  CsvTable t{{"iter", "snr_db", "config_iters", "accepted", "rejected", "neumann_rejections",
              "colinear_incidents", "colinear_skips", "max_displacement_m", "mean_step_m"},
             {}};
  for (const TraceRow& r : trace.rows) {
    t.add({num(r.iter), num(r.snr_db), num(r.config_iters), num(r.accepted), num(r.rejected),
           num(r.neumann_rejections), num(r.colinear_incidents), num(r.colinear_skips),
           num(r.max_displacement), num(r.mean_step)});
  }
  return t;
}

CsvTable element_steps_table(const OptimizerTrace& trace) {
  CsvTable t{{"iter", "index", "step_m", "displacement_m"}, {}};
  for (const TraceRow& r : trace.rows) {
    for (std::size_t k = 0; k < r.steps.size(); ++k) {
      t.add({num(r.iter), num(static_cast<long long>(k)), num(r.steps[k]),
             num(r.displacements[k])});
    }
  }
  return t;
}

CsvTable beampattern_table(const Beampattern& pattern) {
  CsvTable t;
  t.header.push_back("polar_deg");
  for (double az : pattern.grid.azimuth_deg) t.header.push_back(num(az));
  for (std::size_t i = 0; i < pattern.grid.polar_deg.size(); ++i) {
    std::vector<std::string> row{num(pattern.grid.polar_deg[i])};
    for (Eigen::Index j = 0; j < pattern.db.cols(); ++j) {
      row.push_back(num(pattern.db(static_cast<Eigen::Index>(i), j)));
    }
    t.add(std::move(row));
  }
  return t;
}

CsvTable spacing_table(const SpacingHistogram& h) {
  CsvTable t{{"bin_lo", "bin_hi", "count"}, {}};
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    t.add({num(h.edges[b]), num(h.edges[b + 1]), num(h.counts[b])});
  }
  return t;
}

Mat3X read_layout(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"index", "x_m", "y_m", "z_m"}, path);
  Mat3X q(3, static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t n = 0; n < t.rows.size(); ++n) {
    for (int c = 0; c < 3; ++c) {
      q(c, static_cast<Eigen::Index>(n)) = parse_double(t.rows[n][c + 1], path);
    }
  }
  if (q.cols() == 0) throw IoError("no elements in " + path.string());
  return q;
}

RisConfig read_reactances(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  expect_header(t, {"index", "b_ohm", "r0_ohm"}, path);
  RisConfig cfg{Eigen::VectorXd(static_cast<Eigen::Index>(t.rows.size())), 0.0};
  for (std::size_t n = 0; n < t.rows.size(); ++n) {
    cfg.b(static_cast<Eigen::Index>(n)) = parse_double(t.rows[n][1], path);
    cfg.r0 = parse_double(t.rows[n][2], path);
  }
  return cfg;
}

}  // namespace ris3d
