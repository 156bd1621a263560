// SPDX-License-Identifier: Apache-2.0
//
// arcssl - antenna response consistency SSL for WiFi channel state information
// Copyright (C) 2026 the arcssl authors
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

#include "arcssl/probe.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace arcssl::report {

/// Frozen results schema shared by the CSV file and the JSON-lines log.
inline constexpr const char* kResultsHeader =
    "algo,feature_mode,probe,seed,alpha,accuracy,macro_f1,seconds";

std::string result_key(const probe::RunReport& r); // (algo, mode, probe, seed, alpha)

std::vector<probe::RunReport> read_results_csv(const std::filesystem::path& path);
void write_results_csv(const std::filesystem::path& path,
                       const std::vector<probe::RunReport>& rows);
void append_results_jsonl(const std::filesystem::path& path,
                          const std::vector<probe::RunReport>& rows);

/// Merges new rows into an existing results file; rows whose key already
/// exists are skipped (probe re-runs are idempotent). Returns rows written.
std::size_t merge_results_csv(const std::filesystem::path& path,
                              const std::vector<probe::RunReport>& rows);

/// Per-(algo, mode, probe) aggregate over seeds.
struct CellStats {
    std::size_t runs = 0;
    double mean_acc = 0.0, std_acc = 0.0;
    double mean_f1 = 0.0, std_f1 = 0.0;
};

std::map<std::string, CellStats> aggregate(const std::vector<probe::RunReport>& rows,
                                           const std::string& probe_kind);

/**
 * Emits the method x feature-mode grids (one per probe kind found in rows):
 *  <out>/report_<probe>.csv   per-cell mean accuracy/F1 over seeds
 *  <out>/report_<probe>.txt   plain-text rendering, best cell starred
 * Duplicate result keys across inputs are rejected.
 */
void write_report_tables(const std::vector<probe::RunReport>& rows,
                         const std::filesystem::path& out_dir);

/// Sweep summary: per swept value, mean +- std of accuracy and F1.
struct SweepPoint {
    std::string value;
    CellStats stats;
};

void write_sweep_summary(const std::vector<SweepPoint>& points, const std::string& param,
                         const std::filesystem::path& csv_path);

/// Minimal dependency-free line chart (accuracy / F1 vs swept value).
void write_sweep_svg(const std::vector<SweepPoint>& points, const std::string& param,
                     const std::string& metric, const std::filesystem::path& svg_path);

} // namespace arcssl::report
