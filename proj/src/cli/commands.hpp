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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace arcssl::cli {

// Command implementations shared by the arcssl binary and the test suites.
// All commands throw arcssl::Error subclasses; the binary maps the error
// category onto its exit code (config=2, data=3, training=4).

struct SynthArgs {
    std::string scene_path; // empty: built-in default scene
    std::string out_path;
    double split_fraction = 0.8;
    std::optional<std::uint64_t> split_seed; // default: derived from the scene seed
    bool print_scene = false;
};
int cmd_synth(const SynthArgs& args);

struct PretrainArgs {
    std::string data_path;
    std::string out_dir;
    std::string algo = "mae-arc";
    std::string mode = "amp+conj-angle";
    std::string arch = "conv-small";
    std::uint32_t feature_dim = 64;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::optional<double> alpha;
    std::optional<std::uint32_t> epochs;
    std::optional<double> lr;
    std::optional<std::uint32_t> batch_size;
    std::uint32_t t_target = 500;
};
int cmd_pretrain(const PretrainArgs& args);

struct ProbeArgs {
    std::string run_dir;
    std::string data_path; // empty: the path recorded in the run config
    std::vector<std::string> probes = {"linear", "mlp2"};
};
int cmd_probe(const ProbeArgs& args);

struct SweepArgs {
    std::string data_path;
    std::string out_dir;
    std::string algo = "mae-arc";
    std::string mode = "amp+conj-angle";
    std::string param;               // "alpha" | "feature"
    std::vector<std::string> values; // swept values
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string preset; // "paper-indomain" replaces param/values
    std::optional<std::uint32_t> epochs;
    std::optional<double> lr;
    std::optional<std::uint32_t> batch_size;
    std::uint32_t t_target = 500;
    std::vector<std::string> probes = {"linear", "mlp2"};
};
int cmd_sweep(const SweepArgs& args);

struct ReportArgs {
    std::vector<std::string> results;
    std::string out_dir;
};
int cmd_report(const ReportArgs& args);

/// Worker-thread cap for sweeps: env ARC_SSL_THREADS, else hardware threads.
unsigned worker_thread_cap();

} // namespace arcssl::cli
