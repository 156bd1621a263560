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

#include "../src/cli/commands.hpp"

#include "arcssl/errors.hpp"
#include "arcssl/kernels.hpp"

#include <cstdio>

#include <CLI11.hpp>

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string tok = csv.substr(pos, comma == std::string::npos ? csv.npos : comma - pos);
        try {
            out.push_back(std::stoull(tok));
        } catch (const std::exception&) {
            throw arcssl::ConfigError("unparseable seed '" + tok + "'");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        out.push_back(csv.substr(pos, comma == std::string::npos ? csv.npos : comma - pos));
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"arcssl: antenna-response-consistency self-supervised learning for WiFi CSI"};
    app.require_subcommand(1);

    // synth ------------------------------------------------------------------
    arcssl::cli::SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic CSI dataset");
    synth->add_option("--scene", synth_args.scene_path, "scene JSON file (default: built-in scene)");
    synth->add_option("--out", synth_args.out_path, "output dataset path (.csi)")->required();
    synth->add_option("--split", synth_args.split_fraction, "train fraction for the sidecar split");
    std::uint64_t synth_split_seed = 0;
    auto* sseed = synth->add_option("--split-seed", synth_split_seed, "split shuffling seed");
    synth->add_flag("--print-scene", synth_args.print_scene, "print the resolved scene JSON");

    // pretrain ----------------------------------------------------------------
    arcssl::cli::PretrainArgs pre_args;
    std::string pre_seeds = "1,2,3,4,5";
    double pre_alpha = -1.0;
    std::uint32_t pre_epochs = 0;
    double pre_lr = 0.0;
    std::uint32_t pre_batch = 0;
    auto* pre = app.add_subcommand("pretrain", "self-supervised pretraining runs (one per seed)");
    pre->add_option("--data", pre_args.data_path, "dataset container")->required();
    pre->add_option("--out", pre_args.out_dir, "run directory")->required();
    pre->add_option("--algo", pre_args.algo, "moco | moco-arc | mae | mae-arc");
    pre->add_option("--mode", pre_args.mode, "amp | conj-angle | raw-angle | amp+conj-angle");
    pre->add_option("--arch", pre_args.arch, "encoder architecture id");
    pre->add_option("--feature-dim", pre_args.feature_dim, "encoder feature dimension");
    pre->add_option("--seeds", pre_seeds, "comma-separated seed list");
    auto* alpha_opt = pre->add_option("--alpha", pre_alpha, "mae-arc consistency weight");
    auto* epochs_opt = pre->add_option("--epochs", pre_epochs, "training epochs");
    auto* lr_opt = pre->add_option("--lr", pre_lr, "learning rate");
    auto* batch_opt = pre->add_option("--batch", pre_batch, "batch size");
    pre->add_option("--t-target", pre_args.t_target, "packets after downsampling");

    // probe -------------------------------------------------------------------
    arcssl::cli::ProbeArgs probe_args;
    std::string probe_kinds = "linear,mlp2";
    auto* probe = app.add_subcommand("probe", "fit frozen-encoder probes and append results");
    probe->add_option("--run", probe_args.run_dir, "pretrain run directory")->required();
    probe->add_option("--data", probe_args.data_path, "dataset (default: from run config)");
    probe->add_option("--probes", probe_kinds, "comma-separated probe kinds");

    // sweep -------------------------------------------------------------------
    arcssl::cli::SweepArgs sweep_args;
    std::string sweep_seeds = "1,2,3,4,5";
    std::string sweep_values;
    std::uint32_t sweep_epochs = 0;
    double sweep_lr = 0.0;
    auto* sweep = app.add_subcommand("sweep", "hyperparameter sweeps and experiment presets");
    sweep->add_option("--data", sweep_args.data_path, "dataset container")->required();
    sweep->add_option("--out", sweep_args.out_dir, "sweep output directory")->required();
    sweep->add_option("--algo", sweep_args.algo, "algorithm for the sweep");
    sweep->add_option("--mode", sweep_args.mode, "feature mode for the sweep");
    sweep->add_option("--param", sweep_args.param, "swept parameter: alpha | feature");
    sweep->add_option("--values", sweep_values, "comma-separated swept values");
    sweep->add_option("--seeds", sweep_seeds, "comma-separated seed list");
    sweep->add_option("--preset", sweep_args.preset, "experiment preset: paper-indomain");
    auto* sweep_epochs_opt = sweep->add_option("--epochs", sweep_epochs, "training epochs");
    auto* sweep_lr_opt = sweep->add_option("--lr", sweep_lr, "learning rate");
    std::uint32_t sweep_batch = 0;
    auto* sweep_batch_opt = sweep->add_option("--batch", sweep_batch, "batch size");
    sweep->add_option("--t-target", sweep_args.t_target, "packets after downsampling");

    // report ------------------------------------------------------------------
    arcssl::cli::ReportArgs report_args;
    auto* report = app.add_subcommand("report", "pivot results into method x feature-mode tables");
    report->add_option("--results", report_args.results, "results.csv files")->required();
    report->add_option("--out", report_args.out_dir, "table output directory")->required();

    auto* kernels_cmd = app.add_subcommand("kernels", "print the active kernel backend");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) {
            if (*sseed)
                synth_args.split_seed = synth_split_seed;
            return arcssl::cli::cmd_synth(synth_args);
        }
        if (*pre) {
            pre_args.seeds = parse_seed_list(pre_seeds);
            if (*alpha_opt)
                pre_args.alpha = pre_alpha;
            if (*epochs_opt)
                pre_args.epochs = pre_epochs;
            if (*lr_opt)
                pre_args.lr = pre_lr;
            if (*batch_opt)
                pre_args.batch_size = pre_batch;
            return arcssl::cli::cmd_pretrain(pre_args);
        }
        if (*probe) {
            probe_args.probes = parse_string_list(probe_kinds);
            return arcssl::cli::cmd_probe(probe_args);
        }
        if (*sweep) {
            sweep_args.seeds = parse_seed_list(sweep_seeds);
            sweep_args.values = sweep_values.empty() ? std::vector<std::string>{}
                                                     : parse_string_list(sweep_values);
            if (*sweep_epochs_opt)
                sweep_args.epochs = sweep_epochs;
            if (*sweep_lr_opt)
                sweep_args.lr = sweep_lr;
            if (*sweep_batch_opt)
                sweep_args.batch_size = sweep_batch;
            return arcssl::cli::cmd_sweep(sweep_args);
        }
        if (*report)
            return arcssl::cli::cmd_report(report_args);
        if (*kernels_cmd) {
            std::printf("kernel backend: %s (avx2 %s)\n",
                        arcssl::kernels::backend_name(arcssl::kernels::active_backend()),
                        arcssl::kernels::avx2_supported() ? "available" : "unavailable");
            return 0;
        }
    } catch (const arcssl::Error& e) {
        std::fprintf(stderr, "arcssl: error: %s\n", e.what());
        return static_cast<int>(e.category());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "arcssl: unexpected error: %s\n", e.what());
        return 1;
    }
    return 0;
}
