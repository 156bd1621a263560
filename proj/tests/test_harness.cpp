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

#include "arcssl/csi.hpp"
#include "arcssl/errors.hpp"
#include "arcssl/report.hpp"
#include "arcssl/synth.hpp"

#include "test_util.hpp"

#include <fstream>

#include <doctest.h>

using namespace arcssl;
namespace fs = std::filesystem;

namespace {

fs::path write_tiny_scene(const fs::path& dir, std::uint32_t per_class = 10) {
    synth::SceneConfig s = testutil::tiny_scene(2, per_class, 41);
    const fs::path p = dir / "scene.json";
    std::ofstream os(p);
    os << s.canonical_json();
    return p;
}

cli::PretrainArgs tiny_pretrain_args(const fs::path& data, const fs::path& out) {
    cli::PretrainArgs a;
    a.data_path = data.string();
    a.out_dir = out.string();
    a.algo = "mae-arc";
    a.mode = "amp+conj-angle";
    a.feature_dim = 8;
    a.seeds = {1, 2};
    a.epochs = 2;
    a.batch_size = 8;
    a.t_target = 100;
    return a;
}

} // namespace

TEST_SUITE("cli-harness") {

TEST_CASE("synth writes container, split sidecar and a stable digest") {
    const auto dir = testutil::scratch_dir("cli_synth");
    const auto scene = write_tiny_scene(dir);

    cli::SynthArgs args;
    args.scene_path = scene.string();
    args.out_path = (dir / "data.csi").string();
    CHECK(cli::cmd_synth(args) == 0);
    CHECK(fs::exists(dir / "data.csi"));
    CHECK(fs::exists(dir / "data.csi.split.json"));

    const auto d1 = csi::file_digest_hex(dir / "data.csi");
    args.out_path = (dir / "data2.csi").string();
    CHECK(cli::cmd_synth(args) == 0);
    CHECK(csi::file_digest_hex(dir / "data2.csi") == d1); // same config, same digest

    const auto ds = csi::read_dataset(dir / "data.csi");
    CHECK(ds.samples.size() == 20);
    const auto split = csi::read_split(dir / "data.csi.split.json");
    CHECK(split.train.size() + split.test.size() == 20);
}

TEST_CASE("synth rejects invalid scenes with field-path messages") {
    const auto dir = testutil::scratch_dir("cli_synth_bad");
    synth::SceneConfig s = testutil::tiny_scene(2, 4);
    s.class_count = 1; // C >= 2 violated
    s.dynamic.classes.clear();
    s.class_names.clear();
    const fs::path p = dir / "bad.json";
    {
        std::ofstream os(p);
        os << "{\"class_count\": 1, \"subcarriers\": 6, \"packets_raw\": 100}";
    }
    cli::SynthArgs args;
    args.scene_path = p.string();
    args.out_path = (dir / "x.csi").string();
    CHECK_THROWS_WITH_AS(cli::cmd_synth(args), doctest::Contains("class_count"), ConfigError);
}

TEST_CASE("pretrain creates per-seed run directories with full artifacts") {
    const auto dir = testutil::scratch_dir("cli_pretrain");
    const auto scene = write_tiny_scene(dir);
    cli::SynthArgs sargs;
    sargs.scene_path = scene.string();
    sargs.out_path = (dir / "data.csi").string();
    cli::cmd_synth(sargs);

    const auto args = tiny_pretrain_args(dir / "data.csi", dir / "run");
    CHECK(cli::cmd_pretrain(args) == 0);
    for (const char* seed : {"seed-1", "seed-2"}) {
        const fs::path rd = dir / "run" / seed;
        for (const char* f : {"config.json", "enc_amp.bin", "enc_amp.json", "enc_phase.bin",
                              "enc_phase.json", "training_log.csv", "metrics.json"})
            CHECK_MESSAGE(fs::exists(rd / f), (rd / f).string());
    }

    // resume: identical config reuses checkpoints, changed config is refused
    CHECK(cli::cmd_pretrain(args) == 0);
    auto changed = args;
    changed.epochs = 3;
    CHECK_THROWS_AS(cli::cmd_pretrain(changed), ConfigError);
}

TEST_CASE("pretrain validates seed lists") {
    cli::PretrainArgs args;
    args.data_path = "unused.csi";
    args.out_dir = "unused";
    args.seeds = {};
    CHECK_THROWS_AS(cli::cmd_pretrain(args), ConfigError);
    args.seeds = {3, 3};
    CHECK_THROWS_AS(cli::cmd_pretrain(args), ConfigError);
}

TEST_CASE("probe appends idempotent result rows") {
    const auto dir = testutil::scratch_dir("cli_probe");
    const auto scene = write_tiny_scene(dir);
    cli::SynthArgs sargs;
    sargs.scene_path = scene.string();
    sargs.out_path = (dir / "data.csi").string();
    cli::cmd_synth(sargs);
    cli::cmd_pretrain(tiny_pretrain_args(dir / "data.csi", dir / "run"));

    cli::ProbeArgs pargs;
    pargs.run_dir = (dir / "run").string();
    CHECK(cli::cmd_probe(pargs) == 0);
    const auto rows = report::read_results_csv(dir / "run" / "results.csv");
    CHECK(rows.size() == 4); // 2 seeds x {linear, mlp2}
    for (const auto& r : rows) {
        CHECK(r.accuracy >= 0.0);
        CHECK(r.accuracy <= 1.0);
        CHECK(r.algo == "mae-arc");
    }

    // re-running is idempotent per (run, probe) key
    CHECK(cli::cmd_probe(pargs) == 0);
    CHECK(report::read_results_csv(dir / "run" / "results.csv").size() == 4);
}

TEST_CASE("report pivots rows and rejects duplicates") {
    const auto dir = testutil::scratch_dir("cli_report");
    std::vector<probe::RunReport> rows;
    for (const char* algo : {"mae", "mae-arc"})
        for (const char* mode : {"amp", "conj-angle", "amp+conj-angle"})
            for (std::uint64_t seed : {1, 2}) {
                probe::RunReport r;
                r.algo = algo;
                r.feature_mode = mode;
                r.probe = "linear";
                r.seed = seed;
                r.alpha = 0.1;
                r.accuracy = algo == std::string("mae-arc") ? 0.9 : 0.6;
                r.macro_f1 = r.accuracy - 0.05;
                r.seconds = 1.0;
                rows.push_back(r);
            }
    report::write_results_csv(dir / "results.csv", rows);

    cli::ReportArgs rargs;
    rargs.results = {(dir / "results.csv").string()};
    rargs.out_dir = (dir / "tables").string();
    CHECK(cli::cmd_report(rargs) == 0);
    CHECK(fs::exists(dir / "tables" / "report_linear.csv"));
    CHECK(fs::exists(dir / "tables" / "report_linear.txt"));

    // the grid covers 2 methods x 3 modes and stars the best cell
    std::ifstream is(dir / "tables" / "report_linear.txt");
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    CHECK(text.find("mae-arc") != std::string::npos);
    CHECK(text.find("0.9000*") != std::string::npos);

    // merging the same file twice duplicates keys and is rejected
    rargs.results = {(dir / "results.csv").string(), (dir / "results.csv").string()};
    CHECK_THROWS_AS(cli::cmd_report(rargs), DataError);
}

TEST_CASE("report rejects inconsistent schemas") {
    const auto dir = testutil::scratch_dir("cli_schema");
    {
        std::ofstream os(dir / "bad.csv");
        os << "algo,probe,accuracy\nmae,linear,0.5\n";
    }
    cli::ReportArgs rargs;
    rargs.results = {(dir / "bad.csv").string()};
    rargs.out_dir = (dir / "tables").string();
    CHECK_THROWS_AS(cli::cmd_report(rargs), DataError);
}

TEST_CASE("sweep validates parameters and runs a small feature ablation") {
    const auto dir = testutil::scratch_dir("cli_sweep");
    const auto scene = write_tiny_scene(dir, 8);
    cli::SynthArgs sargs;
    sargs.scene_path = scene.string();
    sargs.out_path = (dir / "data.csi").string();
    cli::cmd_synth(sargs);

    cli::SweepArgs bad;
    bad.data_path = (dir / "data.csi").string();
    bad.out_dir = (dir / "s").string();
    bad.param = "banana";
    bad.values = {"1"};
    CHECK_THROWS_AS(cli::cmd_sweep(bad), ConfigError);
    bad.param = "alpha";
    bad.values = {};
    CHECK_THROWS_AS(cli::cmd_sweep(bad), ConfigError);
    bad.values = {"0.1"};
    bad.algo = "moco";
    CHECK_THROWS_AS(cli::cmd_sweep(bad), ConfigError); // alpha needs mae-arc

    cli::SweepArgs args;
    args.data_path = (dir / "data.csi").string();
    args.out_dir = (dir / "sweep").string();
    args.algo = "mae-arc";
    args.param = "feature";
    args.values = {"conj-angle", "raw-angle"};
    args.seeds = {1};
    args.epochs = 1;
    args.batch_size = 8;
    args.t_target = 100;
    args.probes = {"linear"};
    CHECK(cli::cmd_sweep(args) == 0);
    CHECK(fs::exists(dir / "sweep" / "results.csv"));
    CHECK(fs::exists(dir / "sweep" / "sweep_linear.csv"));
    CHECK(fs::exists(dir / "sweep" / "sweep_linear_accuracy.svg"));
    const auto rows = report::read_results_csv(dir / "sweep" / "results.csv");
    CHECK(rows.size() == 2); // 2 feature values x 1 seed x 1 probe
}

TEST_CASE("worker thread cap reads ARC_SSL_THREADS") {
    // no env manipulation: just sanity, must be >= 1
    CHECK(cli::worker_thread_cap() >= 1);
}

} // TEST_SUITE
