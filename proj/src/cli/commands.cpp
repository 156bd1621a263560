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

#include "commands.hpp"

#include "arcssl/csi.hpp"
#include "arcssl/errors.hpp"
#include "arcssl/nn_io.hpp"
#include "arcssl/preprocess.hpp"
#include "arcssl/probe.hpp"
#include "arcssl/report.hpp"
#include "arcssl/ssl.hpp"
#include "arcssl/synth.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

namespace arcssl::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

fs::path split_sidecar_path(const std::string& data_path) { return data_path + ".split.json"; }

struct LoadedData {
    csi::Dataset data; // full set, downsampled to t_target
    csi::SplitIndices split;
    std::string digest;
    std::uint32_t t_target = 0;
};

LoadedData load_data(const std::string& path, std::uint32_t t_target) {
    LoadedData out;
    out.digest = csi::file_digest_hex(path);
    csi::Dataset raw = csi::read_dataset(path);
    const fs::path sidecar = split_sidecar_path(path);
    if (!fs::exists(sidecar))
        throw DataError("missing split sidecar " + sidecar.string() +
                        " (synth writes it next to the dataset)");
    out.split = csi::read_split(sidecar);
    for (auto i : out.split.train)
        if (i >= raw.samples.size())
            throw DataError("split sidecar train index out of range");
    for (auto i : out.split.test)
        if (i >= raw.samples.size())
            throw DataError("split sidecar test index out of range");

    if (t_target == 0 || t_target > raw.packets())
        throw ConfigError("t_target must lie in (0, dataset T]");
    out.t_target = t_target;
    out.data.shape_a = raw.shape_a;
    out.data.shape_k = raw.shape_k;
    out.data.shape_t = t_target;
    out.data.class_names = raw.class_names;
    out.data.metadata_json = raw.metadata_json;
    out.data.samples.resize(raw.samples.size());
    for (std::size_t i = 0; i < raw.samples.size(); ++i) {
        out.data.samples[i].label = raw.samples[i].label;
        out.data.samples[i].csi = prep::downsample_time(raw.samples[i].csi, t_target);
        raw.samples[i].csi = csi::CsiTensor(); // release raw packets eagerly
    }
    return out;
}

json moco_to_json(const ssl::MocoConfig& c) {
    return json{{"temperature", c.temperature},
                {"queue_size", c.queue_size},
                {"key_momentum", c.key_momentum},
                {"batch_size", c.batch_size},
                {"epochs", c.epochs},
                {"lr", c.lr},
                {"sgd_momentum", c.sgd_momentum},
                {"triple_per_batch", c.triple_per_batch},
                {"augment",
                 {{"jitter_sigma", c.augment.jitter_sigma},
                  {"scale_range", c.augment.scale_range},
                  {"time_mask_ratio", c.augment.time_mask_ratio}}}};
}

json mae_to_json(const ssl::MaeConfig& c) {
    return json{{"mask_ratio", c.mask_ratio}, {"patch_k", c.patch_k},
                {"patch_t", c.patch_t},       {"alpha", c.alpha},
                {"batch_size", c.batch_size}, {"epochs", c.epochs},
                {"lr", c.lr},                 {"sgd_momentum", c.sgd_momentum},
                {"triple_per_batch", c.triple_per_batch},
                {"masked_mse_only", c.masked_mse_only},
                {"shared_mask", c.shared_mask}};
}

ssl::MocoConfig moco_from_json(const json& j) {
    ssl::MocoConfig c;
    c.temperature = j.at("temperature").get<double>();
    c.queue_size = j.at("queue_size").get<std::uint32_t>();
    c.key_momentum = j.at("key_momentum").get<double>();
    c.batch_size = j.at("batch_size").get<std::uint32_t>();
    c.epochs = j.at("epochs").get<std::uint32_t>();
    c.lr = j.at("lr").get<double>();
    c.sgd_momentum = j.at("sgd_momentum").get<double>();
    c.triple_per_batch = j.at("triple_per_batch").get<bool>();
    c.augment.jitter_sigma = j.at("augment").at("jitter_sigma").get<double>();
    c.augment.scale_range = j.at("augment").at("scale_range").get<double>();
    c.augment.time_mask_ratio = j.at("augment").at("time_mask_ratio").get<double>();
    return c;
}

ssl::MaeConfig mae_from_json(const json& j) {
    ssl::MaeConfig c;
    c.mask_ratio = j.at("mask_ratio").get<double>();
    c.patch_k = j.at("patch_k").get<std::uint32_t>();
    c.patch_t = j.at("patch_t").get<std::uint32_t>();
    c.alpha = j.at("alpha").get<double>();
    c.batch_size = j.at("batch_size").get<std::uint32_t>();
    c.epochs = j.at("epochs").get<std::uint32_t>();
    c.lr = j.at("lr").get<double>();
    c.sgd_momentum = j.at("sgd_momentum").get<double>();
    c.triple_per_batch = j.at("triple_per_batch").get<bool>();
    c.masked_mse_only = j.at("masked_mse_only").get<bool>();
    c.shared_mask = j.at("shared_mask").get<bool>();
    return c;
}

json stats_to_json(const prep::ViewStats& s) {
    return json{{"mean", s.mean}, {"stddev", s.stddev}, {"degenerate", s.degenerate}};
}

prep::ViewStats stats_from_json(const json& j) {
    prep::ViewStats s;
    s.mean = j.at("mean").get<double>();
    s.stddev = j.at("stddev").get<double>();
    s.degenerate = j.at("degenerate").get<bool>();
    return s;
}

/// Full resolved configuration of one pretraining run; everything a replay
/// or a probe needs, except the dataset bytes themselves.
json run_config_json(const ssl::PretrainOptions& opts, const std::string& data_path,
                     const std::string& digest, std::uint32_t t_target) {
    json j;
    j["algo"] = ssl::to_string(opts.algo);
    j["feature_mode"] = prep::to_string(opts.mode);
    j["arch"] = opts.arch;
    j["feature_dim"] = opts.feature_dim;
    j["seed"] = opts.seed;
    j["moco"] = moco_to_json(opts.moco);
    j["mae"] = mae_to_json(opts.mae);
    j["data"] = {{"path", data_path}, {"digest", digest}, {"t_target", t_target}};
    return j;
}

void write_training_log(const fs::path& path, const std::vector<ssl::TrainLogRow>& log) {
    std::ofstream os(path, std::ios::trunc);
    if (!os)
        throw DataError("cannot open for writing: " + path.string());
    os << "epoch,loss_a,loss_p,align_a,align_p\n";
    char buf[160];
    for (const auto& r : log) {
        std::snprintf(buf, sizeof(buf), "%u,%.6f,%.6f,%.6f,%.6f", r.epoch, r.loss_amp,
                      r.loss_phase, r.align_amp, r.align_phase);
        os << buf << "\n";
    }
}

probe::EncoderBundle bundle_from_result(const ssl::PretrainOptions& opts,
                                        ssl::PretrainResult&& res) {
    probe::EncoderBundle b;
    b.mode = opts.mode;
    b.has_amp = res.has_amp;
    b.has_phase = res.has_phase;
    b.enc_amp = std::move(res.enc_amp);
    b.enc_phase = std::move(res.enc_phase);
    b.stats_amp = res.stats_amp;
    b.stats_phase = res.stats_phase;
    return b;
}

/// One pretraining run: train, write checkpoints + logs + metrics, return the
/// frozen bundle for probing. Resume-safe: refuses a changed config, skips
/// a completed identical run.
probe::EncoderBundle execute_run(const ssl::ViewBank& bank, const LoadedData& data,
                                 const std::string& data_path, const ssl::PretrainOptions& opts,
                                 const fs::path& dir, double* out_seconds) {
    fs::create_directories(dir);
    const json config = run_config_json(opts, data_path, data.digest, data.t_target);
    const fs::path config_path = dir / "config.json";
    const fs::path enc_amp_bin = dir / "enc_amp.bin";
    const fs::path enc_phase_bin = dir / "enc_phase.bin";

    if (fs::exists(config_path)) {
        std::ifstream is(config_path);
        json existing;
        is >> existing;
        json comparable = existing;
        comparable.erase("stats");
        if (comparable != config)
            throw ConfigError("run directory " + dir.string() +
                              " holds a different config; refusing to resume");
        const bool amp_done = !prep::mode_has_amp(opts.mode) || fs::exists(enc_amp_bin);
        const bool phase_done = !prep::mode_has_phase(opts.mode) || fs::exists(enc_phase_bin);
        if (amp_done && phase_done) {
            std::fprintf(stderr, "arcssl: %s already trained, reusing checkpoints\n",
                         dir.string().c_str());
            probe::EncoderBundle b;
            b.mode = opts.mode;
            b.has_amp = prep::mode_has_amp(opts.mode);
            b.has_phase = prep::mode_has_phase(opts.mode);
            std::ifstream ms(dir / "metrics.json");
            if (ms.good()) {
                json m;
                ms >> m;
                if (out_seconds != nullptr && m.contains("pretrain_seconds"))
                    *out_seconds = m["pretrain_seconds"].get<double>();
            }
            if (b.has_amp) {
                b.enc_amp = nn::load_network(enc_amp_bin, dir / "enc_amp.json");
                b.stats_amp = stats_from_json(existing.at("stats").at("amp"));
            }
            if (b.has_phase) {
                b.enc_phase = nn::load_network(enc_phase_bin, dir / "enc_phase.json");
                b.stats_phase = stats_from_json(existing.at("stats").at("phase"));
            }
            return b;
        }
    }

    const auto start = std::chrono::steady_clock::now();
    ssl::PretrainResult res = ssl::pretrain(bank, data.split.train, opts);
    const double train_seconds = seconds_since(start);
    if (out_seconds != nullptr)
        *out_seconds = train_seconds;

    json config_full = config;
    config_full["stats"] = json::object();
    if (res.has_amp)
        config_full["stats"]["amp"] = stats_to_json(res.stats_amp);
    if (res.has_phase)
        config_full["stats"]["phase"] = stats_to_json(res.stats_phase);
    {
        std::ofstream os(config_path, std::ios::trunc);
        os << config.dump(2) << "\n";
    }

    if (res.has_amp)
        nn::save_network(res.enc_amp, enc_amp_bin, dir / "enc_amp.json", "encoder",
                         opts.feature_dim);
    if (res.has_phase)
        nn::save_network(res.enc_phase, enc_phase_bin, dir / "enc_phase.json", "encoder",
                         opts.feature_dim);
    write_training_log(dir / "training_log.csv", res.log);

    probe::EncoderBundle bundle = bundle_from_result(opts, std::move(res));

    // collapse diagnostics on the training features
    const probe::FeatureMatrix train_features =
        probe::extract_features(bundle, bank, data.split.train);
    json metrics;
    metrics["feature_cov_trace"] = probe::feature_covariance_trace(train_features);
    metrics["pretrain_seconds"] = train_seconds;
    if (!bundle.has_amp || !bundle.has_phase)
        metrics["branches"] = bundle.has_amp ? "amp" : "phase";
    else
        metrics["branches"] = "amp+phase";
    {
        std::ofstream os(dir / "metrics.json", std::ios::trunc);
        os << metrics.dump(2) << "\n";
    }

    // config.json including stats is authoritative for probing
    {
        std::ofstream os(config_path, std::ios::trunc);
        os << config_full.dump(2) << "\n";
    }
    return bundle;
}

ssl::PretrainOptions resolve_options(const std::string& algo, const std::string& mode,
                                     const std::string& arch, std::uint32_t feature_dim,
                                     std::uint64_t seed, const std::optional<double>& alpha,
                                     const std::optional<std::uint32_t>& epochs,
                                     const std::optional<double>& lr,
                                     const std::optional<std::uint32_t>& batch) {
    ssl::PretrainOptions opts;
    opts.algo = ssl::algo_from_string(algo);
    opts.mode = prep::feature_mode_from_string(mode);
    opts.arch = arch;
    opts.feature_dim = feature_dim;
    opts.seed = seed;
    if (alpha) {
        if (opts.algo == ssl::Algo::mae_arc)
            opts.mae.alpha = *alpha;
        else
            std::fprintf(stderr, "arcssl: warning: --alpha only applies to mae-arc; ignored\n");
    }
    if (epochs) {
        opts.mae.epochs = *epochs;
        opts.moco.epochs = *epochs;
    }
    if (lr) {
        opts.mae.lr = *lr;
        opts.moco.lr = *lr;
    }
    if (batch) {
        opts.mae.batch_size = *batch;
        opts.moco.batch_size = *batch;
        if (opts.moco.queue_size % opts.moco.batch_size != 0)
            opts.moco.queue_size =
                ((opts.moco.queue_size + *batch - 1) / *batch) * *batch; // keep the multiple
    }
    return opts;
}

} // namespace

int cmd_synth(const SynthArgs& args) {
    synth::SceneConfig scene =
        args.scene_path.empty() ? synth::default_scene() : synth::load_scene(args.scene_path);
    if (args.print_scene)
        std::printf("%s\n", scene.canonical_json().c_str());
    if (args.out_path.empty())
        throw ConfigError("synth: missing output path");

    csi::Dataset ds = synth::synthesize(scene);
    csi::write_dataset(ds, args.out_path);

    const std::uint64_t split_seed =
        args.split_seed ? *args.split_seed : derive_seed(scene.seed, {stream::split});
    const csi::SplitIndices split = csi::split_indices(ds, args.split_fraction, split_seed);
    csi::write_split(split, split_sidecar_path(args.out_path));

    std::printf("dataset: %s\n", args.out_path.c_str());
    std::printf("samples: %zu  shape: %ux%ux%u  classes: %u\n", ds.samples.size(), ds.antennas(),
                ds.subcarriers(), ds.packets(), ds.class_count());
    std::printf("digest: %s\n", csi::file_digest_hex(args.out_path).c_str());
    return 0;
}

int cmd_pretrain(const PretrainArgs& args) {
    if (args.seeds.empty())
        throw ConfigError("pretrain: seed list must not be empty");
    std::vector<std::uint64_t> sorted = args.seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("pretrain: seeds must be distinct");
    if (args.out_dir.empty())
        throw ConfigError("pretrain: missing output directory");

    const LoadedData data = load_data(args.data_path, args.t_target);
    const prep::FeatureMode mode = prep::feature_mode_from_string(args.mode);
    const ssl::ViewBank bank(data.data, mode, &data.split.train);

    for (const auto seed : args.seeds) {
        const ssl::PretrainOptions opts =
            resolve_options(args.algo, args.mode, args.arch, args.feature_dim, seed, args.alpha,
                            args.epochs, args.lr, args.batch_size);
        const fs::path dir = fs::path(args.out_dir) / ("seed-" + std::to_string(seed));
        double seconds = 0.0;
        execute_run(bank, data, args.data_path, opts, dir, &seconds);
        std::printf("pretrained %s seed %llu in %.1fs -> %s\n", args.algo.c_str(),
                    static_cast<unsigned long long>(seed), seconds, dir.string().c_str());
    }
    return 0;
}

namespace {

struct RunHandle {
    fs::path dir;
    ssl::PretrainOptions opts;
};

std::vector<probe::RunReport> probe_bundle(const probe::EncoderBundle& bundle,
                                           const ssl::ViewBank& bank, const LoadedData& data,
                                           const ssl::PretrainOptions& opts,
                                           const std::vector<std::string>& probes,
                                           double pretrain_seconds) {
    const probe::FeatureMatrix train_f = probe::extract_features(bundle, bank, data.split.train);
    const probe::FeatureMatrix test_f = probe::extract_features(bundle, bank, data.split.test);
    std::vector<probe::RunReport> rows;
    for (const auto& kind : probes) {
        const auto start = std::chrono::steady_clock::now();
        const probe::ProbeState p = probe::fit_probe(train_f, kind, opts.seed);
        const probe::Metrics m = probe::evaluate(p, test_f);
        probe::RunReport r;
        r.algo = ssl::to_string(opts.algo);
        r.feature_mode = prep::to_string(opts.mode);
        r.probe = kind;
        r.seed = opts.seed;
        r.alpha = opts.algo == ssl::Algo::mae_arc ? opts.mae.alpha : 0.0;
        r.accuracy = m.accuracy;
        r.macro_f1 = m.macro_f1;
        r.seconds = pretrain_seconds + seconds_since(start);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace

int cmd_probe(const ProbeArgs& args) {
    const fs::path run_root(args.run_dir);
    if (!fs::is_directory(run_root))
        throw DataError("probe: run directory not found: " + args.run_dir);

    std::vector<fs::path> seed_dirs;
    for (const auto& e : fs::directory_iterator(run_root))
        if (e.is_directory() && e.path().filename().string().starts_with("seed-"))
            seed_dirs.push_back(e.path());
    std::sort(seed_dirs.begin(), seed_dirs.end());
    if (seed_dirs.empty())
        throw DataError("probe: no seed-* run directories under " + args.run_dir);

    std::vector<probe::RunReport> rows;
    // cache the data and view bank across seeds (same config family)
    std::string cached_key;
    std::unique_ptr<LoadedData> data;
    std::unique_ptr<ssl::ViewBank> bank;

    for (const auto& dir : seed_dirs) {
        const fs::path config_path = dir / "config.json";
        if (!fs::exists(config_path))
            throw DataError("probe: missing config.json in " + dir.string());
        json config;
        {
            std::ifstream is(config_path);
            is >> config;
        }
        const std::string algo = config.at("algo").get<std::string>();
        const std::string mode_name = config.at("feature_mode").get<std::string>();
        const prep::FeatureMode mode = prep::feature_mode_from_string(mode_name);
        const std::string data_path =
            args.data_path.empty() ? config.at("data").at("path").get<std::string>()
                                   : args.data_path;
        const auto t_target = config.at("data").at("t_target").get<std::uint32_t>();

        const std::string key = data_path + "|" + std::to_string(t_target) + "|" + mode_name;
        if (key != cached_key) {
            data = std::make_unique<LoadedData>(load_data(data_path, t_target));
            if (args.data_path.empty() &&
                data->digest != config.at("data").at("digest").get<std::string>())
                throw DataError("probe: dataset digest mismatch for " + data_path);
            bank = std::make_unique<ssl::ViewBank>(data->data, mode, &data->split.train);
            cached_key = key;
        }

        probe::EncoderBundle bundle;
        bundle.mode = mode;
        bundle.has_amp = prep::mode_has_amp(mode);
        bundle.has_phase = prep::mode_has_phase(mode);
        if (bundle.has_amp) {
            bundle.enc_amp = nn::load_network(dir / "enc_amp.bin", dir / "enc_amp.json");
            bundle.stats_amp = stats_from_json(config.at("stats").at("amp"));
        }
        if (bundle.has_phase) {
            bundle.enc_phase = nn::load_network(dir / "enc_phase.bin", dir / "enc_phase.json");
            bundle.stats_phase = stats_from_json(config.at("stats").at("phase"));
        }

        ssl::PretrainOptions opts;
        opts.algo = ssl::algo_from_string(algo);
        opts.mode = mode;
        opts.seed = config.at("seed").get<std::uint64_t>();
        opts.mae = mae_from_json(config.at("mae"));
        opts.moco = moco_from_json(config.at("moco"));

        double pre_seconds = 0.0;
        {
            std::ifstream ms(dir / "metrics.json");
            if (ms.good()) {
                json m;
                ms >> m;
                pre_seconds = m.value("pretrain_seconds", 0.0);
            }
        }
        auto seed_rows = probe_bundle(bundle, *bank, *data, opts, args.probes, pre_seconds);
        rows.insert(rows.end(), seed_rows.begin(), seed_rows.end());
    }

    const std::size_t added = report::merge_results_csv(run_root / "results.csv", rows);
    // the JSON-lines log mirrors only newly added rows
    if (added > 0)
        report::append_results_jsonl(run_root / "results.jsonl", rows);
    std::printf("probe: %zu rows (%zu new) -> %s\n", rows.size(), added,
                (run_root / "results.csv").string().c_str());
    return 0;
}

unsigned worker_thread_cap() {
    const char* env = std::getenv("ARC_SSL_THREADS");
    if (env != nullptr) {
        const long v = std::atol(env);
        if (v < 1)
            throw ConfigError("ARC_SSL_THREADS must be a positive integer");
        return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

int cmd_sweep(const SweepArgs& args) {
    if (args.out_dir.empty())
        throw ConfigError("sweep: missing output directory");
    if (args.seeds.empty())
        throw ConfigError("sweep: seed list must not be empty");

    struct SweepRun {
        std::string value_label;
        ssl::PretrainOptions opts;
        fs::path dir;
    };
    std::vector<SweepRun> runs;

    if (!args.preset.empty()) {
        if (args.preset != "paper-indomain")
            throw ConfigError("unknown preset '" + args.preset + "'");
        const std::vector<std::string> algos = {"moco", "moco-arc", "mae", "mae-arc"};
        const std::vector<std::string> modes = {"amp", "conj-angle", "amp+conj-angle"};
        for (const auto& algo : algos)
            for (const auto& mode : modes)
                for (const auto seed : args.seeds) {
                    ssl::PretrainOptions opts = resolve_options(
                        algo, mode, "conv-small", 64, seed, std::nullopt, args.epochs, args.lr,
                        args.batch_size);
                    runs.push_back({algo + "/" + mode, opts,
                                    fs::path(args.out_dir) / (algo + "_" + mode) /
                                        ("seed-" + std::to_string(seed))});
                }
    } else if (args.param == "alpha") {
        if (args.values.empty())
            throw ConfigError("sweep: empty value list");
        if (args.algo != "mae-arc")
            throw ConfigError("sweep over alpha requires --algo mae-arc");
        for (const auto& v : args.values) {
            double alpha = 0.0;
            try {
                alpha = std::stod(v);
            } catch (const std::exception&) {
                throw ConfigError("sweep: unparseable alpha value '" + v + "'");
            }
            if (alpha < 0.0)
                throw ConfigError("sweep: alpha must be >= 0");
            for (const auto seed : args.seeds) {
                ssl::PretrainOptions opts =
                    resolve_options(args.algo, args.mode, "conv-small", 64, seed, alpha,
                                    args.epochs, args.lr, args.batch_size);
                runs.push_back({v, opts,
                                fs::path(args.out_dir) / ("alpha-" + v) /
                                    ("seed-" + std::to_string(seed))});
            }
        }
    } else if (args.param == "feature") {
        if (args.values.empty())
            throw ConfigError("sweep: empty value list");
        for (const auto& v : args.values) {
            for (const auto seed : args.seeds) {
                ssl::PretrainOptions opts = resolve_options(args.algo, v, "conv-small", 64, seed,
                                                            std::nullopt, args.epochs, args.lr,
                                                            args.batch_size);
                runs.push_back({v, opts,
                                fs::path(args.out_dir) / ("feature-" + v) /
                                    ("seed-" + std::to_string(seed))});
            }
        }
    } else {
        throw ConfigError("sweep: unknown parameter '" + args.param +
                          "' (expected alpha or feature; or use --preset paper-indomain)");
    }

    const LoadedData data = load_data(args.data_path, args.t_target);

    // one view bank per distinct feature mode, shared read-only by workers
    std::map<prep::FeatureMode, std::unique_ptr<ssl::ViewBank>> banks;
    for (const auto& r : runs)
        if (!banks.contains(r.opts.mode))
            banks[r.opts.mode] =
                std::make_unique<ssl::ViewBank>(data.data, r.opts.mode, &data.split.train);

    std::vector<std::vector<probe::RunReport>> run_rows(runs.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= runs.size())
                return;
            const auto& r = runs[idx];
            double seconds = 0.0;
            const probe::EncoderBundle bundle = execute_run(
                *banks.at(r.opts.mode), data, args.data_path, r.opts, r.dir, &seconds);
            run_rows[idx] = probe_bundle(bundle, *banks.at(r.opts.mode), data, r.opts, args.probes,
                                         seconds);
            std::lock_guard<std::mutex> lk(log_mutex);
            std::fprintf(stderr, "sweep: finished %s seed %llu (%.1fs)\n", r.value_label.c_str(),
                         static_cast<unsigned long long>(r.opts.seed), seconds);
        }
    };
    const unsigned n_workers =
        std::min<unsigned>(worker_thread_cap(), static_cast<unsigned>(runs.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_workers; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    std::vector<probe::RunReport> all_rows;
    for (const auto& rows : run_rows)
        all_rows.insert(all_rows.end(), rows.begin(), rows.end());
    fs::create_directories(args.out_dir);
    report::write_results_csv(fs::path(args.out_dir) / "results.csv", all_rows);
    report::append_results_jsonl(fs::path(args.out_dir) / "results.jsonl", all_rows);

    // per-value aggregation (per probe kind) + plots
    const std::string param_name = args.preset.empty() ? args.param : "preset";
    for (const auto& pk : args.probes) {
        std::vector<report::SweepPoint> points;
        // collect per distinct value, in first-seen order
        std::vector<std::string> order;
        std::map<std::string, std::vector<const probe::RunReport*>> groups;
        for (std::size_t ri = 0; ri < runs.size(); ++ri) {
            const auto& label = runs[ri].value_label;
            if (!groups.contains(label))
                order.push_back(label);
            for (const auto& row : run_rows[ri])
                if (row.probe == pk)
                    groups[label].push_back(&row);
        }
        for (const auto& label : order) {
            const auto& g = groups[label];
            if (g.empty())
                continue;
            report::SweepPoint p;
            p.value = label;
            p.stats.runs = g.size();
            for (const auto* row : g) {
                p.stats.mean_acc += row->accuracy;
                p.stats.mean_f1 += row->macro_f1;
            }
            p.stats.mean_acc /= static_cast<double>(g.size());
            p.stats.mean_f1 /= static_cast<double>(g.size());
            for (const auto* row : g) {
                p.stats.std_acc += (row->accuracy - p.stats.mean_acc) *
                                   (row->accuracy - p.stats.mean_acc);
                p.stats.std_f1 +=
                    (row->macro_f1 - p.stats.mean_f1) * (row->macro_f1 - p.stats.mean_f1);
            }
            p.stats.std_acc = std::sqrt(p.stats.std_acc / static_cast<double>(g.size()));
            p.stats.std_f1 = std::sqrt(p.stats.std_f1 / static_cast<double>(g.size()));
            points.push_back(std::move(p));
        }
        report::write_sweep_summary(points, param_name,
                                    fs::path(args.out_dir) / ("sweep_" + pk + ".csv"));
        report::write_sweep_svg(points, param_name, "accuracy",
                                fs::path(args.out_dir) / ("sweep_" + pk + "_accuracy.svg"));
        report::write_sweep_svg(points, param_name, "macro_f1",
                                fs::path(args.out_dir) / ("sweep_" + pk + "_macro_f1.svg"));
    }
    std::printf("sweep: %zu runs -> %s\n", runs.size(), args.out_dir.c_str());
    return 0;
}

int cmd_report(const ReportArgs& args) {
    if (args.results.empty())
        throw ConfigError("report: no results files given");
    if (args.out_dir.empty())
        throw ConfigError("report: missing output directory");
    std::vector<probe::RunReport> rows;
    for (const auto& path : args.results) {
        const auto part = report::read_results_csv(path);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    report::write_report_tables(rows, args.out_dir);
    std::printf("report: %zu rows -> %s\n", rows.size(), args.out_dir.c_str());
    return 0;
}

} // namespace arcssl::cli
