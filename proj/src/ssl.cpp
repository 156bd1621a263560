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

#include "arcssl/ssl.hpp"

#include "arcssl/nn_io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>

namespace arcssl::ssl {

using prep::FeatureMode;
using prep::ViewKind;

const char* to_string(Algo a) {
    switch (a) {
    case Algo::moco: return "moco";
    case Algo::moco_arc: return "moco-arc";
    case Algo::mae: return "mae";
    case Algo::mae_arc: return "mae-arc";
    }
    return "?";
}

Algo algo_from_string(const std::string& s) {
    if (s == "moco") return Algo::moco;
    if (s == "moco-arc") return Algo::moco_arc;
    if (s == "mae") return Algo::mae;
    if (s == "mae-arc") return Algo::mae_arc;
    throw ConfigError("unknown algorithm '" + s + "' (expected moco, moco-arc, mae or mae-arc)");
}

bool algo_is_arc(Algo a) { return a == Algo::moco_arc || a == Algo::mae_arc; }
bool algo_is_mae(Algo a) { return a == Algo::mae || a == Algo::mae_arc; }

void MocoConfig::validate() const {
    if (!(temperature > 0.0))
        throw ConfigError("moco.temperature must be > 0");
    if (queue_size < 1)
        throw ConfigError("moco.queue_size must be >= 1");
    if (!(key_momentum >= 0.0 && key_momentum <= 1.0))
        throw ConfigError("moco.key_momentum must lie in [0, 1]");
    if (batch_size < 1)
        throw ConfigError("moco.batch_size must be >= 1");
    if (queue_size % batch_size != 0)
        throw ConfigError("moco.queue_size must be a multiple of the batch size");
    if (!(lr >= 0.0) || !(sgd_momentum >= 0.0 && sgd_momentum < 1.0))
        throw ConfigError("moco optimizer settings out of range");
    if (augment.jitter_sigma < 0.0 || augment.scale_range < 0.0 || augment.time_mask_ratio < 0.0 ||
        augment.time_mask_ratio > 1.0)
        throw ConfigError("moco.augment strengths out of range");
}

void MaeConfig::validate(std::uint32_t subcarriers, std::uint32_t packets) const {
    if (!(mask_ratio >= 0.0 && mask_ratio < 1.0))
        throw ConfigError("mae.mask_ratio must lie in [0, 1)");
    if (patch_k == 0 || patch_t == 0 || subcarriers % patch_k != 0 || packets % patch_t != 0)
        throw ConfigError("mae.patch size must tile the (K, T) view exactly; got " +
                          std::to_string(patch_k) + "x" + std::to_string(patch_t) + " for " +
                          std::to_string(subcarriers) + "x" + std::to_string(packets));
    if (!(alpha >= 0.0))
        throw ConfigError("mae.alpha must be >= 0");
    if (batch_size < 1)
        throw ConfigError("mae.batch_size must be >= 1");
    if (!(lr >= 0.0) || !(sgd_momentum >= 0.0 && sgd_momentum < 1.0))
        throw ConfigError("mae optimizer settings out of range");
}

void warn_zero_norm_cosine() {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true))
        std::fprintf(stderr, "arcssl: warning: cosine of zero-norm feature defined as 0\n");
}

PatchMask random_mask(std::uint32_t subcarriers, std::uint32_t packets, const MaeConfig& cfg,
                      Rng& rng) {
    if (cfg.patch_k == 0 || cfg.patch_t == 0 || subcarriers % cfg.patch_k != 0 ||
        packets % cfg.patch_t != 0)
        throw ConfigError("random_mask: patch grid does not tile the view");
    PatchMask m;
    m.patch_k = cfg.patch_k;
    m.patch_t = cfg.patch_t;
    m.grid_k = subcarriers / cfg.patch_k;
    m.grid_t = packets / cfg.patch_t;
    const std::size_t patches = static_cast<std::size_t>(m.grid_k) * m.grid_t;
    m.masked.assign(patches, 0);
    m.masked_count = static_cast<std::size_t>(
        std::lround(cfg.mask_ratio * static_cast<double>(patches)));
    if (m.masked_count > patches)
        m.masked_count = patches;
    // partial Fisher-Yates over patch indices
    std::vector<std::uint32_t> idx(patches);
    for (std::size_t i = 0; i < patches; ++i)
        idx[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < m.masked_count; ++i) {
        const std::size_t j = i + rng.next_below(patches - i);
        std::swap(idx[i], idx[j]);
        m.masked[idx[i]] = 1;
    }
    return m;
}

void apply_mask(const PatchMask& mask, float* view) {
    const std::uint32_t width = mask.grid_t * mask.patch_t;
    for (std::uint32_t gi = 0; gi < mask.grid_k; ++gi)
        for (std::uint32_t gj = 0; gj < mask.grid_t; ++gj) {
            if (!mask.masked[static_cast<std::size_t>(gi) * mask.grid_t + gj])
                continue;
            for (std::uint32_t r = 0; r < mask.patch_k; ++r) {
                float* row = view + static_cast<std::size_t>(gi * mask.patch_k + r) * width +
                             static_cast<std::size_t>(gj) * mask.patch_t;
                std::fill(row, row + mask.patch_t, 0.0f);
            }
        }
}

std::pair<prep::ViewTensor, PatchMask> random_mask_view(const prep::ViewTensor& x,
                                                        const MaeConfig& cfg, Rng& rng) {
    PatchMask m = random_mask(x.subcarriers, x.packets, cfg, rng);
    prep::ViewTensor out = x;
    apply_mask(m, out.values.data());
    return {std::move(out), std::move(m)};
}

void momentum_update(nn::Network<float>& key_encoder, const nn::Network<float>& query_encoder,
                     float m) {
    if (key_encoder.param_count() != query_encoder.param_count() ||
        !key_encoder.same_architecture(query_encoder))
        throw TrainingError("momentum_update: encoder architectures differ");
    kernels::scale_add(m, key_encoder.params().data(), 1.0f - m, query_encoder.params().data(),
                       key_encoder.param_count());
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void scale_inplace(std::vector<float>& v, float factor) {
    kernels::scale_add(factor, v.data(), 0.0f, v.data(), v.size());
}

prep::ViewTensor augment_pipeline(const prep::ViewTensor& x, Rng& rng, const AugmentSpec& spec) {
    prep::ViewTensor v = prep::augment_baseline(x, rng, prep::AugmentPolicy::jitter, spec.jitter_sigma);
    v = prep::augment_baseline(v, rng, prep::AugmentPolicy::scale, spec.scale_range);
    v = prep::augment_baseline(v, rng, prep::AugmentPolicy::time_mask, spec.time_mask_ratio);
    return v;
}

struct EpochStats {
    double loss = 0.0;
    double align = 0.0;
    std::size_t count = 0;
    bool track_align = false;
};

struct MocoBranch {
    bool enabled = false;
    nn::Network<float> enc, key;
    std::unique_ptr<FeatureQueue<float>> queue;
    std::unique_ptr<nn::SgdMomentum<float>> opt;
    nn::Tape<float> tape_q, tape_key;
    std::vector<float> buf_q, buf_k;
    std::vector<std::vector<float>> batch_keys;
    EpochStats stats;
};

struct MaeBranch {
    bool enabled = false;
    nn::Network<float> enc, dec;
    std::unique_ptr<nn::SgdMomentum<float>> opt_enc, opt_dec;
    nn::Tape<float> tape_q, tape_k, tape_dec;
    std::vector<float> buf_q, buf_k, target, dzq;
    EpochStats stats;
};

void check_finite_loss(double loss, const char* algo, std::uint32_t epoch, std::size_t sample) {
    if (!std::isfinite(loss))
        throw TrainingError(std::string(algo) + ": non-finite loss at epoch " +
                            std::to_string(epoch) + ", sample " + std::to_string(sample));
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, std::uint32_t epoch) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    Rng rng = derive_rng(seed, {stream::shuffle, epoch});
    for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng.next_below(i)]);
    return order;
}

} // namespace

PretrainResult pretrain(const ViewBank& bank, const std::vector<std::uint64_t>& train_indices,
                        const PretrainOptions& opts) {
    const FeatureMode mode = opts.mode;
    if (bank.mode() != mode)
        throw ConfigError("view bank feature mode does not match the requested mode");
    if (bank.antennas() < 3)
        throw DataError("pretraining requires at least 3 antennas");
    const bool is_mae = algo_is_mae(opts.algo);
    const bool is_arc = algo_is_arc(opts.algo);
    const std::uint32_t K = bank.subcarriers(), T = bank.packets();
    if (is_mae)
        opts.mae.validate(K, T);
    else
        opts.moco.validate();

    const std::uint32_t B = is_mae ? opts.mae.batch_size : opts.moco.batch_size;
    const std::uint32_t epochs = is_mae ? opts.mae.epochs : opts.moco.epochs;
    std::vector<std::uint64_t> pool = train_indices;
    if (pool.empty()) {
        pool.resize(bank.sample_count());
        for (std::size_t i = 0; i < pool.size(); ++i)
            pool[i] = i;
    }
    for (auto idx : pool)
        if (idx >= bank.sample_count())
            throw DataError("training index out of range");
    const std::size_t n = pool.size();
    if (n < B)
        throw ConfigError("batch size " + std::to_string(B) + " exceeds training set size " +
                          std::to_string(n));

    const bool has_amp = prep::mode_has_amp(mode);
    const bool has_phase = prep::mode_has_phase(mode);
    const std::size_t view_len = static_cast<std::size_t>(K) * T;
    const std::uint32_t d = opts.feature_dim;

    MocoBranch moco[2];
    MaeBranch mae[2];
    // branch 0 = amplitude, branch 1 = phase
    for (int b = 0; b < 2; ++b) {
        const bool enabled = b == 0 ? has_amp : has_phase;
        const std::uint64_t enc_seed = derive_seed(opts.seed, {stream::init, 1u + (unsigned)b});
        if (!enabled)
            continue;
        if (is_mae) {
            auto& br = mae[b];
            br.enabled = true;
            br.enc = nn::build_encoder(opts.arch, K, T, d, enc_seed);
            br.dec = nn::build_decoder(opts.arch, K, T, d,
                                       derive_seed(opts.seed, {stream::init, 11u + (unsigned)b}));
            br.opt_enc = std::make_unique<nn::SgdMomentum<float>>(
                static_cast<float>(opts.mae.lr), static_cast<float>(opts.mae.sgd_momentum));
            br.opt_dec = std::make_unique<nn::SgdMomentum<float>>(
                static_cast<float>(opts.mae.lr), static_cast<float>(opts.mae.sgd_momentum));
            br.buf_q.resize(view_len);
            br.buf_k.resize(view_len);
            br.target.resize(view_len);
            br.dzq.resize(d);
            br.stats.track_align = is_arc;
        } else {
            auto& br = moco[b];
            br.enabled = true;
            br.enc = nn::build_encoder(opts.arch, K, T, d, enc_seed);
            br.key = br.enc.clone();
            Rng qrng = derive_rng(opts.seed, {stream::queue, (unsigned)b});
            br.queue = std::make_unique<FeatureQueue<float>>(d, opts.moco.queue_size, qrng);
            br.opt = std::make_unique<nn::SgdMomentum<float>>(
                static_cast<float>(opts.moco.lr), static_cast<float>(opts.moco.sgd_momentum));
            br.buf_q.resize(view_len);
            br.buf_k.resize(view_len);
            br.stats.track_align = true;
        }
    }

    const float moco_temp = static_cast<float>(opts.moco.temperature);
    const float mae_alpha = is_arc ? static_cast<float>(opts.mae.alpha) : 0.0f;
    std::vector<float> zero_feature(d, 0.0f);

    PretrainResult result;
    result.has_amp = has_amp;
    result.has_phase = has_phase;
    result.stats_amp = has_amp ? bank.amp_stats() : prep::ViewStats{};
    result.stats_phase = has_phase ? bank.phase_stats() : prep::ViewStats{};

    for (std::uint32_t epoch = 0; epoch < epochs; ++epoch) {
        const auto order = epoch_order(n, opts.seed, epoch);
        for (int b = 0; b < 2; ++b) {
            moco[b].stats = EpochStats{0.0, 0.0, 0, moco[b].stats.track_align};
            mae[b].stats = EpochStats{0.0, 0.0, 0, mae[b].stats.track_align};
        }

        const std::size_t batches = n / B; // partial trailing batch is dropped
        for (std::size_t batch = 0; batch < batches; ++batch) {
            prep::AntennaTriple batch_triple;
            const bool per_batch = is_mae ? opts.mae.triple_per_batch : opts.moco.triple_per_batch;
            if (per_batch) {
                Rng trng = derive_rng(
                    opts.seed, {stream::sample_draw, epoch, pool[order[batch * B]], 1});
                batch_triple = prep::select_antennas(bank.antennas(), trng);
            }

            for (std::size_t p = 0; p < B; ++p) {
                const std::size_t i = static_cast<std::size_t>(pool[order[batch * B + p]]);
                prep::AntennaTriple triple = batch_triple;
                if (!per_batch) {
                    Rng trng = derive_rng(opts.seed, {stream::sample_draw, epoch, i, 1});
                    triple = prep::select_antennas(bank.antennas(), trng);
                }

                if (is_mae) {
                    Rng mask_rng = derive_rng(opts.seed, {stream::sample_draw, epoch, i, 2});
                    const PatchMask mask = random_mask(K, T, opts.mae, mask_rng);
                    const PatchMask mask_k =
                        opts.mae.shared_mask ? mask : random_mask(K, T, opts.mae, mask_rng);
                    for (int b = 0; b < 2; ++b) {
                        auto& br = mae[b];
                        if (!br.enabled)
                            continue;
                        const auto& stats = b == 0 ? bank.amp_stats() : bank.phase_stats();
                        const prep::ViewTensor& vq = b == 0
                                                         ? bank.amp_view(i, triple.q)
                                                         : bank.phase_view(i, triple.q, triple.ref);
                        prep::normalize_into(vq, stats, br.target.data());
                        std::copy(br.target.begin(), br.target.end(), br.buf_q.begin());
                        apply_mask(mask, br.buf_q.data());
                        const auto& zq = br.enc.forward(br.buf_q.data(), br.tape_q);

                        const std::vector<float>* zk = &zero_feature;
                        if (is_arc) {
                            const prep::ViewTensor& vk =
                                b == 0 ? bank.amp_view(i, triple.k)
                                       : bank.phase_view(i, triple.k, triple.ref);
                            prep::normalize_into(vk, stats, br.buf_k.data());
                            apply_mask(mask_k, br.buf_k.data());
                            zk = &br.enc.forward(br.buf_k.data(), br.tape_k);
                        }
                        const auto& recon = br.dec.forward(zq.data(), br.tape_dec);

                        std::vector<float> target_for_loss;
                        const std::vector<float>* tgt = &br.target;
                        if (opts.mae.masked_mse_only) {
                            // score only reconstructed (masked) positions
                            // unmasked positions copy the reconstruction and contribute 0
                            target_for_loss = br.target;
                            for (std::uint32_t gi = 0; gi < mask.grid_k; ++gi)
                                for (std::uint32_t gj = 0; gj < mask.grid_t; ++gj) {
                                    if (mask.masked[gi * mask.grid_t + gj])
                                        continue;
                                    for (std::uint32_t r = 0; r < mask.patch_k; ++r) {
                                        const std::size_t off =
                                            static_cast<std::size_t>(gi * mask.patch_k + r) * T +
                                            static_cast<std::size_t>(gj) * mask.patch_t;
                                        for (std::uint32_t cidx = 0; cidx < mask.patch_t; ++cidx)
                                            target_for_loss[off + cidx] = recon[off + cidx];
                                    }
                                }
                            tgt = &target_for_loss;
                        }

                        auto res = mae_arc_loss<float>(recon, *tgt, zq,
                                                       is_arc ? *zk : zq, mae_alpha, true);
                        check_finite_loss(res.total, to_string(opts.algo), epoch, i);

                        const auto& dz_dec = br.dec.backward(br.tape_dec, res.d_recon.data());
                        std::copy(dz_dec.begin(), dz_dec.end(), br.dzq.begin());
                        if (is_arc && mae_alpha != 0.0f)
                            kernels::axpy(1.0f, res.d_zq.data(), br.dzq.data(), d);
                        br.enc.backward(br.tape_q, br.dzq.data());
                        if (is_arc && mae_alpha != 0.0f)
                            br.enc.backward(br.tape_k, res.d_zk.data());

                        br.stats.loss += res.total;
                        if (br.stats.track_align)
                            br.stats.align += res.arc_cosine;
                        br.stats.count += 1;
                    }
                } else {
                    for (int b = 0; b < 2; ++b) {
                        auto& br = moco[b];
                        if (!br.enabled)
                            continue;
                        const auto& stats = b == 0 ? bank.amp_stats() : bank.phase_stats();
                        if (is_arc) {
                            const prep::ViewTensor& vq =
                                b == 0 ? bank.amp_view(i, triple.q)
                                       : bank.phase_view(i, triple.q, triple.ref);
                            const prep::ViewTensor& vk =
                                b == 0 ? bank.amp_view(i, triple.k)
                                       : bank.phase_view(i, triple.k, triple.ref);
                            prep::normalize_into(vq, stats, br.buf_q.data());
                            prep::normalize_into(vk, stats, br.buf_k.data());
                        } else {
                            // baseline: two augmentations of one antenna's view
                            Rng aug_rng = derive_rng(opts.seed,
                                                     {stream::sample_draw, epoch, i, 3u + (unsigned)b});
                            const prep::ViewTensor& base =
                                b == 0 ? bank.amp_view(i, triple.q)
                                       : bank.phase_view(i, triple.q, triple.ref);
                            prep::ViewTensor base_norm = base;
                            prep::normalize_into(base, stats, base_norm.values.data());
                            const prep::ViewTensor v1 =
                                augment_pipeline(base_norm, aug_rng, opts.moco.augment);
                            const prep::ViewTensor v2 =
                                augment_pipeline(base_norm, aug_rng, opts.moco.augment);
                            std::copy(v1.values.begin(), v1.values.end(), br.buf_q.begin());
                            std::copy(v2.values.begin(), v2.values.end(), br.buf_k.begin());
                        }
                        const auto& zq = br.enc.forward(br.buf_q.data(), br.tape_q);
                        const auto& zk = br.key.forward(br.buf_k.data(), br.tape_key);
                        auto res = info_nce<float>(zq, zk, *br.queue, moco_temp, true);
                        check_finite_loss(res.loss, to_string(opts.algo), epoch, i);
                        br.enc.backward(br.tape_q, res.dloss_du_q.data());
                        br.batch_keys.push_back(zk);
                        br.stats.loss += res.loss;
                        br.stats.align += res.positive_sim;
                        br.stats.count += 1;
                    }
                }
            }

            // batch end: average gradients, step, update key encoders, enqueue keys
            const float inv_b = 1.0f / static_cast<float>(B);
            for (int b = 0; b < 2; ++b) {
                if (is_mae && mae[b].enabled) {
                    auto& br = mae[b];
                    scale_inplace(br.enc.grads(), inv_b);
                    scale_inplace(br.dec.grads(), inv_b);
                    br.opt_enc->step(br.enc.params(), br.enc.grads());
                    br.opt_dec->step(br.dec.params(), br.dec.grads());
                    br.enc.zero_grads();
                    br.dec.zero_grads();
                } else if (!is_mae && moco[b].enabled) {
                    auto& br = moco[b];
                    scale_inplace(br.enc.grads(), inv_b);
                    br.opt->step(br.enc.params(), br.enc.grads());
                    br.enc.zero_grads();
                    momentum_update(br.key, br.enc, static_cast<float>(opts.moco.key_momentum));
                    for (const auto& key : br.batch_keys)
                        br.queue->push(key.data());
                    br.batch_keys.clear();
                }
            }
        }

        TrainLogRow row;
        row.epoch = epoch;
        auto fill = [](const EpochStats& st, double& loss, double& align) {
            if (st.count == 0) {
                loss = kNan;
                align = kNan;
                return;
            }
            loss = st.loss / static_cast<double>(st.count);
            align = st.track_align ? st.align / static_cast<double>(st.count) : kNan;
        };
        if (is_mae) {
            fill(mae[0].stats, row.loss_amp, row.align_amp);
            fill(mae[1].stats, row.loss_phase, row.align_phase);
        } else {
            fill(moco[0].stats, row.loss_amp, row.align_amp);
            fill(moco[1].stats, row.loss_phase, row.align_phase);
        }
        result.log.push_back(row);
    }

    if (has_amp) {
        result.enc_amp = is_mae ? std::move(mae[0].enc) : std::move(moco[0].enc);
        if (is_mae)
            result.dec_amp = std::move(mae[0].dec);
        else
            result.key_amp = std::move(moco[0].key);
    }
    if (has_phase) {
        result.enc_phase = is_mae ? std::move(mae[1].enc) : std::move(moco[1].enc);
        if (is_mae)
            result.dec_phase = std::move(mae[1].dec);
        else
            result.key_phase = std::move(moco[1].key);
    }
    return result;
}

PretrainResult pretrain_moco_arc(const ViewBank& bank,
                                 const std::vector<std::uint64_t>& train_indices, FeatureMode mode,
                                 const MocoConfig& cfg, std::uint64_t seed, const std::string& arch,
                                 std::uint32_t feature_dim) {
    PretrainOptions o;
    o.algo = Algo::moco_arc;
    o.mode = mode;
    o.moco = cfg;
    o.seed = seed;
    o.arch = arch;
    o.feature_dim = feature_dim;
    return pretrain(bank, train_indices, o);
}

PretrainResult pretrain_mae_arc(const ViewBank& bank,
                                const std::vector<std::uint64_t>& train_indices, FeatureMode mode,
                                const MaeConfig& cfg, std::uint64_t seed, const std::string& arch,
                                std::uint32_t feature_dim) {
    PretrainOptions o;
    o.algo = Algo::mae_arc;
    o.mode = mode;
    o.mae = cfg;
    o.seed = seed;
    o.arch = arch;
    o.feature_dim = feature_dim;
    return pretrain(bank, train_indices, o);
}

PretrainResult pretrain_baseline(const ViewBank& bank,
                                 const std::vector<std::uint64_t>& train_indices, Algo algo,
                                 FeatureMode mode, const MocoConfig& moco, const MaeConfig& mae,
                                 std::uint64_t seed, const std::string& arch,
                                 std::uint32_t feature_dim) {
    if (algo_is_arc(algo))
        throw ConfigError("pretrain_baseline expects a baseline algorithm (moco or mae)");
    PretrainOptions o;
    o.algo = algo;
    o.mode = mode;
    o.moco = moco;
    o.mae = mae;
    o.seed = seed;
    o.arch = arch;
    o.feature_dim = feature_dim;
    return pretrain(bank, train_indices, o);
}

} // namespace arcssl::ssl
