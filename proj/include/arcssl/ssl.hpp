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

#include "arcssl/csi.hpp"
#include "arcssl/nn.hpp"
#include "arcssl/preprocess.hpp"
#include "arcssl/viewbank.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace arcssl::ssl {

/**
 * Self-supervised pretraining: momentum-contrast and masked-autoencoder
 * pipelines, each in an antenna-consistency variant (different antennas of
 * one capture serve as the positive views) and a conventional baseline
 * (augmented views of a single antenna / plain masked reconstruction).
 */

enum class Algo { moco, moco_arc, mae, mae_arc };

const char* to_string(Algo a);
Algo algo_from_string(const std::string& s);
bool algo_is_arc(Algo a);
bool algo_is_mae(Algo a);

struct AugmentSpec {
    double jitter_sigma = 0.1;
    double scale_range = 0.1;
    double time_mask_ratio = 0.1;
};

struct MocoConfig {
    double temperature = 0.07;
    std::uint32_t queue_size = 256;
    double key_momentum = 0.99; // EMA coefficient of the key encoder
    std::uint32_t batch_size = 32;
    std::uint32_t epochs = 15;
    double lr = 0.05;
    double sgd_momentum = 0.9;
    bool triple_per_batch = false; // default: fresh antenna triple per sample
    AugmentSpec augment;           // baseline views only

    void validate() const;
};

struct MaeConfig {
    double mask_ratio = 0.5;
    std::uint32_t patch_k = 6;
    std::uint32_t patch_t = 25;
    double alpha = 0.1; // weight of the antenna-consistency term
    std::uint32_t batch_size = 32;
    std::uint32_t epochs = 12;
    double lr = 0.08;
    double sgd_momentum = 0.9;
    bool triple_per_batch = false;
    bool masked_mse_only = false; // default: MSE over the full view
    // Independent masks for the q and k views keep the consistency term
    // informative; a shared mask would dominate both features and saturate
    // their cosine. The shared variant stays available for comparison.
    bool shared_mask = false;

    void validate(std::uint32_t subcarriers, std::uint32_t packets) const;
};

/**
 * FIFO ring of unit-norm key features serving as contrastive negatives.
 * Initialized with random unit vectors so the loss is defined from step one.
 */
template <class Real>
class FeatureQueue {
public:
    FeatureQueue(std::size_t dim, std::size_t capacity, Rng& rng) : dim_(dim), cap_(capacity) {
        if (capacity == 0)
            throw ConfigError("feature queue requires capacity >= 1");
        data_.resize(dim * capacity);
        for (std::size_t i = 0; i < capacity; ++i) {
            Real* e = data_.data() + i * dim;
            double norm2 = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                e[j] = static_cast<Real>(rng.normal());
                norm2 += static_cast<double>(e[j]) * static_cast<double>(e[j]);
            }
            const Real inv = static_cast<Real>(1.0 / std::sqrt(norm2));
            for (std::size_t j = 0; j < dim; ++j)
                e[j] *= inv;
        }
    }

    std::size_t dim() const { return dim_; }
    std::size_t capacity() const { return cap_; }
    const Real* entry(std::size_t i) const { return data_.data() + i * dim_; }

    /// Enqueues a copy of v normalized to unit length, evicting the oldest.
    void push(const Real* v) {
        Real* e = data_.data() + cursor_ * dim_;
        const Real n = std::sqrt(kernels::sumsq(v, dim_));
        if (n > Real(0)) {
            const Real inv = Real(1) / n;
            for (std::size_t j = 0; j < dim_; ++j)
                e[j] = v[j] * inv;
        } else {
            std::fill(e, e + dim_, Real(0));
            e[0] = Real(1); // keep the unit-norm invariant even for degenerate keys
        }
        cursor_ = (cursor_ + 1) % cap_;
    }

    /// Entries ordered oldest to newest (test hook for the FIFO discipline).
    std::vector<std::vector<Real>> snapshot_fifo() const {
        std::vector<std::vector<Real>> out;
        for (std::size_t i = 0; i < cap_; ++i) {
            const std::size_t idx = (cursor_ + i) % cap_;
            out.emplace_back(entry(idx), entry(idx) + dim_);
        }
        return out;
    }

private:
    std::size_t dim_, cap_, cursor_ = 0;
    std::vector<Real> data_;
};

// --- losses -----------------------------------------------------------------

template <class Real>
struct InfoNceResult {
    Real loss = Real(0);
    Real positive_sim = Real(0);    // z_q . z_k after normalization
    std::vector<Real> dloss_du_q;   // gradient wrt the raw (unnormalized) query
};

/**
 * InfoNCE over 1 positive and the queue negatives:
 *   loss = -log( exp(s+/tau) / (exp(s+/tau) + sum_i exp(s-_i/tau)) )
 * with s+ = z_q . z_k and s-_i = z_q . queue_i. Raw inputs are normalized to
 * unit length internally; the key side is treated as stop-gradient.
 */
template <class Real>
InfoNceResult<Real> info_nce(const std::vector<Real>& u_q, const std::vector<Real>& u_k,
                             const FeatureQueue<Real>& queue, Real temperature,
                             bool want_grad = false) {
    if (queue.capacity() == 0)
        throw ConfigError("info_nce requires a non-empty queue");
    if (!(temperature > Real(0)))
        throw ConfigError("info_nce requires temperature > 0");
    const std::size_t d = u_q.size();
    if (u_k.size() != d || queue.dim() != d)
        throw TrainingError("info_nce: feature dimension mismatch");

    std::vector<Real> zq(d), zk(d);
    const Real nq = std::sqrt(kernels::sumsq(u_q.data(), d));
    const Real nk = std::sqrt(kernels::sumsq(u_k.data(), d));
    for (std::size_t j = 0; j < d; ++j) {
        zq[j] = nq > Real(0) ? u_q[j] / nq : Real(0);
        zk[j] = nk > Real(0) ? u_k[j] / nk : Real(0);
    }

    const std::size_t m = queue.capacity() + 1;
    std::vector<Real> logits(m);
    logits[0] = kernels::dot(zq.data(), zk.data(), d) / temperature;
    for (std::size_t i = 0; i < queue.capacity(); ++i)
        logits[i + 1] = kernels::dot(zq.data(), queue.entry(i), d) / temperature;

    const Real maxv = *std::max_element(logits.begin(), logits.end());
    Real z = Real(0);
    for (Real l : logits)
        z += std::exp(l - maxv);
    const Real logz = std::log(z) + maxv;

    InfoNceResult<Real> out;
    out.loss = logz - logits[0];
    out.positive_sim = logits[0] * temperature;

    if (want_grad) {
        // dL/dzq = (sum_i p_i m_i - z_k) / tau, then through the normalization
        std::vector<Real> dzq(d, Real(0));
        const Real p0 = std::exp(logits[0] - logz);
        kernels::axpy((p0 - Real(1)) / temperature, zk.data(), dzq.data(), d);
        for (std::size_t i = 0; i < queue.capacity(); ++i) {
            const Real pi = std::exp(logits[i + 1] - logz);
            kernels::axpy(pi / temperature, queue.entry(i), dzq.data(), d);
        }
        out.dloss_du_q.assign(d, Real(0));
        if (nq > Real(0)) {
            const Real proj = kernels::dot(dzq.data(), zq.data(), d);
            for (std::size_t j = 0; j < d; ++j)
                out.dloss_du_q[j] = (dzq[j] - proj * zq[j]) / nq;
        }
    }
    return out;
}

void warn_zero_norm_cosine();

template <class Real>
struct CosineResult {
    Real value = Real(0);
    std::vector<Real> d_u, d_v;
};

/// Cosine similarity with gradients wrt both raw inputs; cos of a zero-norm
/// vector is defined as 0 (gradient 0) and a warning is emitted once.
template <class Real>
CosineResult<Real> cosine_similarity(const std::vector<Real>& u, const std::vector<Real>& v,
                                     bool want_grad = false) {
    const std::size_t d = u.size();
    if (v.size() != d)
        throw TrainingError("cosine_similarity: dimension mismatch");
    CosineResult<Real> out;
    const Real nu = std::sqrt(kernels::sumsq(u.data(), d));
    const Real nv = std::sqrt(kernels::sumsq(v.data(), d));
    if (want_grad) {
        out.d_u.assign(d, Real(0));
        out.d_v.assign(d, Real(0));
    }
    if (nu == Real(0) || nv == Real(0)) {
        warn_zero_norm_cosine();
        return out;
    }
    const Real ip = kernels::dot(u.data(), v.data(), d);
    out.value = ip / (nu * nv);
    if (want_grad) {
        // d cos / du = v/(|u||v|) - cos * u/|u|^2
        for (std::size_t j = 0; j < d; ++j) {
            out.d_u[j] = v[j] / (nu * nv) - out.value * u[j] / (nu * nu);
            out.d_v[j] = u[j] / (nu * nv) - out.value * v[j] / (nv * nv);
        }
    }
    return out;
}

template <class Real>
struct MaeArcLossResult {
    Real total = Real(0);
    Real mse = Real(0);
    Real arc_cosine = Real(0);    // cos(z_q, z_k)
    std::vector<Real> d_recon;    // dL/d(recon)
    std::vector<Real> d_zq, d_zk; // dL/d(features), alpha-scaled
};

/**
 * Composite reconstruction + antenna-consistency loss:
 *   loss = MSE(recon, target) + alpha * (1 - cos(z_q, z_k))
 * Minimizing the second term maximizes the feature similarity of the two
 * antenna views. With alpha = 0 the consistency term contributes neither loss
 * nor gradient (bit-exact reduction to the plain masked autoencoder).
 */
template <class Real>
MaeArcLossResult<Real> mae_arc_loss(const std::vector<Real>& recon, const std::vector<Real>& target,
                                    const std::vector<Real>& z_q, const std::vector<Real>& z_k,
                                    Real alpha, bool want_grad = false) {
    if (recon.size() != target.size())
        throw TrainingError("mae_arc_loss: reconstruction/target shape mismatch");
    if (z_q.size() != z_k.size())
        throw TrainingError("mae_arc_loss: feature dimension mismatch");
    MaeArcLossResult<Real> out;
    const std::size_t n = recon.size();
    const Real inv_n = Real(1) / static_cast<Real>(n);
    Real acc = Real(0);
    if (want_grad)
        out.d_recon.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Real diff = recon[i] - target[i];
        acc += diff * diff;
        if (want_grad)
            out.d_recon[i] = Real(2) * diff * inv_n;
    }
    out.mse = acc * inv_n;
    out.total = out.mse;
    if (alpha != Real(0)) {
        const auto cos = cosine_similarity(z_q, z_k, want_grad);
        out.arc_cosine = cos.value;
        out.total += alpha * (Real(1) - cos.value);
        if (want_grad) {
            out.d_zq.assign(z_q.size(), Real(0));
            out.d_zk.assign(z_k.size(), Real(0));
            kernels::axpy(-alpha, cos.d_u.data(), out.d_zq.data(), z_q.size());
            kernels::axpy(-alpha, cos.d_v.data(), out.d_zk.data(), z_k.size());
        }
    } else {
        out.arc_cosine = cosine_similarity(z_q, z_k, false).value;
    }
    return out;
}

// --- masking ---------------------------------------------------------------

struct PatchMask {
    std::uint32_t grid_k = 0, grid_t = 0;   // patch grid dimensions
    std::uint32_t patch_k = 0, patch_t = 0; // patch size in view entries
    std::vector<std::uint8_t> masked;       // grid_k * grid_t flags
    std::size_t masked_count = 0;
};

/// Draws exactly round(ratio * num_patches) masked patches, uniformly.
PatchMask random_mask(std::uint32_t subcarriers, std::uint32_t packets, const MaeConfig& cfg,
                      Rng& rng);

/// Zeroes the masked patches of a (K x T) view in place.
void apply_mask(const PatchMask& mask, float* view);

/// Convenience variant matching the (masked view, mask) operation shape.
std::pair<prep::ViewTensor, PatchMask> random_mask_view(const prep::ViewTensor& x,
                                                        const MaeConfig& cfg, Rng& rng);

// --- momentum encoder -------------------------------------------------------

/// theta_k <- m * theta_k + (1 - m) * theta_q, elementwise over parameters.
void momentum_update(nn::Network<float>& key_encoder, const nn::Network<float>& query_encoder,
                     float m);

// --- pretraining ------------------------------------------------------------

struct TrainLogRow {
    std::uint32_t epoch = 0;
    double loss_amp = 0.0, loss_phase = 0.0;
    double align_amp = 0.0, align_phase = 0.0; // mean cos of paired features
};

struct PretrainOptions {
    Algo algo = Algo::mae_arc;
    prep::FeatureMode mode = prep::FeatureMode::amp_conj_angle;
    std::string arch = "conv-small";
    std::uint32_t feature_dim = 64;
    MocoConfig moco;
    MaeConfig mae;
    std::uint64_t seed = 1;
};

struct PretrainResult {
    bool has_amp = false, has_phase = false;
    nn::Network<float> enc_amp, enc_phase;
    // momentum (key) encoders for contrastive algorithms
    nn::Network<float> key_amp, key_phase;
    // decoders for masked-autoencoder algorithms
    nn::Network<float> dec_amp, dec_phase;
    prep::ViewStats stats_amp, stats_phase;
    std::vector<TrainLogRow> log;
};

/// Shared engine; trains on the given sample indices of the bank (the
/// training split). The spec-shaped wrappers below forward to it.
PretrainResult pretrain(const ViewBank& bank, const std::vector<std::uint64_t>& train_indices,
                        const PretrainOptions& opts);

PretrainResult pretrain_moco_arc(const ViewBank& bank,
                                 const std::vector<std::uint64_t>& train_indices,
                                 prep::FeatureMode mode, const MocoConfig& cfg, std::uint64_t seed,
                                 const std::string& arch = "conv-small",
                                 std::uint32_t feature_dim = 64);
PretrainResult pretrain_mae_arc(const ViewBank& bank,
                                const std::vector<std::uint64_t>& train_indices,
                                prep::FeatureMode mode, const MaeConfig& cfg, std::uint64_t seed,
                                const std::string& arch = "conv-small",
                                std::uint32_t feature_dim = 64);
/// algo must be a baseline (moco or mae).
PretrainResult pretrain_baseline(const ViewBank& bank,
                                 const std::vector<std::uint64_t>& train_indices, Algo algo,
                                 prep::FeatureMode mode, const MocoConfig& moco,
                                 const MaeConfig& mae, std::uint64_t seed,
                                 const std::string& arch = "conv-small",
                                 std::uint32_t feature_dim = 64);

} // namespace arcssl::ssl
