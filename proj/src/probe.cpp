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

#include "arcssl/probe.hpp"

#include "arcssl/errors.hpp"
#include "arcssl/nn_io.hpp"

#include <cmath>
#include <numeric>

namespace arcssl::probe {

using prep::FeatureMode;

namespace {

void extract_one(const EncoderBundle& bundle, const ssl::ViewBank& bank, std::size_t sample,
                 nn::Tape<float>& tape_amp, nn::Tape<float>& tape_phase,
                 std::vector<float>& buf, float* out) {
    const std::uint32_t a_count = bank.antennas();
    const float inv_a = 1.0f / static_cast<float>(a_count);
    std::size_t off = 0;
    if (bundle.has_amp) {
        const std::size_t d = bundle.enc_amp.output_dim();
        std::fill(out, out + d, 0.0f);
        for (std::uint32_t a = 0; a < a_count; ++a) {
            prep::normalize_into(bank.amp_view(sample, a), bundle.stats_amp, buf.data());
            const auto& z = bundle.enc_amp.forward(buf.data(), tape_amp);
            kernels::axpy(inv_a, z.data(), out, d);
        }
        off = d;
    }
    if (bundle.has_phase) {
        const std::size_t d = bundle.enc_phase.output_dim();
        std::fill(out + off, out + off + d, 0.0f);
        for (std::uint32_t a = 0; a < a_count; ++a) {
            const std::uint32_t ref = (a + 1) % a_count;
            prep::normalize_into(bank.phase_view(sample, a, ref), bundle.stats_phase, buf.data());
            const auto& z = bundle.enc_phase.forward(buf.data(), tape_phase);
            kernels::axpy(inv_a, z.data(), out + off, d);
        }
    }
}

} // namespace

FeatureMatrix extract_features(const EncoderBundle& bundle, const ssl::ViewBank& bank,
                               const std::vector<std::uint64_t>& indices, std::uint64_t /*seed*/) {
    if (bundle.has_amp != prep::mode_has_amp(bundle.mode) ||
        bundle.has_phase != prep::mode_has_phase(bundle.mode))
        throw ConfigError("encoder bundle does not match its feature mode");
    if (bundle.has_amp != bank.has_amp() || bundle.has_phase != bank.has_phase())
        throw ConfigError("view bank does not provide the views this bundle needs");
    if (bundle.has_phase && bank.phase_kind() != prep::mode_phase_kind(bundle.mode))
        throw ConfigError("view bank phase kind does not match the bundle mode");

    FeatureMatrix f;
    f.count = indices.size();
    f.dim = bundle.feature_dim();
    f.class_count = bank.class_count();
    f.values.resize(f.count * f.dim);
    f.labels.resize(f.count);

    nn::Tape<float> tape_amp, tape_phase;
    std::vector<float> buf(static_cast<std::size_t>(bank.subcarriers()) * bank.packets());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const std::size_t i = static_cast<std::size_t>(indices[r]);
        if (i >= bank.sample_count())
            throw DataError("feature extraction index out of range");
        extract_one(bundle, bank, i, tape_amp, tape_phase, buf, f.values.data() + r * f.dim);
        f.labels[r] = bank.label(i);
    }
    return f;
}

FeatureMatrix extract_features(const EncoderBundle& bundle, const ssl::ViewBank& bank,
                               std::uint64_t seed) {
    std::vector<std::uint64_t> all(bank.sample_count());
    std::iota(all.begin(), all.end(), 0);
    return extract_features(bundle, bank, all, seed);
}

double feature_covariance_trace(const FeatureMatrix& f) {
    if (f.count == 0)
        throw DataError("covariance trace of an empty feature matrix");
    double trace = 0.0;
    for (std::size_t j = 0; j < f.dim; ++j) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < f.count; ++i) {
            const double v = f.values[i * f.dim + j];
            s += v;
            s2 += v * v;
        }
        const double mean = s / static_cast<double>(f.count);
        trace += s2 / static_cast<double>(f.count) - mean * mean;
    }
    return trace;
}

ProbeState fit_probe(const FeatureMatrix& train, const std::string& kind, std::uint64_t seed,
                     const ProbeFitConfig& cfg) {
    if (train.count == 0)
        throw DataError("cannot fit a probe on an empty feature matrix");
    std::vector<bool> present(train.class_count, false);
    for (auto l : train.labels)
        present[l] = true;
    if (std::count(present.begin(), present.end(), true) < 2)
        throw DataError("probe fitting requires at least 2 classes present");

    ProbeState p;
    p.kind = kind;
    p.net = nn::build_probe_net(kind, static_cast<std::uint32_t>(train.dim), train.class_count,
                                derive_seed(seed, {stream::probe}));

    // per-dimension standardization on the training features
    p.shift.resize(train.dim);
    p.scale.resize(train.dim);
    for (std::size_t j = 0; j < train.dim; ++j) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < train.count; ++i) {
            const double v = train.values[i * train.dim + j];
            s += v;
            s2 += v * v;
        }
        const double mean = s / static_cast<double>(train.count);
        const double var = s2 / static_cast<double>(train.count) - mean * mean;
        p.shift[j] = static_cast<float>(mean);
        p.scale[j] = var > 1e-12 ? static_cast<float>(1.0 / std::sqrt(var)) : 1.0f;
    }

    std::vector<float> x(train.dim);
    std::vector<float> dlogits(train.class_count);
    nn::Tape<float> tape;
    nn::SgdMomentum<float> opt(static_cast<float>(cfg.lr), static_cast<float>(cfg.sgd_momentum));

    // full-batch gradient descent: small feature matrices, deterministic order
    for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        p.net.zero_grads();
        double loss_acc = 0.0;
        for (std::size_t i = 0; i < train.count; ++i) {
            const float* row = train.row(i);
            for (std::size_t j = 0; j < train.dim; ++j)
                x[j] = (row[j] - p.shift[j]) * p.scale[j];
            const auto& logits = p.net.forward(x.data(), tape);
            const float loss = nn::softmax_cross_entropy(logits.data(), logits.size(),
                                                         train.labels[i], dlogits.data());
            loss_acc += loss;
            p.net.backward(tape, dlogits.data());
        }
        if (!std::isfinite(loss_acc))
            throw TrainingError("probe training diverged (non-finite loss)");
        kernels::scale_add(1.0f / static_cast<float>(train.count), p.net.grads().data(), 0.0f,
                           p.net.grads().data(), p.net.grads().size());
        opt.step(p.net.params(), p.net.grads());
    }
    return p;
}

std::vector<std::uint32_t> predict(const ProbeState& probe, const FeatureMatrix& features) {
    if (features.dim != probe.shift.size())
        throw DataError("probe/feature dimension mismatch");
    std::vector<std::uint32_t> out(features.count);
    std::vector<float> x(features.dim);
    nn::Tape<float> tape;
    for (std::size_t i = 0; i < features.count; ++i) {
        const float* row = features.row(i);
        for (std::size_t j = 0; j < features.dim; ++j)
            x[j] = (row[j] - probe.shift[j]) * probe.scale[j];
        const auto& logits = probe.net.forward(x.data(), tape);
        out[i] = static_cast<std::uint32_t>(
            std::max_element(logits.begin(), logits.end()) - logits.begin());
    }
    return out;
}

Metrics evaluate_predictions(const std::vector<std::uint32_t>& predictions,
                             const std::vector<std::uint32_t>& labels,
                             std::uint32_t class_count) {
    if (predictions.size() != labels.size() || predictions.empty())
        throw DataError("evaluate: prediction/label size mismatch or empty input");
    Metrics m;
    m.class_count = class_count;
    m.confusion.assign(static_cast<std::size_t>(class_count) * class_count, 0);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i] >= class_count || labels[i] >= class_count)
            throw DataError("evaluate: class id out of range");
        m.confusion[static_cast<std::size_t>(labels[i]) * class_count + predictions[i]] += 1;
        if (predictions[i] == labels[i])
            ++correct;
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(predictions.size());

    // macro-F1: unweighted mean over all classes; a class absent from both
    // truth and prediction has 2TP + FP + FN = 0 and contributes F1 = 0
    double f1_sum = 0.0;
    for (std::uint32_t c = 0; c < class_count; ++c) {
        std::uint64_t tp = m.confusion[static_cast<std::size_t>(c) * class_count + c];
        std::uint64_t fp = 0, fn = 0;
        for (std::uint32_t o = 0; o < class_count; ++o) {
            if (o == c)
                continue;
            fp += m.confusion[static_cast<std::size_t>(o) * class_count + c];
            fn += m.confusion[static_cast<std::size_t>(c) * class_count + o];
        }
        const std::uint64_t denom = 2 * tp + fp + fn;
        f1_sum += denom == 0 ? 0.0 : (2.0 * static_cast<double>(tp)) / static_cast<double>(denom);
    }
    m.macro_f1 = f1_sum / static_cast<double>(class_count);
    return m;
}

Metrics evaluate(const ProbeState& probe, const FeatureMatrix& features) {
    return evaluate_predictions(predict(probe, features), features.labels, features.class_count);
}

} // namespace arcssl::probe
