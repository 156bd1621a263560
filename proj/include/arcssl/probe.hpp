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

#include "arcssl/nn.hpp"
#include "arcssl/preprocess.hpp"
#include "arcssl/viewbank.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace arcssl::probe {

/**
 * Frozen-encoder evaluation: extract per-sample features, fit a single-layer
 * or two-layer perceptron probe on the training split, report accuracy and
 * macro-F1 on the test split. Encoders are const throughout.
 */

/// Frozen encoders plus the view statistics recorded at pretraining time.
struct EncoderBundle {
    prep::FeatureMode mode = prep::FeatureMode::amp_conj_angle;
    bool has_amp = false, has_phase = false;
    nn::Network<float> enc_amp, enc_phase;
    prep::ViewStats stats_amp, stats_phase;

    std::uint32_t feature_dim() const {
        std::uint32_t d = 0;
        if (has_amp)
            d += static_cast<std::uint32_t>(enc_amp.output_dim());
        if (has_phase)
            d += static_cast<std::uint32_t>(enc_phase.output_dim());
        return d;
    }
};

struct FeatureMatrix {
    std::size_t count = 0;
    std::size_t dim = 0;
    std::vector<float> values; // row-major, one row per sample
    std::vector<std::uint32_t> labels;
    std::uint32_t class_count = 0;

    const float* row(std::size_t i) const { return values.data() + i * dim; }
};

/**
 * Evaluation antenna policy: features are averaged over all antenna views of
 * a sample (conjugate views pair antenna a with reference (a+1) mod A); the
 * amplitude and phase branch features are concatenated in combined mode.
 * Deterministic; the seed parameter is reserved for stochastic policies.
 */
FeatureMatrix extract_features(const EncoderBundle& bundle, const ssl::ViewBank& bank,
                               std::uint64_t seed = 0);

/// Restriction to a subset of sample indices (train/test splits).
FeatureMatrix extract_features(const EncoderBundle& bundle, const ssl::ViewBank& bank,
                               const std::vector<std::uint64_t>& indices, std::uint64_t seed = 0);

/// Trace of the feature covariance matrix (collapse diagnostics).
double feature_covariance_trace(const FeatureMatrix& f);

struct ProbeFitConfig {
    std::uint32_t epochs = 300;
    double lr = 0.1;
    double sgd_momentum = 0.9;
};

struct ProbeState {
    std::string kind; // "linear" | "mlp2"
    nn::Network<float> net;
    // per-dimension standardization fitted on the training features
    std::vector<float> shift, scale;
};

/// Softmax cross-entropy minimized with momentum SGD; deterministic in seed.
ProbeState fit_probe(const FeatureMatrix& train, const std::string& kind, std::uint64_t seed,
                     const ProbeFitConfig& cfg = {});

std::vector<std::uint32_t> predict(const ProbeState& probe, const FeatureMatrix& features);

struct Metrics {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::uint32_t class_count = 0;
    std::vector<std::uint64_t> confusion; // row = truth, col = prediction
};

Metrics evaluate(const ProbeState& probe, const FeatureMatrix& features);

/// Metrics from precomputed predictions (oracle-friendly entry point).
Metrics evaluate_predictions(const std::vector<std::uint32_t>& predictions,
                             const std::vector<std::uint32_t>& labels, std::uint32_t class_count);

/// One result record; rows of results.csv and the JSON-lines log.
struct RunReport {
    std::string algo;
    std::string feature_mode;
    std::string probe;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double seconds = 0.0;
};

} // namespace arcssl::probe
