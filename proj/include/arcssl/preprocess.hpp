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
#include "arcssl/rng.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace arcssl::prep {

/**
 * Feature chain turning complex CSI into the real-valued views encoders see:
 * per-antenna amplitude, conjugate-multiplied phase (device offset cancelled),
 * raw phase (offset-sensitive, kept for the ablation), time downsampling,
 * random antenna triples, conventional augmentations for non-ARC baselines,
 * and global standardization.
 */

enum class ViewKind { amplitude, conj_angle, raw_angle };

const char* to_string(ViewKind k);

/// Feature-mode names shared by CLI flags and report columns:
/// "amp", "conj-angle", "raw-angle", "amp+conj-angle".
enum class FeatureMode { amp, conj_angle, raw_angle, amp_conj_angle };

const char* to_string(FeatureMode m);
FeatureMode feature_mode_from_string(const std::string& s);
bool mode_has_amp(FeatureMode m);
bool mode_has_phase(FeatureMode m);
/// Phase view kind used by a mode (conj_angle unless the raw-angle ablation).
ViewKind mode_phase_kind(FeatureMode m);

/// One antenna's real-valued (K x T) view, t fastest-varying.
struct ViewTensor {
    std::uint32_t subcarriers = 0;
    std::uint32_t packets = 0;
    ViewKind kind = ViewKind::amplitude;
    std::vector<float> values;

    std::size_t size() const { return values.size(); }
    float at(std::uint32_t k, std::uint32_t t) const {
        return values[static_cast<std::size_t>(k) * packets + t];
    }
};

/// Complex (K x T) matrix, e.g. a conjugate-multiplication product.
struct ComplexMatrix {
    std::uint32_t subcarriers = 0;
    std::uint32_t packets = 0;
    std::vector<std::complex<float>> values;

    const float* iq() const { return reinterpret_cast<const float*>(values.data()); }
};

/// Query, key and reference antenna indices; pairwise distinct.
struct AntennaTriple {
    std::uint32_t q = 0, k = 1, ref = 2;
    void validate(std::uint32_t antennas) const; // throws DataError
};

/// Elementwise modulus of one antenna slice.
ViewTensor amplitude(const csi::CsiTensor& h, std::uint32_t a);

/// (H_q * conj(H_ref), H_k * conj(H_ref)), elementwise over (k, t).
std::pair<ComplexMatrix, ComplexMatrix> conjugate_multiply(const csi::CsiTensor& h,
                                                           const AntennaTriple& triple);

/// Single conjugate product H_a * conj(H_ref); a != ref required.
ComplexMatrix conjugate_product(const csi::CsiTensor& h, std::uint32_t a, std::uint32_t ref);

/// Principal argument per entry, in (-pi, pi]; angle(0) := 0.
ViewTensor phase_angle(const ComplexMatrix& c, ViewKind kind = ViewKind::conj_angle);

/// Raw per-antenna phase (no conjugate multiplication); offset-sensitive.
ViewTensor raw_angle(const csi::CsiTensor& h, std::uint32_t a);

/// Scalar angle map used everywhere: atan2 with angle(0,0) = 0 and -pi -> pi.
double principal_angle(double re, double im);

/// Uniform index selection t_i = floor(i*T/T_target).
csi::CsiTensor downsample_time(const csi::CsiTensor& h, std::uint32_t t_target);

/// Uniformly random pairwise-distinct (q, k, ref). Requires A >= 3.
AntennaTriple select_antennas(std::uint32_t antennas, Rng& rng);

enum class AugmentPolicy { jitter, scale, time_mask };

AugmentPolicy augment_policy_from_string(const std::string& s);

/// Shape-preserving stochastic transforms for non-ARC baselines.
///  jitter:    additive Gaussian noise, sigma = strength
///  scale:     global factor uniform in [1 - strength, 1 + strength]
///  time_mask: zeroes a contiguous window of round(strength * T) packets
ViewTensor augment_baseline(const ViewTensor& x, Rng& rng, AugmentPolicy policy, double strength);

/// Global per-kind standardization statistics (training split only).
struct ViewStats {
    double mean = 0.0;
    double stddev = 1.0;
    bool degenerate = false; // zero variance: normalization leaves scale alone
};

class StatsAccumulator {
public:
    void add(const ViewTensor& v);
    ViewStats finalize() const; // warns (stderr) and flags degenerate on zero variance

private:
    double sum_ = 0.0, sumsq_ = 0.0;
    std::size_t count_ = 0;
};

/// (x - mean) / stddev; degenerate stats subtract the mean only.
ViewTensor normalize(const ViewTensor& x, const ViewStats& stats);

/// Hot-path variant writing into a caller buffer of x.size() floats.
void normalize_into(const ViewTensor& x, const ViewStats& stats, float* out);

} // namespace arcssl::prep
