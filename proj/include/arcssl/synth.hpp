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

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace arcssl::synth {

/**
 * Multipath channel generator.
 *
 * Each sample is H(a,k,t) = (Hs(a,k) + sum_l alpha_l(a) e^{-j 2 pi tau_l(k,t)})
 * e^{-j 2 pi eps(k,t)} + noise, where
 *   - Hs is a per-sample random static component (per antenna and subcarrier),
 *   - alpha_l(a) is a per-sample, per-antenna path attenuation, constant in time,
 *   - tau_l(k,t) = (tau0_l + rate_l * d_c(t)) * f_k is the path delay driven by a
 *     class-specific smooth template d_c(t) (sinusoid plus linear drift), scaled
 *     by a normalized subcarrier factor f_k,
 *   - eps(k,t) is a phase offset shared by all antennas of the device,
 *   - noise is circularly-symmetric complex Gaussian at a configured SNR.
 *
 * Generation is a pure function of (scene, class, sample index): every sample
 * owns derived RNG substreams, so datasets replay bit-identically and samples
 * could be produced in any order (output ordering is always by class, then
 * sample index).
 */

enum class PhaseOffsetMode { none, constant, per_packet_random };

const char* to_string(PhaseOffsetMode m);
PhaseOffsetMode phase_offset_mode_from_string(const std::string& s);

/// Per-class delay trajectory template: d(t) = amp*sin(2pi(freq*t/T + phase)) + drift*t/T.
struct ClassTemplate {
    double freq = 1.0;  // cycles per capture window
    double amp = 0.3;   // delay excursion in carrier cycles
    double drift = 0.0; // linear delay drift over the window
};

struct StaticSpec {
    double magnitude_max = 0.6; // |Hs| drawn uniform in [0, magnitude_max)
};

struct DynamicSpec {
    std::uint32_t path_count = 2;
    double attenuation_min = 0.5; // alpha range, within (0, 1]
    double attenuation_max = 1.0;
    double subcarrier_spread = 0.3; // f_k = 1 + spread*(k - (K-1)/2)/K
    std::vector<ClassTemplate> classes; // resolved to size C
};

struct SceneConfig {
    std::uint32_t antennas = 3;
    std::uint32_t subcarriers = 30;
    std::uint32_t packets_raw = 1000;
    std::uint32_t class_count = 6;
    std::uint32_t samples_per_class = 100;
    std::uint64_t seed = 1;
    std::optional<double> noise_snr_db = 20.0; // nullopt disables noise
    PhaseOffsetMode phase_offset_mode = PhaseOffsetMode::per_packet_random;
    StaticSpec static_paths;
    DynamicSpec dynamic;
    std::vector<std::string> class_names; // resolved to size C

    void validate() const; // throws ConfigError with field paths
    std::string canonical_json() const;
    std::uint64_t digest() const;
};

SceneConfig scene_from_json(const std::string& jsondoc);
SceneConfig load_scene(const std::filesystem::path& path);
SceneConfig default_scene();

/// All random draws of one sample, fixed before rendering.
struct SampleRealization {
    std::uint32_t antennas = 0, subcarriers = 0, packets = 0;
    std::uint32_t class_id = 0;
    std::vector<std::complex<double>> static_coeffs; // (a, k)
    std::vector<double> alpha;                       // (l, a)
    std::vector<double> tau0;                        // per path
    std::vector<double> rate;                        // per path
    double template_phase = 0.0;
    ClassTemplate tmpl;
    double subcarrier_spread = 0.0;
    std::vector<double> epsilon_t; // per packet; empty means zero offset
    bool epsilon_zero = true;

    double subcarrier_factor(std::uint32_t k) const;
    double template_value(std::uint32_t t) const; // d_c(t)
    double tau(std::uint32_t l, std::uint32_t k, std::uint32_t t) const;
    double epsilon(std::uint32_t k, std::uint32_t t) const;
    std::complex<double> static_coeff(std::uint32_t a, std::uint32_t k) const;

    /// H_d(a,k,t) = sum_l alpha_l(a) e^{-j 2 pi tau_l(k,t)}
    std::complex<double> dynamic_component(std::uint32_t a, std::uint32_t k,
                                           std::uint32_t t) const;
};

/// Draws the per-sample randomness. sample_idx counts within the class.
SampleRealization realize_sample(const SceneConfig& scene, std::uint32_t class_id,
                                 std::uint32_t sample_idx);

/// Renders one sample: clean channel, shared phase offset, then noise.
csi::CsiTensor render_sample(const SceneConfig& scene, const SampleRealization& real,
                             std::uint32_t class_id, std::uint32_t sample_idx);

/// Convenience accessor matching realize+dynamic_component.
std::complex<double> dynamic_component(const SceneConfig& scene, std::uint32_t class_id,
                                       std::uint32_t sample_idx, std::uint32_t a,
                                       std::uint32_t k, std::uint32_t t);

/// Full labeled dataset, ordered by (class, sample index). Deterministic.
csi::Dataset synthesize(const SceneConfig& scene);

} // namespace arcssl::synth
