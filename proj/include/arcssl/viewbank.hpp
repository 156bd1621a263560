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
#include "arcssl/preprocess.hpp"

#include <cstdint>
#include <vector>

namespace arcssl::ssl {

/**
 * Precomputed per-sample views for one dataset and feature mode.
 *
 * Amplitude views exist per antenna; phase views per ordered (antenna,
 * reference) pair for conjugate angles, per antenna for raw angles. Building
 * the bank once amortizes the atan2-heavy angle extraction across epochs,
 * seeds and runs; training loops then only normalize-copy, mask or augment.
 *
 * Normalization statistics are computed over the training-split views only
 * (callers pass the split indices) and reused verbatim at evaluation time.
 */
class ViewBank {
public:
    /// stats_subset restricts the normalization statistics to those sample
    /// indices (pass the training split); null or empty means all samples.
    explicit ViewBank(const csi::Dataset& ds, prep::FeatureMode mode,
                      const std::vector<std::uint64_t>* stats_subset = nullptr);

    prep::FeatureMode mode() const { return mode_; }
    bool has_amp() const { return has_amp_; }
    bool has_phase() const { return has_phase_; }
    prep::ViewKind phase_kind() const { return phase_kind_; }

    std::size_t sample_count() const { return labels_.size(); }
    std::uint32_t antennas() const { return antennas_; }
    std::uint32_t subcarriers() const { return subcarriers_; }
    std::uint32_t packets() const { return packets_; }
    std::uint32_t class_count() const { return class_count_; }
    std::uint32_t label(std::size_t sample) const { return labels_[sample]; }

    const prep::ViewTensor& amp_view(std::size_t sample, std::uint32_t a) const;

    /// Conjugate-angle views are addressed by (a, ref), a != ref; raw-angle
    /// views ignore ref.
    const prep::ViewTensor& phase_view(std::size_t sample, std::uint32_t a,
                                       std::uint32_t ref) const;

    const prep::ViewStats& amp_stats() const { return amp_stats_; }
    const prep::ViewStats& phase_stats() const { return phase_stats_; }

private:
    std::size_t pair_index(std::uint32_t a, std::uint32_t ref) const;

    prep::FeatureMode mode_;
    bool has_amp_ = false, has_phase_ = false;
    prep::ViewKind phase_kind_ = prep::ViewKind::conj_angle;
    std::uint32_t antennas_ = 0, subcarriers_ = 0, packets_ = 0, class_count_ = 0;
    std::vector<std::uint32_t> labels_;
    std::vector<prep::ViewTensor> amp_;   // sample-major, antennas per sample
    std::vector<prep::ViewTensor> phase_; // sample-major, pairs (or antennas) per sample
    std::size_t phase_per_sample_ = 0;
    prep::ViewStats amp_stats_, phase_stats_;
};

} // namespace arcssl::ssl
