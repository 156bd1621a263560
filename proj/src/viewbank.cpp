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

#include "arcssl/viewbank.hpp"

#include "arcssl/errors.hpp"

namespace arcssl::ssl {

using prep::FeatureMode;
using prep::ViewKind;

ViewBank::ViewBank(const csi::Dataset& ds, FeatureMode mode,
                   const std::vector<std::uint64_t>* stats_subset)
    : mode_(mode) {
    if (ds.samples.empty())
        throw DataError("cannot build a view bank from an empty dataset");
    antennas_ = ds.antennas();
    subcarriers_ = ds.subcarriers();
    packets_ = ds.packets();
    class_count_ = ds.class_count();
    has_amp_ = prep::mode_has_amp(mode);
    has_phase_ = prep::mode_has_phase(mode);
    phase_kind_ = prep::mode_phase_kind(mode);
    if (has_phase_ && phase_kind_ == ViewKind::conj_angle && antennas_ < 2)
        throw DataError("conjugate-angle views need at least 2 antennas");

    const std::size_t n = ds.samples.size();
    labels_.resize(n);
    phase_per_sample_ = phase_kind_ == ViewKind::conj_angle
                            ? static_cast<std::size_t>(antennas_) * (antennas_ - 1)
                            : antennas_;
    if (has_amp_)
        amp_.resize(n * antennas_);
    if (has_phase_)
        phase_.resize(n * phase_per_sample_);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = ds.samples[i];
        labels_[i] = s.label;
        if (has_amp_) {
            for (std::uint32_t a = 0; a < antennas_; ++a)
                amp_[i * antennas_ + a] = prep::amplitude(s.csi, a);
        }
        if (has_phase_) {
            if (phase_kind_ == ViewKind::conj_angle) {
                std::size_t p = 0;
                for (std::uint32_t a = 0; a < antennas_; ++a)
                    for (std::uint32_t ref = 0; ref < antennas_; ++ref) {
                        if (a == ref)
                            continue;
                        phase_[i * phase_per_sample_ + p++] =
                            prep::phase_angle(prep::conjugate_product(s.csi, a, ref));
                    }
            } else {
                for (std::uint32_t a = 0; a < antennas_; ++a)
                    phase_[i * phase_per_sample_ + a] = prep::raw_angle(s.csi, a);
            }
        }
    }

    // normalization statistics over the training subset only
    std::vector<std::uint64_t> all;
    if (stats_subset == nullptr || stats_subset->empty()) {
        all.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            all[i] = i;
        stats_subset = &all;
    }
    prep::StatsAccumulator amp_acc, phase_acc;
    for (const auto idx : *stats_subset) {
        if (idx >= n)
            throw DataError("view bank stats subset index out of range");
        if (has_amp_)
            for (std::uint32_t a = 0; a < antennas_; ++a)
                amp_acc.add(amp_[idx * antennas_ + a]);
        if (has_phase_)
            for (std::size_t p = 0; p < phase_per_sample_; ++p)
                phase_acc.add(phase_[idx * phase_per_sample_ + p]);
    }
    if (has_amp_)
        amp_stats_ = amp_acc.finalize();
    if (has_phase_)
        phase_stats_ = phase_acc.finalize();
}

std::size_t ViewBank::pair_index(std::uint32_t a, std::uint32_t ref) const {
    // ordered pairs (a, ref), ref != a, enumerated ref-major within a
    return static_cast<std::size_t>(a) * (antennas_ - 1) + (ref < a ? ref : ref - 1);
}

const prep::ViewTensor& ViewBank::amp_view(std::size_t sample, std::uint32_t a) const {
    if (!has_amp_)
        throw DataError("view bank was built without amplitude views");
    return amp_[sample * antennas_ + a];
}

const prep::ViewTensor& ViewBank::phase_view(std::size_t sample, std::uint32_t a,
                                             std::uint32_t ref) const {
    if (!has_phase_)
        throw DataError("view bank was built without phase views");
    if (phase_kind_ == ViewKind::raw_angle)
        return phase_[sample * phase_per_sample_ + a];
    if (a == ref)
        throw DataError("conjugate-angle view requires a != ref");
    return phase_[sample * phase_per_sample_ + pair_index(a, ref)];
}

} // namespace arcssl::ssl
