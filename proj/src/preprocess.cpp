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

#include "arcssl/preprocess.hpp"

#include "arcssl/errors.hpp"
#include "arcssl/kernels.hpp"

#include <cmath>
#include <cstdio>

namespace arcssl::prep {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr float kPiF = 3.14159265358979323846f;
} // namespace

const char* to_string(ViewKind k) {
    switch (k) {
    case ViewKind::amplitude: return "amplitude";
    case ViewKind::conj_angle: return "conj_angle";
    case ViewKind::raw_angle: return "raw_angle";
    }
    return "?";
}

const char* to_string(FeatureMode m) {
    switch (m) {
    case FeatureMode::amp: return "amp";
    case FeatureMode::conj_angle: return "conj-angle";
    case FeatureMode::raw_angle: return "raw-angle";
    case FeatureMode::amp_conj_angle: return "amp+conj-angle";
    }
    return "?";
}

FeatureMode feature_mode_from_string(const std::string& s) {
    if (s == "amp") return FeatureMode::amp;
    if (s == "conj-angle") return FeatureMode::conj_angle;
    if (s == "raw-angle") return FeatureMode::raw_angle;
    if (s == "amp+conj-angle") return FeatureMode::amp_conj_angle;
    throw ConfigError("unknown feature mode '" + s +
                      "' (expected amp, conj-angle, raw-angle or amp+conj-angle)");
}

bool mode_has_amp(FeatureMode m) {
    return m == FeatureMode::amp || m == FeatureMode::amp_conj_angle;
}

bool mode_has_phase(FeatureMode m) { return m != FeatureMode::amp; }

ViewKind mode_phase_kind(FeatureMode m) {
    return m == FeatureMode::raw_angle ? ViewKind::raw_angle : ViewKind::conj_angle;
}

void AntennaTriple::validate(std::uint32_t antennas) const {
    if (q >= antennas || k >= antennas || ref >= antennas)
        throw DataError("antenna triple index out of range");
    if (q == k || q == ref || k == ref)
        throw DataError("antenna triple indices must be pairwise distinct");
}

ViewTensor amplitude(const csi::CsiTensor& h, std::uint32_t a) {
    if (a >= h.antennas())
        throw DataError("amplitude: antenna index out of range");
    ViewTensor v;
    v.subcarriers = h.subcarriers();
    v.packets = h.packets();
    v.kind = ViewKind::amplitude;
    const std::size_t n = static_cast<std::size_t>(v.subcarriers) * v.packets;
    v.values.resize(n);
    kernels::cabs(h.antenna_ptr(a), v.values.data(), n);
    return v;
}

ComplexMatrix conjugate_product(const csi::CsiTensor& h, std::uint32_t a, std::uint32_t ref) {
    if (a >= h.antennas() || ref >= h.antennas())
        throw DataError("conjugate_product: antenna index out of range");
    if (a == ref)
        throw DataError("conjugate_product: antenna and reference must be distinct");
    ComplexMatrix c;
    c.subcarriers = h.subcarriers();
    c.packets = h.packets();
    const std::size_t n = static_cast<std::size_t>(c.subcarriers) * c.packets;
    c.values.resize(n);
    kernels::cmul_conj(h.antenna_ptr(a), h.antenna_ptr(ref),
                       reinterpret_cast<float*>(c.values.data()), n);
    return c;
}

std::pair<ComplexMatrix, ComplexMatrix> conjugate_multiply(const csi::CsiTensor& h,
                                                           const AntennaTriple& triple) {
    triple.validate(h.antennas());
    return {conjugate_product(h, triple.q, triple.ref), conjugate_product(h, triple.k, triple.ref)};
}

double principal_angle(double re, double im) {
    if (re == 0.0 && im == 0.0)
        return 0.0; // arctan form undefined at the origin; zero keeps the map total
    double a = std::atan2(im, re);
    if (a <= -kPi)
        a = kPi;
    return a;
}

namespace {

ViewTensor angles_of(const std::complex<float>* z, std::uint32_t subcarriers,
                     std::uint32_t packets, ViewKind kind) {
    ViewTensor v;
    v.subcarriers = subcarriers;
    v.packets = packets;
    v.kind = kind;
    const std::size_t n = static_cast<std::size_t>(subcarriers) * packets;
    v.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        float a = static_cast<float>(
            principal_angle(static_cast<double>(z[i].real()), static_cast<double>(z[i].imag())));
        if (a == -kPiF)
            a = kPiF; // keep the float range (-pi, pi] after narrowing
        v.values[i] = a;
    }
    return v;
}

} // namespace

ViewTensor phase_angle(const ComplexMatrix& c, ViewKind kind) {
    return angles_of(c.values.data(), c.subcarriers, c.packets, kind);
}

ViewTensor raw_angle(const csi::CsiTensor& h, std::uint32_t a) {
    if (a >= h.antennas())
        throw DataError("raw_angle: antenna index out of range");
    return angles_of(reinterpret_cast<const std::complex<float>*>(h.antenna_ptr(a)),
                     h.subcarriers(), h.packets(), ViewKind::raw_angle);
}

csi::CsiTensor downsample_time(const csi::CsiTensor& h, std::uint32_t t_target) {
    const std::uint32_t t_in = h.packets();
    if (t_target == 0 || t_target > t_in)
        throw DataError("downsample_time: target packet count must be in (0, T]");
    if (t_target == t_in)
        return h;
    csi::CsiTensor out(h.antennas(), h.subcarriers(), t_target);
    for (std::uint32_t a = 0; a < h.antennas(); ++a)
        for (std::uint32_t k = 0; k < h.subcarriers(); ++k)
            for (std::uint32_t i = 0; i < t_target; ++i) {
                const std::uint32_t src = static_cast<std::uint32_t>(
                    (static_cast<std::uint64_t>(i) * t_in) / t_target);
                out.at(a, k, i) = h.at(a, k, src);
            }
    return out;
}

AntennaTriple select_antennas(std::uint32_t antennas, Rng& rng) {
    if (antennas < 3)
        throw DataError("antenna selection needs at least 3 antennas");
    AntennaTriple t;
    t.q = static_cast<std::uint32_t>(rng.next_below(antennas));
    std::uint32_t k = static_cast<std::uint32_t>(rng.next_below(antennas - 1));
    if (k >= t.q)
        ++k;
    t.k = k;
    std::uint32_t r = static_cast<std::uint32_t>(rng.next_below(antennas - 2));
    const std::uint32_t lo = std::min(t.q, t.k), hi = std::max(t.q, t.k);
    if (r >= lo)
        ++r;
    if (r >= hi)
        ++r;
    t.ref = r;
    return t;
}

AugmentPolicy augment_policy_from_string(const std::string& s) {
    if (s == "jitter") return AugmentPolicy::jitter;
    if (s == "scale") return AugmentPolicy::scale;
    if (s == "time_mask") return AugmentPolicy::time_mask;
    throw ConfigError("unknown augmentation policy '" + s + "'");
}

ViewTensor augment_baseline(const ViewTensor& x, Rng& rng, AugmentPolicy policy, double strength) {
    ViewTensor out = x;
    switch (policy) {
    case AugmentPolicy::jitter: {
        for (auto& v : out.values)
            v += static_cast<float>(strength * rng.normal());
        break;
    }
    case AugmentPolicy::scale: {
        const float factor = static_cast<float>(1.0 + strength * (2.0 * rng.next_double() - 1.0));
        for (auto& v : out.values)
            v *= factor;
        break;
    }
    case AugmentPolicy::time_mask: {
        const auto span = static_cast<std::uint32_t>(
            std::lround(strength * static_cast<double>(x.packets)));
        if (span == 0)
            break;
        if (span > x.packets)
            throw ConfigError("time_mask strength exceeds 1");
        const auto start = static_cast<std::uint32_t>(rng.next_below(x.packets - span + 1));
        for (std::uint32_t k = 0; k < x.subcarriers; ++k) {
            float* row = out.values.data() + static_cast<std::size_t>(k) * x.packets;
            for (std::uint32_t t = start; t < start + span; ++t)
                row[t] = 0.0f;
        }
        break;
    }
    }
    return out;
}

void StatsAccumulator::add(const ViewTensor& v) {
    sum_ += static_cast<double>(kernels::sum(v.values.data(), v.values.size()));
    sumsq_ += static_cast<double>(kernels::sumsq(v.values.data(), v.values.size()));
    count_ += v.values.size();
}

ViewStats StatsAccumulator::finalize() const {
    ViewStats s;
    if (count_ == 0)
        throw DataError("cannot compute view statistics from zero entries");
    s.mean = sum_ / static_cast<double>(count_);
    const double var = sumsq_ / static_cast<double>(count_) - s.mean * s.mean;
    if (var <= 0.0) {
        s.stddev = 1.0;
        s.degenerate = true;
        std::fprintf(stderr, "arcssl: warning: zero-variance views, leaving scale unchanged\n");
    } else {
        s.stddev = std::sqrt(var);
    }
    return s;
}

ViewTensor normalize(const ViewTensor& x, const ViewStats& stats) {
    ViewTensor out = x;
    normalize_into(x, stats, out.values.data());
    return out;
}

void normalize_into(const ViewTensor& x, const ViewStats& stats, float* out) {
    const float a = static_cast<float>(1.0 / stats.stddev);
    const float b = static_cast<float>(-stats.mean / stats.stddev);
    kernels::affine(a, b, x.values.data(), out, x.values.size());
}

} // namespace arcssl::prep
