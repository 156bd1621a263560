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

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace arcssl::csi {

/**
 * Complex channel response of one capture: antenna-pair x subcarrier x packet.
 *
 * Layout is (a, k, t) with t fastest-varying, matching streaming packet order
 * and the on-disk container. Values are 32-bit complex; that is enough for
 * sensing SNRs and keeps files at half the size of double storage.
 */
class CsiTensor {
public:
    CsiTensor() = default;
    CsiTensor(std::uint32_t a, std::uint32_t k, std::uint32_t t);

    std::uint32_t antennas() const { return a_; }
    std::uint32_t subcarriers() const { return k_; }
    std::uint32_t packets() const { return t_; }
    std::size_t size() const { return values_.size(); }

    std::complex<float>& at(std::uint32_t a, std::uint32_t k, std::uint32_t t) {
        return values_[index(a, k, t)];
    }
    const std::complex<float>& at(std::uint32_t a, std::uint32_t k, std::uint32_t t) const {
        return values_[index(a, k, t)];
    }

    std::size_t index(std::uint32_t a, std::uint32_t k, std::uint32_t t) const {
        return (static_cast<std::size_t>(a) * k_ + k) * t_ + t;
    }

    std::complex<float>* data() { return values_.data(); }
    const std::complex<float>* data() const { return values_.data(); }

    /// Pointer to the (K x T) slice of one antenna, interleaved (re, im).
    const float* antenna_ptr(std::uint32_t a) const {
        return reinterpret_cast<const float*>(values_.data() + static_cast<std::size_t>(a) * k_ * t_);
    }

    bool all_finite() const;

    /// Throws DataError if dimensions are zero or any value is non-finite.
    void validate() const;

    bool operator==(const CsiTensor& other) const;

private:
    std::uint32_t a_ = 0, k_ = 0, t_ = 0;
    std::vector<std::complex<float>> values_;
};

struct LabeledSample {
    CsiTensor csi;
    std::uint32_t label = 0;
};

/**
 * Ordered collection of labeled CSI captures sharing one (A, K, T) shape.
 * Immutable after construction; safe to share across threads by const ref.
 */
struct Dataset {
    // declared shape; authoritative even for empty datasets
    std::uint32_t shape_a = 0, shape_k = 0, shape_t = 0;
    std::vector<LabeledSample> samples;
    std::vector<std::string> class_names;
    std::string metadata_json = "{}"; // generator seed + scene digest, as JSON

    std::uint32_t class_count() const { return static_cast<std::uint32_t>(class_names.size()); }
    std::uint32_t antennas() const { return shape_a; }
    std::uint32_t subcarriers() const { return shape_k; }
    std::uint32_t packets() const { return shape_t; }

    /// Throws DataError on shape mismatch, label overflow, or non-finite values.
    void validate() const;

    bool operator==(const Dataset& other) const;
};

// --- container format -------------------------------------------------------
//
// Bit-exact layout, little-endian throughout:
//   magic "CSI1" | u32 version=1 | u32 A | u32 K | u32 T | u64 sample_count |
//   u32 C | C x { u16 name_len, name bytes } | u64 meta_len | metadata JSON |
//   per sample: u32 label_id, A*K*T x (f32 re, f32 im), order (a, k, t), t fastest.

void write_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

/// Stratified split indices, sidecar-compatible. Deterministic in seed.
struct SplitIndices {
    std::vector<std::uint64_t> train;
    std::vector<std::uint64_t> test;
    std::uint64_t seed = 0;
};

SplitIndices split_indices(const Dataset& ds, double train_fraction, std::uint64_t seed);

/// Materialized stratified split: (train, test), disjoint, union == ds.
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double train_fraction,
                                          std::uint64_t seed);

void write_split(const SplitIndices& split, const std::filesystem::path& path);
SplitIndices read_split(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex chars.
std::string file_digest_hex(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a string.
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace arcssl::csi
