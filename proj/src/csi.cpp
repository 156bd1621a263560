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

#include "arcssl/csi.hpp"

#include "arcssl/errors.hpp"
#include "arcssl/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

namespace arcssl::csi {

using nlohmann::json;

CsiTensor::CsiTensor(std::uint32_t a, std::uint32_t k, std::uint32_t t)
    : a_(a), k_(k), t_(t), values_(static_cast<std::size_t>(a) * k * t) {
    if (a == 0 || k == 0 || t == 0)
        throw DataError("CsiTensor dimensions must be strictly positive");
}

bool CsiTensor::all_finite() const {
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

void CsiTensor::validate() const {
    if (a_ == 0 || k_ == 0 || t_ == 0)
        throw DataError("CsiTensor dimensions must be strictly positive");
    if (!all_finite())
        throw DataError("CsiTensor contains non-finite values");
}

bool CsiTensor::operator==(const CsiTensor& other) const {
    if (a_ != other.a_ || k_ != other.k_ || t_ != other.t_)
        return false;
    if (values_.size() != other.values_.size())
        return false;
    // bit-level comparison: round-trips must preserve the exact f32 payload
    return values_.empty() ||
           std::memcmp(values_.data(), other.values_.data(),
                       values_.size() * sizeof(std::complex<float>)) == 0;
}

void Dataset::validate() const {
    if (shape_a == 0 || shape_k == 0 || shape_t == 0)
        throw DataError("dataset shape must be declared and strictly positive");
    const std::uint32_t c = class_count();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (s.csi.antennas() != antennas() || s.csi.subcarriers() != subcarriers() ||
            s.csi.packets() != packets())
            throw DataError("dataset sample " + std::to_string(i) + " has mismatched dimensions");
        if (s.label >= c)
            throw DataError("dataset sample " + std::to_string(i) + " has label " +
                            std::to_string(s.label) + " >= class count " + std::to_string(c));
        s.csi.validate();
    }
}

bool Dataset::operator==(const Dataset& other) const {
    if (shape_a != other.shape_a || shape_k != other.shape_k || shape_t != other.shape_t)
        return false;
    if (class_names != other.class_names || metadata_json != other.metadata_json)
        return false;
    if (samples.size() != other.samples.size())
        return false;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].label != other.samples[i].label || !(samples[i].csi == other.samples[i].csi))
            return false;
    return true;
}

namespace {

constexpr char kMagic[4] = {'C', 'S', 'I', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const char* what) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is)
        throw DataError(std::string("malformed header: truncated while reading ") + what);
    return v;
}

} // namespace

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
    ds.validate();
    if (ds.class_count() == 0)
        throw DataError("refusing to write dataset without class names");

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw DataError("cannot open for writing: " + path.string());

    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, ds.antennas());
    put<std::uint32_t>(os, ds.subcarriers());
    put<std::uint32_t>(os, ds.packets());
    put<std::uint64_t>(os, ds.samples.size());
    put<std::uint32_t>(os, ds.class_count());
    for (const auto& name : ds.class_names) {
        if (name.size() > 0xFFFF)
            throw DataError("class name too long for container format");
        put<std::uint16_t>(os, static_cast<std::uint16_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
    }
    put<std::uint64_t>(os, ds.metadata_json.size());
    os.write(ds.metadata_json.data(), static_cast<std::streamsize>(ds.metadata_json.size()));

    for (const auto& s : ds.samples) {
        put<std::uint32_t>(os, s.label);
        os.write(reinterpret_cast<const char*>(s.csi.data()),
                 static_cast<std::streamsize>(s.csi.size() * sizeof(std::complex<float>)));
    }
    os.flush();
    if (!os)
        throw DataError("I/O failure while writing " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw DataError("cannot open for reading: " + path.string());

    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("bad magic in " + path.string() + " (not a CSI1 container)");
    const auto version = get<std::uint32_t>(is, "version");
    if (version != kVersion)
        throw DataError("unsupported container version " + std::to_string(version));

    const auto a = get<std::uint32_t>(is, "A");
    const auto k = get<std::uint32_t>(is, "K");
    const auto t = get<std::uint32_t>(is, "T");
    const auto sample_count = get<std::uint64_t>(is, "sample_count");
    const auto c = get<std::uint32_t>(is, "C");
    if (a == 0 || k == 0 || t == 0)
        throw DataError("malformed header: zero dimension");

    Dataset ds;
    ds.shape_a = a;
    ds.shape_k = k;
    ds.shape_t = t;
    ds.class_names.reserve(c);
    for (std::uint32_t i = 0; i < c; ++i) {
        const auto len = get<std::uint16_t>(is, "class name length");
        std::string name(len, '\0');
        is.read(name.data(), len);
        if (!is)
            throw DataError("malformed header: truncated class name " + std::to_string(i));
        ds.class_names.push_back(std::move(name));
    }
    const auto meta_len = get<std::uint64_t>(is, "metadata length");
    ds.metadata_json.resize(meta_len);
    is.read(ds.metadata_json.data(), static_cast<std::streamsize>(meta_len));
    if (!is)
        throw DataError("malformed header: truncated metadata blob");

    ds.samples.reserve(sample_count);
    const std::size_t values = static_cast<std::size_t>(a) * k * t;
    for (std::uint64_t i = 0; i < sample_count; ++i) {
        LabeledSample s;
        std::uint32_t label;
        is.read(reinterpret_cast<char*>(&label), sizeof(label));
        if (!is)
            throw DataError("truncated payload at sample " + std::to_string(i));
        if (label >= c)
            throw DataError("sample " + std::to_string(i) + " has label id " +
                            std::to_string(label) + " >= class count " + std::to_string(c));
        s.label = label;
        s.csi = CsiTensor(a, k, t);
        is.read(reinterpret_cast<char*>(s.csi.data()),
                static_cast<std::streamsize>(values * sizeof(std::complex<float>)));
        if (!is)
            throw DataError("truncated payload at sample " + std::to_string(i));
        ds.samples.push_back(std::move(s));
    }
    ds.validate();
    return ds;
}

SplitIndices split_indices(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("train fraction must lie in (0, 1)");
    const std::uint32_t c = ds.class_count();
    std::vector<std::vector<std::uint64_t>> by_class(c);
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
        by_class[ds.samples[i].label].push_back(i);

    SplitIndices out;
    out.seed = seed;
    for (std::uint32_t cls = 0; cls < c; ++cls) {
        auto& idx = by_class[cls];
        Rng rng = derive_rng(seed, {stream::split, cls});
        // Fisher-Yates
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.next_below(i)]);
        const auto n_train = static_cast<std::size_t>(
            std::floor(train_fraction * static_cast<double>(idx.size())));
        for (std::size_t i = 0; i < idx.size(); ++i)
            (i < n_train ? out.train : out.test).push_back(idx[i]);
    }
    if (out.train.empty() || out.test.empty())
        throw ConfigError("train fraction yields an empty split");
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double train_fraction,
                                          std::uint64_t seed) {
    const SplitIndices idx = split_indices(ds, train_fraction, seed);
    Dataset train, test;
    train.shape_a = test.shape_a = ds.shape_a;
    train.shape_k = test.shape_k = ds.shape_k;
    train.shape_t = test.shape_t = ds.shape_t;
    train.class_names = test.class_names = ds.class_names;
    train.metadata_json = test.metadata_json = ds.metadata_json;
    for (auto i : idx.train)
        train.samples.push_back(ds.samples[i]);
    for (auto i : idx.test)
        test.samples.push_back(ds.samples[i]);
    return {std::move(train), std::move(test)};
}

void write_split(const SplitIndices& split, const std::filesystem::path& path) {
    json j;
    j["train"] = split.train;
    j["test"] = split.test;
    j["seed"] = split.seed;
    std::ofstream os(path, std::ios::trunc);
    if (!os)
        throw DataError("cannot open for writing: " + path.string());
    os << j.dump(2) << "\n";
}

SplitIndices read_split(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw DataError("cannot open for reading: " + path.string());
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw DataError("malformed split sidecar " + path.string() + ": " + e.what());
    }
    SplitIndices s;
    try {
        s.train = j.at("train").get<std::vector<std::uint64_t>>();
        s.test = j.at("test").get<std::vector<std::uint64_t>>();
        s.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw DataError("split sidecar missing fields: " + std::string(e.what()));
    }
    return s;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_digest_hex(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw DataError("cannot open for reading: " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof(buf));
        const std::streamsize got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return std::string(out);
}

} // namespace arcssl::csi
