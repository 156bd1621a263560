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

#include "test_util.hpp"

#include <fstream>
#include <map>

#include <doctest.h>

using namespace arcssl;
using testutil::random_tensor;
using testutil::scratch_dir;

namespace {

csi::Dataset make_dataset(std::size_t samples, std::uint32_t classes, std::uint32_t a = 3,
                          std::uint32_t k = 4, std::uint32_t t = 6, std::uint64_t seed = 5) {
    csi::Dataset ds;
    ds.shape_a = a;
    ds.shape_k = k;
    ds.shape_t = t;
    for (std::uint32_t c = 0; c < classes; ++c)
        ds.class_names.push_back("class" + std::to_string(c));
    ds.metadata_json = "{\"generator_seed\":5}";
    for (std::size_t i = 0; i < samples; ++i) {
        csi::LabeledSample s;
        s.csi = random_tensor(a, k, t, seed + i);
        s.label = static_cast<std::uint32_t>(i % classes);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

} // namespace

TEST_SUITE("csi-core") {

TEST_CASE("empty dataset writes magic plus header only") {
    const auto dir = scratch_dir("csi_empty");
    csi::Dataset ds;
    ds.shape_a = 3;
    ds.shape_k = 30;
    ds.shape_t = 500;
    ds.class_names = {"a", "b"};
    ds.metadata_json = "{}";
    const auto path = dir / "empty.csi";
    csi::write_dataset(ds, path);

    std::ifstream is(path, std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    CHECK(std::string(magic, 4) == "CSI1");
    // header: magic(4) + version/A/K/T(16) + count(8) + C(4) + 2 names (2+1 each) + meta len(8) + meta(2)
    is.seekg(0, std::ios::end);
    CHECK(static_cast<std::size_t>(is.tellg()) == 4 + 16 + 8 + 4 + 2 * 3 + 8 + 2);

    const csi::Dataset back = csi::read_dataset(path);
    CHECK(back.samples.empty());
    CHECK(back.class_names == ds.class_names);
}

TEST_CASE("all-zero sample payload is label id plus zero floats") {
    const auto dir = scratch_dir("csi_zero");
    csi::Dataset ds;
    ds.shape_a = 3;
    ds.shape_k = 30;
    ds.shape_t = 500;
    ds.class_names = {"x", "y"};
    csi::LabeledSample s;
    s.csi = csi::CsiTensor(3, 30, 500);
    s.label = 1;
    ds.samples.push_back(s);
    const auto path = dir / "zero.csi";
    csi::write_dataset(ds, path);

    std::ifstream is(path, std::ios::binary);
    is.seekg(0, std::ios::end);
    const std::size_t total = static_cast<std::size_t>(is.tellg());
    const std::size_t header = 4 + 16 + 8 + 4 + 2 * 3 + 8 + 2;
    CHECK(total == header + 4 + 2ull * 3 * 30 * 500 * 4); // label + 2*A*K*T f32
    // payload after the label id is all zero bytes
    is.seekg(static_cast<std::streamoff>(header + 4));
    std::vector<char> payload(total - header - 4);
    is.read(payload.data(), static_cast<std::streamsize>(payload.size()));
    CHECK(std::count(payload.begin(), payload.end(), '\0') ==
          static_cast<std::ptrdiff_t>(payload.size()));
}

TEST_CASE("round-trip is bit-identical and deterministic") {
    const auto dir = scratch_dir("csi_rt");
    const csi::Dataset ds = make_dataset(24, 4);
    const auto p1 = dir / "a.csi";
    const auto p2 = dir / "b.csi";
    csi::write_dataset(ds, p1);
    csi::write_dataset(ds, p2);
    CHECK(csi::file_digest_hex(p1) == csi::file_digest_hex(p2)); // byte reproducibility
    const csi::Dataset back = csi::read_dataset(p1);
    CHECK(back == ds);
}

TEST_CASE("wrong magic is a format error") {
    const auto dir = scratch_dir("csi_magic");
    const auto path = dir / "bad.csi";
    std::ofstream os(path, std::ios::binary);
    os << "XSI1";
    std::vector<char> junk(64, 0);
    os.write(junk.data(), junk.size());
    os.close();
    CHECK_THROWS_AS(csi::read_dataset(path), DataError);
    CHECK_THROWS_WITH_AS(csi::read_dataset(path), doctest::Contains("magic"), DataError);
}

TEST_CASE("truncation mid-sample names the sample index") {
    const auto dir = scratch_dir("csi_trunc");
    const csi::Dataset ds = make_dataset(5, 2);
    const auto path = dir / "full.csi";
    csi::write_dataset(ds, path);

    // slice the valid file in the middle of sample 3
    std::ifstream is(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    const std::size_t sample_bytes = 4 + 2ull * 3 * 4 * 6 * 4;
    const std::size_t header = bytes.size() - 5 * sample_bytes;
    const auto cut = dir / "cut.csi";
    std::ofstream os(cut, std::ios::binary);
    os.write(bytes.data(), static_cast<std::streamsize>(header + 3 * sample_bytes + 7));
    os.close();
    CHECK_THROWS_WITH_AS(csi::read_dataset(cut), doctest::Contains("sample 3"), DataError);
}

TEST_CASE("label id beyond class count is rejected") {
    const auto dir = scratch_dir("csi_label");
    csi::Dataset ds = make_dataset(2, 2);
    const auto path = dir / "lab.csi";
    csi::write_dataset(ds, path);
    // corrupt the first sample's label id in place
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    const std::size_t header = 4 + 16 + 8 + 4 + 2 * (2 + 6) + 8 + ds.metadata_json.size();
    f.seekp(static_cast<std::streamoff>(header));
    const std::uint32_t bad = 77;
    f.write(reinterpret_cast<const char*>(&bad), 4);
    f.close();
    CHECK_THROWS_WITH_AS(csi::read_dataset(path), doctest::Contains("label id 77"), DataError);
}

TEST_CASE("non-finite values are rejected before writing") {
    const auto dir = scratch_dir("csi_nan");
    csi::Dataset ds = make_dataset(3, 2);
    ds.samples[1].csi.at(1, 2, 3) = {std::numeric_limits<float>::quiet_NaN(), 0.0f};
    CHECK_THROWS_AS(csi::write_dataset(ds, dir / "nan.csi"), DataError);

    // property: injecting NaN at random positions always trips validation
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        csi::Dataset d2 = make_dataset(2, 2);
        auto& tensor = d2.samples[rng.next_below(2)].csi;
        const auto idx = rng.next_below(tensor.size());
        const bool imag = rng.next_below(2) == 1;
        const float v = rng.next_below(2) == 0 ? std::numeric_limits<float>::quiet_NaN()
                                               : std::numeric_limits<float>::infinity();
        tensor.data()[idx] = imag ? std::complex<float>(0.0f, v) : std::complex<float>(v, 0.0f);
        CHECK_THROWS_AS(d2.validate(), DataError);
    }
}

TEST_CASE("stratified split: 600 samples, 6 classes, fraction 0.8") {
    const csi::Dataset ds = make_dataset(600, 6, 3, 2, 2);
    const auto split = csi::split_indices(ds, 0.8, 42);
    CHECK(split.train.size() == 480);
    CHECK(split.test.size() == 120);
    std::map<std::uint32_t, int> per_class_train, per_class_test;
    for (auto i : split.train)
        per_class_train[ds.samples[i].label]++;
    for (auto i : split.test)
        per_class_test[ds.samples[i].label]++;
    for (std::uint32_t c = 0; c < 6; ++c) {
        CHECK(per_class_train[c] == 80);
        CHECK(per_class_test[c] == 20);
    }
}

TEST_CASE("split determinism and seed sensitivity") {
    const csi::Dataset ds = make_dataset(60, 3, 3, 2, 2);
    const auto s1 = csi::split_indices(ds, 0.7, 1);
    const auto s2 = csi::split_indices(ds, 0.7, 1);
    CHECK(s1.train == s2.train);
    CHECK(s1.test == s2.test);

    const auto s3 = csi::split_indices(ds, 0.7, 2);
    CHECK(s1.train != s3.train); // different permutation
    // same per-class counts regardless of seed
    std::map<std::uint32_t, int> c1, c3;
    for (auto i : s1.train)
        c1[ds.samples[i].label]++;
    for (auto i : s3.train)
        c3[ds.samples[i].label]++;
    CHECK(c1 == c3);
}

TEST_CASE("split disjointness and coverage over fractions and seeds") {
    const csi::Dataset ds = make_dataset(50, 5, 3, 2, 2);
    for (double frac : {0.2, 0.5, 0.8}) {
        for (std::uint64_t seed : {1ull, 9ull, 77ull}) {
            const auto s = csi::split_indices(ds, frac, seed);
            std::vector<std::uint64_t> all = s.train;
            all.insert(all.end(), s.test.begin(), s.test.end());
            std::sort(all.begin(), all.end());
            CHECK(all.size() == ds.samples.size());
            for (std::size_t i = 0; i < all.size(); ++i)
                CHECK(all[i] == i); // disjoint union covering every index
        }
    }
}

TEST_CASE("degenerate split fractions are rejected") {
    const csi::Dataset ds = make_dataset(10, 2, 3, 2, 2);
    CHECK_THROWS_AS(csi::split_indices(ds, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(csi::split_indices(ds, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(csi::split_indices(ds, 0.01, 1), ConfigError); // empty train split
}

TEST_CASE("split sidecar round-trip") {
    const auto dir = scratch_dir("csi_split");
    const csi::Dataset ds = make_dataset(20, 2, 3, 2, 2);
    const auto s = csi::split_indices(ds, 0.5, 3);
    csi::write_split(s, dir / "split.json");
    const auto back = csi::read_split(dir / "split.json");
    CHECK(back.train == s.train);
    CHECK(back.test == s.test);
    CHECK(back.seed == s.seed);
}

TEST_CASE("split_dataset materializes both halves") {
    const csi::Dataset ds = make_dataset(30, 3, 3, 2, 2);
    const auto [train, test] = csi::split_dataset(ds, 0.5, 11);
    CHECK(train.samples.size() + test.samples.size() == 30);
    CHECK(train.class_names == ds.class_names);
}

} // TEST_SUITE
