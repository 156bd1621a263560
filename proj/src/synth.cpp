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

#include "arcssl/synth.hpp"

#include "arcssl/errors.hpp"
#include "arcssl/rng.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace arcssl::synth {

using nlohmann::json;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

const char* to_string(PhaseOffsetMode m) {
    switch (m) {
    case PhaseOffsetMode::none: return "none";
    case PhaseOffsetMode::constant: return "constant";
    case PhaseOffsetMode::per_packet_random: return "per-packet-random";
    }
    return "?";
}

PhaseOffsetMode phase_offset_mode_from_string(const std::string& s) {
    if (s == "none") return PhaseOffsetMode::none;
    if (s == "constant") return PhaseOffsetMode::constant;
    if (s == "per-packet-random") return PhaseOffsetMode::per_packet_random;
    throw ConfigError("scene.phase_offset_mode: unknown value '" + s + "'");
}

void SceneConfig::validate() const {
    if (antennas == 0) throw ConfigError("scene.antennas: must be positive");
    if (subcarriers == 0) throw ConfigError("scene.subcarriers: must be positive");
    if (packets_raw == 0) throw ConfigError("scene.packets_raw: must be positive");
    if (class_count < 2) throw ConfigError("scene.class_count: must be >= 2");
    if (samples_per_class < 1) throw ConfigError("scene.samples_per_class: must be >= 1");
    if (noise_snr_db && !std::isfinite(*noise_snr_db))
        throw ConfigError("scene.noise_snr_db: must be finite or null");
    if (static_paths.magnitude_max < 0.0 || !std::isfinite(static_paths.magnitude_max))
        throw ConfigError("scene.static.magnitude_max: must be a finite non-negative value");
    if (!(dynamic.attenuation_min > 0.0) || dynamic.attenuation_min > dynamic.attenuation_max ||
        dynamic.attenuation_max > 1.0)
        throw ConfigError("scene.dynamic.attenuation_(min|max): need 0 < min <= max <= 1");
    if (!std::isfinite(dynamic.subcarrier_spread) || std::abs(dynamic.subcarrier_spread) >= 2.0)
        throw ConfigError("scene.dynamic.subcarrier_spread: must be finite and |spread| < 2");
    if (!dynamic.classes.empty() && dynamic.classes.size() != class_count)
        throw ConfigError("scene.dynamic.classes: length must equal class_count");
    if (!class_names.empty() && class_names.size() != class_count)
        throw ConfigError("scene.class_names: length must equal class_count");
    for (std::size_t c = 0; c < dynamic.classes.size(); ++c) {
        const auto& ct = dynamic.classes[c];
        if (!std::isfinite(ct.freq) || !std::isfinite(ct.amp) || !std::isfinite(ct.drift))
            throw ConfigError("scene.dynamic.classes[" + std::to_string(c) + "]: non-finite value");
    }
}

namespace {

/// Auto template for class c: distinct frequency, mildly varying amplitude
/// and drift, so that classes are separable but not trivially so.
ClassTemplate auto_template(std::uint32_t c) {
    ClassTemplate t;
    t.freq = 1.0 + static_cast<double>(c);
    t.amp = 0.30 + 0.05 * static_cast<double>(c);
    t.drift = 0.15 * (static_cast<double>(c % 3) - 1.0);
    return t;
}

json scene_to_json(const SceneConfig& s) {
    json j;
    j["antennas"] = s.antennas;
    j["subcarriers"] = s.subcarriers;
    j["packets_raw"] = s.packets_raw;
    j["class_count"] = s.class_count;
    j["samples_per_class"] = s.samples_per_class;
    j["seed"] = s.seed;
    if (s.noise_snr_db)
        j["noise_snr_db"] = *s.noise_snr_db;
    else
        j["noise_snr_db"] = nullptr;
    j["phase_offset_mode"] = to_string(s.phase_offset_mode);
    j["static"] = {{"magnitude_max", s.static_paths.magnitude_max}};
    json dyn;
    dyn["path_count"] = s.dynamic.path_count;
    dyn["attenuation_min"] = s.dynamic.attenuation_min;
    dyn["attenuation_max"] = s.dynamic.attenuation_max;
    dyn["subcarrier_spread"] = s.dynamic.subcarrier_spread;
    json cls = json::array();
    for (const auto& c : s.dynamic.classes)
        cls.push_back({{"freq", c.freq}, {"amp", c.amp}, {"drift", c.drift}});
    dyn["classes"] = cls;
    j["dynamic"] = dyn;
    j["class_names"] = s.class_names;
    return j;
}

} // namespace

std::string SceneConfig::canonical_json() const { return scene_to_json(*this).dump(); }

std::uint64_t SceneConfig::digest() const { return csi::fnv1a64(canonical_json()); }

SceneConfig scene_from_json(const std::string& jsondoc) {
    json j;
    try {
        j = json::parse(jsondoc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scene: invalid JSON: ") + e.what());
    }
    SceneConfig s = default_scene();
    s.dynamic.classes.clear();
    s.class_names.clear();
    try {
        if (j.contains("antennas")) s.antennas = j["antennas"].get<std::uint32_t>();
        if (j.contains("subcarriers")) s.subcarriers = j["subcarriers"].get<std::uint32_t>();
        if (j.contains("packets_raw")) s.packets_raw = j["packets_raw"].get<std::uint32_t>();
        if (j.contains("class_count")) s.class_count = j["class_count"].get<std::uint32_t>();
        if (j.contains("samples_per_class"))
            s.samples_per_class = j["samples_per_class"].get<std::uint32_t>();
        if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("noise_snr_db")) {
            if (j["noise_snr_db"].is_null())
                s.noise_snr_db.reset();
            else
                s.noise_snr_db = j["noise_snr_db"].get<double>();
        }
        if (j.contains("phase_offset_mode"))
            s.phase_offset_mode = phase_offset_mode_from_string(j["phase_offset_mode"].get<std::string>());
        if (j.contains("static") && j["static"].contains("magnitude_max"))
            s.static_paths.magnitude_max = j["static"]["magnitude_max"].get<double>();
        if (j.contains("dynamic")) {
            const auto& d = j["dynamic"];
            if (d.contains("path_count")) s.dynamic.path_count = d["path_count"].get<std::uint32_t>();
            if (d.contains("attenuation_min"))
                s.dynamic.attenuation_min = d["attenuation_min"].get<double>();
            if (d.contains("attenuation_max"))
                s.dynamic.attenuation_max = d["attenuation_max"].get<double>();
            if (d.contains("subcarrier_spread"))
                s.dynamic.subcarrier_spread = d["subcarrier_spread"].get<double>();
            if (d.contains("classes")) {
                for (const auto& c : d["classes"]) {
                    ClassTemplate t;
                    if (c.contains("freq")) t.freq = c["freq"].get<double>();
                    if (c.contains("amp")) t.amp = c["amp"].get<double>();
                    if (c.contains("drift")) t.drift = c["drift"].get<double>();
                    s.dynamic.classes.push_back(t);
                }
            }
        }
        if (j.contains("class_names"))
            s.class_names = j["class_names"].get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scene: type error: ") + e.what());
    }
    // resolve defaults that depend on class_count
    if (s.dynamic.classes.empty())
        for (std::uint32_t c = 0; c < s.class_count; ++c)
            s.dynamic.classes.push_back(auto_template(c));
    if (s.class_names.empty())
        for (std::uint32_t c = 0; c < s.class_count; ++c)
            s.class_names.push_back("class" + std::to_string(c));
    s.validate();
    return s;
}

SceneConfig load_scene(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open scene file: " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return scene_from_json(ss.str());
}

SceneConfig default_scene() {
    SceneConfig s; // field initializers carry the desk-scale defaults
    for (std::uint32_t c = 0; c < s.class_count; ++c) {
        s.dynamic.classes.push_back(auto_template(c));
        s.class_names.push_back("class" + std::to_string(c));
    }
    return s;
}

double SampleRealization::subcarrier_factor(std::uint32_t k) const {
    const double kk = static_cast<double>(k) - 0.5 * static_cast<double>(subcarriers - 1);
    return 1.0 + subcarrier_spread * kk / static_cast<double>(subcarriers);
}

double SampleRealization::template_value(std::uint32_t t) const {
    const double x = static_cast<double>(t) / static_cast<double>(packets);
    return tmpl.amp * std::sin(kTwoPi * (tmpl.freq * x + template_phase)) + tmpl.drift * x;
}

double SampleRealization::tau(std::uint32_t l, std::uint32_t k, std::uint32_t t) const {
    return (tau0[l] + rate[l] * template_value(t)) * subcarrier_factor(k);
}

double SampleRealization::epsilon(std::uint32_t /*k*/, std::uint32_t t) const {
    return epsilon_zero ? 0.0 : epsilon_t[t];
}

std::complex<double> SampleRealization::static_coeff(std::uint32_t a, std::uint32_t k) const {
    return static_coeffs[static_cast<std::size_t>(a) * subcarriers + k];
}

std::complex<double> SampleRealization::dynamic_component(std::uint32_t a, std::uint32_t k,
                                                          std::uint32_t t) const {
    std::complex<double> acc = 0.0;
    const std::size_t paths = tau0.size();
    for (std::size_t l = 0; l < paths; ++l) {
        const double al = alpha[l * antennas + a];
        const double ph = -kTwoPi * tau(static_cast<std::uint32_t>(l), k, t);
        acc += al * std::complex<double>(std::cos(ph), std::sin(ph));
    }
    return acc;
}

SampleRealization realize_sample(const SceneConfig& scene, std::uint32_t class_id,
                                 std::uint32_t sample_idx) {
    if (class_id >= scene.class_count)
        throw ConfigError("realize_sample: class id out of range");
    if (sample_idx >= scene.samples_per_class)
        throw ConfigError("realize_sample: sample index out of range");
    const std::uint64_t g =
        static_cast<std::uint64_t>(class_id) * scene.samples_per_class + sample_idx;

    SampleRealization r;
    r.antennas = scene.antennas;
    r.subcarriers = scene.subcarriers;
    r.packets = scene.packets_raw;
    r.class_id = class_id;
    r.subcarrier_spread = scene.dynamic.subcarrier_spread;
    r.tmpl = scene.dynamic.classes.empty() ? ClassTemplate{} : scene.dynamic.classes[class_id];

    Rng rs = derive_rng(scene.seed, {stream::static_paths, g});
    r.static_coeffs.resize(static_cast<std::size_t>(scene.antennas) * scene.subcarriers);
    for (auto& c : r.static_coeffs) {
        const double mag = scene.static_paths.magnitude_max * rs.next_double();
        const double ph = kTwoPi * rs.next_double();
        c = {mag * std::cos(ph), mag * std::sin(ph)};
    }

    Rng rd = derive_rng(scene.seed, {stream::dynamic_paths, g});
    const std::uint32_t paths = scene.dynamic.path_count;
    r.tau0.resize(paths);
    r.rate.resize(paths);
    r.alpha.resize(static_cast<std::size_t>(paths) * scene.antennas);
    for (std::uint32_t l = 0; l < paths; ++l) {
        r.tau0[l] = rd.next_double();
        r.rate[l] = rd.uniform(0.7, 1.3);
        for (std::uint32_t a = 0; a < scene.antennas; ++a)
            r.alpha[static_cast<std::size_t>(l) * scene.antennas + a] =
                rd.uniform(scene.dynamic.attenuation_min, scene.dynamic.attenuation_max);
    }
    r.template_phase = rd.next_double();

    Rng re = derive_rng(scene.seed, {stream::phase_offset, g});
    switch (scene.phase_offset_mode) {
    case PhaseOffsetMode::none:
        r.epsilon_zero = true;
        break;
    case PhaseOffsetMode::constant: {
        r.epsilon_zero = false;
        r.epsilon_t.assign(scene.packets_raw, re.next_double());
        break;
    }
    case PhaseOffsetMode::per_packet_random: {
        r.epsilon_zero = false;
        r.epsilon_t.resize(scene.packets_raw);
        for (auto& e : r.epsilon_t)
            e = re.next_double();
        break;
    }
    }
    return r;
}

csi::CsiTensor render_sample(const SceneConfig& scene, const SampleRealization& r,
                             std::uint32_t class_id, std::uint32_t sample_idx) {
    const std::uint32_t A = scene.antennas, K = scene.subcarriers, T = scene.packets_raw;
    const std::uint64_t g =
        static_cast<std::uint64_t>(class_id) * scene.samples_per_class + sample_idx;

    std::vector<std::complex<double>> clean(static_cast<std::size_t>(A) * K * T);
    double power_acc = 0.0;
    std::size_t idx = 0;
    for (std::uint32_t a = 0; a < A; ++a) {
        for (std::uint32_t k = 0; k < K; ++k) {
            const std::complex<double> hs = r.static_coeff(a, k);
            for (std::uint32_t t = 0; t < T; ++t, ++idx) {
                std::complex<double> v = hs + r.dynamic_component(a, k, t);
                const double eps = r.epsilon(k, t);
                if (eps != 0.0) {
                    const double ph = -kTwoPi * eps;
                    v *= std::complex<double>(std::cos(ph), std::sin(ph));
                }
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw DataError("trajectory evaluation overflowed to a non-finite value");
                clean[idx] = v;
                power_acc += std::norm(v);
            }
        }
    }

    csi::CsiTensor out(A, K, T);
    if (scene.noise_snr_db) {
        const double mean_power = power_acc / static_cast<double>(clean.size());
        const double noise_power = mean_power * std::pow(10.0, -*scene.noise_snr_db / 10.0);
        const double sigma = std::sqrt(noise_power / 2.0);
        Rng rn = derive_rng(scene.seed, {stream::noise, g});
        for (std::size_t i = 0; i < clean.size(); ++i) {
            const double nr = sigma * rn.normal();
            const double ni = sigma * rn.normal();
            out.data()[i] = {static_cast<float>(clean[i].real() + nr),
                             static_cast<float>(clean[i].imag() + ni)};
        }
    } else {
        for (std::size_t i = 0; i < clean.size(); ++i)
            out.data()[i] = {static_cast<float>(clean[i].real()),
                             static_cast<float>(clean[i].imag())};
    }
    return out;
}

std::complex<double> dynamic_component(const SceneConfig& scene, std::uint32_t class_id,
                                       std::uint32_t sample_idx, std::uint32_t a, std::uint32_t k,
                                       std::uint32_t t) {
    if (a >= scene.antennas || k >= scene.subcarriers || t >= scene.packets_raw)
        throw ConfigError("dynamic_component: index out of range");
    return realize_sample(scene, class_id, sample_idx).dynamic_component(a, k, t);
}

csi::Dataset synthesize(const SceneConfig& scene) {
    scene.validate();
    csi::Dataset ds;
    ds.shape_a = scene.antennas;
    ds.shape_k = scene.subcarriers;
    ds.shape_t = scene.packets_raw;
    ds.class_names = scene.class_names;
    if (ds.class_names.empty())
        for (std::uint32_t c = 0; c < scene.class_count; ++c)
            ds.class_names.push_back("class" + std::to_string(c));

    char digest_hex[17];
    std::snprintf(digest_hex, sizeof(digest_hex), "%016llx",
                  static_cast<unsigned long long>(scene.digest()));
    nlohmann::json meta;
    meta["generator_seed"] = scene.seed;
    meta["scene_digest"] = std::string(digest_hex);
    meta["scene"] = nlohmann::json::parse(scene.canonical_json());
    ds.metadata_json = meta.dump();

    ds.samples.reserve(static_cast<std::size_t>(scene.class_count) * scene.samples_per_class);
    for (std::uint32_t c = 0; c < scene.class_count; ++c) {
        for (std::uint32_t s = 0; s < scene.samples_per_class; ++s) {
            csi::LabeledSample sample;
            const SampleRealization r = realize_sample(scene, c, s);
            sample.csi = render_sample(scene, r, c, s);
            sample.label = c;
            ds.samples.push_back(std::move(sample));
        }
    }
    ds.validate();
    return ds;
}

} // namespace arcssl::synth
