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

#include "arcssl/nn_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace arcssl::nn {

using nlohmann::json;

std::vector<std::string> registered_architectures() { return {"conv-small", "mlp-small"}; }

namespace {

void check_conv_small_shape(std::uint32_t k, std::uint32_t t) {
    if (k % 6 != 0 || t % 20 != 0 || t < 40)
        throw ConfigError("conv-small requires subcarriers % 6 == 0 and packets % 20 == 0 "
                          "(>= 40), got " +
                          std::to_string(k) + "x" + std::to_string(t));
}

} // namespace

Network<float> build_encoder(const std::string& arch, std::uint32_t k, std::uint32_t t,
                             std::uint32_t d, std::uint64_t init_seed) {
    if (arch == "conv-small") {
        check_conv_small_shape(k, t);
        // the dense head sees a full-subcarrier, ~(T/20)-bin temporal grid:
        // coarse in frequency, fine enough in time for sub-10-cycle dynamics
        Network<float> net(Shape{1, k, t}, arch);
        const std::uint32_t w2 = t / 20 - 1;
        const std::uint32_t kw3 = std::min<std::uint32_t>(5, w2);
        net.add_conv(12, 3, 5, 3, 5).add_relu().add_pool(2, 2);
        net.add_conv(24, 1, 3, 1, 1).add_relu().add_pool(1, 2);
        net.add_conv(48, k / 6, kw3, 1, 1).add_relu();
        net.add_dense(d);
        net.finalize(init_seed);
        return net;
    }
    if (arch == "mlp-small") {
        Network<float> net(Shape{1, k, t}, arch);
        net.add_dense(128).add_relu().add_dense(d);
        net.finalize(init_seed);
        return net;
    }
    throw ConfigError("unknown encoder architecture '" + arch + "'");
}

Network<float> build_decoder(const std::string& arch, std::uint32_t k, std::uint32_t t,
                             std::uint32_t d, std::uint64_t init_seed) {
    if (arch == "conv-small") {
        check_conv_small_shape(k, t);
        const std::uint32_t w2 = t / 20 - 1;
        const std::uint32_t kw3 = std::min<std::uint32_t>(5, w2);
        Network<float> net(Shape{d, 1, 1}, arch + "-decoder");
        net.add_dense(48u * (w2 - kw3 + 1)).add_relu();
        // mirror of the encoder tail: restore the (K/6) x w2 grid first
        net.add_reshape(Shape{48, 1, w2 - kw3 + 1});
        net.add_conv_transpose(24, k / 6, kw3, 1, 1);
        net.add_relu().add_upsample(1, 2);
        net.add_conv_transpose(12, 1, 3, 1, 1).add_relu().add_upsample(2, 2);
        net.add_conv_transpose(1, 3, 5, 3, 5);
        net.finalize(init_seed);
        if (!(net.output_shape() == Shape{1, k, t}))
            throw ConfigError("conv-small decoder does not reproduce the input grid");
        return net;
    }
    if (arch == "mlp-small") {
        Network<float> net(Shape{d, 1, 1}, arch + "-decoder");
        net.add_dense(128).add_relu().add_dense(k * t);
        net.finalize(init_seed);
        return net;
    }
    throw ConfigError("unknown decoder architecture '" + arch + "'");
}

Network<float> build_probe_net(const std::string& kind, std::uint32_t in_dim,
                               std::uint32_t class_count, std::uint64_t init_seed) {
    if (class_count < 2)
        throw ConfigError("probe needs at least 2 classes");
    Network<float> net(Shape{in_dim, 1, 1}, "probe-" + kind);
    if (kind == "linear") {
        net.add_dense(class_count);
    } else if (kind == "mlp2") {
        net.add_dense(128).add_relu().add_dense(class_count);
    } else {
        throw ConfigError("unknown probe kind '" + kind + "' (expected linear or mlp2)");
    }
    net.finalize(init_seed);
    return net;
}

void save_network(const Network<float>& net, const std::filesystem::path& bin_path,
                  const std::filesystem::path& desc_path, const std::string& role,
                  std::uint32_t feature_dim) {
    std::ofstream bin(bin_path, std::ios::binary | std::ios::trunc);
    if (!bin)
        throw DataError("cannot open for writing: " + bin_path.string());
    bin.write(reinterpret_cast<const char*>(net.params().data()),
              static_cast<std::streamsize>(net.params().size() * sizeof(float)));
    if (!bin)
        throw DataError("I/O failure while writing " + bin_path.string());

    if (role != "encoder" && role != "probe")
        throw ConfigError("only encoder and probe checkpoints are supported, got role '" + role +
                          "'");
    json desc;
    // role selects which registry builder reconstructs the stack on load
    desc["arch"] = net.arch_id();
    desc["role"] = role;
    const Shape in = net.input_shape();
    if (role == "probe")
        desc["input"] = {in.c, 1u};
    else
        desc["input"] = {in.h, in.w};
    desc["feature_dim"] = feature_dim;
    desc["param_count"] = net.param_count();
    desc["dtype"] = "f32";
    std::ofstream ds(desc_path, std::ios::trunc);
    if (!ds)
        throw DataError("cannot open for writing: " + desc_path.string());
    ds << desc.dump(2) << "\n";
}

Network<float> load_network(const std::filesystem::path& bin_path,
                            const std::filesystem::path& desc_path) {
    std::ifstream ds(desc_path);
    if (!ds)
        throw DataError("cannot open descriptor: " + desc_path.string());
    json desc;
    try {
        ds >> desc;
    } catch (const json::exception& e) {
        throw DataError("malformed checkpoint descriptor: " + std::string(e.what()));
    }
    const std::string arch = desc.at("arch").get<std::string>();
    const std::string role = desc.at("role").get<std::string>();
    const auto feature_dim = desc.at("feature_dim").get<std::uint32_t>();
    const auto param_count = desc.at("param_count").get<std::size_t>();

    Network<float> net;
    if (role == "encoder" || role == "probe") {
        const auto dims = desc.at("input").get<std::vector<std::uint32_t>>();
        if (dims.size() != 2)
            throw DataError("checkpoint descriptor input must have 2 dims");
        if (role == "encoder")
            net = build_encoder(arch, dims[0], dims[1], feature_dim, 0);
        else
            net = build_probe_net(arch.starts_with("probe-") ? arch.substr(6) : arch,
                                  dims[0] * dims[1], feature_dim, 0);
    } else {
        throw DataError("unknown checkpoint role '" + role + "'");
    }

    if (net.param_count() != param_count)
        throw DataError("checkpoint parameter count mismatch: descriptor says " +
                        std::to_string(param_count) + ", architecture has " +
                        std::to_string(net.param_count()));
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin)
        throw DataError("cannot open checkpoint: " + bin_path.string());
    bin.read(reinterpret_cast<char*>(net.params().data()),
             static_cast<std::streamsize>(param_count * sizeof(float)));
    if (!bin || bin.gcount() != static_cast<std::streamsize>(param_count * sizeof(float)))
        throw DataError("truncated checkpoint: " + bin_path.string());
    return net;
}

} // namespace arcssl::nn
