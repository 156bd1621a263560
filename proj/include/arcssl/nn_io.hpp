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

#include "arcssl/nn.hpp"

#include <filesystem>
#include <string>

namespace arcssl::nn {

/**
 * Architecture registry, addressed by string id in configs.
 *
 *  "conv-small": 3 conv stages with pooling over the (k, t) grid, then a
 *                linear head to the feature dimension. Requires K % 6 == 0
 *                and T % 100 == 0.
 *  "mlp-small":  flatten -> 128-wide hidden layer -> feature dimension.
 *
 * Decoders mirror their encoder (transposed convolutions / dense stack) and
 * map a feature vector back to the (K, T) grid.
 */
std::vector<std::string> registered_architectures();

Network<float> build_encoder(const std::string& arch, std::uint32_t subcarriers,
                             std::uint32_t packets, std::uint32_t feature_dim,
                             std::uint64_t init_seed);

Network<float> build_decoder(const std::string& arch, std::uint32_t subcarriers,
                             std::uint32_t packets, std::uint32_t feature_dim,
                             std::uint64_t init_seed);

/// kind is "linear" or "mlp2" (hidden width 128).
Network<float> build_probe_net(const std::string& kind, std::uint32_t in_dim,
                               std::uint32_t class_count, std::uint64_t init_seed);

// Checkpoints: parameters as little-endian f32, plus a JSON descriptor
// (architecture id, role, input shape, feature dim, parameter count).
void save_network(const Network<float>& net, const std::filesystem::path& bin_path,
                  const std::filesystem::path& desc_path, const std::string& role,
                  std::uint32_t feature_dim);

Network<float> load_network(const std::filesystem::path& bin_path,
                            const std::filesystem::path& desc_path);

} // namespace arcssl::nn
