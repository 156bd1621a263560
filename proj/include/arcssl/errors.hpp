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

#include <stdexcept>
#include <string>

namespace arcssl {

/// Error categories map 1:1 onto CLI exit codes (see tools/arcssl_main.cpp).
enum class ErrorCategory : int {
    generic = 1,
    config = 2,
    data = 3,
    training = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), category_(cat) {}
    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

/// Invalid or inconsistent configuration (bad JSON, invariant violations in configs).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(ErrorCategory::config, msg) {}
};

/// Malformed, truncated or otherwise unusable data (container files, tensors).
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(ErrorCategory::data, msg) {}
};

/// Failures inside a training loop (non-finite loss, mismatched shapes at run time).
class TrainingError : public Error {
public:
    explicit TrainingError(const std::string& msg) : Error(ErrorCategory::training, msg) {}
};

} // namespace arcssl
