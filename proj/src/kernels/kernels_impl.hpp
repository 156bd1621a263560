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

// Internal: per-backend function tables. Not installed.

#pragma once

#include <cstddef>

namespace arcssl::kernels::detail {

template <class T>
struct KernelTable {
    T (*dot)(const T*, const T*, std::size_t);
    T (*sum)(const T*, std::size_t);
    T (*sumsq)(const T*, std::size_t);
    void (*axpy)(T, const T*, T*, std::size_t);
    void (*scale_add)(T, T*, T, const T*, std::size_t);
    void (*affine)(T, T, const T*, T*, std::size_t);
    void (*relu)(const T*, T*, std::size_t);
    void (*relu_grad)(const T*, const T*, T*, std::size_t);
    void (*cabs)(const T*, T*, std::size_t);
    void (*cmul_conj)(const T*, const T*, T*, std::size_t);
};

const KernelTable<float>& scalar_table_f32();
const KernelTable<double>& scalar_table_f64();

#if defined(ARCSSL_HAVE_AVX2)
const KernelTable<float>& avx2_table_f32();
const KernelTable<double>& avx2_table_f64();
#endif

} // namespace arcssl::kernels::detail
