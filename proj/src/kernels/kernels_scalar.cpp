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

// Scalar reference kernels. These define the semantics; the AVX2 variants are
// tested for equivalence against them.

#include "kernels_impl.hpp"

#include <cmath>

namespace arcssl::kernels::detail {

namespace {

template <class T>
T dot_scalar(const T* x, const T* y, std::size_t n) {
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i] * y[i];
    return acc;
}

template <class T>
T sum_scalar(const T* x, std::size_t n) {
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i];
    return acc;
}

template <class T>
T sumsq_scalar(const T* x, std::size_t n) {
    T acc = T(0);
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i] * x[i];
    return acc;
}

template <class T>
void axpy_scalar(T a, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

template <class T>
void scale_add_scalar(T beta, T* y, T alpha, const T* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] = beta * y[i] + alpha * x[i];
}

template <class T>
void affine_scalar(T a, T b, const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] = a * x[i] + b;
}

template <class T>
void relu_scalar(const T* x, T* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] = x[i] > T(0) ? x[i] : T(0);
}

template <class T>
void relu_grad_scalar(const T* x, const T* dy, T* dx, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        dx[i] = x[i] > T(0) ? dy[i] : T(0);
}

template <class T>
void cabs_scalar(const T* iq, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        T re = iq[2 * i];
        T im = iq[2 * i + 1];
        out[i] = std::sqrt(re * re + im * im);
    }
}

template <class T>
void cmul_conj_scalar(const T* a, const T* b, T* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        T ar = a[2 * i], ai = a[2 * i + 1];
        T br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br + ai * bi;
        out[2 * i + 1] = ai * br - ar * bi;
    }
}

template <class T>
KernelTable<T> make_scalar_table() {
    return KernelTable<T>{
        &dot_scalar<T>,      &sum_scalar<T>,       &sumsq_scalar<T>,
        &axpy_scalar<T>,     &scale_add_scalar<T>, &affine_scalar<T>,
        &relu_scalar<T>,     &relu_grad_scalar<T>, &cabs_scalar<T>,
        &cmul_conj_scalar<T>,
    };
}

} // namespace

const KernelTable<float>& scalar_table_f32() {
    static const KernelTable<float> t = make_scalar_table<float>();
    return t;
}

const KernelTable<double>& scalar_table_f64() {
    static const KernelTable<double> t = make_scalar_table<double>();
    return t;
}

} // namespace arcssl::kernels::detail
