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

#include "arcssl/kernels.hpp"

#include "arcssl/errors.hpp"
#include "kernels_impl.hpp"

#include <cstdlib>
#include <cstring>

namespace arcssl::kernels {

namespace {

using detail::KernelTable;

struct Dispatch {
    Backend backend;
    const KernelTable<float>* f32;
    const KernelTable<double>* f64;
};

bool cpu_has_avx2() {
#if defined(ARCSSL_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Dispatch make_dispatch(Backend b) {
#if defined(ARCSSL_HAVE_AVX2)
    if (b == Backend::avx2)
        return {Backend::avx2, &detail::avx2_table_f32(), &detail::avx2_table_f64()};
#endif
    return {Backend::scalar, &detail::scalar_table_f32(), &detail::scalar_table_f64()};
}

Backend initial_backend() {
    const char* env = std::getenv("ARC_SSL_KERNELS");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0)
            return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!cpu_has_avx2())
                throw ConfigError("ARC_SSL_KERNELS=avx2 requested but AVX2 is unavailable");
            return Backend::avx2;
        }
        if (std::strcmp(env, "auto") != 0)
            throw ConfigError(std::string("unknown ARC_SSL_KERNELS value: ") + env);
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

Dispatch& dispatch() {
    static Dispatch d = make_dispatch(initial_backend());
    return d;
}

} // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool avx2_supported() { return cpu_has_avx2(); }

void force_backend(Backend b) {
    if (b == Backend::avx2 && !cpu_has_avx2())
        throw ConfigError("cannot force avx2 backend: not supported on this CPU/build");
    dispatch() = make_dispatch(b);
}

float dot(const float* x, const float* y, std::size_t n) { return dispatch().f32->dot(x, y, n); }
double dot(const double* x, const double* y, std::size_t n) { return dispatch().f64->dot(x, y, n); }

float sum(const float* x, std::size_t n) { return dispatch().f32->sum(x, n); }
double sum(const double* x, std::size_t n) { return dispatch().f64->sum(x, n); }

float sumsq(const float* x, std::size_t n) { return dispatch().f32->sumsq(x, n); }
double sumsq(const double* x, std::size_t n) { return dispatch().f64->sumsq(x, n); }

void axpy(float a, const float* x, float* y, std::size_t n) { dispatch().f32->axpy(a, x, y, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { dispatch().f64->axpy(a, x, y, n); }

void scale_add(float beta, float* y, float alpha, const float* x, std::size_t n) {
    dispatch().f32->scale_add(beta, y, alpha, x, n);
}
void scale_add(double beta, double* y, double alpha, const double* x, std::size_t n) {
    dispatch().f64->scale_add(beta, y, alpha, x, n);
}

void affine(float a, float b, const float* x, float* y, std::size_t n) {
    dispatch().f32->affine(a, b, x, y, n);
}
void affine(double a, double b, const double* x, double* y, std::size_t n) {
    dispatch().f64->affine(a, b, x, y, n);
}

void relu(const float* x, float* y, std::size_t n) { dispatch().f32->relu(x, y, n); }
void relu(const double* x, double* y, std::size_t n) { dispatch().f64->relu(x, y, n); }

void relu_grad(const float* x, const float* dy, float* dx, std::size_t n) {
    dispatch().f32->relu_grad(x, dy, dx, n);
}
void relu_grad(const double* x, const double* dy, double* dx, std::size_t n) {
    dispatch().f64->relu_grad(x, dy, dx, n);
}

void cabs(const float* iq, float* out, std::size_t n) { dispatch().f32->cabs(iq, out, n); }
void cabs(const double* iq, double* out, std::size_t n) { dispatch().f64->cabs(iq, out, n); }

void cmul_conj(const float* a, const float* b, float* out, std::size_t n) {
    dispatch().f32->cmul_conj(a, b, out, n);
}
void cmul_conj(const double* a, const double* b, double* out, std::size_t n) {
    dispatch().f64->cmul_conj(a, b, out, n);
}

} // namespace arcssl::kernels
