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

#include <cstddef>
#include <string>

namespace arcssl::kernels {

/**
 * Data-parallel inner loops used throughout the project (preprocessing,
 * network forward/backward, optimizer updates).
 *
 * Every kernel has a scalar reference implementation and, on x86-64, an AVX2
 * variant. The backend is selected once at process start from CPUID, and can
 * be overridden with the ARC_SSL_KERNELS environment variable ("scalar",
 * "avx2", "auto") or force_backend() in tests.
 *
 * Cross-backend contract:
 *  - element-wise kernels (axpy, scale_add, affine, relu*, cabs, cmul_conj)
 *    produce bit-identical results on scalar and AVX2 backends: the per-entry
 *    rounding sequence is the same and no FMA contraction is used;
 *  - reduction kernels (dot, sum, sumsq) associate differently per backend
 *    and agree only up to rounding. Determinism is guaranteed within one
 *    backend, which is fixed for the lifetime of the process unless a test
 *    forces it.
 */
enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool avx2_supported();

/// Test hook: switch the dispatch table. Throws ConfigError if unsupported.
void force_backend(Backend b);

// --- reductions -----------------------------------------------------------

float dot(const float* x, const float* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);

float sum(const float* x, std::size_t n);
double sum(const double* x, std::size_t n);

float sumsq(const float* x, std::size_t n);
double sumsq(const double* x, std::size_t n);

// --- element-wise ----------------------------------------------------------

/// y[i] += a * x[i]
void axpy(float a, const float* x, float* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);

/// y[i] = beta * y[i] + alpha * x[i]  (momentum updates, EMA of parameters)
void scale_add(float beta, float* y, float alpha, const float* x, std::size_t n);
void scale_add(double beta, double* y, double alpha, const double* x, std::size_t n);

/// y[i] = a * x[i] + b  (standardization)
void affine(float a, float b, const float* x, float* y, std::size_t n);
void affine(double a, double b, const double* x, double* y, std::size_t n);

/// y[i] = max(x[i], 0)
void relu(const float* x, float* y, std::size_t n);
void relu(const double* x, double* y, std::size_t n);

/// dx[i] = x[i] > 0 ? dy[i] : 0
void relu_grad(const float* x, const float* dy, float* dx, std::size_t n);
void relu_grad(const double* x, const double* dy, double* dx, std::size_t n);

/// out[i] = |z_i| for n interleaved (re, im) complex values.
void cabs(const float* iq, float* out, std::size_t n);
void cabs(const double* iq, double* out, std::size_t n);

/// out_i = a_i * conj(b_i) for n interleaved complex values.
/// Entry formulas: re = a.re*b.re + a.im*b.im, im = a.im*b.re - a.re*b.im.
void cmul_conj(const float* a, const float* b, float* out, std::size_t n);
void cmul_conj(const double* a, const double* b, double* out, std::size_t n);

} // namespace arcssl::kernels
