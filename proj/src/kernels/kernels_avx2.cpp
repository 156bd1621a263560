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

// AVX2 kernel variants. Element-wise kernels replicate the scalar rounding
// sequence exactly (separate mul/add, no FMA); reductions use multiple vector
// accumulators and therefore associate differently from the scalar reference.
// This translation unit is compiled with -mavx2 -ffp-contract=off; the scalar
// tail loops below stay bit-compatible with kernels_scalar.cpp.

#include "kernels_impl.hpp"

#include <cmath>
#include <immintrin.h>

namespace arcssl::kernels::detail {

namespace {

// --- float -----------------------------------------------------------------

inline float hsum(__m256 v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 sh = _mm_movehdup_ps(lo);
    __m128 s = _mm_add_ps(lo, sh);
    sh = _mm_movehl_ps(sh, s);
    s = _mm_add_ss(s, sh);
    return _mm_cvtss_f32(s);
}

float dot_avx2(const float* x, const float* y, std::size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_add_ps(acc0, _mm256_mul_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
        acc1 = _mm256_add_ps(acc1, _mm256_mul_ps(_mm256_loadu_ps(x + i + 8), _mm256_loadu_ps(y + i + 8)));
    }
    for (; i + 8 <= n; i += 8)
        acc0 = _mm256_add_ps(acc0, _mm256_mul_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
    float acc = hsum(_mm256_add_ps(acc0, acc1));
    for (; i < n; ++i)
        acc += x[i] * y[i];
    return acc;
}

float sum_avx2(const float* x, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
    float a = hsum(acc);
    for (; i < n; ++i)
        a += x[i];
    return a;
}

float sumsq_avx2(const float* x, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 v = _mm256_loadu_ps(x + i);
        acc = _mm256_add_ps(acc, _mm256_mul_ps(v, v));
    }
    float a = hsum(acc);
    for (; i < n; ++i)
        a += x[i] * x[i];
    return a;
}

void axpy_avx2(float a, const float* x, float* y, std::size_t n) {
    __m256 va = _mm256_set1_ps(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 vy = _mm256_loadu_ps(y + i);
        vy = _mm256_add_ps(vy, _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
        _mm256_storeu_ps(y + i, vy);
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

void scale_add_avx2(float beta, float* y, float alpha, const float* x, std::size_t n) {
    __m256 vb = _mm256_set1_ps(beta);
    __m256 va = _mm256_set1_ps(alpha);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 t = _mm256_add_ps(_mm256_mul_ps(vb, _mm256_loadu_ps(y + i)),
                                 _mm256_mul_ps(va, _mm256_loadu_ps(x + i)));
        _mm256_storeu_ps(y + i, t);
    }
    for (; i < n; ++i)
        y[i] = beta * y[i] + alpha * x[i];
}

void affine_avx2(float a, float b, const float* x, float* y, std::size_t n) {
    __m256 va = _mm256_set1_ps(a);
    __m256 vb = _mm256_set1_ps(b);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_add_ps(_mm256_mul_ps(va, _mm256_loadu_ps(x + i)), vb));
    for (; i < n; ++i)
        y[i] = a * x[i] + b;
}

void relu_avx2(const float* x, float* y, std::size_t n) {
    __m256 z = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_max_ps(_mm256_loadu_ps(x + i), z));
    for (; i < n; ++i)
        y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_grad_avx2(const float* x, const float* dy, float* dx, std::size_t n) {
    __m256 z = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(x + i), z, _CMP_GT_OQ);
        _mm256_storeu_ps(dx + i, _mm256_and_ps(mask, _mm256_loadu_ps(dy + i)));
    }
    for (; i < n; ++i)
        dx[i] = x[i] > 0.0f ? dy[i] : 0.0f;
}

void cabs_avx2(const float* iq, float* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256 v0 = _mm256_loadu_ps(iq + 2 * i);
        __m256 v1 = _mm256_loadu_ps(iq + 2 * i + 8);
        // separate (re, im); shuffle leaves 64-bit chunks out of order across lanes
        __m256 re = _mm256_shuffle_ps(v0, v1, _MM_SHUFFLE(2, 0, 2, 0));
        __m256 im = _mm256_shuffle_ps(v0, v1, _MM_SHUFFLE(3, 1, 3, 1));
        re = _mm256_castpd_ps(_mm256_permute4x64_pd(_mm256_castps_pd(re), _MM_SHUFFLE(3, 1, 2, 0)));
        im = _mm256_castpd_ps(_mm256_permute4x64_pd(_mm256_castps_pd(im), _MM_SHUFFLE(3, 1, 2, 0)));
        __m256 m = _mm256_sqrt_ps(_mm256_add_ps(_mm256_mul_ps(re, re), _mm256_mul_ps(im, im)));
        _mm256_storeu_ps(out + i, m);
    }
    for (; i < n; ++i) {
        float re = iq[2 * i], im = iq[2 * i + 1];
        out[i] = std::sqrt(re * re + im * im);
    }
}

void cmul_conj_avx2(const float* a, const float* b, float* out, std::size_t n) {
    const __m256 signs = _mm256_set1_ps(-0.0f);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256 va = _mm256_loadu_ps(a + 2 * i);
        __m256 vb = _mm256_loadu_ps(b + 2 * i);
        __m256 br = _mm256_moveldup_ps(vb);             // b.re duplicated
        __m256 bi = _mm256_movehdup_ps(vb);             // b.im duplicated
        __m256 asw = _mm256_permute_ps(va, 0xB1);       // (a.im, a.re) pairs
        __m256 t1 = _mm256_mul_ps(va, br);              // (ar*br, ai*br)
        __m256 t2 = _mm256_mul_ps(asw, bi);             // (ai*bi, ar*bi)
        // even: t1 + t2, odd: t1 - t2  == addsub(t1, -t2)
        _mm256_storeu_ps(out + 2 * i, _mm256_addsub_ps(t1, _mm256_xor_ps(t2, signs)));
    }
    for (; i < n; ++i) {
        float ar = a[2 * i], ai = a[2 * i + 1];
        float br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br + ai * bi;
        out[2 * i + 1] = ai * br - ar * bi;
    }
}

// --- double ----------------------------------------------------------------

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i)
        acc += x[i] * y[i];
    return acc;
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double a = hsum(acc);
    for (; i < n; ++i)
        a += x[i];
    return a;
}

double sumsq_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    double a = hsum(acc);
    for (; i < n; ++i)
        a += x[i] * x[i];
    return a;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

void scale_add_avx2(double beta, double* y, double alpha, const double* x, std::size_t n) {
    __m256d vb = _mm256_set1_pd(beta);
    __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_mul_pd(vb, _mm256_loadu_pd(y + i)),
                                  _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, t);
    }
    for (; i < n; ++i)
        y[i] = beta * y[i] + alpha * x[i];
}

void affine_avx2(double a, double b, const double* x, double* y, std::size_t n) {
    __m256d va = _mm256_set1_pd(a);
    __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(x + i)), vb));
    for (; i < n; ++i)
        y[i] = a * x[i] + b;
}

void relu_avx2(const double* x, double* y, std::size_t n) {
    __m256d z = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(x + i), z));
    for (; i < n; ++i)
        y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_grad_avx2(const double* x, const double* dy, double* dx, std::size_t n) {
    __m256d z = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(x + i), z, _CMP_GT_OQ);
        _mm256_storeu_pd(dx + i, _mm256_and_pd(mask, _mm256_loadu_pd(dy + i)));
    }
    for (; i < n; ++i)
        dx[i] = x[i] > 0.0 ? dy[i] : 0.0;
}

void cabs_avx2(const double* iq, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v0 = _mm256_loadu_pd(iq + 2 * i);     // r0 i0 r1 i1
        __m256d v1 = _mm256_loadu_pd(iq + 2 * i + 4); // r2 i2 r3 i3
        __m256d re = _mm256_unpacklo_pd(v0, v1);      // r0 r2 r1 r3
        __m256d im = _mm256_unpackhi_pd(v0, v1);      // i0 i2 i1 i3
        __m256d m = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(re, re), _mm256_mul_pd(im, im)));
        m = _mm256_permute4x64_pd(m, _MM_SHUFFLE(3, 1, 2, 0));
        _mm256_storeu_pd(out + i, m);
    }
    for (; i < n; ++i) {
        double re = iq[2 * i], im = iq[2 * i + 1];
        out[i] = std::sqrt(re * re + im * im);
    }
}

void cmul_conj_avx2(const double* a, const double* b, double* out, std::size_t n) {
    const __m256d signs = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(a + 2 * i);
        __m256d vb = _mm256_loadu_pd(b + 2 * i);
        __m256d br = _mm256_movedup_pd(vb);
        __m256d bi = _mm256_permute_pd(vb, 0xF);
        __m256d asw = _mm256_permute_pd(va, 0x5);
        __m256d t1 = _mm256_mul_pd(va, br);
        __m256d t2 = _mm256_mul_pd(asw, bi);
        _mm256_storeu_pd(out + 2 * i, _mm256_addsub_pd(t1, _mm256_xor_pd(t2, signs)));
    }
    for (; i < n; ++i) {
        double ar = a[2 * i], ai = a[2 * i + 1];
        double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br + ai * bi;
        out[2 * i + 1] = ai * br - ar * bi;
    }
}

template <class T>
KernelTable<T> make_avx2_table() {
    return KernelTable<T>{
        [](const T* x, const T* y, std::size_t n) { return dot_avx2(x, y, n); },
        [](const T* x, std::size_t n) { return sum_avx2(x, n); },
        [](const T* x, std::size_t n) { return sumsq_avx2(x, n); },
        [](T a, const T* x, T* y, std::size_t n) { axpy_avx2(a, x, y, n); },
        [](T beta, T* y, T alpha, const T* x, std::size_t n) { scale_add_avx2(beta, y, alpha, x, n); },
        [](T a, T b, const T* x, T* y, std::size_t n) { affine_avx2(a, b, x, y, n); },
        [](const T* x, T* y, std::size_t n) { relu_avx2(x, y, n); },
        [](const T* x, const T* dy, T* dx, std::size_t n) { relu_grad_avx2(x, dy, dx, n); },
        [](const T* iq, T* out, std::size_t n) { cabs_avx2(iq, out, n); },
        [](const T* a, const T* b, T* out, std::size_t n) { cmul_conj_avx2(a, b, out, n); },
    };
}

} // namespace

const KernelTable<float>& avx2_table_f32() {
    static const KernelTable<float> t = make_avx2_table<float>();
    return t;
}

const KernelTable<double>& avx2_table_f64() {
    static const KernelTable<double> t = make_avx2_table<double>();
    return t;
}

} // namespace arcssl::kernels::detail
