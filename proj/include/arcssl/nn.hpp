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

#include "arcssl/errors.hpp"
#include "arcssl/kernels.hpp"
#include "arcssl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

namespace arcssl::nn {

/**
 * Minimal feed-forward stack with explicit layer-wise backpropagation.
 *
 * Everything is templated on the scalar type: production training runs in
 * float (wider SIMD lanes), gradient-check tests instantiate double. Layer
 * parameters live in one flat vector owned by the network, which makes
 * momentum updates, checkpointing and optimizer steps simple vector ops.
 *
 * Activations and per-layer scratch are kept in a caller-owned Tape so that
 * two forward passes (q and k views through one encoder) can be kept alive
 * and backpropagated independently.
 */

struct Shape {
    std::uint32_t c = 1, h = 1, w = 1;
    std::size_t size() const {
        return static_cast<std::size_t>(c) * h * w;
    }
    bool operator==(const Shape&) const = default;
};

template <class Real>
struct Tape {
    std::vector<std::vector<Real>> acts;    // acts[0] = input, acts[i+1] = layer i output
    std::vector<std::vector<Real>> extra;   // per-layer forward scratch (e.g. im2col)
    std::vector<std::vector<Real>> gbuf;    // gradient buffers mirroring acts
    std::vector<std::vector<Real>> scratch; // per-layer backward scratch
};

template <class Real>
class Layer {
public:
    virtual ~Layer() = default;
    virtual const char* kind() const = 0;
    virtual Shape in_shape() const = 0;
    virtual Shape out_shape() const = 0;
    virtual std::unique_ptr<Layer<Real>> clone_layer() const = 0;
    virtual std::size_t param_count() const { return 0; }
    virtual void init_params(Real* /*p*/, Rng& /*rng*/) const {}

    /// y is fully overwritten; extra may be resized and kept for backward.
    virtual void forward(const Real* p, const Real* x, Real* y, std::vector<Real>& extra) const = 0;

    /// dx is fully overwritten; dp accumulates (+=).
    virtual void backward(const Real* p, const Real* x, const std::vector<Real>& extra,
                          const Real* dy, Real* dx, Real* dp,
                          std::vector<Real>& scratch) const = 0;
};

namespace detail {

template <class Real>
Real uniform_sym(Rng& rng, Real bound) {
    return static_cast<Real>((2.0 * rng.next_double() - 1.0) * static_cast<double>(bound));
}

// im2col for (c, h, w) input, valid padding.
template <class Real>
void im2col(const Real* x, std::uint32_t c, std::uint32_t h, std::uint32_t w, std::uint32_t kh,
            std::uint32_t kw, std::uint32_t sh, std::uint32_t sw, std::uint32_t oh,
            std::uint32_t ow, Real* col) {
    const std::size_t n_pos = static_cast<std::size_t>(oh) * ow;
    std::size_t row = 0;
    for (std::uint32_t ic = 0; ic < c; ++ic) {
        const Real* plane = x + static_cast<std::size_t>(ic) * h * w;
        for (std::uint32_t ki = 0; ki < kh; ++ki) {
            for (std::uint32_t kj = 0; kj < kw; ++kj, ++row) {
                Real* dst = col + row * n_pos;
                for (std::uint32_t oi = 0; oi < oh; ++oi) {
                    const Real* src = plane + static_cast<std::size_t>(oi * sh + ki) * w + kj;
                    if (sw == 1) {
                        std::memcpy(dst, src, ow * sizeof(Real));
                        dst += ow;
                    } else {
                        for (std::uint32_t oj = 0; oj < ow; ++oj)
                            *dst++ = src[static_cast<std::size_t>(oj) * sw];
                    }
                }
            }
        }
    }
}

template <class Real>
void col2im_add(const Real* col, std::uint32_t c, std::uint32_t h, std::uint32_t w,
                std::uint32_t kh, std::uint32_t kw, std::uint32_t sh, std::uint32_t sw,
                std::uint32_t oh, std::uint32_t ow, Real* x) {
    const std::size_t n_pos = static_cast<std::size_t>(oh) * ow;
    std::size_t row = 0;
    for (std::uint32_t ic = 0; ic < c; ++ic) {
        Real* plane = x + static_cast<std::size_t>(ic) * h * w;
        for (std::uint32_t ki = 0; ki < kh; ++ki) {
            for (std::uint32_t kj = 0; kj < kw; ++kj, ++row) {
                const Real* src = col + row * n_pos;
                for (std::uint32_t oi = 0; oi < oh; ++oi) {
                    Real* dst = plane + static_cast<std::size_t>(oi * sh + ki) * w + kj;
                    for (std::uint32_t oj = 0; oj < ow; ++oj)
                        dst[static_cast<std::size_t>(oj) * sw] += src[oj];
                    src += ow;
                }
            }
        }
    }
}

} // namespace detail

template <class Real>
class Conv2d final : public Layer<Real> {
public:
    Conv2d(Shape in, std::uint32_t out_c, std::uint32_t kh, std::uint32_t kw, std::uint32_t sh,
           std::uint32_t sw)
        : in_(in), out_c_(out_c), kh_(kh), kw_(kw), sh_(sh), sw_(sw) {
        if (kh == 0 || kw == 0 || sh == 0 || sw == 0 || kh > in.h || kw > in.w)
            throw ConfigError("conv2d: kernel/stride incompatible with input shape");
        oh_ = (in.h - kh) / sh + 1;
        ow_ = (in.w - kw) / sw + 1;
    }
    const char* kind() const override { return "conv2d"; }
    std::unique_ptr<Layer<Real>> clone_layer() const override {
        return std::make_unique<Conv2d<Real>>(*this);
    }
    Shape in_shape() const override { return in_; }
    Shape out_shape() const override { return {out_c_, oh_, ow_}; }
    std::size_t param_count() const override {
        return static_cast<std::size_t>(out_c_) * patch() + out_c_;
    }
    void init_params(Real* p, Rng& rng) const override {
        const Real bound = static_cast<Real>(std::sqrt(6.0 / static_cast<double>(patch())));
        const std::size_t nw = static_cast<std::size_t>(out_c_) * patch();
        for (std::size_t i = 0; i < nw; ++i)
            p[i] = detail::uniform_sym(rng, bound);
        std::fill(p + nw, p + nw + out_c_, Real(0));
    }
    void forward(const Real* p, const Real* x, Real* y, std::vector<Real>& extra) const override {
        const std::size_t n_pos = static_cast<std::size_t>(oh_) * ow_;
        extra.resize(patch() * n_pos);
        detail::im2col(x, in_.c, in_.h, in_.w, kh_, kw_, sh_, sw_, oh_, ow_, extra.data());
        const Real* bias = p + static_cast<std::size_t>(out_c_) * patch();
        for (std::uint32_t oc = 0; oc < out_c_; ++oc) {
            Real* row = y + static_cast<std::size_t>(oc) * n_pos;
            std::fill(row, row + n_pos, bias[oc]);
            const Real* wrow = p + static_cast<std::size_t>(oc) * patch();
            for (std::size_t kk = 0; kk < patch(); ++kk)
                kernels::axpy(wrow[kk], extra.data() + kk * n_pos, row, n_pos);
        }
    }
    void backward(const Real* p, const Real* /*x*/, const std::vector<Real>& extra, const Real* dy,
                  Real* dx, Real* dp, std::vector<Real>& scratch) const override {
        const std::size_t n_pos = static_cast<std::size_t>(oh_) * ow_;
        Real* dbias = dp + static_cast<std::size_t>(out_c_) * patch();
        scratch.assign(patch() * n_pos, Real(0));
        for (std::uint32_t oc = 0; oc < out_c_; ++oc) {
            const Real* dyr = dy + static_cast<std::size_t>(oc) * n_pos;
            dbias[oc] += kernels::sum(dyr, n_pos);
            Real* dwrow = dp + static_cast<std::size_t>(oc) * patch();
            const Real* wrow = p + static_cast<std::size_t>(oc) * patch();
            for (std::size_t kk = 0; kk < patch(); ++kk) {
                dwrow[kk] += kernels::dot(dyr, extra.data() + kk * n_pos, n_pos);
                kernels::axpy(wrow[kk], dyr, scratch.data() + kk * n_pos, n_pos);
            }
        }
        std::fill(dx, dx + in_.size(), Real(0));
        detail::col2im_add(scratch.data(), in_.c, in_.h, in_.w, kh_, kw_, sh_, sw_, oh_, ow_, dx);
    }

private:
    std::size_t patch() const { return static_cast<std::size_t>(in_.c) * kh_ * kw_; }
    Shape in_;
    std::uint32_t out_c_, kh_, kw_, sh_, sw_, oh_ = 0, ow_ = 0;
};

template <class Real>
class ConvTranspose2d final : public Layer<Real> {
public:
    ConvTranspose2d(Shape in, std::uint32_t out_c, std::uint32_t kh, std::uint32_t kw,
                    std::uint32_t sh, std::uint32_t sw)
        : in_(in), out_c_(out_c), kh_(kh), kw_(kw), sh_(sh), sw_(sw) {
        if (kh == 0 || kw == 0 || sh == 0 || sw == 0)
            throw ConfigError("conv_transpose2d: zero kernel or stride");
        oh_ = (in.h - 1) * sh + kh;
        ow_ = (in.w - 1) * sw + kw;
    }
    const char* kind() const override { return "conv_transpose2d"; }
    std::unique_ptr<Layer<Real>> clone_layer() const override {
        return std::make_unique<ConvTranspose2d<Real>>(*this);
    }
    Shape in_shape() const override { return in_; }
    Shape out_shape() const override { return {out_c_, oh_, ow_}; }
    std::size_t param_count() const override {
        return static_cast<std::size_t>(in_.c) * patch() + out_c_;
    }
    void init_params(Real* p, Rng& rng) const override {
        const std::size_t fan_in = static_cast<std::size_t>(in_.c) * kh_ * kw_;
        const Real bound = static_cast<Real>(std::sqrt(6.0 / static_cast<double>(fan_in)));
        const std::size_t nw = static_cast<std::size_t>(in_.c) * patch();
        for (std::size_t i = 0; i < nw; ++i)
            p[i] = detail::uniform_sym(rng, bound);
        std::fill(p + nw, p + nw + out_c_, Real(0));
    }
    void forward(const Real* p, const Real* x, Real* y, std::vector<Real>& extra) const override {
        const std::size_t n_pos = static_cast<std::size_t>(in_.h) * in_.w;
        extra.assign(patch() * n_pos, Real(0));
        for (std::uint32_t ic = 0; ic < in_.c; ++ic) {
            const Real* xr = x + static_cast<std::size_t>(ic) * n_pos;
            const Real* wrow = p + static_cast<std::size_t>(ic) * patch();
            for (std::size_t kk = 0; kk < patch(); ++kk)
                kernels::axpy(wrow[kk], xr, extra.data() + kk * n_pos, n_pos);
        }
        const Real* bias = p + static_cast<std::size_t>(in_.c) * patch();
        const std::size_t o_plane = static_cast<std::size_t>(oh_) * ow_;
        for (std::uint32_t oc = 0; oc < out_c_; ++oc)
            std::fill(y + oc * o_plane, y + (oc + 1) * o_plane, bias[oc]);
        detail::col2im_add(extra.data(), out_c_, oh_, ow_, kh_, kw_, sh_, sw_, in_.h, in_.w, y);
    }
    void backward(const Real* p, const Real* x, const std::vector<Real>& /*extra*/, const Real* dy,
                  Real* dx, Real* dp, std::vector<Real>& scratch) const override {
        const std::size_t n_pos = static_cast<std::size_t>(in_.h) * in_.w;
        scratch.resize(patch() * n_pos);
        detail::im2col(dy, out_c_, oh_, ow_, kh_, kw_, sh_, sw_, in_.h, in_.w, scratch.data());
        Real* dbias = dp + static_cast<std::size_t>(in_.c) * patch();
        const std::size_t o_plane = static_cast<std::size_t>(oh_) * ow_;
        for (std::uint32_t oc = 0; oc < out_c_; ++oc)
            dbias[oc] += kernels::sum(dy + oc * o_plane, o_plane);
        for (std::uint32_t ic = 0; ic < in_.c; ++ic) {
            const Real* xr = x + static_cast<std::size_t>(ic) * n_pos;
            Real* dxr = dx + static_cast<std::size_t>(ic) * n_pos;
            std::fill(dxr, dxr + n_pos, Real(0));
            const Real* wrow = p + static_cast<std::size_t>(ic) * patch();
            Real* dwrow = dp + static_cast<std::size_t>(ic) * patch();
            for (std::size_t kk = 0; kk < patch(); ++kk) {
                dwrow[kk] += kernels::dot(xr, scratch.data() + kk * n_pos, n_pos);
                kernels::axpy(wrow[kk], scratch.data() + kk * n_pos, dxr, n_pos);
            }
        }
    }

private:
    std::size_t patch() const { return static_cast<std::size_t>(out_c_) * kh_ * kw_; }
    Shape in_;
    std::uint32_t out_c_, kh_, kw_, sh_, sw_, oh_ = 0, ow_ = 0;
};

template <class Real>
class Relu final : public Layer<Real> {
public:
    explicit Relu(Shape in) : in_(in) {}
    const char* kind() const override { return "relu"; }
    std::unique_ptr<Layer<Real>> clone_layer() const override {
        return std::make_unique<Relu<Real>>(*this);
    }
    Shape in_shape() const override { return in_; }
    Shape out_shape() const override { return in_; }
    void forward(const Real* /*p*/, const Real* x, Real* y, std::vector<Real>&) const override {
        kernels::relu(x, y, in_.size());
    }
    void backward(const Real* /*p*/, const Real* x, const std::vector<Real>&, const Real* dy,
                  Real* dx, Real* /*dp*/, std::vector<Real>&) const override {
        kernels::relu_grad(x, dy, dx, in_.size());
    }

private:
    Shape in_;
};

template <class Real>
class AvgPool2d final : public Layer<Real> {
public:
    AvgPool2d(Shape in, std::uint32_t ph, std::uint32_t pw) : in_(in), ph_(ph), pw_(pw) {
        if (ph == 0 || pw == 0 || in.h % ph != 0 || in.w % pw != 0)
            throw ConfigError("avg_pool2d: pooling factors must divide the input grid");
    }
    const char* kind() const override { return "avg_pool2d"; }
    std::unique_ptr<Layer<Real>> clone_layer() const override {
        return std::make_unique<AvgPool2d<Real>>(*this);
    }
    Shape in_shape() const override { return in_; }
    Shape out_shape() const override { return {in_.c, in_.h / ph_, in_.w / pw_}; }
    void forward(const Real* /*p*/, const Real* x, Real* y, std::vector<Real>&) const override {
        const Real inv = Real(1) / static_cast<Real>(ph_ * pw_);
        const std::uint32_t oh = in_.h / ph_, ow = in_.w / pw_;
        for (std::uint32_t c = 0; c < in_.c; ++c) {
            const Real* plane = x + static_cast<std::size_t>(c) * in_.h * in_.w;
            Real* out = y + static_cast<std::size_t>(c) * oh * ow;
            for (std::uint32_t i = 0; i < oh; ++i)
                for (std::uint32_t j = 0; j < ow; ++j) {
                    Real acc = Real(0);
                    for (std::uint32_t pi = 0; pi < ph_; ++pi)
                        for (std::uint32_t pj = 0; pj < pw_; ++pj)
                            acc += plane[static_cast<std::size_t>(i * ph_ + pi) * in_.w + j * pw_ + pj];
                    out[static_cast<std::size_t>(i) * ow + j] = acc * inv;
                }
        }
    }
    void backward(const Real* /*p*/, const Real* /*x*/, const std::vector<Real>&, const Real* dy,
                  Real* dx, Real* /*dp*/, std::vector<Real>&) const override {
        const Real inv = Real(1) / static_cast<Real>(ph_ * pw_);
        const std::uint32_t oh = in_.h / ph_, ow = in_.w / pw_;
        for (std::uint32_t c = 0; c < in_.c; ++c) {
            const Real* g = dy + static_cast<std::size_t>(c) * oh * ow;
            Real* plane = dx + static_cast<std::size_t>(c) * in_.h * in_.w;
            for (std::uint32_t i = 0; i < oh; ++i)
                for (std::uint32_t j = 0; j < ow; ++j) {
                    const Real v = g[static_cast<std::size_t>(i) * ow + j] * inv;
                    for (std::uint32_t pi = 0; pi < ph_; ++pi)
                        for (std::uint32_t pj = 0; pj < pw_; ++pj)
                            plane[static_cast<std::size_t>(i * ph_ + pi) * in_.w + j * pw_ + pj] = v;
                }
        }
    }

private:
    Shape in_;
    std::uint32_t ph_, pw_;
};

template <class Real>
class Upsample2d final : public Layer<Real> {
public:
    Upsample2d(Shape in, std::uint32_t fh, std::uint32_t fw) : in_(in), fh_(fh), fw_(fw) {
        if (fh == 0 || fw == 0)
            throw ConfigError("upsample2d: zero factor");
    }
    const char* kind() const override { return "upsample2d"; }
    std::unique_ptr<Layer<Real>> clone_layer() const override {
        return std::make_unique<Upsample2d<Real>>(*this);
    }
    Shape in_shape() const override { return in_; }
    Shape out_shape() const override { return {in_.c, in_.h * fh_, in_.w * fw_}; }
    void forward(const Real* /*p*/, const Real* x, Real* y, std::vector<Real>&) const override {
        const std::uint32_t oh = in_.h * fh_, ow = in_.w * fw_;
        for (std::uint32_t c = 0; c < in_.c; ++c) {
            const Real* plane = x + static_cast<std::size_t>(c) * in_.h * in_.w;
            Real* out = y + static_cast<std::size_t>(c) * oh * ow;
            for (std::uint32_t i = 0; i < oh; ++i)
                for (std::uint32_t j = 0; j < ow; ++j)
                    out[static_cast<std::size_t>(i) * ow + j] =
                        plane[static_cast<std::size_t>(i / fh_) * in_.w + j / fw_];
        }
    }
    void backward(const Real* /*p*/, const Real* /*x*/, const std::vector<Real>&, const Real* dy,
                  Real* dx, Real* /*dp*/, std::vector<Real>&) const override {
        const std::uint32_t oh = in_.h * fh_, ow = in_.w * fw_;
        std::fill(dx, dx + in_.size(), Real(0));
        for (std::uint32_t c = 0; c < in_.c; ++c) {
            const Real* g = dy + static_cast<std::size_t>(c) * oh * ow;
            Real* plane = dx + static_cast<std::size_t>(c) * in_.h * in_.w;
            for (std::uint32_t i = 0; i < oh; ++i)
                for (std::uint32_t j = 0; j < ow; ++j)
                    plane[static_cast<std::size_t>(i / fh_) * in_.w + j / fw_] +=
                        g[static_cast<std::size_t>(i) * ow + j];
        }
    }

private:
    Shape in_;
    std::uint32_t fh_, fw_;
};

template <class Real>
class Reshape final : public Layer<Real> {
public:
    Reshape(Shape in, Shape out) : in_(in), out_(out) {
        if (in.size() != out.size())
            throw ConfigError("reshape: element count mismatch");
    }
    const char* kind() const override { return "reshape"; }
    std::unique_ptr<Layer<Real>> clone_layer() const override {
        return std::make_unique<Reshape<Real>>(*this);
    }
    Shape in_shape() const override { return in_; }
    Shape out_shape() const override { return out_; }
    void forward(const Real* /*p*/, const Real* x, Real* y, std::vector<Real>&) const override {
        std::copy(x, x + in_.size(), y);
    }
    void backward(const Real* /*p*/, const Real* /*x*/, const std::vector<Real>&, const Real* dy,
                  Real* dx, Real* /*dp*/, std::vector<Real>&) const override {
        std::copy(dy, dy + in_.size(), dx);
    }

private:
    Shape in_, out_;
};

template <class Real>
class Dense final : public Layer<Real> {
public:
    Dense(Shape in, std::uint32_t out_dim) : in_(in), out_(out_dim) {
        if (out_dim == 0)
            throw ConfigError("dense: zero output dimension");
    }
    const char* kind() const override { return "dense"; }
    std::unique_ptr<Layer<Real>> clone_layer() const override {
        return std::make_unique<Dense<Real>>(*this);
    }
    Shape in_shape() const override { return in_; }
    Shape out_shape() const override { return {out_, 1, 1}; }
    std::size_t param_count() const override {
        return static_cast<std::size_t>(out_) * in_.size() + out_;
    }
    void init_params(Real* p, Rng& rng) const override {
        const Real bound = static_cast<Real>(std::sqrt(6.0 / static_cast<double>(in_.size())));
        const std::size_t nw = static_cast<std::size_t>(out_) * in_.size();
        for (std::size_t i = 0; i < nw; ++i)
            p[i] = detail::uniform_sym(rng, bound);
        std::fill(p + nw, p + nw + out_, Real(0));
    }
    void forward(const Real* p, const Real* x, Real* y, std::vector<Real>&) const override {
        const std::size_t in_dim = in_.size();
        const Real* bias = p + static_cast<std::size_t>(out_) * in_dim;
        for (std::uint32_t o = 0; o < out_; ++o)
            y[o] = bias[o] + kernels::dot(p + static_cast<std::size_t>(o) * in_dim, x, in_dim);
    }
    void backward(const Real* p, const Real* x, const std::vector<Real>&, const Real* dy, Real* dx,
                  Real* dp, std::vector<Real>&) const override {
        const std::size_t in_dim = in_.size();
        Real* dbias = dp + static_cast<std::size_t>(out_) * in_dim;
        std::fill(dx, dx + in_dim, Real(0));
        for (std::uint32_t o = 0; o < out_; ++o) {
            dbias[o] += dy[o];
            kernels::axpy(dy[o], x, dp + static_cast<std::size_t>(o) * in_dim, in_dim);
            kernels::axpy(dy[o], p + static_cast<std::size_t>(o) * in_dim, dx, in_dim);
        }
    }

private:
    Shape in_;
    std::uint32_t out_;
};

template <class Real>
class Network {
public:
    Network() = default;
    explicit Network(Shape input, std::string arch_id = "custom")
        : input_(input), arch_id_(std::move(arch_id)) {}

    Shape input_shape() const { return input_; }
    Shape output_shape() const { return layers_.empty() ? input_ : layers_.back()->out_shape(); }
    std::size_t output_dim() const { return output_shape().size(); }
    const std::string& arch_id() const { return arch_id_; }
    std::size_t layer_count() const { return layers_.size(); }

    Shape tail_shape() const { return layers_.empty() ? input_ : layers_.back()->out_shape(); }

    Network& add_conv(std::uint32_t out_c, std::uint32_t kh, std::uint32_t kw, std::uint32_t sh,
                      std::uint32_t sw) {
        layers_.push_back(std::make_unique<Conv2d<Real>>(tail_shape(), out_c, kh, kw, sh, sw));
        return *this;
    }
    Network& add_conv_transpose(std::uint32_t out_c, std::uint32_t kh, std::uint32_t kw,
                                std::uint32_t sh, std::uint32_t sw) {
        layers_.push_back(
            std::make_unique<ConvTranspose2d<Real>>(tail_shape(), out_c, kh, kw, sh, sw));
        return *this;
    }
    Network& add_relu() {
        layers_.push_back(std::make_unique<Relu<Real>>(tail_shape()));
        return *this;
    }
    Network& add_pool(std::uint32_t ph, std::uint32_t pw) {
        layers_.push_back(std::make_unique<AvgPool2d<Real>>(tail_shape(), ph, pw));
        return *this;
    }
    Network& add_upsample(std::uint32_t fh, std::uint32_t fw) {
        layers_.push_back(std::make_unique<Upsample2d<Real>>(tail_shape(), fh, fw));
        return *this;
    }
    Network& add_dense(std::uint32_t out_dim) {
        layers_.push_back(std::make_unique<Dense<Real>>(tail_shape(), out_dim));
        return *this;
    }
    Network& add_reshape(Shape target) {
        layers_.push_back(std::make_unique<Reshape<Real>>(tail_shape(), target));
        return *this;
    }
    /// Allocates the flat parameter vector and initializes it (fan-in uniform).
    void finalize(std::uint64_t init_seed) {
        offsets_.clear();
        std::size_t total = 0;
        for (const auto& l : layers_) {
            offsets_.push_back(total);
            total += l->param_count();
        }
        params_.assign(total, Real(0));
        grads_.assign(total, Real(0));
        Rng rng = derive_rng(init_seed, {stream::init});
        for (std::size_t i = 0; i < layers_.size(); ++i)
            layers_[i]->init_params(params_.data() + offsets_[i], rng);
    }

    std::size_t param_count() const { return params_.size(); }
    std::vector<Real>& params() { return params_; }
    const std::vector<Real>& params() const { return params_; }
    std::vector<Real>& grads() { return grads_; }
    const std::vector<Real>& grads() const { return grads_; }
    void zero_grads() { std::fill(grads_.begin(), grads_.end(), Real(0)); }

    void prepare_tape(Tape<Real>& tape) const {
        tape.acts.resize(layers_.size() + 1);
        tape.gbuf.resize(layers_.size() + 1);
        tape.extra.resize(layers_.size());
        tape.scratch.resize(layers_.size());
        tape.acts[0].resize(input_.size());
        tape.gbuf[0].resize(input_.size());
        for (std::size_t i = 0; i < layers_.size(); ++i) {
            tape.acts[i + 1].resize(layers_[i]->out_shape().size());
            tape.gbuf[i + 1].resize(layers_[i]->out_shape().size());
        }
    }

    /// Forward pass; returns the output activation held by the tape.
    const std::vector<Real>& forward(const Real* x, Tape<Real>& tape) const {
        if (tape.acts.size() != layers_.size() + 1)
            prepare_tape(tape);
        std::copy(x, x + input_.size(), tape.acts[0].begin());
        for (std::size_t i = 0; i < layers_.size(); ++i)
            layers_[i]->forward(params_.data() + offsets_[i], tape.acts[i].data(),
                                tape.acts[i + 1].data(), tape.extra[i]);
        const auto& out = tape.acts.back();
        for (Real v : out)
            if (!std::isfinite(static_cast<double>(v)))
                throw TrainingError("network forward produced a non-finite activation");
        return out;
    }

    /// Convenience forward with a throwaway tape.
    std::vector<Real> apply(const Real* x) const {
        Tape<Real> tape;
        return forward(x, tape);
    }

    /// Backprop from dL/d(output); accumulates parameter gradients, returns dL/d(input).
    const std::vector<Real>& backward(Tape<Real>& tape, const Real* dout) {
        std::copy(dout, dout + output_dim(), tape.gbuf.back().begin());
        for (std::size_t i = layers_.size(); i-- > 0;)
            layers_[i]->backward(params_.data() + offsets_[i], tape.acts[i].data(), tape.extra[i],
                                 tape.gbuf[i + 1].data(), tape.gbuf[i].data(),
                                 grads_.data() + offsets_[i], tape.scratch[i]);
        return tape.gbuf[0];
    }

    bool same_architecture(const Network& other) const {
        if (!(input_ == other.input_) || layers_.size() != other.layers_.size())
            return false;
        for (std::size_t i = 0; i < layers_.size(); ++i)
            if (std::string(layers_[i]->kind()) != other.layers_[i]->kind() ||
                !(layers_[i]->out_shape() == other.layers_[i]->out_shape()))
                return false;
        return true;
    }

    /// Deep copy of architecture and parameters (momentum encoders).
    Network clone() const {
        Network out(input_, arch_id_);
        for (const auto& l : layers_)
            out.layers_.push_back(l->clone_layer());
        out.offsets_ = offsets_;
        out.params_ = params_;
        out.grads_.assign(params_.size(), Real(0));
        return out;
    }

private:
    Shape input_{};
    std::string arch_id_ = "custom";
    std::vector<std::unique_ptr<Layer<Real>>> layers_;
    std::vector<std::size_t> offsets_;
    std::vector<Real> params_, grads_;
};

/**
 * Stochastic gradient descent with classical momentum:
 *   v <- m * v + g;  theta <- theta - lr * v
 * lr = 0 is allowed (null-training runs used by reduction tests).
 */
template <class Real>
class SgdMomentum {
public:
    SgdMomentum(Real lr, Real momentum) : lr_(lr), momentum_(momentum) {
        if (!(lr >= Real(0)) || !std::isfinite(static_cast<double>(lr)))
            throw ConfigError("optimizer: learning rate must be finite and >= 0");
        if (!(momentum >= Real(0)) || momentum >= Real(1))
            throw ConfigError("optimizer: momentum must lie in [0, 1)");
    }
    Real learning_rate() const { return lr_; }
    Real momentum() const { return momentum_; }
    std::uint64_t step_count() const { return steps_; }

    void step(std::vector<Real>& params, const std::vector<Real>& grads) {
        if (velocity_.size() != params.size())
            velocity_.assign(params.size(), Real(0));
        kernels::scale_add(momentum_, velocity_.data(), Real(1), grads.data(), params.size());
        kernels::axpy(-lr_, velocity_.data(), params.data(), params.size());
        ++steps_;
    }

private:
    Real lr_, momentum_;
    std::uint64_t steps_ = 0;
    std::vector<Real> velocity_;
};

/// Softmax cross-entropy for an integer label; returns loss, writes dlogits.
template <class Real>
Real softmax_cross_entropy(const Real* logits, std::size_t n, std::uint32_t label, Real* dlogits) {
    const Real maxv = *std::max_element(logits, logits + n);
    Real z = Real(0);
    for (std::size_t i = 0; i < n; ++i)
        z += std::exp(logits[i] - maxv);
    const Real logz = std::log(z) + maxv;
    if (dlogits != nullptr) {
        for (std::size_t i = 0; i < n; ++i)
            dlogits[i] = std::exp(logits[i] - logz);
        dlogits[label] -= Real(1);
    }
    return logz - logits[label];
}

} // namespace arcssl::nn
