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

#include "arcssl/nn.hpp"
#include "arcssl/nn_io.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace arcssl;
using nn::Network;
using nn::Shape;
using testutil::check_gradients;

namespace {

template <class Real>
std::vector<Real> random_input(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::vector<Real> v(n);
    Rng rng(seed);
    for (auto& x : v)
        x = static_cast<Real>(scale * (2.0 * rng.next_double() - 1.0));
    return v;
}

/// Naive direct convolution oracle (valid padding, arbitrary stride).
std::vector<double> conv2d_oracle(const std::vector<double>& x, Shape in, std::uint32_t oc,
                                  std::uint32_t kh, std::uint32_t kw, std::uint32_t sh,
                                  std::uint32_t sw, const std::vector<double>& w,
                                  const std::vector<double>& b) {
    const std::uint32_t oh = (in.h - kh) / sh + 1, ow = (in.w - kw) / sw + 1;
    std::vector<double> y(static_cast<std::size_t>(oc) * oh * ow);
    for (std::uint32_t o = 0; o < oc; ++o)
        for (std::uint32_t i = 0; i < oh; ++i)
            for (std::uint32_t j = 0; j < ow; ++j) {
                double acc = b[o];
                for (std::uint32_t c = 0; c < in.c; ++c)
                    for (std::uint32_t ki = 0; ki < kh; ++ki)
                        for (std::uint32_t kj = 0; kj < kw; ++kj) {
                            const double xv =
                                x[(static_cast<std::size_t>(c) * in.h + i * sh + ki) * in.w +
                                  j * sw + kj];
                            const double wv =
                                w[((static_cast<std::size_t>(o) * in.c + c) * kh + ki) * kw + kj];
                            acc += xv * wv;
                        }
                y[(static_cast<std::size_t>(o) * oh + i) * ow + j] = acc;
            }
    return y;
}

} // namespace

TEST_SUITE("nn-core") {

TEST_CASE("zero input through a zero-initialized dense head gives zero output") {
    Network<float> net(Shape{1, 2, 3});
    net.add_dense(4);
    net.finalize(1);
    std::fill(net.params().begin(), net.params().end(), 0.0f);
    std::vector<float> x(6, 0.0f);
    const auto y = net.apply(x.data());
    for (float v : y)
        CHECK(v == 0.0f);
}

TEST_CASE("forward determinism") {
    Network<float> net(Shape{1, 4, 10});
    net.add_conv(3, 2, 2, 2, 2).add_relu().add_dense(5);
    net.finalize(7);
    const auto x = random_input<float>(40, 3);
    const auto y1 = net.apply(x.data());
    const auto y2 = net.apply(x.data());
    CHECK(y1 == y2);
    for (float v : y1)
        CHECK(std::isfinite(v));
}

TEST_CASE("dense stack forward equals independent matrix arithmetic") {
    Network<double> net(Shape{5, 1, 1});
    net.add_dense(4).add_relu().add_dense(3);
    net.finalize(11);
    const auto x = random_input<double>(5, 21);

    // hand-rolled: layer parameters live in one flat vector, dense rows first
    const auto& p = net.params();
    std::vector<double> h(4), y(3);
    for (int o = 0; o < 4; ++o) {
        double acc = p[4 * 5 + o]; // bias after the 4x5 weight block
        for (int i = 0; i < 5; ++i)
            acc += p[o * 5 + i] * x[i];
        h[o] = std::max(acc, 0.0);
    }
    const std::size_t off = 4 * 5 + 4;
    for (int o = 0; o < 3; ++o) {
        double acc = p[off + 3 * 4 + o];
        for (int i = 0; i < 4; ++i)
            acc += p[off + o * 4 + i] * h[i];
        y[o] = acc;
    }
    const auto got = net.apply(x.data());
    for (int o = 0; o < 3; ++o)
        CHECK(got[o] == doctest::Approx(y[o]).epsilon(1e-10));
}

TEST_CASE("conv forward equals a naive direct convolution") {
    for (const auto& [sh, sw] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {1, 1}, {2, 3}, {2, 2}}) {
        Network<double> net(Shape{2, 6, 9});
        net.add_conv(3, 2, 3, sh, sw);
        net.finalize(31 + sh * 10 + sw);
        const auto x = random_input<double>(2 * 6 * 9, 17);
        const auto got = net.apply(x.data());

        const auto& p = net.params();
        const std::size_t nw = 3ull * 2 * 2 * 3;
        const std::vector<double> w(p.begin(), p.begin() + nw);
        const std::vector<double> b(p.begin() + nw, p.end());
        const auto expect = conv2d_oracle(x, Shape{2, 6, 9}, 3, 2, 3, sh, sw, w, b);
        REQUIRE(got.size() == expect.size());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    }
}

TEST_CASE("composite network gradients match central differences") {
    // conv + relu + pool + upsample + conv_transpose + dense, MSE loss
    Network<double> net(Shape{1, 4, 6});
    net.add_conv(2, 2, 2, 2, 2).add_relu().add_pool(1, 3).add_upsample(2, 2);
    net.add_conv_transpose(2, 2, 2, 1, 2).add_relu().add_dense(4);
    net.finalize(5);
    const auto x = random_input<double>(24, 41);
    const auto target = random_input<double>(4, 42);

    nn::Tape<double> tape;
    auto loss_and_grad = [&]() {
        const auto& y = net.forward(x.data(), tape);
        double loss = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            loss += 0.5 * (y[i] - target[i]) * (y[i] - target[i]);
        return loss;
    };
    const auto& y = net.forward(x.data(), tape);
    std::vector<double> dy(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        dy[i] = y[i] - target[i];
    net.zero_grads();
    net.backward(tape, dy.data());

    const auto r = check_gradients({{net.params().data(), net.param_count()}},
                                   {net.grads().data()}, loss_and_grad, 1e-5);
    CHECK(r.checked == net.param_count());
    CHECK(r.max_rel_err < 1e-6);
}

TEST_CASE("input gradients match central differences") {
    Network<double> net(Shape{1, 4, 4});
    net.add_conv(2, 2, 2, 1, 1).add_relu().add_dense(3);
    net.finalize(9);
    auto x = random_input<double>(16, 51);
    const auto w = random_input<double>(3, 52); // random projection of the output

    nn::Tape<double> tape;
    auto eval = [&]() {
        const auto& y = net.forward(x.data(), tape);
        double s = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            s += w[i] * y[i];
        return s;
    };
    const auto& y = net.forward(x.data(), tape);
    (void)y;
    net.zero_grads();
    const auto& dx = net.backward(tape, w.data());
    const auto r = check_gradients({{x.data(), x.size()}}, {dx.data()}, eval, 1e-5);
    CHECK(r.max_rel_err < 1e-6);
}

TEST_CASE("analytic sanity: constant and quadratic losses") {
    // constant loss: all finite-difference gradients are zero
    auto eval_const = []() { return 3.5; };
    std::vector<double> theta = random_input<double>(6, 61);
    std::vector<double> zeros(6, 0.0);
    const auto rc = check_gradients({{theta.data(), 6}}, {zeros.data()}, eval_const, 1e-4);
    CHECK(rc.max_rel_err == 0.0);

    // quadratic loss ||theta||^2 / 2 has gradient theta
    auto eval_quad = [&]() {
        double s = 0.0;
        for (double t : theta)
            s += 0.5 * t * t;
        return s;
    };
    const auto rq = check_gradients({{theta.data(), 6}}, {theta.data()}, eval_quad, 1e-5);
    CHECK(rq.max_rel_err < 1e-8);
}

TEST_CASE("optimizer: null updates and loss descent") {
    Network<float> net(Shape{3, 1, 1});
    net.add_dense(2);
    net.finalize(3);
    const auto before = net.params();

    nn::SgdMomentum<float> opt(0.1f, 0.9f);
    std::vector<float> zero_grads(net.param_count(), 0.0f);
    opt.step(net.params(), zero_grads); // fresh state, zero gradient
    CHECK(net.params() == before);

    nn::SgdMomentum<float> opt0(0.0f, 0.9f);
    std::vector<float> grads = random_input<float>(net.param_count(), 4);
    opt0.step(net.params(), grads); // lr = 0
    CHECK(net.params() == before);

    // single step on the quadratic loss 0.5*||theta||^2 decreases it
    auto quad = [&]() {
        double s = 0.0;
        for (float p : net.params())
            s += 0.5 * p * p;
        return s;
    };
    const double l0 = quad();
    nn::SgdMomentum<float> opt1(0.05f, 0.0f);
    opt1.step(net.params(), net.params());
    CHECK(quad() < l0);

    CHECK_THROWS_AS(nn::SgdMomentum<float>(-0.1f, 0.5f), ConfigError);
    CHECK_THROWS_AS(nn::SgdMomentum<float>(0.1f, 1.0f), ConfigError);
}

TEST_CASE("shape mismatches and invalid layer geometry are rejected") {
    Network<float> net(Shape{1, 5, 5});
    CHECK_THROWS_AS(net.add_conv(2, 6, 1, 1, 1), ConfigError); // kernel taller than input
    CHECK_THROWS_AS(net.add_pool(2, 2), ConfigError);          // 5 not divisible by 2
}

TEST_CASE("registry: conv-small and mlp-small") {
    auto enc = nn::build_encoder("conv-small", 30, 500, 64, 13);
    CHECK(enc.output_dim() == 64);
    const auto x = random_input<float>(30 * 500, 7);
    const auto z = enc.apply(x.data());
    CHECK(z.size() == 64);

    auto dec = nn::build_decoder("conv-small", 30, 500, 64, 14);
    CHECK(dec.output_shape() == Shape{1, 30, 500});
    const auto recon = dec.apply(z.data());
    CHECK(recon.size() == 30u * 500u);

    auto mlp = nn::build_encoder("mlp-small", 12, 20, 16, 15);
    CHECK(mlp.output_dim() == 16);

    CHECK_THROWS_AS(nn::build_encoder("conv-small", 31, 500, 64, 1), ConfigError);
    CHECK_THROWS_AS(nn::build_encoder("conv-small", 30, 512, 64, 1), ConfigError);
    CHECK_THROWS_AS(nn::build_encoder("resnet", 30, 500, 64, 1), ConfigError);
}

TEST_CASE("parameter initialization is seeded and finite") {
    auto e1 = nn::build_encoder("conv-small", 6, 100, 8, 99);
    auto e2 = nn::build_encoder("conv-small", 6, 100, 8, 99);
    auto e3 = nn::build_encoder("conv-small", 6, 100, 8, 100);
    CHECK(e1.params() == e2.params());
    CHECK(e1.params() != e3.params());
    for (float p : e1.params())
        CHECK(std::isfinite(p));
}

TEST_CASE("checkpoint round-trip preserves parameters and behavior") {
    const auto dir = testutil::scratch_dir("nn_ckpt");
    auto enc = nn::build_encoder("conv-small", 6, 100, 8, 23);
    nn::save_network(enc, dir / "enc.bin", dir / "enc.json", "encoder", 8);
    auto back = nn::load_network(dir / "enc.bin", dir / "enc.json");
    CHECK(back.params() == enc.params());
    const auto x = random_input<float>(600, 3);
    CHECK(back.apply(x.data()) == enc.apply(x.data()));
}

TEST_CASE("clone copies architecture and parameters") {
    auto enc = nn::build_encoder("mlp-small", 4, 6, 5, 77);
    auto copy = enc.clone();
    CHECK(copy.params() == enc.params());
    CHECK(copy.same_architecture(enc));
    copy.params()[0] += 1.0f;
    CHECK(copy.params() != enc.params()); // deep copy
}

TEST_CASE("softmax cross-entropy matches a direct computation") {
    Rng rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> logits(5);
        for (auto& l : logits)
            l = 4.0 * rng.next_double() - 2.0;
        const auto label = static_cast<std::uint32_t>(rng.next_below(5));
        std::vector<double> dlogits(5);
        const double loss = nn::softmax_cross_entropy(logits.data(), 5, label, dlogits.data());

        double z = 0.0;
        for (double l : logits)
            z += std::exp(l);
        CHECK(loss == doctest::Approx(std::log(z) - logits[label]).epsilon(1e-12));
        for (int i = 0; i < 5; ++i) {
            const double p = std::exp(logits[i]) / z;
            CHECK(dlogits[i] ==
                  doctest::Approx(p - (i == static_cast<int>(label) ? 1.0 : 0.0)).epsilon(1e-10));
        }
    }
}

} // TEST_SUITE
