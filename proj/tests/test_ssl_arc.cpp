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

#include "arcssl/ssl.hpp"

#include "arcssl/nn_io.hpp"
#include "arcssl/synth.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace arcssl;
using ssl::FeatureQueue;
using ssl::MaeConfig;
using ssl::MocoConfig;
using testutil::check_gradients;

namespace {

FeatureQueue<double> queue_with(const std::vector<std::vector<double>>& entries) {
    Rng rng(1);
    FeatureQueue<double> q(entries[0].size(), entries.size(), rng);
    for (const auto& e : entries)
        q.push(e.data());
    return q;
}

/// Direct softmax formula, no stabilization: the independent oracle.
double info_nce_oracle(std::vector<double> zq, std::vector<double> zk,
                       const std::vector<std::vector<double>>& negatives, double tau) {
    auto normalize = [](std::vector<double>& v) {
        double n = 0.0;
        for (double x : v)
            n += x * x;
        n = std::sqrt(n);
        for (double& x : v)
            x /= n;
    };
    normalize(zq);
    normalize(zk);
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s;
    };
    const double pos = std::exp(dot(zq, zk) / tau);
    double denom = pos;
    for (auto neg : negatives) {
        normalize(neg);
        denom += std::exp(dot(zq, neg) / tau);
    }
    return -std::log(pos / denom);
}

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::vector<double> v(n);
    Rng rng(seed);
    for (auto& x : v)
        x = scale * (2.0 * rng.next_double() - 1.0);
    return v;
}

ssl::ViewBank tiny_bank(prep::FeatureMode mode, std::uint32_t classes = 2,
                        std::uint32_t per_class = 12, std::uint64_t seed = 7) {
    const synth::SceneConfig scene = testutil::tiny_scene(classes, per_class, seed);
    const csi::Dataset ds = synth::synthesize(scene);
    return ssl::ViewBank(ds, mode);
}

MocoConfig tiny_moco() {
    MocoConfig c;
    c.batch_size = 8;
    c.queue_size = 16;
    c.epochs = 4;
    c.lr = 0.05;
    return c;
}

MaeConfig tiny_mae() {
    MaeConfig c;
    c.batch_size = 8;
    c.epochs = 4;
    c.lr = 0.05;
    c.patch_k = 2;
    c.patch_t = 20;
    return c;
}

ssl::PretrainOptions tiny_opts(ssl::Algo algo, prep::FeatureMode mode, std::uint64_t seed) {
    ssl::PretrainOptions o;
    o.algo = algo;
    o.mode = mode;
    o.arch = "conv-small";
    o.feature_dim = 8;
    o.moco = tiny_moco();
    o.mae = tiny_mae();
    o.seed = seed;
    return o;
}

} // namespace

TEST_SUITE("ssl-arc") {

TEST_CASE("config invariants") {
    MocoConfig m;
    m.queue_size = 30;
    m.batch_size = 32;
    CHECK_THROWS_AS(m.validate(), ConfigError); // queue not a multiple of batch
    m = MocoConfig{};
    m.temperature = 0.0;
    CHECK_THROWS_AS(m.validate(), ConfigError);

    MaeConfig c;
    c.patch_k = 7;
    CHECK_THROWS_AS(c.validate(30, 500), ConfigError); // 7 does not tile 30
    c = MaeConfig{};
    CHECK_NOTHROW(c.validate(30, 500));
    c.alpha = -0.1;
    CHECK_THROWS_AS(c.validate(30, 500), ConfigError);
}

TEST_CASE("info_nce matches the spec's frozen example") {
    // z_q = z_k, two queue entries orthogonal to z_q, tau = 1:
    // loss = -log(e / (e + 2)) ~= 0.5514
    std::vector<double> zq = {1, 0, 0, 0};
    std::vector<std::vector<double>> negatives = {{0, 1, 0, 0}, {0, 0, 1, 0}};
    auto q = queue_with(negatives);
    const auto res = ssl::info_nce<double>(zq, zq, q, 1.0);
    const double expect = -std::log(std::exp(1.0) / (std::exp(1.0) + 2.0));
    CHECK(res.loss == doctest::Approx(expect).epsilon(1e-14));
    CHECK(res.loss == doctest::Approx(0.5514).epsilon(1e-3));
    CHECK(res.positive_sim == doctest::Approx(1.0));
}

TEST_CASE("info_nce equals the brute-force softmax oracle on random instances") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 2 + rng.next_below(14);
        const std::size_t qn = 1 + rng.next_below(40);
        const double tau = 0.05 + 0.95 * rng.next_double();
        auto zq = random_vec(d, 1000 + trial);
        auto zk = random_vec(d, 2000 + trial);
        std::vector<std::vector<double>> negatives;
        for (std::size_t i = 0; i < qn; ++i)
            negatives.push_back(random_vec(d, 3000 + trial * 64 + i));
        auto q = queue_with(negatives);
        const auto res = ssl::info_nce<double>(zq, zk, q, tau);
        const double oracle = info_nce_oracle(zq, zk, negatives, tau);
        CHECK(res.loss == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(res.loss > 0.0); // queue nonempty: softmax of the positive < 1
    }
}

TEST_CASE("info_nce with the key among the negatives still matches the oracle") {
    std::vector<double> zq = random_vec(6, 1);
    std::vector<std::vector<double>> negatives = {random_vec(6, 2), random_vec(6, 3)};
    // key equals a queue entry
    const auto res = ssl::info_nce<double>(zq, negatives[1], queue_with(negatives), 0.2);
    CHECK(res.loss ==
          doctest::Approx(info_nce_oracle(zq, negatives[1], negatives, 0.2)).epsilon(1e-10));
}

TEST_CASE("info_nce is invariant under queue permutation") {
    auto zq = random_vec(8, 5);
    auto zk = random_vec(8, 6);
    std::vector<std::vector<double>> negs;
    for (int i = 0; i < 12; ++i)
        negs.push_back(random_vec(8, 100 + i));
    auto perm = negs;
    std::rotate(perm.begin(), perm.begin() + 5, perm.end());
    const auto a = ssl::info_nce<double>(zq, zk, queue_with(negs), 0.3);
    const auto b = ssl::info_nce<double>(zq, zk, queue_with(perm), 0.3);
    CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-13));
}

TEST_CASE("info_nce decreases strictly as the positive similarity grows") {
    std::vector<std::vector<double>> negs;
    for (int i = 0; i < 8; ++i)
        negs.push_back(random_vec(4, 50 + i));
    auto q = queue_with(negs);
    double last = 1e9;
    for (double s = -0.9; s <= 0.91; s += 0.1) {
        // z_q fixed, z_k at controlled cosine s to z_q
        std::vector<double> zq = {1, 0, 0, 0};
        std::vector<double> zk = {s, std::sqrt(1.0 - s * s), 0, 0};
        const auto res = ssl::info_nce<double>(zq, zk, q, 0.2);
        CHECK(res.loss < last);
        last = res.loss;
    }
}

TEST_CASE("info_nce rejects an empty queue and bad temperature") {
    std::vector<double> z = {1, 0};
    Rng rng(1);
    CHECK_THROWS_AS(FeatureQueue<double>(2, 0, rng), ConfigError);
    auto q = queue_with({{0.0, 1.0}});
    CHECK_THROWS_AS(ssl::info_nce<double>(z, z, q, 0.0), ConfigError);
}

TEST_CASE("info_nce gradient through a tiny network passes central differences") {
    nn::Network<double> net(nn::Shape{6, 1, 1});
    net.add_dense(8).add_relu().add_dense(4);
    net.finalize(4);
    const auto x = random_vec(6, 11);
    const auto uk = random_vec(4, 12);
    std::vector<std::vector<double>> negs;
    for (int i = 0; i < 6; ++i)
        negs.push_back(random_vec(4, 500 + i));
    const auto q = queue_with(negs);

    nn::Tape<double> tape;
    auto eval = [&]() {
        const auto& z = net.forward(x.data(), tape);
        return ssl::info_nce<double>(z, uk, q, 0.2).loss;
    };
    const auto& z = net.forward(x.data(), tape);
    REQUIRE(kernels::sumsq(z.data(), z.size()) > 0.1); // away from the normalization kink
    const auto res = ssl::info_nce<double>(z, uk, q, 0.2, true);
    net.zero_grads();
    net.backward(tape, res.dloss_du_q.data());
    const auto r = check_gradients({{net.params().data(), net.param_count()}},
                                   {net.grads().data()}, eval, 1e-4);
    CHECK(r.max_rel_err < 1e-4); // the stated contract
    CHECK(r.max_rel_err < 1e-7); // and a tight sanity margin in double
}

TEST_CASE("feature queue keeps exactly the last Q keys in FIFO order") {
    Rng rng(9);
    FeatureQueue<float> q(3, 4, rng);
    std::vector<std::vector<float>> pushed;
    for (int i = 0; i < 11; ++i) {
        std::vector<float> v = {static_cast<float>(i + 1), 0.0f, 0.0f};
        q.push(v.data());
        pushed.push_back({1.0f, 0.0f, 0.0f}); // unit-normalized form
    }
    const auto snap = q.snapshot_fifo();
    REQUIRE(snap.size() == 4);
    // entries are the last 4 keys, oldest first; all unit norm
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(snap[i][0] == doctest::Approx(1.0f));
        CHECK(kernels::sumsq(snap[i].data(), 3) == doctest::Approx(1.0f).epsilon(1e-6));
    }
}

TEST_CASE("queue entries remain unit-norm under random pushes") {
    Rng rng(29);
    FeatureQueue<double> q(5, 8, rng);
    for (int i = 0; i < 30; ++i) {
        auto v = random_vec(5, 700 + i, 3.0);
        q.push(v.data());
        for (std::size_t e = 0; e < q.capacity(); ++e)
            CHECK(kernels::sumsq(q.entry(e), 5) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("random mask selects exactly round(ratio * patches)") {
    MaeConfig cfg;
    cfg.patch_k = 6;
    cfg.patch_t = 25;

    Rng rng(3);
    cfg.mask_ratio = 0.5; // 5x20 grid -> exactly 50
    auto m = ssl::random_mask(30, 500, cfg, rng);
    CHECK(m.grid_k == 5);
    CHECK(m.grid_t == 20);
    CHECK(m.masked_count == 50);
    CHECK(std::count(m.masked.begin(), m.masked.end(), 1) == 50);

    cfg.mask_ratio = 0.0; // no patches
    m = ssl::random_mask(30, 500, cfg, rng);
    CHECK(m.masked_count == 0);
    CHECK(std::count(m.masked.begin(), m.masked.end(), 1) == 0);
}

TEST_CASE("masked positions are exactly the zeroed positions") {
    prep::ViewTensor x;
    x.subcarriers = 12;
    x.packets = 40;
    x.values.assign(480, 1.0f);
    MaeConfig cfg;
    cfg.patch_k = 3;
    cfg.patch_t = 8;
    cfg.mask_ratio = 0.4; // 4x5 = 20 patches -> 8 masked
    Rng rng(31);
    const auto [masked, mask] = ssl::random_mask_view(x, cfg, rng);
    CHECK(mask.masked_count == 8);
    for (std::uint32_t k = 0; k < 12; ++k)
        for (std::uint32_t t = 0; t < 40; ++t) {
            const bool in_masked_patch = mask.masked[(k / 3) * mask.grid_t + (t / 8)] != 0;
            CHECK(masked.at(k, t) == (in_masked_patch ? 0.0f : 1.0f));
        }
}

TEST_CASE("mae_arc_loss: reductions, joint optimum and scalar oracle") {
    const auto recon = random_vec(24, 1);
    const auto target = random_vec(24, 2);
    const auto zq = random_vec(6, 3);
    const auto zk = random_vec(6, 4);

    // alpha = 0: pure MSE
    const auto r0 = ssl::mae_arc_loss<double>(recon, target, zq, zk, 0.0);
    double mse = 0.0;
    for (int i = 0; i < 24; ++i)
        mse += (recon[i] - target[i]) * (recon[i] - target[i]);
    mse /= 24.0;
    CHECK(r0.total == doctest::Approx(mse).epsilon(1e-12));

    // perfect reconstruction and identical features: loss 0
    const auto rj = ssl::mae_arc_loss<double>(recon, recon, zq, zq, 0.7);
    CHECK(rj.total == doctest::Approx(0.0));

    // scalar oracle for the composite
    const double alpha = 0.37;
    const auto rc = ssl::mae_arc_loss<double>(recon, target, zq, zk, alpha);
    double dot = 0.0, nq = 0.0, nk = 0.0;
    for (int i = 0; i < 6; ++i) {
        dot += zq[i] * zk[i];
        nq += zq[i] * zq[i];
        nk += zk[i] * zk[i];
    }
    const double cos = dot / (std::sqrt(nq) * std::sqrt(nk));
    CHECK(rc.total == doctest::Approx(mse + alpha * (1.0 - cos)).epsilon(1e-10));
    CHECK(rc.arc_cosine == doctest::Approx(cos).epsilon(1e-12));
}

TEST_CASE("cosine of zero-norm features is defined as 0") {
    const std::vector<double> z(4, 0.0);
    const auto v = random_vec(4, 9);
    const auto r = ssl::cosine_similarity<double>(z, v, true);
    CHECK(r.value == 0.0);
    for (double g : r.d_u)
        CHECK(g == 0.0);
}

TEST_CASE("mae_arc_loss gradients pass central differences (composite)") {
    nn::Network<double> enc(nn::Shape{1, 2, 4});
    enc.add_dense(6).add_relu().add_dense(4);
    enc.finalize(21);
    nn::Network<double> dec(nn::Shape{4, 1, 1});
    dec.add_dense(6).add_relu().add_dense(8);
    dec.finalize(22);

    const auto xq = random_vec(8, 31);
    const auto xk = random_vec(8, 32);
    const auto target = random_vec(8, 33);
    const double alpha = 0.45;

    nn::Tape<double> tq, tk, td;
    auto eval = [&]() {
        const auto& zq = enc.forward(xq.data(), tq);
        const auto& zk = enc.forward(xk.data(), tk);
        const auto& recon = dec.forward(zq.data(), td);
        return ssl::mae_arc_loss<double>(recon, target, zq, zk, alpha).total;
    };

    const auto& zq = enc.forward(xq.data(), tq);
    const auto& zk = enc.forward(xk.data(), tk);
    const auto& recon = dec.forward(zq.data(), td);
    const auto res = ssl::mae_arc_loss<double>(recon, target, zq, zk, alpha, true);
    enc.zero_grads();
    dec.zero_grads();
    const auto& dz_dec = dec.backward(td, res.d_recon.data());
    std::vector<double> dzq = dz_dec;
    for (std::size_t i = 0; i < dzq.size(); ++i)
        dzq[i] += res.d_zq[i];
    enc.backward(tq, dzq.data());
    enc.backward(tk, res.d_zk.data());

    const auto r = check_gradients({{enc.params().data(), enc.param_count()},
                                    {dec.params().data(), dec.param_count()}},
                                   {enc.grads().data(), dec.grads().data()}, eval, 1e-4);
    CHECK(r.max_rel_err < 1e-4);
    CHECK(r.max_rel_err < 1e-7);
}

TEST_CASE("probe cross-entropy gradient through a tiny network") {
    nn::Network<double> net(nn::Shape{5, 1, 1});
    net.add_dense(8).add_relu().add_dense(3);
    net.finalize(41);
    const auto x = random_vec(5, 42);
    const std::uint32_t label = 2;

    nn::Tape<double> tape;
    auto eval = [&]() {
        const auto& logits = net.forward(x.data(), tape);
        return nn::softmax_cross_entropy<double>(logits.data(), logits.size(), label, nullptr);
    };
    const auto& logits = net.forward(x.data(), tape);
    std::vector<double> dlogits(3);
    nn::softmax_cross_entropy<double>(logits.data(), 3, label, dlogits.data());
    net.zero_grads();
    net.backward(tape, dlogits.data());
    const auto r = check_gradients({{net.params().data(), net.param_count()}},
                                   {net.grads().data()}, eval, 1e-4);
    CHECK(r.max_rel_err < 1e-4);
    CHECK(r.max_rel_err < 1e-7);
}

TEST_CASE("momentum update: freeze, copy and elementwise mean") {
    auto q = nn::build_encoder("mlp-small", 2, 3, 4, 51);
    auto k = nn::build_encoder("mlp-small", 2, 3, 4, 52);
    const auto k0 = k.params();

    ssl::momentum_update(k, q, 1.0f); // m = 1: frozen
    CHECK(k.params() == k0);

    ssl::momentum_update(k, q, 0.0f); // m = 0: copy of the query encoder
    CHECK(k.params() == q.params());

    auto k2 = nn::build_encoder("mlp-small", 2, 3, 4, 52);
    const auto k2_before = k2.params();
    ssl::momentum_update(k2, q, 0.5f);
    for (std::size_t i = 0; i < k2.params().size(); ++i)
        CHECK(k2.params()[i] == 0.5f * k2_before[i] + 0.5f * q.params()[i]);

    auto wrong = nn::build_encoder("mlp-small", 2, 4, 4, 5);
    CHECK_THROWS_AS(ssl::momentum_update(wrong, q, 0.5f), TrainingError);
}

TEST_CASE("null training: lr = 0 leaves encoders at initialization") {
    const auto bank = tiny_bank(prep::FeatureMode::amp);
    auto opts = tiny_opts(ssl::Algo::moco_arc, prep::FeatureMode::amp, 5);
    opts.moco.lr = 0.0;
    opts.moco.epochs = 1;
    const auto res = ssl::pretrain(bank, {}, opts);
    const auto init = nn::build_encoder("conv-small", bank.subcarriers(), bank.packets(), 8,
                                        derive_seed(5, {stream::init, 1u}));
    CHECK(res.enc_amp.params() == init.params());
}

TEST_CASE("training determinism: same seed, bit-identical parameters") {
    const auto bank = tiny_bank(prep::FeatureMode::amp_conj_angle);
    const auto opts = tiny_opts(ssl::Algo::mae_arc, prep::FeatureMode::amp_conj_angle, 9);
    const auto r1 = ssl::pretrain(bank, {}, opts);
    const auto r2 = ssl::pretrain(bank, {}, opts);
    CHECK(r1.enc_amp.params() == r2.enc_amp.params());
    CHECK(r1.enc_phase.params() == r2.enc_phase.params());
    REQUIRE(r1.log.size() == r2.log.size());
    for (std::size_t i = 0; i < r1.log.size(); ++i)
        CHECK(r1.log[i].loss_amp == r2.log[i].loss_amp);

    auto opts2 = opts;
    opts2.seed = 10;
    const auto r3 = ssl::pretrain(bank, {}, opts2);
    CHECK(r1.enc_amp.params() != r3.enc_amp.params());
}

TEST_CASE("reduction identity: mae-arc with alpha 0 equals the mae baseline bit-exactly") {
    const auto bank = tiny_bank(prep::FeatureMode::amp_conj_angle);
    auto arc = tiny_opts(ssl::Algo::mae_arc, prep::FeatureMode::amp_conj_angle, 13);
    arc.mae.alpha = 0.0;
    auto base = arc;
    base.algo = ssl::Algo::mae;
    const auto ra = ssl::pretrain(bank, {}, arc);
    const auto rb = ssl::pretrain(bank, {}, base);
    CHECK(ra.enc_amp.params() == rb.enc_amp.params());
    CHECK(ra.enc_phase.params() == rb.enc_phase.params());
    CHECK(ra.dec_amp.params() == rb.dec_amp.params());
}

TEST_CASE("reduction identity: key momentum 1 freezes the key encoder") {
    const auto bank = tiny_bank(prep::FeatureMode::amp);
    auto opts = tiny_opts(ssl::Algo::moco_arc, prep::FeatureMode::amp, 15);
    opts.moco.key_momentum = 1.0;
    opts.moco.epochs = 2;
    const auto res = ssl::pretrain(bank, {}, opts);
    const auto init = nn::build_encoder("conv-small", bank.subcarriers(), bank.packets(), 8,
                                        derive_seed(15, {stream::init, 1u}));
    CHECK(res.key_amp.params() == init.params());   // frozen at the initial clone
    CHECK(res.enc_amp.params() != init.params());   // while the query encoder trained
}

TEST_CASE("monitored run: moco-arc loss decreases on separable data") {
    const auto bank = tiny_bank(prep::FeatureMode::amp, 2, 16, 21);
    auto opts = tiny_opts(ssl::Algo::moco_arc, prep::FeatureMode::amp, 23);
    opts.moco.epochs = 20;
    opts.moco.lr = 0.03;
    const auto res = ssl::pretrain(bank, {}, opts);
    REQUIRE(res.log.size() == 20);
    CHECK(res.log.back().loss_amp < res.log.front().loss_amp);
}

TEST_CASE("monitored run: mae-arc alignment rises and held-out reconstruction improves") {
    const synth::SceneConfig scene = testutil::tiny_scene(2, 16, 27);
    const csi::Dataset ds = synth::synthesize(scene);
    const ssl::ViewBank bank(ds, prep::FeatureMode::amp);
    std::vector<std::uint64_t> train_idx;
    for (std::uint64_t i = 0; i < 24; ++i)
        train_idx.push_back(i); // last 8 samples held out

    auto opts = tiny_opts(ssl::Algo::mae_arc, prep::FeatureMode::amp, 29);
    opts.mae.epochs = 15;
    opts.mae.lr = 0.08;
    auto init_opts = opts;
    init_opts.mae.epochs = 0;
    const auto res0 = ssl::pretrain(bank, train_idx, init_opts);
    const auto res = ssl::pretrain(bank, train_idx, opts);

    REQUIRE(res.log.size() == 15);
    CHECK(res.log.back().align_amp > res.log.front().align_amp); // alignment metric rises

    // held-out masked-reconstruction MSE decreases from initialization to trained
    auto heldout_mse = [&](const ssl::PretrainResult& r) {
        nn::Tape<float> te, td;
        std::vector<float> target(bank.subcarriers() * bank.packets());
        std::vector<float> buf(target.size());
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 24; i < 32; ++i)
            for (std::uint32_t a = 0; a < bank.antennas(); ++a) {
                prep::normalize_into(bank.amp_view(i, a), bank.amp_stats(), target.data());
                std::copy(target.begin(), target.end(), buf.begin());
                Rng mrng = derive_rng(999, {i, a});
                const auto mask = ssl::random_mask(bank.subcarriers(), bank.packets(), opts.mae,
                                                   mrng);
                ssl::apply_mask(mask, buf.data());
                const auto& z = r.enc_amp.forward(buf.data(), te);
                const auto& recon = r.dec_amp.forward(z.data(), td);
                for (std::size_t j = 0; j < recon.size(); ++j)
                    acc += (recon[j] - target[j]) * (recon[j] - target[j]);
                count += recon.size();
            }
        return acc / static_cast<double>(count);
    };
    CHECK(heldout_mse(res) < heldout_mse(res0));
}

TEST_CASE("monitored run: identity-augmented moco baseline saturates positive similarity") {
    const auto bank = tiny_bank(prep::FeatureMode::amp, 2, 16, 33);
    auto opts = tiny_opts(ssl::Algo::moco, prep::FeatureMode::amp, 35);
    opts.moco.epochs = 12;
    opts.moco.lr = 0.02;
    opts.moco.key_momentum = 0.5; // let the key encoder track the query closely
    opts.moco.augment = {0.0, 0.0, 0.0}; // identity views
    auto init_opts = opts;
    init_opts.moco.epochs = 0;
    const auto res0 = ssl::pretrain(bank, {}, init_opts);
    const auto res = ssl::pretrain(bank, {}, opts);
    CHECK(res.log.back().align_amp > 0.99); // the trivial positive saturates

    // and the uniformity side collapses within the run: features of distinct
    // samples drift closer together instead of spreading out
    auto mean_pairwise_cos = [&](const ssl::PretrainResult& r) {
        nn::Tape<float> tape;
        std::vector<float> buf(bank.subcarriers() * bank.packets());
        std::vector<std::vector<float>> zs;
        for (std::size_t i = 0; i < bank.sample_count(); ++i) {
            prep::normalize_into(bank.amp_view(i, 0), bank.amp_stats(), buf.data());
            auto z = r.enc_amp.forward(buf.data(), tape);
            const float n = std::sqrt(kernels::sumsq(z.data(), z.size()));
            for (auto& v : z)
                v /= (n > 0 ? n : 1.0f);
            zs.push_back(z);
        }
        double acc = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < zs.size(); ++i)
            for (std::size_t j = i + 1; j < zs.size(); ++j) {
                acc += kernels::dot(zs[i].data(), zs[j].data(), zs[i].size());
                ++cnt;
            }
        return acc / static_cast<double>(cnt);
    };
    CHECK(mean_pairwise_cos(res) > mean_pairwise_cos(res0) + 0.05);
}

TEST_CASE("non-finite inputs abort training with diagnostics") {
    const auto bank = tiny_bank(prep::FeatureMode::amp);
    auto opts = tiny_opts(ssl::Algo::moco_arc, prep::FeatureMode::amp, 3);
    opts.moco.lr = 1e20; // guaranteed blow-up
    opts.moco.epochs = 3;
    CHECK_THROWS_AS(ssl::pretrain(bank, {}, opts), TrainingError);
}

} // TEST_SUITE
