/* Copyright 2026 The latentgeo Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "latentgeo/models.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace latentgeo::models {

namespace {

using network::AdamState;
using network::ForwardTrace;
using network::backprop;
using network::forward_trace;

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

FeedForwardNet make_mlp(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out, Activation act,
                        SeededRng& rng) {
    std::vector<std::size_t> widths{in};
    widths.insert(widths.end(), hidden.begin(), hidden.end());
    widths.push_back(out);
    std::vector<Activation> acts(hidden.size(), act);
    acts.push_back(Activation::identity());
    return FeedForwardNet::random(widths, acts, rng);
}

Matrix vstack(std::initializer_list<const Matrix*> parts) {
    std::size_t rows = 0, cols = (*parts.begin())->cols();
    for (const Matrix* m : parts) {
        require(m->cols() == cols, ErrorKind::Shape, "vstack: column mismatch");
        rows += m->rows();
    }
    Matrix out(rows, cols);
    std::size_t r = 0;
    for (const Matrix* m : parts) {
        std::copy(m->data().begin(), m->data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(r * cols));
        r += m->rows();
    }
    return out;
}

Matrix normal_matrix(std::size_t rows, std::size_t cols, SeededRng& rng) {
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

// mu and logvar halves of a Gaussian encoder output
struct Posterior {
    Matrix mu;
    Matrix logvar;
};

Posterior split_posterior(const Matrix& out, std::size_t d) {
    return {numerics::slice_cols(out, 0, d), numerics::slice_cols(out, d, 2 * d)};
}

Matrix reparameterize(const Posterior& p, const Matrix& eps) {
    require(eps.rows() == p.mu.rows() && eps.cols() == p.mu.cols(), ErrorKind::Shape,
            "noise shape does not match the posterior");
    Matrix z(p.mu.rows(), p.mu.cols());
    for (std::size_t i = 0; i < z.size(); ++i)
        z.data()[i] = p.mu.data()[i] + std::exp(0.5 * p.logvar.data()[i]) * eps.data()[i];
    return z;
}

// Adjoint of the encoder output given dL/dz; rows < kl_rows also carry the
// KL gradient with weight kl_weight.
Matrix posterior_adjoint(const Posterior& p, const Matrix& eps, const Matrix& dz, std::size_t kl_rows,
                         double kl_weight) {
    const std::size_t d = p.mu.cols();
    Matrix adj(p.mu.rows(), 2 * d, 0.0);
    for (std::size_t r = 0; r < p.mu.rows(); ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            const double lv = p.logvar(r, j);
            const double sd = std::exp(0.5 * lv);
            double gm = dz(r, j);
            double gl = dz(r, j) * eps(r, j) * 0.5 * sd;
            if (r < kl_rows) {
                gm += kl_weight * p.mu(r, j);
                gl += kl_weight * 0.5 * (std::exp(lv) - 1.0);
            }
            adj(r, j) = gm;
            adj(r, d + j) = gl;
        }
    }
    return adj;
}

double squared_error(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return s;
}

void check_finite(double v, const char* what) {
    require(std::isfinite(v), ErrorKind::Numerical, std::string("non-finite ") + what + " during training");
}

}  // namespace

void VaeModel::validate() const {
    require(latent_dim > 0, ErrorKind::Config, "latent_dim must be positive");
    require(encoder.out_dim() == 2 * latent_dim, ErrorKind::Shape, "encoder must output mean and log-variance");
    require(decoder.in_dim() == latent_dim, ErrorKind::Shape, "decoder input must match latent_dim");
    require(decoder.out_dim() == encoder.in_dim(), ErrorKind::Shape, "decoder output must match encoder input");
}

DisentangleVariant parse_variant(const std::string& name) {
    if (name == "swap_l2_kl") return DisentangleVariant::SwapL2Kl;
    if (name == "swap_adversarial") return DisentangleVariant::SwapAdversarial;
    fail(ErrorKind::Config, "unknown disentangle variant '" + name + "' (expected swap_l2_kl or swap_adversarial)");
}

std::string to_string(DisentangleVariant v) {
    return v == DisentangleVariant::SwapL2Kl ? "swap_l2_kl" : "swap_adversarial";
}

void DisentangledModel::validate() const {
    require(ds > 0 && dz > 0, ErrorKind::Config, "ds and dz must be positive");
    require(enc_s.out_dim() == ds, ErrorKind::Shape, "specified encoder must output ds values");
    require(enc_z.out_dim() == 2 * dz, ErrorKind::Shape, "unspecified encoder must output mean and log-variance");
    require(enc_s.in_dim() == enc_z.in_dim(), ErrorKind::Shape, "encoders must read the same input");
    require(decoder.in_dim() == ds + dz, ErrorKind::Shape, "decoder input must be ds + dz");
    require(decoder.out_dim() == enc_s.in_dim(), ErrorKind::Shape, "decoder output must match encoder input");
    if (variant == DisentangleVariant::SwapAdversarial) {
        require(discriminator.has_value(), ErrorKind::Shape, "adversarial variant needs a discriminator");
        require(discriminator->in_dim() == 2 * decoder.out_dim() && discriminator->out_dim() == 1, ErrorKind::Shape,
                "discriminator must map an image pair to one logit");
    }
}

double kl_gaussian(std::span<const double> mu, std::span<const double> logvar) {
    require(mu.size() == logvar.size(), ErrorKind::Shape, "kl: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) s += std::exp(logvar[i]) + mu[i] * mu[i] - 1.0 - logvar[i];
    return 0.5 * s;
}

VaeLoss vae_loss(const VaeModel& model, const Matrix& x, const Matrix& eps, double beta) {
    require(x.rows() > 0, ErrorKind::InvalidInput, "empty batch");
    const double b = static_cast<double>(x.rows());
    const ForwardTrace enc = forward_trace(model.encoder, x);
    const Posterior post = split_posterior(enc.output, model.latent_dim);
    const Matrix z = reparameterize(post, eps);
    const ForwardTrace dec = forward_trace(model.decoder, z);

    VaeLoss out;
    out.reconstruction = squared_error(dec.output, x) / b;
    for (std::size_t r = 0; r < x.rows(); ++r) out.kl += kl_gaussian(post.mu.row(r), post.logvar.row(r));
    out.kl /= b;
    out.loss = out.reconstruction + beta * out.kl;

    Matrix dout = numerics::scale(numerics::sub(dec.output, x), 2.0 / b);
    auto gd = backprop(model.decoder, dec, dout);
    out.decoder_grad = std::move(gd.params);
    const Matrix adj = posterior_adjoint(post, eps, gd.input, x.rows(), beta / b);
    out.encoder_grad = backprop(model.encoder, enc, adj, false).params;
    return out;
}

VaeLoss vae_loss(const VaeModel& model, const Matrix& x, SeededRng& rng, double beta) {
    return vae_loss(model, x, normal_matrix(x.rows(), model.latent_dim, rng), beta);
}

double swap_reconstruction_loss(const DisentangledModel& model, const Matrix& x1, const Matrix& x2) {
    require(x1.rows() == x2.rows() && x1.rows() > 0, ErrorKind::Shape, "swap loss needs paired batches");
    const Matrix s1 = model.enc_s.forward_batch(x1), s2 = model.enc_s.forward_batch(x2);
    const Matrix z1 = numerics::slice_cols(model.enc_z.forward_batch(x1), 0, model.dz);
    const Matrix z2 = numerics::slice_cols(model.enc_z.forward_batch(x2), 0, model.dz);
    const Matrix r1 = model.decoder.forward_batch(numerics::hconcat(s2, z1));
    const Matrix r2 = model.decoder.forward_batch(numerics::hconcat(s1, z2));
    return (squared_error(r1, x1) + squared_error(r2, x2)) / static_cast<double>(x1.rows());
}

DisentangledLoss disentangled_loss(const DisentangledModel& model, const data::TripletBatch& batch, const Matrix& eps1,
                                   const Matrix& eps2, const Matrix& eps3, double beta, double lambda,
                                   const FeedForwardNet* disc) {
    const std::size_t n = batch.x1.rows();
    require(n > 0 && batch.x2.rows() == n, ErrorKind::Shape, "triplet batch rows mismatch");
    const bool adv = disc != nullptr;
    if (adv) require(batch.x3.rows() == n, ErrorKind::Shape, "triplet batch rows mismatch");
    const double b = static_cast<double>(n);
    const std::size_t ds = model.ds, dz = model.dz;

    const Matrix x12 = vstack({&batch.x1, &batch.x2});
    const ForwardTrace ts = forward_trace(model.enc_s, x12);
    const ForwardTrace tz = forward_trace(model.enc_z, adv ? vstack({&batch.x1, &batch.x2, &batch.x3}) : x12);
    const Posterior post = split_posterior(tz.output, dz);
    const Matrix eps = adv ? vstack({&eps1, &eps2, &eps3}) : vstack({&eps1, &eps2});
    const Matrix z = reparameterize(post, eps);

    // decoder rows: [s2 ‖ z1] -> x1, [s1 ‖ z2] -> x2, then fakes [s1 ‖ z3]
    const std::size_t rows = adv ? 3 * n : 2 * n;
    Matrix din(rows, ds + dz);
    for (std::size_t r = 0; r < n; ++r) {
        auto a = din.row(r), c = din.row(n + r);
        std::copy_n(ts.output.row(n + r).begin(), ds, a.begin());
        std::copy_n(z.row(r).begin(), dz, a.begin() + static_cast<std::ptrdiff_t>(ds));
        std::copy_n(ts.output.row(r).begin(), ds, c.begin());
        std::copy_n(z.row(n + r).begin(), dz, c.begin() + static_cast<std::ptrdiff_t>(ds));
        if (adv) {
            auto f = din.row(2 * n + r);
            std::copy_n(ts.output.row(r).begin(), ds, f.begin());
            std::copy_n(z.row(2 * n + r).begin(), dz, f.begin() + static_cast<std::ptrdiff_t>(ds));
        }
    }
    const ForwardTrace td = forward_trace(model.decoder, din);
    const std::size_t dim = td.output.cols();

    DisentangledLoss out;
    Matrix dout(rows, dim, 0.0);
    for (std::size_t r = 0; r < 2 * n; ++r) {
        const auto target = r < n ? batch.x1.row(r) : batch.x2.row(r - n);
        const auto rec = td.output.row(r);
        auto g = dout.row(r);
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = rec[j] - target[j];
            out.swap += d * d;
            g[j] = 2.0 * d / b;
        }
    }
    out.swap /= b;
    for (std::size_t r = 0; r < 2 * n; ++r) out.kl += kl_gaussian(post.mu.row(r), post.logvar.row(r));
    out.kl /= b;

    if (adv) {
        Matrix pairs(n, 2 * dim);
        for (std::size_t r = 0; r < n; ++r) {
            auto p = pairs.row(r);
            std::copy_n(td.output.row(2 * n + r).begin(), dim, p.begin());
            std::copy_n(batch.x1.row(r).begin(), dim, p.begin() + static_cast<std::ptrdiff_t>(dim));
        }
        const ForwardTrace tdisc = forward_trace(*disc, pairs);
        Matrix dlogit(n, 1);
        for (std::size_t r = 0; r < n; ++r) {
            const double l = tdisc.output(r, 0);
            out.generator += softplus(-l);
            dlogit(r, 0) = -lambda * sigmoid(-l) / b;
        }
        out.generator /= b;
        const Matrix dpairs = backprop(*disc, tdisc, dlogit).input;
        for (std::size_t r = 0; r < n; ++r) std::copy_n(dpairs.row(r).begin(), dim, dout.row(2 * n + r).begin());
    }
    out.loss = out.swap + beta * out.kl + lambda * out.generator;

    auto gd = backprop(model.decoder, td, dout);
    out.decoder_grad = std::move(gd.params);

    Matrix d_s(2 * n, ds, 0.0);
    Matrix d_z(z.rows(), dz, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const auto a = gd.input.row(r), c = gd.input.row(n + r);
        for (std::size_t j = 0; j < ds; ++j) {
            d_s(n + r, j) += a[j];
            d_s(r, j) += c[j];
        }
        for (std::size_t j = 0; j < dz; ++j) {
            d_z(r, j) += a[ds + j];
            d_z(n + r, j) += c[ds + j];
        }
        if (adv) {
            const auto f = gd.input.row(2 * n + r);
            for (std::size_t j = 0; j < ds; ++j) d_s(r, j) += f[j];
            for (std::size_t j = 0; j < dz; ++j) d_z(2 * n + r, j) += f[ds + j];
        }
    }
    out.enc_s_grad = backprop(model.enc_s, ts, d_s, false).params;
    out.enc_z_grad = backprop(model.enc_z, tz, posterior_adjoint(post, eps, d_z, 2 * n, beta / b), false).params;
    return out;
}

AdversarialLosses adversarial_losses(const DisentangledModel& model, const FeedForwardNet& disc, const Matrix& x1,
                                     const Matrix& x2, const Matrix& x3) {
    const std::size_t n = x1.rows();
    require(n > 0 && x2.rows() == n && x3.rows() == n, ErrorKind::Shape, "adversarial losses need equal batches");
    const Matrix s1 = model.enc_s.forward_batch(x1);
    const Matrix z3 = numerics::slice_cols(model.enc_z.forward_batch(x3), 0, model.dz);
    const Matrix fake = model.decoder.forward_batch(numerics::hconcat(s1, z3));
    const Matrix lr = disc.forward_batch(numerics::hconcat(x1, x2));
    const Matrix lf = disc.forward_batch(numerics::hconcat(fake, x1));
    AdversarialLosses out;
    for (std::size_t r = 0; r < n; ++r) {
        out.real_term += softplus(-lr(r, 0));
        out.fake_term += softplus(lf(r, 0));
        out.gen_loss += softplus(-lf(r, 0));
    }
    const double b = static_cast<double>(n);
    out.real_term /= b;
    out.fake_term /= b;
    out.gen_loss /= b;
    out.disc_loss = out.real_term + out.fake_term;
    return out;
}

std::pair<double, Vector> discriminator_gradient(const FeedForwardNet& disc, const Matrix& real_pairs,
                                                 const Matrix& fake_pairs) {
    const std::size_t nr = real_pairs.rows(), nf = fake_pairs.rows();
    require(nr > 0 && nf > 0, ErrorKind::InvalidInput, "discriminator needs real and fake pairs");
    const ForwardTrace t = forward_trace(disc, vstack({&real_pairs, &fake_pairs}));
    Matrix dlogit(nr + nf, 1);
    double loss = 0.0;
    for (std::size_t r = 0; r < nr; ++r) {
        const double l = t.output(r, 0);
        loss += softplus(-l) / static_cast<double>(nr);
        dlogit(r, 0) = -sigmoid(-l) / static_cast<double>(nr);
    }
    for (std::size_t r = nr; r < nr + nf; ++r) {
        const double l = t.output(r, 0);
        loss += softplus(l) / static_cast<double>(nf);
        dlogit(r, 0) = sigmoid(l) / static_cast<double>(nf);
    }
    return {loss, backprop(disc, t, dlogit, false).params};
}

VaeModel make_vae(const ModelConfig& cfg, SeededRng& rng) {
    require(cfg.input_dim > 0 && cfg.latent_dim > 0, ErrorKind::Config, "input_dim and latent_dim must be positive");
    VaeModel m;
    m.latent_dim = cfg.latent_dim;
    m.encoder = make_mlp(cfg.input_dim, cfg.encoder_hidden, 2 * cfg.latent_dim, cfg.activation, rng);
    m.decoder = make_mlp(cfg.latent_dim, cfg.decoder_hidden, cfg.input_dim, cfg.activation, rng);
    return m;
}

DisentangledModel make_disentangled(const ModelConfig& cfg, SeededRng& rng) {
    require(cfg.input_dim > 0 && cfg.ds > 0 && cfg.dz > 0, ErrorKind::Config, "input_dim, ds and dz must be positive");
    DisentangledModel m;
    m.ds = cfg.ds;
    m.dz = cfg.dz;
    m.variant = cfg.variant;
    m.enc_s = make_mlp(cfg.input_dim, cfg.encoder_hidden, cfg.ds, cfg.activation, rng);
    m.enc_z = make_mlp(cfg.input_dim, cfg.encoder_hidden, 2 * cfg.dz, cfg.activation, rng);
    m.decoder = make_mlp(cfg.ds + cfg.dz, cfg.decoder_hidden, cfg.input_dim, cfg.activation, rng);
    if (cfg.variant == DisentangleVariant::SwapAdversarial)
        m.discriminator = make_mlp(2 * cfg.input_dim, cfg.disc_hidden, 1, cfg.activation, rng);
    return m;
}

VaeTraining train_vae(const data::LabeledDataset& ds, const ModelConfig& mcfg, const TrainConfig& tcfg,
                      std::uint64_t seed) {
    const std::size_t n = ds.size();
    require(n > 0, ErrorKind::InvalidInput, "training set is empty");
    require(tcfg.batch_size > 0 && tcfg.epochs > 0, ErrorKind::Config, "epochs and batch_size must be positive");
    ModelConfig cfg = mcfg;
    cfg.input_dim = ds.samples.cols();
    SeededRng rng(seed);
    SeededRng init = rng.split();
    VaeTraining out{make_vae(cfg, init), {}};
    AdamState enc_state, dec_state;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t epoch = 0; epoch < tcfg.epochs; ++epoch) {
        rng.shuffle(order);
        double total = 0.0;
        for (std::size_t start = 0; start < n; start += tcfg.batch_size) {
            const std::size_t end = std::min(n, start + tcfg.batch_size);
            const std::span<const std::size_t> idx(order.data() + start, end - start);
            const Matrix x = numerics::gather_rows(ds.samples, idx);
            const VaeLoss l = vae_loss(out.model, x, rng, tcfg.beta);
            check_finite(l.loss, "VAE loss");
            network::adam_step(out.model.encoder, l.encoder_grad, enc_state, tcfg.adam);
            network::adam_step(out.model.decoder, l.decoder_grad, dec_state, tcfg.adam);
            total += l.loss * static_cast<double>(end - start);
        }
        out.loss_history.push_back(total / static_cast<double>(n));
    }
    return out;
}

DisentangledTraining train_disentangled(const data::LabeledDataset& ds, const ModelConfig& mcfg,
                                        const TrainConfig& tcfg, std::uint64_t seed) {
    const std::size_t n = ds.size();
    require(tcfg.batch_size > 0 && tcfg.epochs > 0, ErrorKind::Config, "epochs and batch_size must be positive");
    require(ds.has_labels(), ErrorKind::InvalidInput, "disentangled training needs labels");
    ModelConfig cfg = mcfg;
    cfg.input_dim = ds.samples.cols();
    SeededRng rng(seed);
    SeededRng init = rng.split();
    DisentangledTraining out{make_disentangled(cfg, init), {}, {}};
    DisentangledModel& m = out.model;
    const bool adv = m.variant == DisentangleVariant::SwapAdversarial;
    AdamState s_state, z_state, dec_state, disc_state;
    const std::size_t steps = (n + tcfg.batch_size - 1) / tcfg.batch_size;
    const std::size_t dim = ds.samples.cols();
    for (std::size_t epoch = 0; epoch < tcfg.epochs; ++epoch) {
        double total = 0.0, disc_total = 0.0;
        for (std::size_t step = 0; step < steps; ++step) {
            const data::TripletBatch batch = data::sample_triplets(ds, tcfg.batch_size, rng);
            const std::size_t b = batch.x1.rows();
            const Matrix e1 = normal_matrix(b, m.dz, rng);
            const Matrix e2 = normal_matrix(b, m.dz, rng);
            const Matrix e3 = adv ? normal_matrix(b, m.dz, rng) : Matrix();
            if (adv) {
                const Posterior p3 = split_posterior(m.enc_z.forward_batch(batch.x3), m.dz);
                const Matrix fake =
                    m.decoder.forward_batch(numerics::hconcat(m.enc_s.forward_batch(batch.x1), reparameterize(p3, e3)));
                require(fake.cols() == dim, ErrorKind::Shape, "decoder output width mismatch");
                auto [dl, dg] = discriminator_gradient(*m.discriminator, numerics::hconcat(batch.x1, batch.x2),
                                                       numerics::hconcat(fake, batch.x1));
                check_finite(dl, "discriminator loss");
                network::adam_step(*m.discriminator, dg, disc_state, tcfg.adam);
                disc_total += dl;
            }
            const DisentangledLoss l = disentangled_loss(m, batch, e1, e2, e3, tcfg.beta, tcfg.lambda,
                                                         adv ? &*m.discriminator : nullptr);
            check_finite(l.loss, "disentangled loss");
            network::adam_step(m.enc_s, l.enc_s_grad, s_state, tcfg.adam);
            network::adam_step(m.enc_z, l.enc_z_grad, z_state, tcfg.adam);
            network::adam_step(m.decoder, l.decoder_grad, dec_state, tcfg.adam);
            total += l.loss;
        }
        out.loss_history.push_back(total / static_cast<double>(steps));
        if (adv) out.disc_history.push_back(disc_total / static_cast<double>(steps));
    }
    return out;
}

Matrix encode(const VaeModel& model, const Matrix& x) {
    return numerics::slice_cols(model.encoder.forward_batch(x), 0, model.latent_dim);
}

Matrix encode(const DisentangledModel& model, const Matrix& x) {
    return numerics::hconcat(encode_specified(model, x), encode_unspecified(model, x));
}

Matrix encode_specified(const DisentangledModel& model, const Matrix& x) { return model.enc_s.forward_batch(x); }

Matrix encode_unspecified(const DisentangledModel& model, const Matrix& x) {
    return numerics::slice_cols(model.enc_z.forward_batch(x), 0, model.dz);
}

geometry::MapPtr decoder_map(const VaeModel& model) { return std::make_shared<geometry::NetMap>(model.decoder); }

geometry::MapPtr decoder_map(const DisentangledModel& model) {
    return std::make_shared<geometry::NetMap>(model.decoder);
}

geometry::MapPtr specified_map(const DisentangledModel& model, std::span<const double> z_anchor) {
    require(z_anchor.size() == model.dz, ErrorKind::Shape, "unspecified anchor must have dz entries");
    Vector anchor(model.ds, 0.0);
    anchor.insert(anchor.end(), z_anchor.begin(), z_anchor.end());
    return std::make_shared<geometry::PartialMap>(decoder_map(model), std::move(anchor), 0, model.ds);
}

geometry::MapPtr unspecified_map(const DisentangledModel& model, std::span<const double> s_anchor) {
    require(s_anchor.size() == model.ds, ErrorKind::Shape, "specified anchor must have ds entries");
    Vector anchor(s_anchor.begin(), s_anchor.end());
    anchor.resize(model.ds + model.dz, 0.0);
    return std::make_shared<geometry::PartialMap>(decoder_map(model), std::move(anchor), model.ds, model.dz);
}

network::Checkpoint to_checkpoint(const VaeModel& model, std::map<std::string, std::string> config,
                                  std::uint64_t seed) {
    model.validate();
    config["latent_dim"] = std::to_string(model.latent_dim);
    network::Checkpoint c;
    c.kind = "vae";
    c.seed = seed;
    c.config = std::move(config);
    c.nets = {{"encoder", model.encoder}, {"decoder", model.decoder}};
    return c;
}

network::Checkpoint to_checkpoint(const DisentangledModel& model, std::map<std::string, std::string> config,
                                  std::uint64_t seed) {
    model.validate();
    config["ds"] = std::to_string(model.ds);
    config["dz"] = std::to_string(model.dz);
    config["variant"] = to_string(model.variant);
    network::Checkpoint c;
    c.kind = "disentangled";
    c.seed = seed;
    c.config = std::move(config);
    c.nets = {{"enc_s", model.enc_s}, {"enc_z", model.enc_z}, {"decoder", model.decoder}};
    if (model.discriminator) c.nets.emplace_back("discriminator", *model.discriminator);
    return c;
}

VaeModel vae_from_checkpoint(const network::Checkpoint& ckpt) {
    require(ckpt.kind == "vae", ErrorKind::Parse, "checkpoint holds a '" + ckpt.kind + "' model, not a vae");
    VaeModel m;
    m.encoder = ckpt.net("encoder");
    m.decoder = ckpt.net("decoder");
    m.latent_dim = m.decoder.in_dim();
    m.validate();
    return m;
}

DisentangledModel disentangled_from_checkpoint(const network::Checkpoint& ckpt) {
    require(ckpt.kind == "disentangled", ErrorKind::Parse,
            "checkpoint holds a '" + ckpt.kind + "' model, not a disentangled one");
    DisentangledModel m;
    m.enc_s = ckpt.net("enc_s");
    m.enc_z = ckpt.net("enc_z");
    m.decoder = ckpt.net("decoder");
    m.ds = m.enc_s.out_dim();
    m.dz = m.enc_z.out_dim() / 2;
    const auto it = ckpt.config.find("variant");
    m.variant = it == ckpt.config.end() ? DisentangleVariant::SwapL2Kl : parse_variant(it->second);
    if (ckpt.has_net("discriminator")) m.discriminator = ckpt.net("discriminator");
    m.validate();
    return m;
}

}  // namespace latentgeo::models
