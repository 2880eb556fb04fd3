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

#pragma once

#include "latentgeo/data.hpp"
#include "latentgeo/maps.hpp"
#include "latentgeo/network.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace latentgeo::models {

using network::Activation;
using network::FeedForwardNet;
using numerics::Matrix;
using numerics::SeededRng;
using numerics::Vector;

/// x -> (mu, logvar) encoder, z -> x decoder.
struct VaeModel {
    FeedForwardNet encoder;
    FeedForwardNet decoder;
    std::size_t latent_dim = 0;

    void validate() const;
};

enum class DisentangleVariant { SwapL2Kl, SwapAdversarial };

DisentangleVariant parse_variant(const std::string& name);
std::string to_string(DisentangleVariant v);

/// Factorized autoencoder: enc_s gives the specified code s, enc_z the
/// Gaussian posterior of the unspecified code z, the decoder reads (s ‖ z).
struct DisentangledModel {
    FeedForwardNet enc_s;
    FeedForwardNet enc_z;
    FeedForwardNet decoder;
    std::size_t ds = 0;
    std::size_t dz = 0;
    DisentangleVariant variant = DisentangleVariant::SwapL2Kl;
    std::optional<FeedForwardNet> discriminator;

    void validate() const;
};

/// KL(N(mu, diag exp(logvar)) || N(0, I)).
double kl_gaussian(std::span<const double> mu, std::span<const double> logvar);

struct VaeLoss {
    double loss = 0.0;
    double reconstruction = 0.0;  // batch mean of ||x - x̂||²
    double kl = 0.0;              // batch mean
    Vector encoder_grad;
    Vector decoder_grad;
};

/// One reparameterized sample per row, z = mu + exp(logvar / 2) * eps, with
/// the noise supplied so gradients can be checked against finite differences.
VaeLoss vae_loss(const VaeModel& model, const Matrix& x, const Matrix& eps, double beta);
VaeLoss vae_loss(const VaeModel& model, const Matrix& x, SeededRng& rng, double beta);

/// Batch mean of ||x1 - f(s(x2), z(x1))||² + ||x2 - f(s(x1), z(x2))||² with
/// posterior means for z: each image is rebuilt from its own unspecified
/// code and its partner's specified code.
double swap_reconstruction_loss(const DisentangledModel& model, const Matrix& x1, const Matrix& x2);

struct DisentangledLoss {
    double loss = 0.0;
    double swap = 0.0;
    double kl = 0.0;
    double generator = 0.0;      // non-saturating adversarial term, 0 without a discriminator
    Vector enc_s_grad;
    Vector enc_z_grad;
    Vector decoder_grad;
};

/// Generator-side objective: swap + beta * KL(unspecified) (+ lambda *
/// generator loss when `disc` is given). eps1, eps2, eps3 reparameterize the
/// unspecified codes of x1, x2, x3.
DisentangledLoss disentangled_loss(const DisentangledModel& model, const data::TripletBatch& batch, const Matrix& eps1,
                                   const Matrix& eps2, const Matrix& eps3, double beta, double lambda,
                                   const FeedForwardNet* disc);

struct AdversarialLosses {
    double gen_loss = 0.0;   // -mean log d(fake)
    double disc_loss = 0.0;  // -mean [log d(real) + log(1 - d(fake))]
    double real_term = 0.0;  // -mean log d(real)
    double fake_term = 0.0;  // -mean log(1 - d(fake))
};

/// Real pairs (x1, x2) against fake pairs (f(s(x1), z(x3)), x1): the fake
/// keeps x1's specified code under x3's nuisance code. The discriminator
/// outputs a logit and reads the concatenated pair.
AdversarialLosses adversarial_losses(const DisentangledModel& model, const FeedForwardNet& disc, const Matrix& x1,
                                     const Matrix& x2, const Matrix& x3);

/// Discriminator loss and its parameter gradient for precomputed fakes.
std::pair<double, Vector> discriminator_gradient(const FeedForwardNet& disc, const Matrix& real_pairs,
                                                 const Matrix& fake_pairs);

struct ModelConfig {
    std::size_t input_dim = 0;
    std::vector<std::size_t> encoder_hidden{256};
    std::vector<std::size_t> decoder_hidden{256};
    std::vector<std::size_t> disc_hidden{128};
    Activation activation = Activation::elu();
    std::size_t latent_dim = 16;  // VAE
    std::size_t ds = 16;
    std::size_t dz = 64;
    DisentangleVariant variant = DisentangleVariant::SwapL2Kl;
};

struct TrainConfig {
    std::size_t epochs = 20;
    std::size_t batch_size = 64;
    network::AdamConfig adam{};
    double beta = 1.0;
    double lambda = 1.0;
};

VaeModel make_vae(const ModelConfig& cfg, SeededRng& rng);
DisentangledModel make_disentangled(const ModelConfig& cfg, SeededRng& rng);

struct VaeTraining {
    VaeModel model;
    std::vector<double> loss_history;  // mean loss per epoch
};

struct DisentangledTraining {
    DisentangledModel model;
    std::vector<double> loss_history;
    std::vector<double> disc_history;  // adversarial variant only
};

VaeTraining train_vae(const data::LabeledDataset& ds, const ModelConfig& mcfg, const TrainConfig& tcfg,
                      std::uint64_t seed);
DisentangledTraining train_disentangled(const data::LabeledDataset& ds, const ModelConfig& mcfg,
                                        const TrainConfig& tcfg, std::uint64_t seed);

/// Posterior means; one row per sample.
Matrix encode(const VaeModel& model, const Matrix& x);
/// Rows are s ‖ mu_z.
Matrix encode(const DisentangledModel& model, const Matrix& x);
Matrix encode_specified(const DisentangledModel& model, const Matrix& x);
Matrix encode_unspecified(const DisentangledModel& model, const Matrix& x);

geometry::MapPtr decoder_map(const VaeModel& model);
geometry::MapPtr decoder_map(const DisentangledModel& model);
/// s -> f(s ‖ z_anchor)
geometry::MapPtr specified_map(const DisentangledModel& model, std::span<const double> z_anchor);
/// z -> f(s_anchor ‖ z)
geometry::MapPtr unspecified_map(const DisentangledModel& model, std::span<const double> s_anchor);

network::Checkpoint to_checkpoint(const VaeModel& model, std::map<std::string, std::string> config, std::uint64_t seed);
network::Checkpoint to_checkpoint(const DisentangledModel& model, std::map<std::string, std::string> config,
                                  std::uint64_t seed);
VaeModel vae_from_checkpoint(const network::Checkpoint& ckpt);
DisentangledModel disentangled_from_checkpoint(const network::Checkpoint& ckpt);

}  // namespace latentgeo::models
