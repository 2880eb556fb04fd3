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

#include "latentgeo/numerics.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace latentgeo::network {

using numerics::Matrix;
using numerics::Vector;

enum class ActivationKind { Elu, Relu, Tanh, Identity };

/// Pointwise nonlinearity. ELU and tanh are C1 and monotone; ReLU exists for
/// the rank-collapse contrast and uses derivative 0 at exactly 0.
struct Activation {
    ActivationKind kind = ActivationKind::Identity;
    double alpha = 1.0;  // ELU only

    static Activation elu(double alpha = 1.0) { return {ActivationKind::Elu, alpha}; }
    static Activation relu() { return {ActivationKind::Relu, 1.0}; }
    static Activation tanh() { return {ActivationKind::Tanh, 1.0}; }
    static Activation identity() { return {ActivationKind::Identity, 1.0}; }
    static Activation parse(const std::string& name);

    double apply(double x) const noexcept;
    /// d act / d pre, given both the pre-activation and its image.
    double derivative(double pre, double post) const noexcept;
    std::string name() const;

    friend bool operator==(const Activation&, const Activation&) = default;
};

struct Layer {
    Matrix weight;  // out x in
    Vector bias;    // out
    Activation act;
};

class FeedForwardNet {
public:
    FeedForwardNet() = default;
    explicit FeedForwardNet(std::vector<Layer> layers);

    /// widths = {in, h1, ..., out}; one activation per layer. He-style
    /// uniform weights (limit sqrt(6 / fan_in)), zero biases.
    static FeedForwardNet random(std::span<const std::size_t> widths, std::span<const Activation> acts,
                                 numerics::SeededRng& rng);

    std::size_t in_dim() const noexcept;
    std::size_t out_dim() const noexcept;
    std::size_t num_layers() const noexcept { return layers_.size(); }
    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::vector<Layer>& mutable_layers() noexcept { return layers_; }

    Vector forward(std::span<const double> z) const;
    /// Row-wise forward of a batch (rows are samples).
    Matrix forward_batch(const Matrix& x) const;
    /// out_dim x in_dim matrix of partial derivatives at z.
    Matrix jacobian(std::span<const double> z) const;
    /// Jᵀ v at z.
    Vector vjp(std::span<const double> z, std::span<const double> v) const;

    std::size_t parameter_count() const noexcept;
    /// Layer order; per layer the weight (row-major) then the bias.
    Vector flat_parameters() const;
    void set_flat_parameters(std::span<const double> p);

    bool all_finite() const noexcept;

private:
    std::vector<Layer> layers_;
};

/// Activations recorded by a batched forward pass for backprop.
struct ForwardTrace {
    std::vector<Matrix> inputs;  // input to each layer
    std::vector<Matrix> pre;     // pre-activation of each layer
    Matrix output;
};

ForwardTrace forward_trace(const FeedForwardNet& net, const Matrix& x);

struct Gradients {
    Vector params;      // same layout as flat_parameters()
    Matrix input;       // d loss / d input, one row per sample
};

/// Reverse-mode pass; `output_adjoint` holds d loss / d output per sample.
/// With want_input = false the input gradient is left empty.
Gradients backprop(const FeedForwardNet& net, const ForwardTrace& trace, const Matrix& output_adjoint,
                   bool want_input = true);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    Vector m;
    Vector v;
    std::uint64_t step = 0;
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& cfg);

/// Applies one Adam update to a whole net.
void adam_step(FeedForwardNet& net, std::span<const double> grads, AdamState& state, const AdamConfig& cfg);

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// A set of named nets plus the training config echo. See docs/FORMATS.md for
/// the byte layout.
struct Checkpoint {
    std::uint32_t format_version = kCheckpointVersion;
    std::string kind;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config;
    std::vector<std::pair<std::string, FeedForwardNet>> nets;

    const FeedForwardNet& net(const std::string& name) const;
    bool has_net(const std::string& name) const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace latentgeo::network
