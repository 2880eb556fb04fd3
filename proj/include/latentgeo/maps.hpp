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

#include "latentgeo/network.hpp"
#include "latentgeo/numerics.hpp"

#include <memory>
#include <span>

namespace latentgeo::geometry {

using numerics::Matrix;
using numerics::Vector;

/// A smooth map from latent coordinates to ambient space. Decoders and the
/// closed-form charts used as geometry oracles both implement it.
class DifferentiableMap {
public:
    virtual ~DifferentiableMap() = default;

    virtual std::size_t in_dim() const = 0;
    virtual std::size_t out_dim() const = 0;
    virtual Vector value(std::span<const double> z) const = 0;
    virtual Matrix jacobian(std::span<const double> z) const = 0;
    /// Jᵀ v. The default forms the full Jacobian.
    virtual Vector vjp(std::span<const double> z, std::span<const double> v) const;
    /// Row-wise value.
    virtual Matrix value_batch(const Matrix& z) const;
};

using MapPtr = std::shared_ptr<const DifferentiableMap>;

class NetMap final : public DifferentiableMap {
public:
    explicit NetMap(network::FeedForwardNet net);

    std::size_t in_dim() const override { return net_.in_dim(); }
    std::size_t out_dim() const override { return net_.out_dim(); }
    Vector value(std::span<const double> z) const override { return net_.forward(z); }
    Matrix jacobian(std::span<const double> z) const override { return net_.jacobian(z); }
    Vector vjp(std::span<const double> z, std::span<const double> v) const override { return net_.vjp(z, v); }
    Matrix value_batch(const Matrix& z) const override { return net_.forward_batch(z); }

    const network::FeedForwardNet& net() const noexcept { return net_; }

private:
    network::FeedForwardNet net_;
};

/// x = A z + b
class LinearMap final : public DifferentiableMap {
public:
    explicit LinearMap(Matrix a, Vector b = {});

    std::size_t in_dim() const override { return a_.cols(); }
    std::size_t out_dim() const override { return a_.rows(); }
    Vector value(std::span<const double> z) const override;
    Matrix jacobian(std::span<const double>) const override { return a_; }
    Vector vjp(std::span<const double>, std::span<const double> v) const override;

    const Matrix& matrix() const noexcept { return a_; }

private:
    Matrix a_;
    Vector b_;
};

/// Restricts a map to the coordinates [begin, begin + width) of its input,
/// holding the remaining coordinates at `anchor`. Used to view a factorized
/// decoder as a function of its specified (or unspecified) code alone.
class PartialMap final : public DifferentiableMap {
public:
    PartialMap(MapPtr base, Vector anchor, std::size_t begin, std::size_t width);

    std::size_t in_dim() const override { return width_; }
    std::size_t out_dim() const override { return base_->out_dim(); }
    Vector value(std::span<const double> z) const override;
    Matrix jacobian(std::span<const double> z) const override;
    Vector vjp(std::span<const double> z, std::span<const double> v) const override;
    Matrix value_batch(const Matrix& z) const override;

private:
    Vector embed(std::span<const double> z) const;

    MapPtr base_;
    Vector anchor_;
    std::size_t begin_;
    std::size_t width_;
};

/// (latitude, longitude) -> point on the unit 2-sphere in R^3.
class SphereChartMap final : public DifferentiableMap {
public:
    std::size_t in_dim() const override { return 2; }
    std::size_t out_dim() const override { return 3; }
    Vector value(std::span<const double> z) const override;
    Matrix jacobian(std::span<const double> z) const override;
};

/// t -> radius * (cos t, sin t)
class CircleMap final : public DifferentiableMap {
public:
    explicit CircleMap(double radius = 1.0) : radius_(radius) {}
    std::size_t in_dim() const override { return 1; }
    std::size_t out_dim() const override { return 2; }
    Vector value(std::span<const double> z) const override;
    Matrix jacobian(std::span<const double> z) const override;

private:
    double radius_;
};

/// (t, h) -> (t cos t, h, t sin t)
class SwissRollMap final : public DifferentiableMap {
public:
    std::size_t in_dim() const override { return 2; }
    std::size_t out_dim() const override { return 3; }
    Vector value(std::span<const double> z) const override;
    Matrix jacobian(std::span<const double> z) const override;
};

}  // namespace latentgeo::geometry
