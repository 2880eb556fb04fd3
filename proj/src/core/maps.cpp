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

#include "latentgeo/maps.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <cmath>

namespace latentgeo::geometry {

Vector DifferentiableMap::vjp(std::span<const double> z, std::span<const double> v) const {
    return numerics::matvec_t(jacobian(z), v);
}

Matrix DifferentiableMap::value_batch(const Matrix& z) const {
    require(z.cols() == in_dim(), ErrorKind::Shape, "value_batch: input width mismatch");
    Matrix out(z.rows(), out_dim());
    for (std::size_t r = 0; r < z.rows(); ++r) {
        Vector x = value(z.row(r));
        std::copy(x.begin(), x.end(), out.row(r).begin());
    }
    return out;
}

NetMap::NetMap(network::FeedForwardNet net) : net_(std::move(net)) {}

LinearMap::LinearMap(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    if (b_.empty()) b_.assign(a_.rows(), 0.0);
    require(b_.size() == a_.rows(), ErrorKind::Shape, "linear map offset length mismatch");
}

Vector LinearMap::value(std::span<const double> z) const {
    Vector x = numerics::matvec(a_, z);
    numerics::axpy(1.0, b_, x);
    return x;
}

Vector LinearMap::vjp(std::span<const double>, std::span<const double> v) const {
    return numerics::matvec_t(a_, v);
}

PartialMap::PartialMap(MapPtr base, Vector anchor, std::size_t begin, std::size_t width)
    : base_(std::move(base)), anchor_(std::move(anchor)), begin_(begin), width_(width) {
    require(base_ != nullptr, ErrorKind::InvalidInput, "partial map needs a base map");
    require(anchor_.size() == base_->in_dim(), ErrorKind::Shape, "partial map anchor length mismatch");
    require(begin_ + width_ <= anchor_.size() && width_ > 0, ErrorKind::Shape, "partial map range out of bounds");
}

Vector PartialMap::embed(std::span<const double> z) const {
    require(z.size() == width_, ErrorKind::Shape, "partial map input length mismatch");
    Vector full = anchor_;
    std::copy(z.begin(), z.end(), full.begin() + static_cast<std::ptrdiff_t>(begin_));
    return full;
}

Vector PartialMap::value(std::span<const double> z) const { return base_->value(embed(z)); }

Matrix PartialMap::jacobian(std::span<const double> z) const {
    return numerics::slice_cols(base_->jacobian(embed(z)), begin_, begin_ + width_);
}

Vector PartialMap::vjp(std::span<const double> z, std::span<const double> v) const {
    Vector full = base_->vjp(embed(z), v);
    return Vector(full.begin() + static_cast<std::ptrdiff_t>(begin_),
                  full.begin() + static_cast<std::ptrdiff_t>(begin_ + width_));
}

Matrix PartialMap::value_batch(const Matrix& z) const {
    require(z.cols() == width_, ErrorKind::Shape, "partial map batch width mismatch");
    Matrix full(z.rows(), anchor_.size());
    for (std::size_t r = 0; r < z.rows(); ++r) {
        std::copy(anchor_.begin(), anchor_.end(), full.row(r).begin());
        std::copy(z.row(r).begin(), z.row(r).end(), full.row(r).begin() + static_cast<std::ptrdiff_t>(begin_));
    }
    return base_->value_batch(full);
}

Vector SphereChartMap::value(std::span<const double> z) const {
    require(z.size() == 2, ErrorKind::Shape, "sphere chart takes (lat, lon)");
    const double cl = std::cos(z[0]);
    return {cl * std::cos(z[1]), cl * std::sin(z[1]), std::sin(z[0])};
}

Matrix SphereChartMap::jacobian(std::span<const double> z) const {
    require(z.size() == 2, ErrorKind::Shape, "sphere chart takes (lat, lon)");
    const double cl = std::cos(z[0]), sl = std::sin(z[0]);
    const double co = std::cos(z[1]), so = std::sin(z[1]);
    return Matrix{{-sl * co, -cl * so}, {-sl * so, cl * co}, {cl, 0.0}};
}

Vector CircleMap::value(std::span<const double> z) const {
    require(z.size() == 1, ErrorKind::Shape, "circle map takes one angle");
    return {radius_ * std::cos(z[0]), radius_ * std::sin(z[0])};
}

Matrix CircleMap::jacobian(std::span<const double> z) const {
    require(z.size() == 1, ErrorKind::Shape, "circle map takes one angle");
    return Matrix{{-radius_ * std::sin(z[0])}, {radius_ * std::cos(z[0])}};
}

Vector SwissRollMap::value(std::span<const double> z) const {
    require(z.size() == 2, ErrorKind::Shape, "swiss roll takes (t, h)");
    return {z[0] * std::cos(z[0]), z[1], z[0] * std::sin(z[0])};
}

Matrix SwissRollMap::jacobian(std::span<const double> z) const {
    require(z.size() == 2, ErrorKind::Shape, "swiss roll takes (t, h)");
    const double c = std::cos(z[0]), s = std::sin(z[0]);
    return Matrix{{c - z[0] * s, 0.0}, {0.0, 1.0}, {s + z[0] * c, 0.0}};
}

}  // namespace latentgeo::geometry
