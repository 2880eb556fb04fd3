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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace latentgeo {

enum class MetricKind { Euclidean, RiemannianGraph, RiemannianCurve };

std::string to_string(MetricKind kind);

/// Symmetric pairwise distances with a zero diagonal, stored as the strict
/// upper triangle in row order: (0,1), (0,2), ..., (1,2), ...
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    DistanceMatrix(std::size_t n, MetricKind kind);

    std::size_t size() const noexcept { return n_; }
    MetricKind kind() const noexcept { return kind_; }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        if (i == j) return 0.0;
        return i < j ? upper_[index(i, j)] : upper_[index(j, i)];
    }
    /// Sets d(i, j) = d(j, i) = v; i != j, v >= 0 and finite.
    void set(std::size_t i, std::size_t j, double v);

    std::span<const double> upper_triangle() const noexcept { return upper_; }

    /// Header row holds the point ids (0..n-1 unless given).
    void write_csv(const std::filesystem::path& path, std::span<const std::string> ids = {}) const;

private:
    std::size_t index(std::size_t i, std::size_t j) const noexcept {
        return i * n_ - i * (i + 1) / 2 + (j - i - 1);
    }

    std::size_t n_ = 0;
    MetricKind kind_ = MetricKind::Euclidean;
    std::vector<double> upper_;
};

DistanceMatrix euclidean_distance_matrix(const numerics::Matrix& points);

}  // namespace latentgeo
