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

#include "latentgeo/distance_matrix.hpp"

#include "latentgeo/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace latentgeo {

std::string to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::Euclidean: return "euclidean";
        case MetricKind::RiemannianGraph: return "riemannian-graph";
        case MetricKind::RiemannianCurve: return "riemannian-curve";
    }
    return "euclidean";
}

DistanceMatrix::DistanceMatrix(std::size_t n, MetricKind kind)
    : n_(n), kind_(kind), upper_(n < 2 ? 0 : n * (n - 1) / 2, 0.0) {}

void DistanceMatrix::set(std::size_t i, std::size_t j, double v) {
    require(i < n_ && j < n_ && i != j, ErrorKind::Shape, "distance index out of range or on the diagonal");
    require(std::isfinite(v) && v >= 0.0, ErrorKind::InvalidInput, "distances must be finite and nonnegative");
    upper_[i < j ? index(i, j) : index(j, i)] = v;
}

void DistanceMatrix::write_csv(const std::filesystem::path& path, std::span<const std::string> ids) const {
    require(ids.empty() || ids.size() == n_, ErrorKind::Shape, "id count does not match matrix size");
    std::ofstream out(path, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write distance matrix: " + path.string());
    for (std::size_t j = 0; j < n_; ++j) {
        if (j) out << ',';
        if (ids.empty()) out << j;
        else out << ids[j];
    }
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", (*this)(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    require(static_cast<bool>(out), ErrorKind::Io, "failed writing distance matrix: " + path.string());
}

DistanceMatrix euclidean_distance_matrix(const numerics::Matrix& points) {
    DistanceMatrix d(points.rows(), MetricKind::Euclidean);
    for (std::size_t i = 0; i < points.rows(); ++i)
        for (std::size_t j = i + 1; j < points.rows(); ++j) d.set(i, j, numerics::distance(points.row(i), points.row(j)));
    return d;
}

}  // namespace latentgeo
