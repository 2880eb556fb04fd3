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

#include "latentgeo/distance_matrix.hpp"
#include "latentgeo/maps.hpp"
#include "latentgeo/numerics.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace latentgeo::geometry {

/// Pullback metric Jᵀ J of a decoder at a latent point.
struct MetricTensor {
    Vector at;
    Matrix m;
};

MetricTensor metric_tensor(const DifferentiableMap& decoder, std::span<const double> z);

struct CurveMeasure {
    double energy = 0.0;  // K * sum ||x_{i+1} - x_i||^2 over K segments
    double length = 0.0;  // sum ||x_{i+1} - x_i||
};

/// `points` rows are z_0..z_K (K >= 1).
CurveMeasure curve_energy(const DifferentiableMap& decoder, const Matrix& points);
/// Same measure for an already decoded polyline.
CurveMeasure polyline_energy(const Matrix& decoded);

struct GeodesicOptions {
    std::size_t segments = 16;     // K
    double tol = 1e-6;             // relative energy change
    std::size_t max_iters = 500;
    double armijo_c = 1e-4;
};

struct GeodesicCurve {
    Matrix points;   // (K+1) x latent_dim, endpoints are the query pair
    Matrix decoded;  // (K+1) x ambient_dim
    double energy = 0.0;
    double length = 0.0;
    double initial_energy = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
};

/// Minimizes the discrete ambient energy of a K-segment latent polyline from
/// a to b, starting from the straight segment. Descent steps are
/// preconditioned by the inverse second-difference operator along the curve
/// and accepted by Armijo backtracking, so energy never increases. Never
/// throws on slow convergence; `converged` reports it instead.
GeodesicCurve geodesic(const DifferentiableMap& decoder, std::span<const double> a, std::span<const double> b,
                       const GeodesicOptions& opts = {});

struct RiemannianDistance {
    double value = 0.0;
    bool converged = true;
};

RiemannianDistance riemannian_distance(const DifferentiableMap& decoder, std::span<const double> a,
                                       std::span<const double> b, const GeodesicOptions& opts = {});

/// kNN graph in latent space (union of neighbor lists), edges weighted by
/// the decoded chord length, all-pairs Dijkstra. Throws DisconnectedGraph
/// naming the component sizes.
DistanceMatrix graph_geodesic_matrix(const DifferentiableMap& decoder, const Matrix& latent, std::size_t k_neighbors);
DistanceMatrix graph_geodesic_matrix(const Matrix& latent, const Matrix& decoded, std::size_t k_neighbors);

/// Indices of the k nearest other rows of `points` to row i, nearest first
/// (ties by index).
std::vector<std::size_t> nearest_neighbors(const Matrix& points, std::size_t i, std::size_t k);

enum class InterpolationMode { Euclidean, Riemannian };

struct Interpolation {
    Matrix latent;   // n x latent_dim
    Matrix ambient;  // n x ambient_dim
    bool converged = true;
};

/// n decoded samples from a to b: equally spaced on the latent segment, or
/// equally spaced in arc length along the geodesic.
Interpolation interpolate(const DifferentiableMap& decoder, std::span<const double> a, std::span<const double> b,
                          std::size_t n, InterpolationMode mode, const GeodesicOptions& opts = {});

struct TangentBasis {
    std::size_t at = 0;
    Matrix u;  // ambient_dim x d_sub, orthonormal columns
};

/// Neighborhood = point `index` plus its k nearest others in `selection`
/// space; the basis is the top d_sub left singular vectors of the
/// mean-centered neighborhood taken from `ambient`.
TangentBasis tangent_basis(const Matrix& selection, const Matrix& ambient, std::size_t index, std::size_t k_neighbors,
                           std::size_t d_sub);
TangentBasis tangent_basis(const Matrix& points, std::size_t index, std::size_t k_neighbors, std::size_t d_sub);

/// Principal angles in radians, ascending.
std::vector<double> principal_angles(const TangentBasis& u1, const TangentBasis& u2);
std::vector<double> principal_angles(const Matrix& u1, const Matrix& u2);

struct CurvatureOptions {
    std::size_t k_neighbors = 12;
    std::size_t d_sub = 2;
    std::size_t n_pairs = 200;
    double lower_percentile = 10.0;
    double upper_percentile = 50.0;
};

/// Mean principal angle (degrees) between tangent bases of random point
/// pairs whose selection-space distance falls in the percentile band.
double curvature_score(const Matrix& selection, const Matrix& ambient, const CurvatureOptions& opts,
                       numerics::SeededRng& rng);
double curvature_score(const Matrix& points, const CurvatureOptions& opts, numerics::SeededRng& rng);

struct RankReport {
    std::vector<std::size_t> ranks;
    std::size_t min = 0;
    std::size_t median = 0;  // lower median
    std::size_t max = 0;
};

RankReport jacobian_rank_report(const DifferentiableMap& decoder, const Matrix& points,
                                double rel_tol = numerics::kDefaultRankTolerance);

}  // namespace latentgeo::geometry
