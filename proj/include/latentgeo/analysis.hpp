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
#include "latentgeo/geometry.hpp"
#include "latentgeo/maps.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace latentgeo::analysis {

using numerics::Matrix;

/// 1 - Pearson correlation of the two upper triangles (population
/// statistics), clamped to [0, 2].
double residual_cross_correlation(const DistanceMatrix& d_euclid, const DistanceMatrix& d_riem);

struct MarginResult {
    std::vector<double> margins;  // NaN where a point was skipped
    double mean = 0.0;
    std::size_t skipped = 0;
};

/// Per point: (d_other - d_same) / d_other with the nearest other-class and
/// nearest same-class neighbors under Euclidean distance in `points`. Points
/// whose class has a single member are skipped.
MarginResult normalized_margin(const Matrix& points, std::span<const int> labels);

struct KMedoidsResult {
    std::vector<std::size_t> assignments;  // cluster index per point
    std::vector<std::size_t> medoids;      // point index per cluster
    double cost = 0.0;
    std::vector<double> cost_history;      // after initialization, then per iteration
    std::size_t iterations = 0;
    bool converged = false;
};

/// PAM: greedy BUILD initialization, then best-improvement swaps until no
/// swap lowers the total distance to the nearest medoid. The seed only fixes
/// the order in which ties are resolved.
KMedoidsResult kmedoids(const DistanceMatrix& d, std::size_t k, std::uint64_t seed, std::size_t max_iters = 100);

/// Pairwise F1 x 100 of "same cluster" against "same label".
double pairwise_f_score(std::span<const std::size_t> assignments, std::span<const int> labels);

/// One latent space to evaluate: codes plus the decoder that realizes them.
struct AnalysisSpace {
    std::string model_id;
    std::string tag;  // vae | specified | unspecified
    Matrix latent;
    geometry::MapPtr decoder;
};

struct CompareConfig {
    std::size_t k_neighbors = 10;
    std::size_t max_escalations = 3;
    geometry::CurvatureOptions curvature{};
    std::size_t n_distance_pairs = 100;
    std::size_t kmedoids_max_iters = 100;
    std::size_t n_clusters = 0;  // 0: number of distinct labels
    std::uint64_t seed = 0;
};

struct MetricReport {
    std::string model_id;
    std::string space;
    std::size_t n_points = 0;
    std::size_t k_neighbors = 0;  // after any escalation
    double c_hat = 0.0;
    double mean_margin = 0.0;
    double curvature_deg = 0.0;
    double f_euclid = 0.0;
    double f_riem = 0.0;
    double mean_dist_euclid = 0.0;
    double mean_dist_riem = 0.0;
    std::vector<std::string> warnings;
};

MetricReport evaluate_space(const AnalysisSpace& space, std::span<const int> labels, const CompareConfig& cfg);
std::vector<MetricReport> compare_spaces(const std::vector<AnalysisSpace>& spaces, std::span<const int> labels,
                                         const CompareConfig& cfg);

/// Fixed column order: model,space,n_points,k_neighbors,c_hat,mean_margin,
/// curvature_deg,f_euclid,f_riem,mean_dist_euclid,mean_dist_riem
void write_report_csv(const std::vector<MetricReport>& reports, const std::filesystem::path& path);
void write_report_json(const std::vector<MetricReport>& reports, const std::map<std::string, std::string>& config,
                       std::uint64_t seed, const std::filesystem::path& path);

}  // namespace latentgeo::analysis
