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

#include "latentgeo/maps.hpp"
#include "latentgeo/numerics.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace latentgeo::data {

using numerics::Matrix;
using numerics::SeededRng;
using numerics::Vector;

enum class ManifoldKind { Plane, Circle, SphereChart, SwissRoll };

ManifoldKind parse_manifold_kind(const std::string& name);
std::string to_string(ManifoldKind kind);

struct Provenance {
    enum class Source { IdxFile, Synthetic } source = Source::IdxFile;
    std::string description;  // file path, or "kind n=.. sigma=.."
    std::uint64_t seed = 0;
};

struct LabeledDataset {
    Matrix samples;            // n x ambient_dim
    std::vector<int> labels;   // empty or n entries
    Provenance provenance;
    /// Chart coordinates of each sample; synthetic datasets only.
    std::optional<Matrix> latent;

    std::size_t size() const noexcept { return samples.rows(); }
    bool has_labels() const noexcept { return !labels.empty(); }
    void validate() const;
};

/// Raw IDX container: big-endian dims, row-major payload.
struct IdxTensor {
    std::uint8_t dtype = 0x08;
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> payload;

    std::size_t count() const noexcept;
    /// dims[0] x prod(dims[1..]) with every byte scaled into [0, 1].
    Matrix to_unit_matrix() const;
    std::vector<int> to_labels() const;
};

/// Only unsigned-byte (0x08) payloads are supported, which covers MNIST.
IdxTensor read_idx(const std::filesystem::path& path);
void write_idx(const IdxTensor& tensor, const std::filesystem::path& path);

LabeledDataset load_idx_dataset(const std::filesystem::path& images, const std::filesystem::path& labels);

struct ManifoldOracle {
    ManifoldKind kind;
    /// Exact geodesic distance between two chart (latent) points.
    std::function<double(std::span<const double>, std::span<const double>)> exact_distance;
    geometry::MapPtr chart_map;
};

struct SyntheticManifold {
    LabeledDataset dataset;
    ManifoldOracle oracle;
};

inline constexpr double kSphereLatitudeLimit = 80.0 * 3.14159265358979323846 / 180.0;
inline constexpr std::size_t kPlaneAmbientDim = 64;

/// Flat plane isometrically embedded in R^64, circle, sphere chart (latitude
/// kept inside +-80 degrees) or swiss roll. Labels split the chart in two.
SyntheticManifold synth_manifold(ManifoldKind kind, std::size_t n, double noise_sigma, std::uint64_t seed);

/// Closed-form oracles, usable without generating a dataset.
ManifoldOracle manifold_oracle(ManifoldKind kind, std::uint64_t seed = 0);
double great_circle_distance(std::span<const double> a, std::span<const double> b);
/// Arc length of the roll's spiral from 0 to t.
double swiss_roll_arclength(double t);

struct TripletBatch {
    Matrix x1, x2, x3;
    std::vector<int> label12;
    std::vector<int> label3;
    std::vector<std::size_t> i1, i2, i3;
};

/// Draws `batch` triplets uniformly over all valid (x1, x2 same label,
/// x3 different label) index triples.
TripletBatch sample_triplets(const LabeledDataset& ds, std::size_t batch, SeededRng& rng);

struct Normalizer {
    Vector min;
    Vector range;  // 0 for constant features
};

Normalizer fit_normalizer(const Matrix& x);
Matrix normalize(const Matrix& x, const Normalizer& norm);
Matrix denormalize(const Matrix& x, const Normalizer& norm);

struct Split {
    LabeledDataset first;
    LabeledDataset second;
};

/// Label-stratified split; each class contributes round(fraction * n_c)
/// samples to `first`.
Split train_test_split(const LabeledDataset& ds, double fraction, std::uint64_t seed);

/// `count` samples spread as evenly as possible across classes.
LabeledDataset stratified_subset(const LabeledDataset& ds, std::size_t count, std::uint64_t seed);

LabeledDataset select(const LabeledDataset& ds, std::span<const std::size_t> idx);

/// One row per sample, label (if any) as the trailing column.
void write_csv(const LabeledDataset& ds, const std::filesystem::path& path);

}  // namespace latentgeo::data
