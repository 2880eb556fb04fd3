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

#include "latentgeo/data.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <numbers>

namespace latentgeo::data {

using geometry::CircleMap;
using geometry::LinearMap;
using geometry::SphereChartMap;
using geometry::SwissRollMap;

ManifoldKind parse_manifold_kind(const std::string& name) {
    if (name == "plane") return ManifoldKind::Plane;
    if (name == "circle") return ManifoldKind::Circle;
    if (name == "sphere" || name == "sphere_chart") return ManifoldKind::SphereChart;
    if (name == "swiss_roll") return ManifoldKind::SwissRoll;
    fail(ErrorKind::Config, "unknown manifold kind '" + name + "' (expected plane, circle, sphere_chart, swiss_roll)");
}

std::string to_string(ManifoldKind kind) {
    switch (kind) {
        case ManifoldKind::Plane: return "plane";
        case ManifoldKind::Circle: return "circle";
        case ManifoldKind::SphereChart: return "sphere_chart";
        case ManifoldKind::SwissRoll: return "swiss_roll";
    }
    return "plane";
}

void LabeledDataset::validate() const {
    require(labels.empty() || labels.size() == samples.rows(), ErrorKind::Shape,
            "label count " + std::to_string(labels.size()) + " != sample count " + std::to_string(samples.rows()));
    require(samples.all_finite(), ErrorKind::InvalidInput, "dataset contains non-finite samples");
    if (latent) require(latent->rows() == samples.rows(), ErrorKind::Shape, "latent coordinate count mismatch");
}

std::size_t IdxTensor::count() const noexcept {
    std::size_t n = dims.empty() ? 0 : 1;
    for (auto d : dims) n *= d;
    return n;
}

Matrix IdxTensor::to_unit_matrix() const {
    require(!dims.empty(), ErrorKind::Shape, "IDX tensor has no dimensions");
    const std::size_t rows = dims[0];
    const std::size_t cols = rows == 0 ? 0 : count() / rows;
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < payload.size(); ++i) m.data()[i] = static_cast<double>(payload[i]) / 255.0;
    return m;
}

std::vector<int> IdxTensor::to_labels() const {
    require(dims.size() == 1, ErrorKind::Shape, "label tensor must be one-dimensional");
    return std::vector<int>(payload.begin(), payload.end());
}

IdxTensor read_idx(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open IDX file: " + path.string());
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    require(bytes.size() >= 4, ErrorKind::Parse, "IDX file too short for its magic number: " + path.string());
    require(bytes[0] == 0 && bytes[1] == 0, ErrorKind::Parse, "bad IDX magic in " + path.string());
    IdxTensor t;
    t.dtype = bytes[2];
    require(t.dtype == 0x08, ErrorKind::Parse, "unsupported IDX dtype 0x" + std::to_string(t.dtype) + " (only unsigned byte)");
    const std::size_t ndim = bytes[3];
    require(ndim >= 1, ErrorKind::Parse, "IDX file declares zero dimensions");
    const std::size_t header = 4 + 4 * ndim;
    require(bytes.size() >= header, ErrorKind::Parse, "IDX header truncated in " + path.string());
    for (std::size_t i = 0; i < ndim; ++i) {
        const std::size_t p = 4 + 4 * i;
        t.dims.push_back((std::uint32_t{bytes[p]} << 24) | (std::uint32_t{bytes[p + 1]} << 16) |
                         (std::uint32_t{bytes[p + 2]} << 8) | std::uint32_t{bytes[p + 3]});
    }
    const std::size_t expected = t.count();
    const std::size_t actual = bytes.size() - header;
    require(actual == expected, ErrorKind::Parse,
            "IDX payload size mismatch in " + path.string() + ": expected " + std::to_string(expected) +
                " bytes, found " + std::to_string(actual));
    t.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
    return t;
}

void write_idx(const IdxTensor& tensor, const std::filesystem::path& path) {
    require(tensor.payload.size() == tensor.count(), ErrorKind::Shape, "IDX payload does not match dims");
    std::string out;
    out.push_back(0);
    out.push_back(0);
    out.push_back(static_cast<char>(tensor.dtype));
    out.push_back(static_cast<char>(tensor.dims.size()));
    for (auto d : tensor.dims)
        for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((d >> s) & 0xFF));
    out.append(tensor.payload.begin(), tensor.payload.end());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), ErrorKind::Io, "cannot write IDX file: " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

LabeledDataset load_idx_dataset(const std::filesystem::path& images, const std::filesystem::path& labels) {
    LabeledDataset ds;
    ds.samples = read_idx(images).to_unit_matrix();
    ds.labels = read_idx(labels).to_labels();
    ds.provenance = {Provenance::Source::IdxFile, images.string(), 0};
    ds.validate();
    return ds;
}

double great_circle_distance(std::span<const double> a, std::span<const double> b) {
    const double dl = b[1] - a[1];
    const double c1 = std::cos(a[0]), s1 = std::sin(a[0]);
    const double c2 = std::cos(b[0]), s2 = std::sin(b[0]);
    const double x = c2 * std::sin(dl);
    const double y = c1 * s2 - s1 * c2 * std::cos(dl);
    return std::atan2(std::hypot(x, y), s1 * s2 + c1 * c2 * std::cos(dl));
}

double swiss_roll_arclength(double t) { return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t)); }

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRollStart = 1.5 * kPi;
constexpr double kRollEnd = 4.5 * kPi;
constexpr double kRollHeight = 21.0;

Matrix random_isometry(std::size_t ambient, std::size_t dim, SeededRng& rng) {
    Matrix q(ambient, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        Vector v(ambient);
        for (double& x : v) x = rng.normal();
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t p = 0; p < c; ++p) {
                double proj = 0.0;
                for (std::size_t r = 0; r < ambient; ++r) proj += q(r, p) * v[r];
                for (std::size_t r = 0; r < ambient; ++r) v[r] -= proj * q(r, p);
            }
        const double n = numerics::norm2(v);
        for (std::size_t r = 0; r < ambient; ++r) q(r, c) = v[r] / n;
    }
    return q;
}

}  // namespace

ManifoldOracle manifold_oracle(ManifoldKind kind, std::uint64_t seed) {
    ManifoldOracle o{kind, {}, {}};
    switch (kind) {
        case ManifoldKind::Plane: {
            SeededRng rng(seed);
            o.chart_map = std::make_shared<LinearMap>(random_isometry(kPlaneAmbientDim, 2, rng));
            o.exact_distance = [](std::span<const double> a, std::span<const double> b) {
                return numerics::distance(a, b);
            };
            break;
        }
        case ManifoldKind::Circle:
            o.chart_map = std::make_shared<CircleMap>(1.0);
            o.exact_distance = [](std::span<const double> a, std::span<const double> b) {
                const double d = std::fmod(std::abs(a[0] - b[0]), 2.0 * kPi);
                return std::min(d, 2.0 * kPi - d);
            };
            break;
        case ManifoldKind::SphereChart:
            o.chart_map = std::make_shared<SphereChartMap>();
            o.exact_distance = [](std::span<const double> a, std::span<const double> b) {
                return great_circle_distance(a, b);
            };
            break;
        case ManifoldKind::SwissRoll:
            o.chart_map = std::make_shared<SwissRollMap>();
            o.exact_distance = [](std::span<const double> a, std::span<const double> b) {
                return std::hypot(swiss_roll_arclength(a[0]) - swiss_roll_arclength(b[0]), a[1] - b[1]);
            };
            break;
    }
    return o;
}

SyntheticManifold synth_manifold(ManifoldKind kind, std::size_t n, double noise_sigma, std::uint64_t seed) {
    require(n >= 10, ErrorKind::Config, "synthetic manifold needs n >= 10, got " + std::to_string(n));
    require(noise_sigma >= 0.0 && std::isfinite(noise_sigma), ErrorKind::Config, "noise sigma must be >= 0");
    SeededRng rng(seed);
    SyntheticManifold out{{}, manifold_oracle(kind, rng.next_u64())};

    const std::size_t dim = out.oracle.chart_map->in_dim();
    Matrix latent(n, dim);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto z = latent.row(i);
        switch (kind) {
            case ManifoldKind::Plane:
                z[0] = rng.uniform(-1.0, 1.0);
                z[1] = rng.uniform(-1.0, 1.0);
                labels[i] = z[0] > 0.0 ? 1 : 0;
                break;
            case ManifoldKind::Circle:
                z[0] = rng.uniform(0.0, 2.0 * kPi);
                labels[i] = z[0] < kPi ? 0 : 1;
                break;
            case ManifoldKind::SphereChart: {
                // area-uniform on the band |lat| <= limit
                const double smax = std::sin(kSphereLatitudeLimit);
                z[0] = std::asin(rng.uniform(-smax, smax));
                z[1] = rng.uniform(-kPi, kPi);
                labels[i] = z[0] >= 0.0 ? 1 : 0;
                break;
            }
            case ManifoldKind::SwissRoll:
                z[0] = rng.uniform(kRollStart, kRollEnd);
                z[1] = rng.uniform(0.0, kRollHeight);
                labels[i] = z[0] < 3.0 * kPi ? 0 : 1;
                break;
        }
    }
    Matrix samples = out.oracle.chart_map->value_batch(latent);
    if (noise_sigma > 0.0)
        for (double& x : samples.data()) x += noise_sigma * rng.normal();

    out.dataset.samples = std::move(samples);
    out.dataset.labels = std::move(labels);
    out.dataset.latent = std::move(latent);
    out.dataset.provenance = {Provenance::Source::Synthetic,
                              to_string(kind) + " n=" + std::to_string(n) + " sigma=" + std::to_string(noise_sigma), seed};
    return out;
}

namespace {

std::map<int, std::vector<std::size_t>> group_by_label(const LabeledDataset& ds) {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < ds.size(); ++i) groups[ds.has_labels() ? ds.labels[i] : 0].push_back(i);
    return groups;
}

}  // namespace

TripletBatch sample_triplets(const LabeledDataset& ds, std::size_t batch, SeededRng& rng) {
    require(ds.has_labels(), ErrorKind::SingleClass, "triplet sampling needs labels");
    const auto groups = group_by_label(ds);
    require(groups.size() >= 2, ErrorKind::SingleClass, "triplet sampling needs at least two classes");

    const std::uint64_t n = ds.size();
    std::vector<const std::vector<std::size_t>*> classes;
    std::vector<std::vector<std::size_t>> others;
    std::vector<std::uint64_t> cumulative;
    std::uint64_t total = 0;
    for (const auto& [label, idx] : groups) {
        const std::uint64_t nc = idx.size();
        // ordered (x1, x2) pairs times choices of x3
        const std::uint64_t w = nc * (nc - 1) * (n - nc);
        if (w == 0) continue;
        total += w;
        classes.push_back(&idx);
        cumulative.push_back(total);
        std::vector<std::size_t> rest;
        for (const auto& [l2, idx2] : groups)
            if (l2 != label) rest.insert(rest.end(), idx2.begin(), idx2.end());
        std::sort(rest.begin(), rest.end());
        others.push_back(std::move(rest));
    }
    require(total > 0, ErrorKind::SingleClass, "no class has two members; cannot form triplets");

    TripletBatch b;
    for (std::size_t k = 0; k < batch; ++k) {
        const std::uint64_t r = rng.below(total);
        const std::size_t c = static_cast<std::size_t>(
            std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
        const auto& members = *classes[c];
        const std::size_t a = static_cast<std::size_t>(rng.below(members.size()));
        std::size_t p = static_cast<std::size_t>(rng.below(members.size() - 1));
        if (p >= a) ++p;
        const std::size_t q = static_cast<std::size_t>(rng.below(others[c].size()));
        b.i1.push_back(members[a]);
        b.i2.push_back(members[p]);
        b.i3.push_back(others[c][q]);
    }
    b.x1 = numerics::gather_rows(ds.samples, b.i1);
    b.x2 = numerics::gather_rows(ds.samples, b.i2);
    b.x3 = numerics::gather_rows(ds.samples, b.i3);
    for (std::size_t k = 0; k < batch; ++k) {
        b.label12.push_back(ds.labels[b.i1[k]]);
        b.label3.push_back(ds.labels[b.i3[k]]);
    }
    return b;
}

Normalizer fit_normalizer(const Matrix& x) {
    Normalizer n{Vector(x.cols(), 0.0), Vector(x.cols(), 0.0)};
    if (x.rows() == 0) return n;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double lo = x(0, c), hi = x(0, c);
        for (std::size_t r = 1; r < x.rows(); ++r) {
            lo = std::min(lo, x(r, c));
            hi = std::max(hi, x(r, c));
        }
        n.min[c] = lo;
        n.range[c] = hi - lo;
    }
    return n;
}

Matrix normalize(const Matrix& x, const Normalizer& norm) {
    require(norm.min.size() == x.cols(), ErrorKind::Shape, "normalizer width mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c)
            out(r, c) = norm.range[c] > 0.0 ? (x(r, c) - norm.min[c]) / norm.range[c] : 0.0;
    return out;
}

Matrix denormalize(const Matrix& x, const Normalizer& norm) {
    require(norm.min.size() == x.cols(), ErrorKind::Shape, "normalizer width mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) out(r, c) = norm.min[c] + x(r, c) * norm.range[c];
    return out;
}

LabeledDataset select(const LabeledDataset& ds, std::span<const std::size_t> idx) {
    LabeledDataset out;
    out.samples = numerics::gather_rows(ds.samples, idx);
    if (ds.has_labels())
        for (std::size_t i : idx) out.labels.push_back(ds.labels[i]);
    if (ds.latent) out.latent = numerics::gather_rows(*ds.latent, idx);
    out.provenance = ds.provenance;
    return out;
}

Split train_test_split(const LabeledDataset& ds, double fraction, std::uint64_t seed) {
    require(fraction >= 0.0 && fraction <= 1.0, ErrorKind::Config, "split fraction must lie in [0, 1]");
    SeededRng rng(seed);
    std::vector<std::size_t> first, second;
    for (auto& [label, idx] : group_by_label(ds)) {
        std::vector<std::size_t> shuffled = idx;
        rng.shuffle(shuffled);
        const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(idx.size())));
        first.insert(first.end(), shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(k));
        second.insert(second.end(), shuffled.begin() + static_cast<std::ptrdiff_t>(k), shuffled.end());
    }
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    return {select(ds, first), select(ds, second)};
}

LabeledDataset stratified_subset(const LabeledDataset& ds, std::size_t count, std::uint64_t seed) {
    require(count <= ds.size(), ErrorKind::Config,
            "requested " + std::to_string(count) + " samples from a dataset of " + std::to_string(ds.size()));
    auto groups = group_by_label(ds);
    std::vector<std::size_t> quota(groups.size(), 0);
    std::size_t assigned = 0;
    while (assigned < count) {
        std::size_t c = 0;
        for (const auto& [label, idx] : groups) {
            if (assigned < count && quota[c] < idx.size()) {
                ++quota[c];
                ++assigned;
            }
            ++c;
        }
    }
    SeededRng rng(seed);
    std::vector<std::size_t> chosen;
    std::size_t c = 0;
    for (auto& [label, idx] : groups) {
        std::vector<std::size_t> shuffled = idx;
        rng.shuffle(shuffled);
        chosen.insert(chosen.end(), shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(quota[c++]));
    }
    std::sort(chosen.begin(), chosen.end());
    return select(ds, chosen);
}

void write_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write CSV: " + path.string());
    char buf[32];
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t c = 0; c < ds.samples.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.samples(r, c));
            if (c) out << ',';
            out << buf;
        }
        if (ds.has_labels()) out << ',' << ds.labels[r];
        out << '\n';
    }
    require(static_cast<bool>(out), ErrorKind::Io, "failed writing CSV: " + path.string());
}

}  // namespace latentgeo::data
