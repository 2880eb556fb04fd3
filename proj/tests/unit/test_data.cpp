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

#include "doctest.h"
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

using namespace latentgeo;
using numerics::Matrix;
using numerics::Vector;

namespace {

const std::filesystem::path kDir = std::filesystem::temp_directory_path() / "latentgeo_unit";

void write_bytes(const std::filesystem::path& p, const std::vector<unsigned char>& b) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary).write(reinterpret_cast<const char*>(b.data()),
                                              static_cast<std::streamsize>(b.size()));
}

// 3 images of 2x2, then 3 labels
std::vector<unsigned char> image_fixture() {
    return {0, 0, 8, 3, 0, 0, 0, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 255, 51, 102, 1, 2, 3, 4, 255, 255, 0, 0};
}
std::vector<unsigned char> label_fixture() { return {0, 0, 8, 1, 0, 0, 0, 3, 7, 1, 7}; }

data::LabeledDataset labelled(std::size_t n, int classes) {
    data::LabeledDataset ds;
    ds.samples = Matrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        ds.samples(i, 0) = static_cast<double>(i);
        ds.labels.push_back(static_cast<int>(i) % classes);
    }
    return ds;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("IDX reading") {
    write_bytes(kDir / "img.idx", image_fixture());
    write_bytes(kDir / "lab.idx", label_fixture());
    const auto t = data::read_idx(kDir / "img.idx");
    CHECK(t.dims == std::vector<std::uint32_t>{3, 2, 2});
    const Matrix m = t.to_unit_matrix();
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 4);
    CHECK(m(0, 1) == 1.0);
    CHECK(m(0, 2) == doctest::Approx(0.2));
    const auto ds = data::load_idx_dataset(kDir / "img.idx", kDir / "lab.idx");
    CHECK(ds.labels == std::vector<int>{7, 1, 7});
    CHECK(ds.samples == m);

    SUBCASE("round trip") {
        data::write_idx(t, kDir / "copy.idx");
        const auto back = data::read_idx(kDir / "copy.idx");
        CHECK(back.dims == t.dims);
        CHECK(back.payload == t.payload);
    }
    SUBCASE("malformed files") {
        auto bytes = image_fixture();
        bytes.pop_back();
        write_bytes(kDir / "short.idx", bytes);
        auto bad_magic = image_fixture();
        bad_magic[0] = 1;
        write_bytes(kDir / "magic.idx", bad_magic);
        auto floats = image_fixture();
        floats[2] = 0x0D;
        write_bytes(kDir / "float.idx", floats);
        write_bytes(kDir / "tiny.idx", {0, 0});
        for (const char* name : {"short.idx", "magic.idx", "float.idx", "tiny.idx"}) {
            CAPTURE(name);
            try {
                data::read_idx(kDir / name);
                FAIL("expected a parse error");
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::Parse);
            }
        }
        try {
            data::read_idx(kDir / "absent.idx");
            FAIL("expected an io error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Io);
        }
        auto two = label_fixture();
        two[7] = 2;
        two.pop_back();
        write_bytes(kDir / "lab2.idx", two);
        CHECK_THROWS_AS(data::load_idx_dataset(kDir / "img.idx", kDir / "lab2.idx"), Error);
    }
}

TEST_CASE("bundled MNIST subset") {
    const std::filesystem::path root = LATENTGEO_SOURCE_DIR;
    const auto ds = data::load_idx_dataset(root / "data/mnist5k/mnist5k-images-idx3-ubyte",
                                           root / "data/mnist5k/mnist5k-labels-idx1-ubyte");
    CHECK(ds.samples.cols() == 784);
    CHECK(ds.size() == ds.labels.size());
    CHECK(std::set<int>(ds.labels.begin(), ds.labels.end()).size() == 10);
    const auto px = ds.samples.data();
    CHECK(std::all_of(px.begin(), px.end(), [](double v) { return v >= 0.0 && v <= 1.0; }));
}

TEST_CASE("manifold oracles") {
    SUBCASE("plane embedding is an isometry") {
        const auto o = data::manifold_oracle(data::ManifoldKind::Plane, 3);
        const Matrix a = o.chart_map->jacobian(Vector{0, 0});
        CHECK(a.rows() == data::kPlaneAmbientDim);
        CHECK(numerics::frobenius_norm(numerics::sub(numerics::matmul_at(a, a), Matrix::identity(2))) < 1e-12);
        const Vector p{0.3, -1.2}, q{2.0, 0.5};
        CHECK(numerics::distance(o.chart_map->value(p), o.chart_map->value(q)) ==
              doctest::Approx(o.exact_distance(p, q)).epsilon(1e-12));
    }
    SUBCASE("sphere") {
        const auto o = data::manifold_oracle(data::ManifoldKind::SphereChart);
        const double pi = std::numbers::pi;
        CHECK(o.exact_distance(Vector{0.2, 0.1}, Vector{-0.2, 0.1 + pi}) == doctest::Approx(pi));
        numerics::SeededRng rng(2);
        for (int t = 0; t < 50; ++t) {
            const Vector a{rng.uniform(-1.3, 1.3), rng.uniform(-pi, pi)};
            const Vector b{rng.uniform(-1.3, 1.3), rng.uniform(-pi, pi)};
            const Vector c{rng.uniform(-1.3, 1.3), rng.uniform(-pi, pi)};
            CHECK(o.exact_distance(a, b) == doctest::Approx(oracle::haversine(a[0], a[1], b[0], b[1])).epsilon(1e-9));
            CHECK(o.exact_distance(a, c) <= o.exact_distance(a, b) + o.exact_distance(b, c) + 1e-12);
            const double chord = numerics::distance(o.chart_map->value(a), o.chart_map->value(b));
            CHECK(chord == doctest::Approx(2 * std::sin(o.exact_distance(a, b) / 2)).epsilon(1e-9));
        }
    }
    SUBCASE("circle wraps around") {
        const auto o = data::manifold_oracle(data::ManifoldKind::Circle);
        CHECK(o.exact_distance(Vector{0.1}, Vector{2 * std::numbers::pi - 0.1}) == doctest::Approx(0.2));
    }
    SUBCASE("swiss roll arc length") {
        // numerical quadrature of |d/dt (t cos t, t sin t)| = sqrt(1 + t^2)
        const double a = 5.0, b = 11.0;
        double quad = 0.0;
        const int steps = 20000;
        for (int i = 0; i < steps; ++i) {
            const double t = a + (b - a) * (i + 0.5) / steps;
            quad += std::sqrt(1 + t * t) * (b - a) / steps;
        }
        CHECK(data::swiss_roll_arclength(b) - data::swiss_roll_arclength(a) == doctest::Approx(quad).epsilon(1e-8));
        const auto o = data::manifold_oracle(data::ManifoldKind::SwissRoll);
        const Vector p{5.0, 2.0}, q{11.0, 2.0};
        const double chord = numerics::distance(o.chart_map->value(p), o.chart_map->value(q));
        CHECK(o.exact_distance(p, q) / chord > 2.0);
    }
}

TEST_CASE("synthetic manifolds") {
    for (auto kind : {data::ManifoldKind::Plane, data::ManifoldKind::Circle, data::ManifoldKind::SphereChart,
                      data::ManifoldKind::SwissRoll}) {
        CAPTURE(data::to_string(kind));
        const auto m = data::synth_manifold(kind, 60, 0.0, 4);
        REQUIRE(m.dataset.latent.has_value());
        CHECK(m.dataset.size() == 60);
        CHECK(std::set<int>(m.dataset.labels.begin(), m.dataset.labels.end()).size() == 2);
        for (std::size_t i = 0; i < 60; ++i)
            CHECK(numerics::distance(m.dataset.samples.row(i), m.oracle.chart_map->value(m.dataset.latent->row(i))) <
                  1e-12);
        CHECK(data::parse_manifold_kind(data::to_string(kind)) == kind);
        const auto again = data::synth_manifold(kind, 60, 0.0, 4);
        CHECK(again.dataset.samples == m.dataset.samples);
    }
    const auto s = data::synth_manifold(data::ManifoldKind::SphereChart, 300, 0.0, 1);
    for (std::size_t i = 0; i < 300; ++i) CHECK(std::abs((*s.dataset.latent)(i, 0)) <= data::kSphereLatitudeLimit);
    const auto noisy = data::synth_manifold(data::ManifoldKind::Circle, 60, 0.1, 4);
    const auto clean = data::synth_manifold(data::ManifoldKind::Circle, 60, 0.0, 4);
    CHECK_FALSE(noisy.dataset.samples == clean.dataset.samples);

    CHECK(data::parse_manifold_kind("sphere") == data::ManifoldKind::SphereChart);
    CHECK_THROWS_AS(data::parse_manifold_kind("torus"), Error);
    CHECK_THROWS_AS(data::synth_manifold(data::ManifoldKind::Plane, 5, 0.0, 1), Error);
    CHECK_THROWS_AS(data::synth_manifold(data::ManifoldKind::Plane, 50, -1.0, 1), Error);
}

TEST_CASE("triplet sampling") {
    const auto ds = labelled(30, 3);
    numerics::SeededRng rng(5);
    const auto b = data::sample_triplets(ds, 200, rng);
    REQUIRE(b.i1.size() == 200);
    for (std::size_t k = 0; k < 200; ++k) {
        CHECK(b.i1[k] != b.i2[k]);
        CHECK(ds.labels[b.i1[k]] == ds.labels[b.i2[k]]);
        CHECK(ds.labels[b.i3[k]] != ds.labels[b.i1[k]]);
        CHECK(b.label12[k] == ds.labels[b.i1[k]]);
        CHECK(b.x1.row_vector(k) == ds.samples.row_vector(b.i1[k]));
    }
    numerics::SeededRng r1(9), r2(9);
    CHECK(data::sample_triplets(ds, 20, r1).i3 == data::sample_triplets(ds, 20, r2).i3);

    try {
        numerics::SeededRng r(1);
        data::sample_triplets(labelled(5, 1), 4, r);
        FAIL("expected single class");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingleClass);
    }
    // every class a singleton: no valid (x1, x2)
    numerics::SeededRng r(1);
    CHECK_THROWS_AS(data::sample_triplets(labelled(3, 3), 4, r), Error);
}

TEST_CASE("splits and subsets") {
    auto ds = labelled(100, 4);
    const auto sp = data::train_test_split(ds, 0.8, 3);
    CHECK(sp.first.size() == 80);
    CHECK(sp.second.size() == 20);
    std::set<double> seen;
    for (const auto* part : {&sp.first, &sp.second})
        for (std::size_t i = 0; i < part->size(); ++i) seen.insert(part->samples(i, 0));
    CHECK(seen.size() == 100);
    for (int c = 0; c < 4; ++c) CHECK(std::count(sp.first.labels.begin(), sp.first.labels.end(), c) == 20);
    CHECK(data::train_test_split(ds, 0.8, 3).first.samples == sp.first.samples);
    CHECK_THROWS_AS(data::train_test_split(ds, 1.5, 3), Error);

    const auto sub = data::stratified_subset(ds, 10, 1);
    CHECK(sub.size() == 10);
    for (int c = 0; c < 4; ++c) {
        const auto k = std::count(sub.labels.begin(), sub.labels.end(), c);
        CHECK(k >= 2);
        CHECK(k <= 3);
    }
    CHECK_THROWS_AS(data::stratified_subset(ds, 101, 1), Error);

    const std::vector<std::size_t> idx{4, 2};
    const auto sel = data::select(ds, idx);
    CHECK(sel.samples(0, 0) == 4.0);
    CHECK(sel.labels == std::vector<int>{0, 2});
}

TEST_CASE("normalizer") {
    const Matrix x{{0, 5, 1}, {2, 5, 3}, {4, 5, 2}};
    const auto n = data::fit_normalizer(x);
    CHECK(n.min == Vector{0, 5, 1});
    CHECK(n.range == Vector{4, 0, 2});
    const Matrix y = data::normalize(x, n);
    CHECK(y(2, 0) == 1.0);
    CHECK(y(1, 1) == 0.0);
    CHECK(y(1, 2) == 1.0);
    CHECK(data::denormalize(y, n) == x);
    CHECK_THROWS_AS(data::normalize(Matrix(1, 2), n), Error);
}

TEST_CASE("dataset CSV") {
    auto ds = labelled(3, 2);
    data::write_csv(ds, kDir / "ds.csv");
    std::ifstream in(kDir / "ds.csv");
    std::string all((std::istreambuf_iterator<char>(in)), {});
    CHECK(all.find("2,0,0") != std::string::npos);
    ds.samples(0, 0) = std::nan("");
    CHECK_THROWS_AS(ds.validate(), Error);
}

}  // TEST_SUITE
