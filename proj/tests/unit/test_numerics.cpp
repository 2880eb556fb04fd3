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

#include "latentgeo/error.hpp"
#include "latentgeo/numerics.hpp"

#include "doctest.h"
#include "support/oracles.hpp"

#include <cmath>
#include <cstring>
#include <limits>

using namespace latentgeo;
using numerics::Matrix;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    numerics::SeededRng rng(seed);
    Matrix m(r, c);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

Matrix reconstruct(const numerics::SvdResult& s) {
    Matrix us = s.u;
    for (std::size_t r = 0; r < us.rows(); ++r)
        for (std::size_t c = 0; c < us.cols(); ++c) us(r, c) *= s.singular_values[c];
    return numerics::matmul(us, s.vt);
}

double rel_frobenius(const Matrix& a, const Matrix& b) {
    return numerics::frobenius_norm(numerics::sub(a, b)) / std::max(numerics::frobenius_norm(b), 1e-300);
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("dense basics") {
    const Matrix a{{1, 2, 3}, {4, 5, 6}};
    CHECK(numerics::matmul(Matrix::identity(2), a) == a);
    CHECK(numerics::transpose(numerics::transpose(a)) == a);
    const std::vector<double> v{3, 4};
    CHECK(numerics::norm2(v) == 5.0);
    std::vector<double> y{1, 1};
    numerics::axpy(2.0, v, y);
    CHECK(y == std::vector<double>{7, 9});
    CHECK(numerics::matmul_bt(a, a) == numerics::matmul(a, numerics::transpose(a)));
    CHECK(numerics::matmul_at(a, a) == numerics::matmul(numerics::transpose(a), a));
    CHECK_THROWS_AS(numerics::matmul(a, a), Error);
    try {
        numerics::matmul(a, a);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Shape);
    }
}

TEST_CASE("svd of identity and diagonal") {
    const auto s = numerics::svd(Matrix::identity(3));
    for (double v : s.singular_values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    const std::vector<double> d{3, 2, 1};
    const auto sd = numerics::svd(Matrix::diagonal(d));
    for (std::size_t i = 0; i < 3; ++i) CHECK(sd.singular_values[i] == doctest::Approx(d[i]).epsilon(1e-14));
}

TEST_CASE("svd matches the eigenvalues of AtA and reconstructs") {
    const Matrix a = random_matrix(10, 4, 7);
    const auto s = numerics::svd(a);
    const auto ref = oracle::singular_values(a);
    REQUIRE(s.singular_values.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s.singular_values[i] - ref[i]) < 1e-10 * ref[0]);
    CHECK(rel_frobenius(reconstruct(s), a) < 1e-8);
}

TEST_CASE("svd invariants on assorted shapes") {
    std::uint64_t seed = 100;
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 5}, {5, 1}, {7, 7}, {3, 9}, {64, 16}, {200, 120}}) {
        const Matrix a = random_matrix(r, c, ++seed);
        const auto s = numerics::svd(a);
        CHECK(rel_frobenius(reconstruct(s), a) < 1e-8);
        for (std::size_t i = 0; i + 1 < s.singular_values.size(); ++i)
            CHECK(s.singular_values[i] >= s.singular_values[i + 1]);
        for (double v : s.singular_values) CHECK(v >= 0.0);
        const Matrix utu = numerics::matmul_at(s.u, s.u);
        const Matrix vvt = numerics::matmul_bt(s.vt, s.vt);
        CHECK(numerics::frobenius_norm(numerics::sub(utu, Matrix::identity(utu.rows()))) < 1e-10);
        CHECK(numerics::frobenius_norm(numerics::sub(vvt, Matrix::identity(vvt.rows()))) < 1e-10);
    }
}

TEST_CASE("svd of a rank-deficient matrix") {
    Matrix a(6, 4);
    const Matrix b = random_matrix(6, 2, 3), c = random_matrix(2, 4, 4);
    a = numerics::matmul(b, c);
    const auto s = numerics::svd(a);
    CHECK(numerics::numerical_rank(s.singular_values) == 2);
    CHECK(rel_frobenius(reconstruct(s), a) < 1e-8);
}

TEST_CASE("orthogonal matrices have unit singular values") {
    const auto q = numerics::svd(random_matrix(12, 12, 9)).u;
    for (double v : numerics::svd(q).singular_values) CHECK(std::abs(v - 1.0) < 1e-10);
}

TEST_CASE("svd rejects non-finite input") {
    Matrix a = Matrix::identity(2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(numerics::svd(a), Error);
}

TEST_CASE("numerical rank") {
    CHECK(numerics::numerical_rank(std::vector<double>{1, 1, 1e-12}, 1e-6) == 2);
    CHECK(numerics::numerical_rank(std::vector<double>{5, 4, 3}, 1e-6) == 3);
    CHECK(numerics::numerical_rank(std::vector<double>{0, 0}, 1e-3) == 0);
    const std::vector<double> s{10, 1, 1e-2, 1e-4, 1e-8};
    std::size_t prev = numerics::numerical_rank(s, 1e-12);
    for (double tol : {1e-9, 1e-6, 1e-3, 1e-1, 0.5}) {
        const std::size_t r = numerics::numerical_rank(s, tol);
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("seeded rng replays bit for bit") {
    numerics::SeededRng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.normal(), y = b.normal();
        CHECK(std::memcmp(&x, &y, sizeof x) == 0);
        differs |= x != c.normal();
    }
    CHECK(differs);
    numerics::SeededRng d(42);
    auto child = d.split();
    numerics::SeededRng e(42);
    auto child2 = e.split();
    CHECK(child.next_u64() == child2.next_u64());
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.below(7) < 7);
        const double u = a.uniform();
        CHECK((u >= 0.0 && u < 1.0));
    }
}

}  // TEST_SUITE
