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

// Independent reference computations used by the tests. None of these call
// into the library code they check.

#include "latentgeo/distance_matrix.hpp"
#include "latentgeo/maps.hpp"
#include "latentgeo/network.hpp"
#include "latentgeo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using latentgeo::numerics::Matrix;
using latentgeo::numerics::Vector;

// Central differences of an arbitrary vector function.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& z, double h = 1e-5) {
    const Vector f0 = f(z);
    Matrix j(f0.size(), z.size());
    for (std::size_t c = 0; c < z.size(); ++c) {
        Vector zp = z, zm = z;
        zp[c] += h;
        zm[c] -= h;
        const Vector fp = f(zp), fm = f(zm);
        for (std::size_t r = 0; r < f0.size(); ++r) j(r, c) = (fp[r] - fm[r]) / (2.0 * h);
    }
    return j;
}

inline Matrix fd_jacobian(const latentgeo::geometry::DifferentiableMap& m, const Vector& z, double h = 1e-5) {
    return fd_jacobian([&](const Vector& v) { return m.value(v); }, z, h);
}

// Max over entries of |a - b| / max(|b|, floor).
inline double max_rel_error(const Matrix& a, const Matrix& b, double floor = 1e-3) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]) / std::max(std::abs(b.data()[i]), floor));
    return worst;
}

// Cyclic Jacobi eigenvalues of a symmetric matrix, descending.
inline Vector symmetric_eigenvalues(Matrix a) {
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    Vector ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

// Singular values as square roots of the eigenvalues of AᵀA.
inline Vector singular_values(const Matrix& a) {
    Matrix ata(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
            ata(i, j) = s;
        }
    Vector ev = symmetric_eigenvalues(ata);
    ev.resize(std::min(a.rows(), a.cols()));
    for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
    return ev;
}

// Straight-line evaluation of a net from its raw layers.
inline Vector forward(const latentgeo::network::FeedForwardNet& net, Vector x) {
    using latentgeo::network::ActivationKind;
    for (const auto& layer : net.layers()) {
        Vector y(layer.bias);
        for (std::size_t r = 0; r < layer.weight.rows(); ++r)
            for (std::size_t c = 0; c < layer.weight.cols(); ++c) y[r] += layer.weight(r, c) * x[c];
        for (double& v : y) {
            switch (layer.act.kind) {
                case ActivationKind::Elu: v = v > 0 ? v : layer.act.alpha * (std::exp(v) - 1.0); break;
                case ActivationKind::Relu: v = v > 0 ? v : 0.0; break;
                case ActivationKind::Tanh: v = std::tanh(v); break;
                case ActivationKind::Identity: break;
            }
        }
        x = std::move(y);
    }
    return x;
}

struct Medoids {
    std::vector<std::size_t> medoids;
    double cost = 0.0;
};

// Exhaustive search over all k-subsets.
inline Medoids best_medoids(const latentgeo::DistanceMatrix& d, std::size_t k) {
    const std::size_t n = d.size();
    Medoids best{{}, std::numeric_limits<double>::infinity()};
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        std::vector<std::size_t> m;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) m.push_back(i);
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j : m) nearest = std::min(nearest, d(i, j));
            cost += nearest;
        }
        if (cost < best.cost - 1e-12) best = {m, cost};
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

// Great-circle distance between (latitude, longitude) pairs via the
// haversine formula.
inline double haversine(double lat1, double lon1, double lat2, double lon2) {
    const double a = std::pow(std::sin((lat2 - lat1) / 2.0), 2) +
                     std::cos(lat1) * std::cos(lat2) * std::pow(std::sin((lon2 - lon1) / 2.0), 2);
    return 2.0 * std::asin(std::min(1.0, std::sqrt(a)));
}

// Pairwise F1 x 100 by enumerating every pair.
inline double pair_f_score(const std::vector<std::size_t>& a, const std::vector<int>& l) {
    double tp = 0, pred = 0, actual = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const bool same_c = a[i] == a[j], same_l = l[i] == l[j];
            pred += same_c;
            actual += same_l;
            tp += same_c && same_l;
        }
    if (pred == 0 || actual == 0 || tp == 0) return 0.0;
    const double p = tp / pred, r = tp / actual;
    return 200.0 * p * r / (p + r);
}

}  // namespace oracle
