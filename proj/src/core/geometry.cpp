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

#include "latentgeo/geometry.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <queue>
#include <tuple>

namespace latentgeo::geometry {

using numerics::SeededRng;

MetricTensor metric_tensor(const DifferentiableMap& decoder, std::span<const double> z) {
    require(z.size() == decoder.in_dim(), ErrorKind::Shape, "metric_tensor: latent dimension mismatch");
    const Matrix j = decoder.jacobian(z);
    Matrix m = numerics::matmul_at(j, j);
    // JᵀJ is symmetric in exact arithmetic; mirror to make it so bitwise
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = r + 1; c < m.cols(); ++c) m(c, r) = m(r, c);
    return {Vector(z.begin(), z.end()), std::move(m)};
}

CurveMeasure polyline_energy(const Matrix& decoded) {
    require(decoded.rows() >= 2, ErrorKind::InvalidInput, "a curve needs at least two points");
    const double k = static_cast<double>(decoded.rows() - 1);
    CurveMeasure m;
    for (std::size_t i = 0; i + 1 < decoded.rows(); ++i) {
        const double seg = numerics::distance(decoded.row(i), decoded.row(i + 1));
        m.length += seg;
        m.energy += seg * seg;
    }
    m.energy *= k;
    return m;
}

CurveMeasure curve_energy(const DifferentiableMap& decoder, const Matrix& points) {
    require(points.cols() == decoder.in_dim(), ErrorKind::Shape, "curve_energy: latent dimension mismatch");
    return polyline_energy(decoder.value_batch(points));
}

namespace {

// Solves tridiag(-1, 2, -1) x = r in place (Thomas algorithm).
void solve_second_difference(std::vector<double>& r) {
    const std::size_t n = r.size();
    if (n == 0) return;
    std::vector<double> c(n);
    double denom = 2.0;
    c[0] = -1.0 / denom;
    r[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = 2.0 + c[i - 1];
        c[i] = -1.0 / denom;
        r[i] = (r[i] + r[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) r[i] -= c[i] * r[i + 1];
}

}  // namespace

GeodesicCurve geodesic(const DifferentiableMap& decoder, std::span<const double> a, std::span<const double> b,
                       const GeodesicOptions& opts) {
    const std::size_t d = decoder.in_dim();
    require(a.size() == d && b.size() == d, ErrorKind::Shape, "geodesic: endpoint dimension mismatch");
    require(opts.segments >= 1, ErrorKind::Config, "geodesic needs at least one segment");
    const std::size_t k = opts.segments;

    GeodesicCurve curve;
    curve.points = Matrix(k + 1, d);
    for (std::size_t i = 0; i <= k; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(k);
        for (std::size_t c = 0; c < d; ++c) curve.points(i, c) = a[c] + t * (b[c] - a[c]);
    }
    // exact endpoints regardless of rounding in the blend
    std::copy(a.begin(), a.end(), curve.points.row(0).begin());
    std::copy(b.begin(), b.end(), curve.points.row(k).begin());
    curve.decoded = decoder.value_batch(curve.points);
    CurveMeasure m = polyline_energy(curve.decoded);
    curve.initial_energy = m.energy;

    const bool same = std::equal(a.begin(), a.end(), b.begin());
    if (k == 1 || same || m.energy == 0.0) {
        curve.energy = m.energy;
        curve.length = m.length;
        return curve;
    }

    const std::size_t interior = k - 1;
    const double kk = static_cast<double>(k);
    double step = 1.0;
    curve.converged = false;
    for (std::size_t it = 0; it < opts.max_iters; ++it) {
        curve.iterations = it + 1;
        // gradient of K * sum ||x_{i+1} - x_i||^2 w.r.t. interior z_i
        Matrix grad(interior, d);
        for (std::size_t i = 1; i < k; ++i) {
            Vector v(curve.decoded.cols());
            for (std::size_t c = 0; c < v.size(); ++c)
                v[c] = 2.0 * kk * (2.0 * curve.decoded(i, c) - curve.decoded(i - 1, c) - curve.decoded(i + 1, c));
            Vector g = decoder.vjp(curve.points.row(i), v);
            std::copy(g.begin(), g.end(), grad.row(i - 1).begin());
        }
        Matrix dir(interior, d);
        std::vector<double> col(interior);
        for (std::size_t c = 0; c < d; ++c) {
            for (std::size_t i = 0; i < interior; ++i) col[i] = -grad(i, c) / (2.0 * kk);
            solve_second_difference(col);
            for (std::size_t i = 0; i < interior; ++i) dir(i, c) = col[i];
        }
        const double slope = numerics::dot(grad.data(), dir.data());
        if (!(slope < 0.0)) {
            curve.converged = true;
            break;
        }

        double t = std::min(step * 2.0, 1e8);
        bool accepted = false;
        Matrix trial_points, trial_decoded;
        CurveMeasure trial;
        while (t > 1e-18) {
            trial_points = curve.points;
            for (std::size_t i = 0; i < interior; ++i)
                numerics::axpy(t, dir.row(i), trial_points.row(i + 1));
            trial_decoded = decoder.value_batch(trial_points);
            trial = polyline_energy(trial_decoded);
            if (std::isfinite(trial.energy) && trial.energy <= m.energy + opts.armijo_c * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // no representable descent left: stationary to working precision
            curve.converged = true;
            break;
        }
        step = t;
        const double rel = (m.energy - trial.energy) / std::max(m.energy, 1e-300);
        curve.points = std::move(trial_points);
        curve.decoded = std::move(trial_decoded);
        m = trial;
        if (rel < opts.tol) {
            curve.converged = true;
            break;
        }
    }
    curve.energy = m.energy;
    curve.length = m.length;
    return curve;
}

RiemannianDistance riemannian_distance(const DifferentiableMap& decoder, std::span<const double> a,
                                       std::span<const double> b, const GeodesicOptions& opts) {
    const GeodesicCurve c = geodesic(decoder, a, b, opts);
    return {c.length, c.converged};
}

std::vector<std::size_t> nearest_neighbors(const Matrix& points, std::size_t i, std::size_t k) {
    require(i < points.rows(), ErrorKind::Shape, "neighbor query index out of range");
    require(k < points.rows(), ErrorKind::InsufficientNeighbors,
            "asked for " + std::to_string(k) + " neighbors among " + std::to_string(points.rows()) + " points");
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(points.rows() - 1);
    for (std::size_t j = 0; j < points.rows(); ++j)
        if (j != i) cand.emplace_back(numerics::distance(points.row(i), points.row(j)), j);
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    std::vector<std::size_t> out(k);
    for (std::size_t q = 0; q < k; ++q) out[q] = cand[q].second;
    return out;
}

DistanceMatrix graph_geodesic_matrix(const DifferentiableMap& decoder, const Matrix& latent, std::size_t k_neighbors) {
    require(latent.cols() == decoder.in_dim(), ErrorKind::Shape, "graph_geodesic_matrix: latent dimension mismatch");
    return graph_geodesic_matrix(latent, decoder.value_batch(latent), k_neighbors);
}

DistanceMatrix graph_geodesic_matrix(const Matrix& latent, const Matrix& decoded, std::size_t k_neighbors) {
    const std::size_t n = latent.rows();
    require(decoded.rows() == n, ErrorKind::Shape, "decoded point count mismatch");
    require(k_neighbors >= 1 && n >= k_neighbors + 1, ErrorKind::InsufficientNeighbors,
            "graph needs at least k+1 points (k=" + std::to_string(k_neighbors) + ", n=" + std::to_string(n) + ")");

    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    std::vector<std::vector<char>> linked(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : nearest_neighbors(latent, i, k_neighbors)) {
            if (linked[i][j]) continue;
            linked[i][j] = linked[j][i] = 1;
            const double w = numerics::distance(decoded.row(i), decoded.row(j));
            adj[i].emplace_back(j, w);
            adj[j].emplace_back(i, w);
        }
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());

    // connected components first, so the failure names them
    std::vector<std::size_t> comp(n, n);
    std::vector<std::size_t> sizes;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != n) continue;
        const std::size_t id = sizes.size();
        sizes.push_back(0);
        std::vector<std::size_t> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            ++sizes[id];
            for (const auto& [v, w] : adj[u])
                if (comp[v] == n) {
                    comp[v] = id;
                    stack.push_back(v);
                }
        }
    }
    if (sizes.size() > 1) {
        std::string msg = "kNN graph with k=" + std::to_string(k_neighbors) + " has " + std::to_string(sizes.size()) +
                          " components of sizes [";
        for (std::size_t c = 0; c < sizes.size(); ++c) msg += (c ? ", " : "") + std::to_string(sizes[c]);
        fail(ErrorKind::DisconnectedGraph, msg + "]");
    }

    DistanceMatrix out(n, MetricKind::RiemannianGraph);
    std::vector<double> dist(n);
    using Item = std::pair<double, std::size_t>;
    for (std::size_t s = 0; s + 1 < n; ++s) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        dist[s] = 0.0;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.emplace(0.0, s);
        while (!pq.empty()) {
            const auto [du, u] = pq.top();
            pq.pop();
            if (du > dist[u]) continue;
            for (const auto& [v, w] : adj[u]) {
                const double nd = du + w;
                if (nd < dist[v]) {
                    dist[v] = nd;
                    pq.emplace(nd, v);
                }
            }
        }
        for (std::size_t t = s + 1; t < n; ++t) out.set(s, t, dist[t]);
    }
    return out;
}

Interpolation interpolate(const DifferentiableMap& decoder, std::span<const double> a, std::span<const double> b,
                          std::size_t n, InterpolationMode mode, const GeodesicOptions& opts) {
    require(n >= 2, ErrorKind::Config, "interpolation needs n >= 2");
    const std::size_t d = decoder.in_dim();
    require(a.size() == d && b.size() == d, ErrorKind::Shape, "interpolate: endpoint dimension mismatch");
    Interpolation out;
    out.latent = Matrix(n, d);
    std::copy(a.begin(), a.end(), out.latent.row(0).begin());
    std::copy(b.begin(), b.end(), out.latent.row(n - 1).begin());

    if (mode == InterpolationMode::Euclidean) {
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(n - 1);
            for (std::size_t c = 0; c < d; ++c) out.latent(j, c) = a[c] + t * (b[c] - a[c]);
        }
    } else {
        const GeodesicCurve g = geodesic(decoder, a, b, opts);
        out.converged = g.converged;
        const std::size_t k = g.points.rows() - 1;
        std::vector<double> cum(k + 1, 0.0);
        for (std::size_t i = 0; i < k; ++i) cum[i + 1] = cum[i] + numerics::distance(g.decoded.row(i), g.decoded.row(i + 1));
        const double total = cum[k];
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double target = total * static_cast<double>(j) / static_cast<double>(n - 1);
            std::size_t seg = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin());
            seg = std::clamp<std::size_t>(seg, 1, k) - 1;
            const double span_len = cum[seg + 1] - cum[seg];
            const double frac = span_len > 0.0 ? (target - cum[seg]) / span_len : 0.0;
            for (std::size_t c = 0; c < d; ++c)
                out.latent(j, c) = g.points(seg, c) + frac * (g.points(seg + 1, c) - g.points(seg, c));
        }
    }
    out.ambient = decoder.value_batch(out.latent);
    return out;
}

TangentBasis tangent_basis(const Matrix& selection, const Matrix& ambient, std::size_t index, std::size_t k_neighbors,
                           std::size_t d_sub) {
    require(selection.rows() == ambient.rows(), ErrorKind::Shape, "selection and ambient point counts differ");
    require(d_sub >= 1 && k_neighbors >= d_sub, ErrorKind::InsufficientNeighbors,
            "tangent basis needs k_neighbors >= d_sub >= 1");
    require(selection.rows() > k_neighbors, ErrorKind::InsufficientNeighbors,
            "tangent basis needs more than k_neighbors points");
    require(ambient.cols() >= d_sub, ErrorKind::InsufficientNeighbors, "d_sub exceeds the ambient dimension");

    std::vector<std::size_t> hood = nearest_neighbors(selection, index, k_neighbors);
    hood.insert(hood.begin(), index);
    const std::size_t dim = ambient.cols();
    Vector mean(dim, 0.0);
    for (std::size_t i : hood) numerics::axpy(1.0, ambient.row(i), mean);
    for (double& v : mean) v /= static_cast<double>(hood.size());
    // columns are the centered neighbors
    Matrix x(dim, hood.size());
    for (std::size_t c = 0; c < hood.size(); ++c)
        for (std::size_t r = 0; r < dim; ++r) x(r, c) = ambient(hood[c], r) - mean[r];

    const numerics::SvdResult s = numerics::svd(x);
    return {index, numerics::slice_cols(s.u, 0, d_sub)};
}

TangentBasis tangent_basis(const Matrix& points, std::size_t index, std::size_t k_neighbors, std::size_t d_sub) {
    return tangent_basis(points, points, index, k_neighbors, d_sub);
}

std::vector<double> principal_angles(const Matrix& u1, const Matrix& u2) {
    require(u1.rows() == u2.rows(), ErrorKind::Shape, "principal angles: bases live in different spaces");
    require(u1.cols() == u2.cols(), ErrorKind::Shape, "principal angles: subspace dimensions differ");
    const numerics::SvdResult s = numerics::svd(numerics::matmul_at(u1, u2));
    std::vector<double> angles;
    angles.reserve(s.singular_values.size());
    for (double c : s.singular_values) angles.push_back(std::acos(std::clamp(c, 0.0, 1.0)));
    std::sort(angles.begin(), angles.end());
    return angles;
}

std::vector<double> principal_angles(const TangentBasis& u1, const TangentBasis& u2) {
    return principal_angles(u1.u, u2.u);
}

double curvature_score(const Matrix& selection, const Matrix& ambient, const CurvatureOptions& opts, SeededRng& rng) {
    const std::size_t n = selection.rows();
    require(n == ambient.rows(), ErrorKind::Shape, "selection and ambient point counts differ");
    require(n > opts.k_neighbors && n >= 2, ErrorKind::InsufficientNeighbors, "too few points for curvature_score");
    require(opts.lower_percentile >= 0.0 && opts.lower_percentile < opts.upper_percentile &&
                opts.upper_percentile <= 100.0,
            ErrorKind::Config, "curvature percentile band must satisfy 0 <= lo < hi <= 100");
    require(opts.n_pairs >= 1, ErrorKind::Config, "curvature_score needs n_pairs >= 1");

    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            pairs.emplace_back(numerics::distance(selection.row(i), selection.row(j)), i, j);
    std::vector<double> sorted(pairs.size());
    std::transform(pairs.begin(), pairs.end(), sorted.begin(), [](const auto& p) { return std::get<0>(p); });
    std::sort(sorted.begin(), sorted.end());
    auto percentile = [&](double p) {
        const auto idx = static_cast<std::size_t>(std::floor(p / 100.0 * static_cast<double>(sorted.size() - 1)));
        return sorted[idx];
    };
    const double lo = percentile(opts.lower_percentile);
    const double hi = percentile(opts.upper_percentile);
    std::vector<std::pair<std::size_t, std::size_t>> band;
    for (const auto& [dist, i, j] : pairs)
        if (dist >= lo && dist <= hi && dist > 0.0) band.emplace_back(i, j);
    require(!band.empty(), ErrorKind::InvalidInput, "no point pairs fall inside the curvature percentile band");

    std::map<std::size_t, Matrix> cache;
    auto basis = [&](std::size_t i) -> const Matrix& {
        auto it = cache.find(i);
        if (it == cache.end())
            it = cache.emplace(i, tangent_basis(selection, ambient, i, opts.k_neighbors, opts.d_sub).u).first;
        return it->second;
    };
    double total = 0.0;
    for (std::size_t p = 0; p < opts.n_pairs; ++p) {
        const auto [i, j] = band[static_cast<std::size_t>(rng.below(band.size()))];
        const std::vector<double> ang = principal_angles(basis(i), basis(j));
        double mean = 0.0;
        for (double a : ang) mean += a;
        total += mean / static_cast<double>(ang.size());
    }
    return total / static_cast<double>(opts.n_pairs) * 180.0 / std::numbers::pi;
}

double curvature_score(const Matrix& points, const CurvatureOptions& opts, SeededRng& rng) {
    return curvature_score(points, points, opts, rng);
}

RankReport jacobian_rank_report(const DifferentiableMap& decoder, const Matrix& points, double rel_tol) {
    require(points.cols() == decoder.in_dim(), ErrorKind::Shape, "rank report: latent dimension mismatch");
    RankReport r;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const numerics::SvdResult s = numerics::svd(decoder.jacobian(points.row(i)));
        r.ranks.push_back(numerics::numerical_rank(s.singular_values, rel_tol));
    }
    if (!r.ranks.empty()) {
        std::vector<std::size_t> sorted = r.ranks;
        std::sort(sorted.begin(), sorted.end());
        r.min = sorted.front();
        r.max = sorted.back();
        r.median = sorted[(sorted.size() - 1) / 2];
    }
    return r;
}

}  // namespace latentgeo::geometry
