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

#include "latentgeo/analysis.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include "json.hpp"

namespace latentgeo::analysis {

namespace {

using numerics::SeededRng;

std::size_t distinct_labels(std::span<const int> labels) {
    return std::set<int>(labels.begin(), labels.end()).size();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

double residual_cross_correlation(const DistanceMatrix& d_euclid, const DistanceMatrix& d_riem) {
    require(d_euclid.size() == d_riem.size(), ErrorKind::Shape, "distance matrices cover different point sets");
    require(d_euclid.size() >= 3, ErrorKind::InvalidInput, "residual cross-correlation needs at least 3 points");
    const auto a = d_euclid.upper_triangle();
    const auto b = d_riem.upper_triangle();
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    require(saa > 0.0, ErrorKind::ZeroVariance, "euclidean distances have zero variance");
    require(sbb > 0.0, ErrorKind::ZeroVariance, "riemannian distances have zero variance");
    const double r = sab / std::sqrt(saa * sbb);
    return std::clamp(1.0 - r, 0.0, 2.0);
}

MarginResult normalized_margin(const Matrix& points, std::span<const int> labels) {
    const std::size_t n = points.rows();
    require(labels.size() == n, ErrorKind::Shape, "one label per point required");
    require(distinct_labels(labels) >= 2, ErrorKind::SingleClass, "normalized margin needs at least two classes");
    MarginResult out;
    out.margins.assign(n, std::numeric_limits<double>::quiet_NaN());
    double total = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double same = std::numeric_limits<double>::infinity();
        double other = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = numerics::distance(points.row(i), points.row(j));
            if (labels[j] == labels[i]) same = std::min(same, d);
            else other = std::min(other, d);
        }
        if (!std::isfinite(same) || !(other > 0.0)) {
            ++out.skipped;
            continue;
        }
        out.margins[i] = (other - same) / other;
        total += out.margins[i];
        ++valid;
    }
    require(valid > 0, ErrorKind::InvalidInput, "no point has both a same-class and an other-class neighbor");
    out.mean = total / static_cast<double>(valid);
    return out;
}

KMedoidsResult kmedoids(const DistanceMatrix& d, std::size_t k, std::uint64_t seed, std::size_t max_iters) {
    const std::size_t n = d.size();
    require(k >= 1 && k <= n, ErrorKind::InvalidInput,
            "k-medoids needs 1 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SeededRng rng(seed);
    rng.shuffle(order);

    std::vector<std::size_t> medoids;
    std::vector<char> is_medoid(n, 0);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    // BUILD
    while (medoids.size() < k) {
        std::size_t best = n;
        double best_gain = -1.0;
        for (std::size_t c : order) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            if (medoids.empty()) {
                for (std::size_t j = 0; j < n; ++j) gain -= d(c, j);
            } else {
                for (std::size_t j = 0; j < n; ++j) gain += std::max(0.0, nearest[j] - d(c, j));
            }
            if (best == n || gain > best_gain) {
                best = c;
                best_gain = gain;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = 1;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], d(best, j));
    }

    auto assign = [&](std::vector<std::size_t>& near_idx, std::vector<double>& d1, std::vector<double>& d2) {
        double cost = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            d1[j] = d2[j] = std::numeric_limits<double>::infinity();
            near_idx[j] = 0;
            for (std::size_t m = 0; m < medoids.size(); ++m) {
                const double v = d(medoids[m], j);
                if (v < d1[j]) {
                    d2[j] = d1[j];
                    d1[j] = v;
                    near_idx[j] = m;
                } else if (v < d2[j]) {
                    d2[j] = v;
                }
            }
            cost += d1[j];
        }
        return cost;
    };

    KMedoidsResult out;
    std::vector<std::size_t> near_idx(n);
    std::vector<double> d1(n), d2(n);
    double cost = assign(near_idx, d1, d2);
    out.cost_history.push_back(cost);

    // SWAP
    while (out.iterations < max_iters) {
        double best_delta = 0.0;
        std::size_t best_m = k, best_h = n;
        for (std::size_t m = 0; m < k; ++m) {
            for (std::size_t h : order) {
                if (is_medoid[h]) continue;
                double delta = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double dh = d(h, j);
                    const double keep = near_idx[j] == m ? d2[j] : d1[j];
                    delta += std::min(keep, dh) - d1[j];
                }
                if (delta < best_delta) {
                    best_delta = delta;
                    best_m = m;
                    best_h = h;
                }
            }
        }
        if (best_h == n || best_delta > -1e-12 * std::max(1.0, cost)) {
            out.converged = true;
            break;
        }
        is_medoid[medoids[best_m]] = 0;
        medoids[best_m] = best_h;
        is_medoid[best_h] = 1;
        cost = assign(near_idx, d1, d2);
        out.cost_history.push_back(cost);
        ++out.iterations;
    }

    // clusters are numbered by ascending medoid index
    std::sort(medoids.begin(), medoids.end());
    out.cost = assign(near_idx, d1, d2);
    out.medoids = medoids;
    out.assignments = near_idx;
    return out;
}

double pairwise_f_score(std::span<const std::size_t> assignments, std::span<const int> labels) {
    require(assignments.size() == labels.size(), ErrorKind::Shape, "assignments and labels differ in length");
    std::map<std::pair<std::size_t, int>, double> joint;
    std::map<std::size_t, double> per_cluster;
    std::map<int, double> per_label;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        joint[{assignments[i], labels[i]}] += 1.0;
        per_cluster[assignments[i]] += 1.0;
        per_label[labels[i]] += 1.0;
    }
    auto pairs = [](double c) { return c * (c - 1.0) / 2.0; };
    double tp = 0.0, predicted = 0.0, actual = 0.0;
    for (const auto& [key, c] : joint) tp += pairs(c);
    for (const auto& [key, c] : per_cluster) predicted += pairs(c);
    for (const auto& [key, c] : per_label) actual += pairs(c);
    if (tp == 0.0 || predicted == 0.0 || actual == 0.0) return 0.0;
    const double p = tp / predicted, r = tp / actual;
    return 200.0 * p * r / (p + r);
}

MetricReport evaluate_space(const AnalysisSpace& space, std::span<const int> labels, const CompareConfig& cfg) {
    const std::size_t n = space.latent.rows();
    require(space.decoder != nullptr, ErrorKind::InvalidInput, "space '" + space.tag + "' has no decoder");
    require(space.decoder->in_dim() == space.latent.cols(), ErrorKind::Shape,
            "space '" + space.tag + "': decoder input does not match code width");
    require(labels.size() == n, ErrorKind::Shape, "one label per encoded point required");
    require(n >= 3, ErrorKind::InvalidInput, "at least 3 points are needed to compare spaces");

    MetricReport rep;
    rep.model_id = space.model_id;
    rep.space = space.tag;
    rep.n_points = n;

    const Matrix decoded = space.decoder->value_batch(space.latent);
    const DistanceMatrix d_e = euclidean_distance_matrix(space.latent);

    std::size_t k = std::min(cfg.k_neighbors, n - 1);
    DistanceMatrix d_r;
    for (std::size_t attempt = 0;; ++attempt) {
        try {
            d_r = geometry::graph_geodesic_matrix(space.latent, decoded, k);
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DisconnectedGraph || attempt >= cfg.max_escalations || k >= n - 1) throw;
            const std::size_t next = std::min(2 * k, n - 1);
            rep.warnings.push_back(std::string(e.what()) + "; retrying with k_neighbors=" + std::to_string(next));
            k = next;
        }
    }
    rep.k_neighbors = k;

    rep.c_hat = residual_cross_correlation(d_e, d_r);
    rep.mean_margin = normalized_margin(space.latent, labels).mean;

    SeededRng base(cfg.seed);
    SeededRng curve_rng = base.split();
    SeededRng pair_rng = base.split();
    rep.curvature_deg = geometry::curvature_score(space.latent, decoded, cfg.curvature, curve_rng);

    const std::size_t clusters = cfg.n_clusters ? cfg.n_clusters : distinct_labels(labels);
    const auto ke = kmedoids(d_e, clusters, cfg.seed, cfg.kmedoids_max_iters);
    const auto kr = kmedoids(d_r, clusters, cfg.seed, cfg.kmedoids_max_iters);
    rep.f_euclid = pairwise_f_score(ke.assignments, labels);
    rep.f_riem = pairwise_f_score(kr.assignments, labels);

    double se = 0.0, sr = 0.0;
    for (std::size_t p = 0; p < cfg.n_distance_pairs; ++p) {
        const std::size_t i = pair_rng.below(n);
        std::size_t j = pair_rng.below(n - 1);
        if (j >= i) ++j;
        se += d_e(i, j);
        sr += d_r(i, j);
    }
    if (cfg.n_distance_pairs > 0) {
        rep.mean_dist_euclid = se / static_cast<double>(cfg.n_distance_pairs);
        rep.mean_dist_riem = sr / static_cast<double>(cfg.n_distance_pairs);
    }
    return rep;
}

std::vector<MetricReport> compare_spaces(const std::vector<AnalysisSpace>& spaces, std::span<const int> labels,
                                         const CompareConfig& cfg) {
    require(!spaces.empty(), ErrorKind::Config, "no latent spaces to compare");
    std::vector<MetricReport> out;
    out.reserve(spaces.size());
    for (const AnalysisSpace& s : spaces) out.push_back(evaluate_space(s, labels, cfg));
    return out;
}

void write_report_csv(const std::vector<MetricReport>& reports, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write report: " + path.string());
    out << "model,space,n_points,k_neighbors,c_hat,mean_margin,curvature_deg,f_euclid,f_riem,mean_dist_euclid,"
           "mean_dist_riem\n";
    for (const MetricReport& r : reports) {
        out << r.model_id << ',' << r.space << ',' << r.n_points << ',' << r.k_neighbors << ','
            << format_double(r.c_hat) << ',' << format_double(r.mean_margin) << ',' << format_double(r.curvature_deg)
            << ',' << format_double(r.f_euclid) << ',' << format_double(r.f_riem) << ','
            << format_double(r.mean_dist_euclid) << ',' << format_double(r.mean_dist_riem) << '\n';
    }
    require(static_cast<bool>(out), ErrorKind::Io, "failed writing report: " + path.string());
}

void write_report_json(const std::vector<MetricReport>& reports, const std::map<std::string, std::string>& config,
                       std::uint64_t seed, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["config"] = config;
    j["notes"] = {
        "c_hat = 1 - Pearson correlation of the upper-triangular euclidean and graph-geodesic distance vectors",
        "clustering is k-medoids under both metrics; F is pairwise F1 x 100",
        "margins use euclidean distance inside the evaluated space",
    };
    j["reports"] = nlohmann::ordered_json::array();
    for (const MetricReport& r : reports) {
        nlohmann::ordered_json row;
        row["model"] = r.model_id;
        row["space"] = r.space;
        row["n_points"] = r.n_points;
        row["k_neighbors"] = r.k_neighbors;
        row["c_hat"] = r.c_hat;
        row["mean_margin"] = r.mean_margin;
        row["curvature_deg"] = r.curvature_deg;
        row["f_euclid"] = r.f_euclid;
        row["f_riem"] = r.f_riem;
        row["mean_dist_euclid"] = r.mean_dist_euclid;
        row["mean_dist_riem"] = r.mean_dist_riem;
        row["warnings"] = r.warnings;
        j["reports"].push_back(std::move(row));
    }
    std::ofstream out(path, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write report sidecar: " + path.string());
    out << j.dump(2) << '\n';
    require(static_cast<bool>(out), ErrorKind::Io, "failed writing report sidecar: " + path.string());
}

}  // namespace latentgeo::analysis
