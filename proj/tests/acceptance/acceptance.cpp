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

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include "latentgeo/analysis.hpp"
#include "latentgeo/commands.hpp"
#include "latentgeo/data.hpp"
#include "latentgeo/error.hpp"
#include "latentgeo/geometry.hpp"

#include "support/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

using namespace latentgeo;
using numerics::Matrix;
using numerics::SeededRng;
using numerics::Vector;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const fs::path kSource = LATENTGEO_SOURCE_DIR;
const fs::path kWork = fs::temp_directory_path() / "latentgeo_acceptance";

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void note(const std::string& s) { std::printf("    %s\n", s.c_str()); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// --- command helpers -------------------------------------------------------

std::string mnist_images() { return (kSource / "data/mnist5k/mnist5k-images-idx3-ubyte").string(); }
std::string mnist_labels() { return (kSource / "data/mnist5k/mnist5k-labels-idx1-ubyte").string(); }

void run_command(const std::string& command, const std::vector<std::string>& config_files,
                 const std::map<std::string, std::string>& overrides) {
    config::RunConfig raw;
    for (const auto& f : config_files) raw.load_file(kSource / "tests/acceptance" / f);
    for (const auto& [k, v] : overrides) raw.set_override(k, v);
    std::ostringstream log, warn;
    commands::run(command, raw, log, warn);
}

std::vector<std::map<std::string, std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) header.push_back(c);
    }
    std::vector<std::map<std::string, std::string>> rows;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::map<std::string, std::string> row;
        std::size_t i = 0;
        for (std::string c; std::getline(ss, c, ',') && i < header.size(); ++i) row[header[i]] = c;
        rows.push_back(std::move(row));
    }
    return rows;
}

// --- 1 ---------------------------------------------------------------------

Outcome jacobian_correctness() {
    double worst = 0.0;
    int nets = 0;
    for (std::uint64_t seed = 1; seed <= 24; ++seed) {
        SeededRng rng(seed);
        const auto act = seed % 2 ? network::Activation::elu() : network::Activation::tanh();
        const std::size_t in = 2 + seed % 5, hidden = 8 + seed % 9, out = 5 + seed % 7;
        const std::vector<std::size_t> widths{in, hidden, hidden, out};
        const std::vector<network::Activation> acts{act, act, network::Activation::identity()};
        const auto net = network::FeedForwardNet::random(widths, acts, rng);
        const geometry::NetMap map(net);
        for (int p = 0; p < 5; ++p) {
            Vector z(in);
            for (double& v : z) v = rng.normal();
            worst = std::max(worst, oracle::max_rel_error(map.jacobian(z), oracle::fd_jacobian(map, z)));
        }
        ++nets;
    }
    return {worst < 1e-5, fmt("%d nets x 5 points, worst relative error %.2e", nets, worst)};
}

// --- 2 ---------------------------------------------------------------------

Outcome flat_space() {
    bool ok = true;
    std::string detail;

    const auto plane = data::synth_manifold(data::ManifoldKind::Plane, 200, 0.0, 1);
    const Matrix& z = *plane.dataset.latent;
    const Matrix& x = plane.dataset.samples;
    const double c_hat = analysis::residual_cross_correlation(
        euclidean_distance_matrix(z), geometry::graph_geodesic_matrix(*plane.oracle.chart_map, z, 10));
    ok &= c_hat < 0.01;

    double worst_angle = 0.0;
    const auto t0 = geometry::tangent_basis(z, x, 0, 12, 2);
    for (std::size_t i = 1; i < z.rows(); i += 7) {
        const auto ti = geometry::tangent_basis(z, x, i, 12, 2);
        for (double a : geometry::principal_angles(t0, ti)) worst_angle = std::max(worst_angle, a);
    }
    ok &= worst_angle < 1e-6;

    const geometry::LinearMap lin(Matrix{{1, 0.5}, {0, 2}, {0.3, -1}, {2, 0}});
    SeededRng rng(4);
    double worst_line = 0.0, worst_dist = 0.0;
    for (int p = 0; p < 20; ++p) {
        const Vector a{rng.normal(), rng.normal()}, b{rng.normal(), rng.normal()};
        const auto g = geometry::geodesic(lin, a, b);
        const Vector d{b[0] - a[0], b[1] - a[1]};
        const double dn = numerics::norm2(d);
        for (std::size_t i = 1; i + 1 < g.points.rows(); ++i) {
            const double px = g.points(i, 0) - a[0], py = g.points(i, 1) - a[1];
            worst_line = std::max(worst_line, std::abs(px * d[1] - py * d[0]) / dn);
        }
        const double want = numerics::norm2(numerics::matvec(lin.matrix(), d));
        worst_dist = std::max(worst_dist, std::abs(geometry::riemannian_distance(lin, a, b).value - want));
    }
    const geometry::LinearMap diag(Matrix{{1, 0}, {0, 2}, {0, 0}});
    const double root5 = geometry::riemannian_distance(diag, Vector{0, 0}, Vector{1, 1}).value;
    worst_dist = std::max(worst_dist, std::abs(root5 - std::sqrt(5.0)));
    ok &= worst_line < 1e-6 && worst_dist < 1e-8;

    detail = fmt("c_hat %.2e, max tangent angle %.2e rad, max off-line %.2e, max distance error %.2e", c_hat,
                 worst_angle, worst_line, worst_dist);
    return {ok, detail};
}

// --- 3 ---------------------------------------------------------------------

Outcome curved_space() {
    const geometry::SphereChartMap sphere;
    SeededRng rng(3);
    const double lim = data::kSphereLatitudeLimit;
    double worst = 0.0;
    int longer = 0;
    for (int p = 0; p < 50; ++p) {
        const Vector a{rng.uniform(-lim, lim), rng.uniform(-kPi, kPi)};
        Vector b{rng.uniform(-lim, lim), rng.uniform(-kPi, kPi)};
        if (b[1] - a[1] > kPi) b[1] -= 2 * kPi;
        if (a[1] - b[1] > kPi) b[1] += 2 * kPi;
        const auto g = geometry::geodesic(sphere, a, b);
        const double gc = oracle::haversine(a[0], a[1], b[0], b[1]);
        worst = std::max(worst, std::abs(g.length - gc) / gc);
        Matrix straight(17, 2);
        for (std::size_t i = 0; i <= 16; ++i)
            for (std::size_t c = 0; c < 2; ++c) straight(i, c) = a[c] + (b[c] - a[c]) * static_cast<double>(i) / 16;
        if (g.length > geometry::curve_energy(sphere, straight).length + 1e-12) ++longer;
    }
    return {worst < 0.02 && longer == 0,
            fmt("50 pairs, worst relative error %.3f%%, %d geodesics longer than the straight path", 100 * worst,
                longer)};
}

// --- 4 ---------------------------------------------------------------------

DistanceMatrix from_upper(std::size_t n, const std::vector<double>& v) {
    DistanceMatrix d(n, MetricKind::Euclidean);
    std::size_t at = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, v[at++]);
    return d;
}

Outcome residual_correlation() {
    SeededRng rng(6);
    Matrix pts(20, 3);
    for (double& v : pts.data()) v = rng.normal();
    const auto d = euclidean_distance_matrix(pts);
    const double self = analysis::residual_cross_correlation(d, d);
    std::vector<double> v(d.upper_triangle().begin(), d.upper_triangle().end());
    for (double& x : v) x = 2.5 * x + 0.75;
    const double affine = analysis::residual_cross_correlation(d, from_upper(20, v));
    const double anti = analysis::residual_cross_correlation(from_upper(3, {1, 2, 3}), from_upper(3, {3, 2, 1}));
    const bool ok = std::abs(self) < 1e-12 && std::abs(affine) < 1e-12 && std::abs(anti - 2.0) < 1e-12;
    return {ok, fmt("self %.1e, affine %.1e, anticorrelated %.12f", self, affine, anti)};
}

// --- 5 ---------------------------------------------------------------------

Outcome margin_fixtures() {
    const double sep = analysis::normalized_margin(Matrix{{0, 0}, {1, 0}, {0, 10}, {1, 10}}, std::vector<int>{0, 0, 1, 1})
                           .mean;
    const double tie = analysis::normalized_margin(Matrix{{0, 0}, {1, 0}, {0, 1}, {1, 1}}, std::vector<int>{0, 0, 1, 1}).mean;

    SeededRng rng(7);
    Matrix pts(60, 5), r(5, 5);
    for (double& v : pts.data()) v = rng.normal();
    for (double& v : r.data()) v = rng.normal();
    const Matrix q = numerics::svd(r).u;
    Matrix moved = numerics::matmul_bt(pts, q);
    for (std::size_t i = 0; i < moved.rows(); ++i) moved(i, 1) += 4.0;
    std::vector<int> labels(60);
    for (std::size_t i = 0; i < 60; ++i) labels[i] = static_cast<int>(i % 4);
    const double drift = std::abs(analysis::normalized_margin(pts, labels).mean -
                                  analysis::normalized_margin(moved, labels).mean);
    const bool ok = sep == 0.9 && tie == 0.0 && drift < 1e-10;
    return {ok, fmt("separated %.17g, tied %.17g, isometry drift %.1e", sep, tie, drift)};
}

// --- 6 ---------------------------------------------------------------------

Outcome clustering_oracle() {
    int matched = 0;
    const int instances = 50;
    for (std::uint64_t seed = 1; seed <= instances; ++seed) {
        SeededRng rng(seed);
        Matrix pts(6, 2);
        for (std::size_t i = 0; i < 6; ++i) {
            pts(i, 0) = rng.normal() + (i < 3 ? 0.0 : 25.0);
            pts(i, 1) = rng.normal();
        }
        const auto d = euclidean_distance_matrix(pts);
        const auto best = oracle::best_medoids(d, 2);
        auto got = analysis::kmedoids(d, 2, seed);
        std::sort(got.medoids.begin(), got.medoids.end());
        if (got.medoids == best.medoids && std::abs(got.cost - best.cost) < 1e-12) ++matched;
    }
    const std::vector<int> labels{0, 0, 1, 1, 2, 2};
    const double f = analysis::pairwise_f_score(std::vector<std::size_t>{2, 2, 0, 0, 1, 1}, labels);
    return {matched == instances && f == 100.0,
            fmt("%d/%d instances match the exhaustive medoids, perfect-assignment F %.1f", matched, instances, f)};
}

// --- 7 ---------------------------------------------------------------------

Outcome paper_direction() {
    int a = 0, b = 0, c = 0, d = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const fs::path dir = kWork / ("direction_seed" + std::to_string(seed));
        fs::remove_all(dir);
        const std::map<std::string, std::string> common{{"seed", std::to_string(seed)},
                                                        {"out_dir", dir.string()},
                                                        {"mnist_images", mnist_images()},
                                                        {"mnist_labels", mnist_labels()}};
        run_command("train", {"mnist.cfg", "mnist_vae.cfg"}, common);
        run_command("train", {"mnist.cfg", "mnist_disentangled.cfg"}, common);
        auto m = common;
        m["models"] = (dir / "vae.lgck").string() + "," + (dir / "disentangled.lgck").string();
        run_command("metrics", {"mnist.cfg"}, m);

        std::map<std::string, std::map<std::string, double>> rep;
        for (const auto& row : read_csv(dir / "metrics.csv"))
            for (const char* k : {"c_hat", "mean_margin", "curvature_deg", "f_euclid", "f_riem"})
                rep[row.at("space")][k] = std::stod(row.at(k));
        const auto& vae = rep.at("vae");
        const auto& spec = rep.at("specified");
        const auto& unspec = rep.at("unspecified");
        const bool ta = spec.at("c_hat") > vae.at("c_hat");
        const bool tb = spec.at("curvature_deg") > vae.at("curvature_deg");
        const bool tc = spec.at("f_riem") > spec.at("f_euclid");
        const bool td = spec.at("mean_margin") > 0.0 && spec.at("mean_margin") < 1.0 &&
                        spec.at("mean_margin") > unspec.at("mean_margin");
        a += ta, b += tb, c += tc, d += td;
        note(fmt("seed %llu: c_hat %.4f vs vae %.4f (%s) | curvature %.2f vs vae %.2f deg (%s) | F riem %.2f vs "
                 "euclid %.2f (%s) | margin %.3f vs unspecified %.3f (%s)",
                 static_cast<unsigned long long>(seed), spec.at("c_hat"), vae.at("c_hat"), ta ? "ok" : "no",
                 spec.at("curvature_deg"), vae.at("curvature_deg"), tb ? "ok" : "no", spec.at("f_riem"),
                 spec.at("f_euclid"), tc ? "ok" : "no", spec.at("mean_margin"), unspec.at("mean_margin"),
                 td ? "ok" : "no"));
    }
    const bool ok = a >= 2 && b >= 2 && c >= 2 && d >= 2;
    return {ok, fmt("seeds holding (a) c_hat %d/3, (b) curvature %d/3, (c) F %d/3, (d) margin %d/3", a, b, c, d)};
}

// --- 8 ---------------------------------------------------------------------

Outcome rank_direction() {
    int elu_full = 0, relu_low = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const fs::path dir = kWork / ("rank_seed" + std::to_string(seed));
        fs::remove_all(dir);
        std::map<std::string, std::string> common{{"seed", std::to_string(seed)},
                                                  {"out_dir", dir.string()},
                                                  {"mnist_images", mnist_images()},
                                                  {"mnist_labels", mnist_labels()}};
        for (const char* act : {"elu", "relu"}) {
            auto o = common;
            o["activation"] = act;
            o["checkpoint"] = std::string(act) + ".lgck";
            run_command("train", {"mnist.cfg", "mnist_rank.cfg"}, o);
        }
        auto r = common;
        r["models"] = (dir / "elu.lgck").string() + "," + (dir / "relu.lgck").string();
        run_command("rank-report", {"mnist.cfg"}, r);
        const auto j = nlohmann::json::parse(slurp(dir / "rank_report.json"));
        std::map<std::string, std::size_t> median;
        for (const auto& s : j.at("summary")) median[s.at("model")] = s.at("median");
        const bool e = median.at("elu") == 16, l = median.at("relu") < 16;
        elu_full += e;
        relu_low += l;
        note(fmt("seed %llu: median rank elu %zu, relu %zu", static_cast<unsigned long long>(seed), median.at("elu"),
                 median.at("relu")));
    }
    return {elu_full >= 2 && relu_low >= 2,
            fmt("ELU median 16 in %d/3 seeds, ReLU median below 16 in %d/3 seeds", elu_full, relu_low)};
}

// --- 9 ---------------------------------------------------------------------

// CSV and PGM files under a directory, keyed by name.
std::map<std::string, std::string> outputs(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto ext = e.path().extension();
        if (ext == ".csv" || ext == ".pgm") out[e.path().filename().string()] = slurp(e.path());
    }
    return out;
}

void every_command(const fs::path& dir) {
    const std::string d = dir.string();
    const std::map<std::string, std::string> mnist{{"seed", "5"},
                                                   {"out_dir", d},
                                                   {"mnist_images", mnist_images()},
                                                   {"mnist_labels", mnist_labels()},
                                                   {"n_train", "200"},
                                                   {"n_test", "100"},
                                                   {"encoder_hidden", "32"},
                                                   {"decoder_hidden", "32"},
                                                   {"disc_hidden", "16"},
                                                   {"epochs", "2"}};
    auto with = [](std::map<std::string, std::string> base, const std::map<std::string, std::string>& extra) {
        for (const auto& [k, v] : extra) base[k] = v;
        return base;
    };
    auto only = [](const std::map<std::string, std::string>& base, std::set<std::string> drop) {
        std::map<std::string, std::string> out;
        for (const auto& [k, v] : base)
            if (!drop.count(k)) out[k] = v;
        return out;
    };
    const std::set<std::string> train_keys{"encoder_hidden", "decoder_hidden", "disc_hidden", "epochs"};
    const auto eval = only(mnist, train_keys);
    run_command("train", {}, mnist);
    run_command("train", {}, with(mnist, {{"model", "disentangled"}, {"ds", "4"}, {"dz", "4"}}));
    run_command("train", {}, with(mnist, {{"model", "disentangled"}, {"ds", "4"}, {"dz", "4"},
                                          {"variant", "swap_adversarial"}, {"checkpoint", "adv.lgck"}}));
    const std::string vae = (dir / "vae.lgck").string(), dis = (dir / "disentangled.lgck").string();
    run_command("metrics", {}, with(eval, {{"models", vae + "," + dis}, {"n_eval", "60"}, {"n_pairs", "30"}}));
    run_command("interpolate", {}, with(eval, {{"model", vae}, {"n_steps", "5"}}));
    run_command("synthesize", {}, with(eval, {{"model", dis}, {"n_steps", "4"}, {"n_rows", "2"}}));
    run_command("rank-report", {}, with(eval, {{"models", vae + "," + dis}, {"m", "10"}}));
    run_command("geodesic", {}, with(eval, {{"model", dis}}));
    const std::map<std::string, std::string> roll{{"seed", "5"}, {"out_dir", d}, {"dataset", "swiss_roll"},
                                                  {"n_points", "80"}, {"noise", "0.05"}};
    run_command("data", {}, with(roll, {{"action", "generate"}}));
    run_command("data", {}, with(roll, {{"action", "split"}}));
    run_command("metrics", {}, with(roll, {{"models", "oracle"}, {"report", "oracle_metrics.csv"}, {"n_pairs", "30"}}));
    run_command("interpolate", {}, with(roll, {{"model", "oracle"}, {"grid", "roll.pgm"}, {"samples", "roll.csv"}}));
}

Outcome determinism() {
    const fs::path dir = kWork / "determinism";
    fs::remove_all(dir);
    every_command(dir);
    const auto first = outputs(dir);
    fs::remove_all(dir);
    every_command(dir);
    const auto second = outputs(dir);
    std::size_t pgm = 0, differing = 0;
    for (const auto& [name, bytes] : first) {
        pgm += name.ends_with(".pgm");
        const auto it = second.find(name);
        if (it == second.end() || it->second != bytes) {
            ++differing;
            note("differs: " + name);
        }
    }
    const bool ok = differing == 0 && first.size() == second.size() && pgm >= 3 && first.size() >= 10;
    return {ok, fmt("%zu CSV/PGM files (%zu PGM) across every command, %zu differ on re-run", first.size(), pgm,
                    differing)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "jacobian correctness", 10, jacobian_correctness},
        {2, "flat-space oracle", 5, flat_space},
        {3, "curved-space oracle", 60, curved_space},
        {4, "residual cross-correlation properties", 1, residual_correlation},
        {5, "normalized margin fixtures", 1, margin_fixtures},
        {6, "clustering oracle", 5, clustering_oracle},
        {7, "MNIST direction run", 30 * 60, paper_direction},
        {8, "jacobian rank direction", 15 * 60, rank_direction},
        {9, "determinism", 5 * 60, determinism},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    fs::create_directories(kWork);
    int failed = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s budget", c.budget_s);
        }
        std::printf("[%s] %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
