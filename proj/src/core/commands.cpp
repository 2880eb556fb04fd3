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

#include "latentgeo/commands.hpp"

#include "latentgeo/analysis.hpp"
#include "latentgeo/data.hpp"
#include "latentgeo/geometry.hpp"
#include "latentgeo/image.hpp"
#include "latentgeo/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace latentgeo::commands {

namespace {

namespace fs = std::filesystem;
using config::KeySpec;
using config::ResolvedConfig;
using config::ValueKind;
using numerics::Matrix;
using numerics::SeededRng;
using numerics::Vector;

// ---- schemas -------------------------------------------------------------

std::vector<KeySpec> common_keys() {
    return {
        {"seed", ValueKind::Seed, "0", "seed for every random choice of the run"},
        {"out_dir", ValueKind::Path, ".", "directory for all outputs"},
    };
}

std::vector<KeySpec> dataset_keys() {
    return {
        {"dataset", ValueKind::Choice, "mnist", "mnist or a synthetic manifold",
         {"mnist", "plane", "circle", "sphere", "swiss_roll"}},
        {"mnist_images", ValueKind::Path, "data/mnist5k/mnist5k-images-idx3-ubyte", "IDX image file"},
        {"mnist_labels", ValueKind::Path, "data/mnist5k/mnist5k-labels-idx1-ubyte", "IDX label file"},
        {"n_train", ValueKind::PositiveSize, "2000", "MNIST training samples (class balanced)"},
        {"n_test", ValueKind::PositiveSize, "500", "MNIST held-out samples (class balanced)"},
        {"n_points", ValueKind::PositiveSize, "500", "synthetic sample count"},
        {"noise", ValueKind::Double, "0", "synthetic ambient noise sigma"},
        {"data_seed", ValueKind::Seed, "0", "seed of the subset, split and synthetic draw"},
    };
}

KeySpec split_key() { return {"split", ValueKind::Choice, "test", "which split to evaluate", {"train", "test"}}; }

std::vector<KeySpec> geodesic_keys() {
    return {
        {"segments", ValueKind::PositiveSize, "16", "geodesic discretization K"},
        {"tol", ValueKind::PositiveDouble, "1e-6", "relative energy change to stop at"},
        {"max_iters", ValueKind::PositiveSize, "500", "geodesic iteration cap"},
    };
}

std::vector<KeySpec> join(std::initializer_list<std::vector<KeySpec>> parts) {
    std::vector<KeySpec> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

const std::map<std::string, std::vector<KeySpec>>& schemas() {
    static const std::map<std::string, std::vector<KeySpec>> s = {
        {"train",
         join({common_keys(), dataset_keys(),
               {
                   {"model", ValueKind::Choice, "vae", "model family", {"vae", "disentangled"}},
                   {"activation", ValueKind::Choice, "elu", "hidden activation", {"elu", "relu", "tanh"}},
                   {"latent_dim", ValueKind::PositiveSize, "16", "VAE latent dimension"},
                   {"ds", ValueKind::PositiveSize, "16", "specified dimension"},
                   {"dz", ValueKind::PositiveSize, "64", "unspecified dimension"},
                   {"variant", ValueKind::Choice, "swap_l2_kl", "disentangler objective",
                    {"swap_l2_kl", "swap_adversarial"}},
                   {"encoder_hidden", ValueKind::SizeList, "256", "encoder hidden widths"},
                   {"decoder_hidden", ValueKind::SizeList, "256", "decoder hidden widths"},
                   {"disc_hidden", ValueKind::SizeList, "128", "discriminator hidden widths"},
                   {"epochs", ValueKind::PositiveSize, "20", ""},
                   {"batch_size", ValueKind::PositiveSize, "64", ""},
                   {"lr", ValueKind::PositiveDouble, "1e-3", "Adam learning rate"},
                   {"beta", ValueKind::Double, "1", "KL weight"},
                   {"lambda", ValueKind::Double, "1", "adversarial weight"},
                   {"checkpoint", ValueKind::String, "", "output checkpoint (default <out_dir>/<model>.lgck)"},
               }})},
        {"metrics",
         join({common_keys(), dataset_keys(),
               {
                   split_key(),
                   {"models", ValueKind::String, "", "comma-separated checkpoints, or 'oracle' for a synthetic chart"},
                   {"n_eval", ValueKind::Size, "0", "evaluate a class-balanced subset of this size (0: whole split)"},
                   {"k_neighbors", ValueKind::PositiveSize, "10", "kNN graph degree"},
                   {"curvature_k", ValueKind::PositiveSize, "12", "tangent neighborhood size"},
                   {"d_sub", ValueKind::PositiveSize, "2", "tangent subspace dimension"},
                   {"n_pairs", ValueKind::PositiveSize, "200", "tangent pairs for the curvature score"},
                   {"n_distance_pairs", ValueKind::PositiveSize, "100", "pairs for the mean distances"},
                   {"n_clusters", ValueKind::Size, "0", "k-medoids k (0: number of classes)"},
                   {"report", ValueKind::String, "metrics.csv", "report file name inside out_dir"},
               }})},
        {"interpolate",
         join({common_keys(), dataset_keys(), geodesic_keys(),
               {
                   split_key(),
                   {"model", ValueKind::String, "", "checkpoint, or 'oracle'"},
                   {"index_a", ValueKind::String, "auto", "first sample index, or auto"},
                   {"index_b", ValueKind::String, "auto", "second sample index, or auto"},
                   {"pair", ValueKind::Choice, "cross_class", "how auto picks the pair", {"cross_class", "same_class"}},
                   {"n_steps", ValueKind::PositiveSize, "10", "images per row"},
                   {"grid", ValueKind::String, "interpolation.pgm", ""},
                   {"samples", ValueKind::String, "interpolation.csv", ""},
               }})},
        {"synthesize",
         join({common_keys(), dataset_keys(),
               {
                   split_key(),
                   {"model", ValueKind::String, "", "disentangled checkpoint"},
                   {"class", ValueKind::String, "auto", "class label to synthesize, or auto"},
                   {"n_steps", ValueKind::PositiveSize, "8", "grid columns"},
                   {"n_rows", ValueKind::PositiveSize, "4", "grid rows, one unspecified draw each"},
                   {"z_scale", ValueKind::Double, "1", "standard deviation of the unspecified draws"},
                   {"grid", ValueKind::String, "synthesis.pgm", ""},
                   {"report", ValueKind::String, "synthesis.csv", ""},
               }})},
        {"rank-report",
         join({common_keys(), dataset_keys(),
               {
                   split_key(),
                   {"models", ValueKind::String, "", "comma-separated checkpoints, or 'oracle'"},
                   {"m", ValueKind::Size, "100", "latent points per model"},
                   {"points", ValueKind::Choice, "prior", "where the points come from", {"prior", "data"}},
                   {"rel_tol", ValueKind::PositiveDouble, "1e-6", "numerical rank tolerance"},
                   {"report", ValueKind::String, "rank_report.csv", ""},
               }})},
        {"geodesic",
         join({common_keys(), dataset_keys(), geodesic_keys(),
               {
                   split_key(),
                   {"model", ValueKind::String, "", "checkpoint, or 'oracle'"},
                   {"index_a", ValueKind::String, "auto", "first sample index, or auto"},
                   {"index_b", ValueKind::String, "auto", "second sample index, or auto"},
                   {"pair", ValueKind::Choice, "cross_class", "how auto picks the pair", {"cross_class", "same_class"}},
                   {"a", ValueKind::String, "", "explicit latent start, comma-separated (overrides index_a)"},
                   {"b", ValueKind::String, "", "explicit latent end, comma-separated (overrides index_b)"},
                   {"curve", ValueKind::String, "geodesic.csv", ""},
               }})},
        {"data",
         join({common_keys(), dataset_keys(),
               {
                   {"action", ValueKind::Choice, "generate", "generate, fetch (import) or split",
                    {"generate", "fetch", "split"}},
                   {"source", ValueKind::String, "", "fetch: CSV of 0-255 pixels with a trailing label"},
                   {"prefix", ValueKind::String, "imported", "fetch: IDX file name prefix"},
                   {"output", ValueKind::String, "synthetic.csv", "generate: CSV name"},
               }})},
    };
    return s;
}

// ---- shared helpers ------------------------------------------------------

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

Vector parse_vector(const std::string& key, const std::string& s) {
    Vector v;
    for (const std::string& item : split_list(s)) {
        std::size_t used = 0;
        double d = 0.0;
        try {
            d = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == item.size() && std::isfinite(d), ErrorKind::Config,
                "key '" + key + "': '" + item + "' is not a number");
        v.push_back(d);
    }
    return v;
}

std::optional<std::size_t> parse_index(const ResolvedConfig& cfg, const std::string& key) {
    const std::string& v = cfg.str(key);
    if (v == "auto") return std::nullopt;
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == v.size() && !v.empty() && v[0] != '-', ErrorKind::Config,
            "key '" + key + "': expected a sample index or auto, got '" + v + "'");
    return static_cast<std::size_t>(x);
}

fs::path out_path(const ResolvedConfig& cfg, const std::string& key) {
    const fs::path p = cfg.str(key);
    require(!p.empty(), ErrorKind::Config, "key '" + key + "' must name a file");
    return p.is_absolute() ? p : cfg.path("out_dir") / p;
}

void ensure_out_dir(const ResolvedConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.path("out_dir"), ec);
    require(!ec, ErrorKind::Io, "cannot create output directory " + cfg.str("out_dir") + ": " + ec.message());
}

void write_echo(const std::string& command, const ResolvedConfig& cfg, const fs::path& path,
                const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["seed"] = cfg.seed("seed");
    j["config"] = cfg.values();
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    std::ofstream out(path, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<std::string> pgm_comments(const std::string& command, const ResolvedConfig& cfg) {
    std::vector<std::string> c{"latentgeo " + command + " seed=" + std::to_string(cfg.seed("seed"))};
    for (const auto& [k, v] : cfg.values()) c.push_back(k + "=" + v);
    return c;
}

bool is_synthetic(const ResolvedConfig& cfg) { return cfg.str("dataset") != "mnist"; }

void check_inputs(const ResolvedConfig& cfg) {
    if (!is_synthetic(cfg)) {
        for (const char* key : {"mnist_images", "mnist_labels"})
            require(fs::exists(cfg.path(key)), ErrorKind::Io, std::string(key) + " not found: " + cfg.str(key));
    } else {
        require(cfg.size("n_points") >= 10, ErrorKind::Config, "key 'n_points': synthetic sets need at least 10");
        require(cfg.number("noise") >= 0.0, ErrorKind::Config, "key 'noise' must be nonnegative");
    }
}

struct Prepared {
    data::Split split;
    std::optional<data::ManifoldOracle> oracle;
};

Prepared prepare_data(const ResolvedConfig& cfg) {
    Prepared p;
    const std::uint64_t seed = cfg.seed("data_seed");
    if (!is_synthetic(cfg)) {
        const auto all = data::load_idx_dataset(cfg.path("mnist_images"), cfg.path("mnist_labels"));
        const std::size_t n_train = cfg.size("n_train"), n_test = cfg.size("n_test");
        const auto subset = data::stratified_subset(all, n_train + n_test, seed);
        p.split = data::train_test_split(subset, static_cast<double>(n_train) / static_cast<double>(n_train + n_test),
                                         seed);
    } else {
        auto synth = data::synth_manifold(data::parse_manifold_kind(cfg.str("dataset")), cfg.size("n_points"),
                                          cfg.number("noise"), seed);
        p.split = {synth.dataset, synth.dataset};
        p.oracle = std::move(synth.oracle);
    }
    return p;
}

const data::LabeledDataset& eval_split(const Prepared& p, const ResolvedConfig& cfg) {
    return cfg.str("split") == "train" ? p.split.first : p.split.second;
}

// A model spec resolved to something that can encode and decode.
struct LoadedModel {
    std::string id;
    std::string kind;  // vae | disentangled | oracle
    std::optional<models::VaeModel> vae;
    std::optional<models::DisentangledModel> dis;
};

void check_model_spec(const std::string& spec, const ResolvedConfig& cfg) {
    require(!spec.empty(), ErrorKind::Config, "no model given");
    if (spec == "oracle") {
        require(is_synthetic(cfg), ErrorKind::Config, "model 'oracle' needs a synthetic dataset");
        return;
    }
    require(fs::exists(spec), ErrorKind::MissingCheckpoint, "checkpoint not found: " + spec);
}

LoadedModel load_model(const std::string& spec, const ResolvedConfig& cfg) {
    LoadedModel m;
    if (spec == "oracle") {
        m.id = "oracle-" + cfg.str("dataset");
        m.kind = "oracle";
        return m;
    }
    const auto ckpt = network::load_checkpoint(spec);
    m.id = fs::path(spec).stem().string();
    m.kind = ckpt.kind;
    if (ckpt.kind == "vae") m.vae = models::vae_from_checkpoint(ckpt);
    else if (ckpt.kind == "disentangled") m.dis = models::disentangled_from_checkpoint(ckpt);
    else fail(ErrorKind::Parse, "checkpoint " + spec + " holds an unknown model kind '" + ckpt.kind + "'");
    return m;
}

void check_input_width(const LoadedModel& m, const data::LabeledDataset& ds) {
    std::size_t want = 0;
    if (m.vae) want = m.vae->encoder.in_dim();
    if (m.dis) want = m.dis->enc_s.in_dim();
    if (want)
        require(want == ds.samples.cols(), ErrorKind::Config,
                "model " + m.id + " reads " + std::to_string(want) + " features but the dataset has " +
                    std::to_string(ds.samples.cols()));
}

std::size_t medoid_row(const Matrix& points) {
    std::size_t best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < points.rows(); ++j) s += numerics::distance(points.row(i), points.row(j));
        if (s < best_sum) {
            best_sum = s;
            best = i;
        }
    }
    return best;
}

// Latent view used for a single-pair operation: codes of a and b plus the
// map decoding that view.
struct PairView {
    Vector a, b;
    geometry::MapPtr map;
};

PairView pair_view(const LoadedModel& m, const Prepared& p, const data::LabeledDataset& ds, std::size_t ia,
                   std::size_t ib) {
    const std::size_t idx[2] = {ia, ib};
    const Matrix x = numerics::gather_rows(ds.samples, idx);
    PairView v;
    if (m.kind == "oracle") {
        const Matrix lat = numerics::gather_rows(*ds.latent, idx);
        v.a = lat.row_vector(0);
        v.b = lat.row_vector(1);
        v.map = p.oracle->chart_map;
    } else if (m.vae) {
        const Matrix codes = models::encode(*m.vae, x);
        v.a = codes.row_vector(0);
        v.b = codes.row_vector(1);
        v.map = models::decoder_map(*m.vae);
    } else {
        // specified-space path with the unspecified code of the first sample held fixed
        const Matrix s = models::encode_specified(*m.dis, x);
        const Matrix z = models::encode_unspecified(*m.dis, x);
        v.a = s.row_vector(0);
        v.b = s.row_vector(1);
        v.map = models::specified_map(*m.dis, z.row(0));
    }
    return v;
}

std::pair<std::size_t, std::size_t> choose_pair(const ResolvedConfig& cfg, const data::LabeledDataset& ds) {
    const std::size_t n = ds.size();
    auto ia = parse_index(cfg, "index_a");
    auto ib = parse_index(cfg, "index_b");
    SeededRng rng(cfg.seed("seed"));
    const bool same = cfg.str("pair") == "same_class";
    if (!ia) ia = static_cast<std::size_t>(rng.below(n));
    if (!ib) {
        std::vector<std::size_t> cand;
        for (std::size_t j = 0; j < n; ++j)
            if (j != *ia && (!ds.has_labels() || (ds.labels[j] == ds.labels[*ia]) == same)) cand.push_back(j);
        require(!cand.empty(), ErrorKind::InvalidInput, "no partner sample satisfies pair=" + cfg.str("pair"));
        ib = cand[rng.below(cand.size())];
    }
    require(*ia < n && *ib < n, ErrorKind::Config,
            "sample index out of range (split has " + std::to_string(n) + " samples)");
    return {*ia, *ib};
}

std::pair<std::size_t, std::size_t> cell_shape(std::size_t dim) {
    if (dim == 784) return {28, 28};
    return {1, dim};
}

geometry::GeodesicOptions geodesic_options(const ResolvedConfig& cfg) {
    geometry::GeodesicOptions o;
    o.segments = cfg.size("segments");
    o.tol = cfg.number("tol");
    o.max_iters = cfg.size("max_iters");
    return o;
}

void write_matrix_rows(std::ostream& out, std::span<const double> row) {
    for (double v : row) out << ',' << fmt(v);
}

// ---- commands ------------------------------------------------------------

void cmd_train(const ResolvedConfig& cfg, std::ostream& log, std::ostream&) {
    check_inputs(cfg);
    models::ModelConfig mc;
    mc.encoder_hidden = cfg.sizes("encoder_hidden");
    mc.decoder_hidden = cfg.sizes("decoder_hidden");
    mc.disc_hidden = cfg.sizes("disc_hidden");
    mc.activation = network::Activation::parse(cfg.str("activation"));
    mc.latent_dim = cfg.size("latent_dim");
    mc.ds = cfg.size("ds");
    mc.dz = cfg.size("dz");
    mc.variant = models::parse_variant(cfg.str("variant"));
    models::TrainConfig tc;
    tc.epochs = cfg.size("epochs");
    tc.batch_size = cfg.size("batch_size");
    tc.adam.lr = cfg.number("lr");
    tc.beta = cfg.number("beta");
    tc.lambda = cfg.number("lambda");
    require(tc.beta >= 0.0 && tc.lambda >= 0.0, ErrorKind::Config, "beta and lambda must be nonnegative");
    const std::string family = cfg.str("model");
    const fs::path ckpt_path =
        cfg.str("checkpoint").empty() ? cfg.path("out_dir") / (family + ".lgck") : out_path(cfg, "checkpoint");
    ensure_out_dir(cfg);
    {
        std::error_code ec;
        if (ckpt_path.has_parent_path()) fs::create_directories(ckpt_path.parent_path(), ec);
        std::ofstream probe(ckpt_path, std::ios::binary | std::ios::app);
        require(static_cast<bool>(probe), ErrorKind::Io, "cannot write checkpoint: " + ckpt_path.string());
    }

    const Prepared p = prepare_data(cfg);
    const auto& train = p.split.first;
    const std::uint64_t seed = cfg.seed("seed");
    log << "training " << family << " on " << train.size() << " samples (" << train.samples.cols()
        << " features), seed " << seed << '\n';

    std::vector<double> losses, disc;
    network::Checkpoint ckpt;
    if (family == "vae") {
        auto t = models::train_vae(train, mc, tc, seed);
        losses = t.loss_history;
        ckpt = models::to_checkpoint(t.model, cfg.values(), seed);
    } else {
        auto t = models::train_disentangled(train, mc, tc, seed);
        losses = t.loss_history;
        disc = t.disc_history;
        ckpt = models::to_checkpoint(t.model, cfg.values(), seed);
    }
    network::save_checkpoint(ckpt, ckpt_path);

    fs::path hist = ckpt_path;
    hist.replace_extension("");
    hist += "_loss.csv";
    std::ofstream out(hist, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + hist.string());
    out << (disc.empty() ? "epoch,loss\n" : "epoch,loss,disc_loss\n");
    for (std::size_t e = 0; e < losses.size(); ++e) {
        out << e + 1 << ',' << fmt(losses[e]);
        if (!disc.empty()) out << ',' << fmt(disc[e]);
        out << '\n';
    }
    log << "final loss " << fmt(losses.back()) << " (first epoch " << fmt(losses.front()) << ")\n";
    log << "wrote " << ckpt_path.string() << " and " << hist.string() << '\n';
}

void cmd_metrics(const ResolvedConfig& cfg, std::ostream& log, std::ostream& warn) {
    const auto specs = split_list(cfg.str("models"));
    require(!specs.empty(), ErrorKind::Config, "key 'models': empty model list");
    for (const auto& s : specs) check_model_spec(s, cfg);
    check_inputs(cfg);
    require(cfg.size("d_sub") <= cfg.size("curvature_k"), ErrorKind::Config, "d_sub must not exceed curvature_k");
    ensure_out_dir(cfg);

    const Prepared p = prepare_data(cfg);
    data::LabeledDataset ds = eval_split(p, cfg);
    require(ds.has_labels(), ErrorKind::InvalidInput, "metrics need a labeled dataset");
    if (cfg.size("n_eval") > 0 && cfg.size("n_eval") < ds.size())
        ds = data::stratified_subset(ds, cfg.size("n_eval"), cfg.seed("data_seed"));

    std::vector<analysis::AnalysisSpace> spaces;
    for (const auto& spec : specs) {
        const LoadedModel m = load_model(spec, cfg);
        check_input_width(m, ds);
        if (m.kind == "oracle") {
            spaces.push_back({m.id, "latent", *ds.latent, p.oracle->chart_map});
        } else if (m.vae) {
            spaces.push_back({m.id, "vae", models::encode(*m.vae, ds.samples), models::decoder_map(*m.vae)});
        } else {
            const Matrix s = models::encode_specified(*m.dis, ds.samples);
            const Matrix z = models::encode_unspecified(*m.dis, ds.samples);
            const Vector z0(m.dis->dz, 0.0);
            const Vector s_anchor = s.row_vector(medoid_row(s));
            spaces.push_back({m.id, "specified", s, models::specified_map(*m.dis, z0)});
            spaces.push_back({m.id, "unspecified", z, models::unspecified_map(*m.dis, s_anchor)});
        }
    }

    analysis::CompareConfig cc;
    cc.k_neighbors = cfg.size("k_neighbors");
    cc.curvature.k_neighbors = cfg.size("curvature_k");
    cc.curvature.d_sub = cfg.size("d_sub");
    cc.curvature.n_pairs = cfg.size("n_pairs");
    cc.n_distance_pairs = cfg.size("n_distance_pairs");
    cc.n_clusters = cfg.size("n_clusters");
    cc.seed = cfg.seed("seed");
    const auto reports = analysis::compare_spaces(spaces, ds.labels, cc);
    for (const auto& r : reports)
        for (const auto& w : r.warnings) warn << "warning: " << r.model_id << '/' << r.space << ": " << w << '\n';

    const fs::path csv = out_path(cfg, "report");
    fs::path json = csv;
    json.replace_extension(".json");
    analysis::write_report_csv(reports, csv);
    auto echo = cfg.values();
    echo["command"] = "metrics";
    analysis::write_report_json(reports, echo, cfg.seed("seed"), json);
    for (const auto& r : reports)
        log << r.model_id << '/' << r.space << ": c_hat " << fmt(r.c_hat) << ", margin " << fmt(r.mean_margin)
            << ", curvature " << fmt(r.curvature_deg) << " deg, F " << fmt(r.f_euclid) << " / " << fmt(r.f_riem)
            << '\n';
    log << "wrote " << csv.string() << " and " << json.string() << '\n';
}

void cmd_interpolate(const ResolvedConfig& cfg, std::ostream& log, std::ostream& warn) {
    check_model_spec(cfg.str("model"), cfg);
    check_inputs(cfg);
    parse_index(cfg, "index_a");
    parse_index(cfg, "index_b");
    require(cfg.size("n_steps") >= 2, ErrorKind::Config, "key 'n_steps': need at least 2");
    ensure_out_dir(cfg);

    const Prepared p = prepare_data(cfg);
    const auto& ds = eval_split(p, cfg);
    const LoadedModel m = load_model(cfg.str("model"), cfg);
    check_input_width(m, ds);
    const auto [ia, ib] = choose_pair(cfg, ds);
    const PairView v = pair_view(m, p, ds, ia, ib);
    const std::size_t n = cfg.size("n_steps");
    const auto opts = geodesic_options(cfg);

    const auto eu = geometry::interpolate(*v.map, v.a, v.b, n, geometry::InterpolationMode::Euclidean, opts);
    const auto ri = geometry::interpolate(*v.map, v.a, v.b, n, geometry::InterpolationMode::Riemannian, opts);
    if (!ri.converged)
        warn << "warning: geodesic did not converge within " << opts.max_iters << " iterations; grid still written\n";

    const std::size_t dim = eu.ambient.cols();
    const auto [h, w] = cell_shape(dim);
    image::ImageGrid grid(2, n, h, w);
    for (std::size_t i = 0; i < n; ++i) {
        grid.set_cell(0, i, eu.ambient.row(i));
        grid.set_cell(1, i, ri.ambient.row(i));
    }
    const fs::path pgm = out_path(cfg, "grid");
    image::write_pgm_grid(grid, pgm, pgm_comments("interpolate", cfg));

    const fs::path csv = out_path(cfg, "samples");
    std::ofstream out(csv, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + csv.string());
    out << "mode,step";
    for (std::size_t c = 0; c < eu.latent.cols(); ++c) out << ",z" << c;
    for (std::size_t c = 0; c < dim; ++c) out << ",x" << c;
    out << '\n';
    for (const auto* run : {&eu, &ri})
        for (std::size_t i = 0; i < n; ++i) {
            out << (run == &eu ? "euclidean" : "riemannian") << ',' << i;
            write_matrix_rows(out, run->latent.row(i));
            write_matrix_rows(out, run->ambient.row(i));
            out << '\n';
        }
    nlohmann::ordered_json extra;
    extra["index_a"] = ia;
    extra["index_b"] = ib;
    extra["riemannian_converged"] = ri.converged;
    fs::path echo = csv;
    echo.replace_extension(".json");
    write_echo("interpolate", cfg, echo, extra);
    log << "interpolated samples " << ia << " -> " << ib << " (" << m.id << ")\n";
    log << "wrote " << pgm.string() << " and " << csv.string() << '\n';
}

void cmd_synthesize(const ResolvedConfig& cfg, std::ostream& log, std::ostream&) {
    const std::string spec = cfg.str("model");
    require(spec != "oracle", ErrorKind::Config, "synthesize needs a disentangled checkpoint");
    check_model_spec(spec, cfg);
    check_inputs(cfg);
    require(cfg.number("z_scale") >= 0.0, ErrorKind::Config, "key 'z_scale' must be nonnegative");
    require(cfg.size("n_steps") >= 2, ErrorKind::Config, "key 'n_steps': need at least 2");
    std::optional<int> wanted;
    if (cfg.str("class") != "auto") {
        const auto v = parse_vector("class", cfg.str("class"));
        require(v.size() == 1 && v[0] == std::floor(v[0]), ErrorKind::Config, "key 'class': expected an integer label");
        wanted = static_cast<int>(v[0]);
    }
    ensure_out_dir(cfg);

    const Prepared p = prepare_data(cfg);
    const auto& ds = eval_split(p, cfg);
    const LoadedModel m = load_model(spec, cfg);
    require(m.dis.has_value(), ErrorKind::Config, "synthesize needs a disentangled checkpoint, got " + m.kind);
    check_input_width(m, ds);
    require(ds.has_labels(), ErrorKind::InvalidInput, "synthesize needs labels");
    const auto& model = *m.dis;

    const Matrix s = models::encode_specified(model, ds.samples);
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < ds.size(); ++i) members[ds.labels[i]].push_back(i);
    std::map<int, Vector> centers;
    for (const auto& [label, idx] : members) {
        const Matrix codes = numerics::gather_rows(s, idx);
        centers[label] = codes.row_vector(medoid_row(codes));
    }
    const int label = wanted ? *wanted : members.begin()->first;
    require(members.count(label) > 0, ErrorKind::Config, "key 'class': label " + std::to_string(label) + " not present");

    SeededRng rng(cfg.seed("seed"));
    const auto& idx = members[label];
    const std::size_t pick = idx[rng.below(idx.size())];
    const Vector& from = centers[label];
    const Vector to = s.row_vector(pick);

    const std::size_t rows = cfg.size("n_rows"), cols = cfg.size("n_steps");
    const double zs = cfg.number("z_scale");
    Matrix codes(rows * cols, model.ds + model.dz);
    for (std::size_t r = 0; r < rows; ++r) {
        Vector z(model.dz);
        for (double& v : z) v = zs * rng.normal();
        for (std::size_t c = 0; c < cols; ++c) {
            const double t = static_cast<double>(c) / static_cast<double>(cols - 1);
            auto row = codes.row(r * cols + c);
            for (std::size_t j = 0; j < model.ds; ++j) row[j] = from[j] + t * (to[j] - from[j]);
            std::copy(z.begin(), z.end(), row.begin() + static_cast<std::ptrdiff_t>(model.ds));
        }
    }
    const Matrix images = model.decoder.forward_batch(codes);
    const auto [h, w] = cell_shape(images.cols());
    const auto grid = image::ImageGrid::from_rows(images, cols, h, w);
    const fs::path pgm = out_path(cfg, "grid");
    image::write_pgm_grid(grid, pgm, pgm_comments("synthesize", cfg));

    // nearest class center of each re-encoded cell
    const Matrix back = models::encode_specified(model, images);
    const fs::path csv = out_path(cfg, "report");
    std::ofstream out(csv, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + csv.string());
    out << "row,step,target_label,nearest_center_label\n";
    std::size_t kept = 0;
    for (std::size_t i = 0; i < back.rows(); ++i) {
        int best = label;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& [l, c] : centers) {
            const double d = numerics::distance(back.row(i), c);
            if (d < best_d) best_d = d, best = l;
        }
        kept += best == label;
        out << i / cols << ',' << i % cols << ',' << label << ',' << best << '\n';
    }
    nlohmann::ordered_json extra;
    extra["class"] = label;
    extra["target_sample"] = pick;
    extra["label_preserved"] = kept;
    extra["cells"] = back.rows();
    fs::path echo = csv;
    echo.replace_extension(".json");
    write_echo("synthesize", cfg, echo, extra);
    log << "class " << label << ": " << kept << " of " << back.rows() << " cells stay nearest their class center\n";
    log << "wrote " << pgm.string() << " and " << csv.string() << '\n';
}

void cmd_rank_report(const ResolvedConfig& cfg, std::ostream& log, std::ostream&) {
    const auto specs = split_list(cfg.str("models"));
    require(!specs.empty(), ErrorKind::Config, "key 'models': empty model list");
    require(cfg.size("m") > 0, ErrorKind::Config, "key 'm': need at least one point");
    require(cfg.number("rel_tol") < 1.0, ErrorKind::Config, "key 'rel_tol' must lie in (0, 1)");
    const bool from_data = cfg.str("points") == "data";
    const bool need_data = from_data || std::find(specs.begin(), specs.end(), "oracle") != specs.end();
    for (const auto& s : specs) check_model_spec(s, cfg);
    if (need_data) check_inputs(cfg);
    ensure_out_dir(cfg);

    std::optional<Prepared> p;
    if (need_data) p = prepare_data(cfg);
    const std::size_t m_points = cfg.size("m");

    const fs::path csv = out_path(cfg, "report");
    std::ofstream out(csv, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + csv.string());
    out << "model,point,rank\n";
    nlohmann::ordered_json summary = nlohmann::ordered_json::array();
    for (const auto& spec : specs) {
        const LoadedModel m = load_model(spec, cfg);
        SeededRng rng(cfg.seed("seed"));
        geometry::MapPtr map;
        Matrix points;
        if (m.kind == "oracle") {
            map = p->oracle->chart_map;
        } else if (m.vae) {
            map = models::decoder_map(*m.vae);
        } else {
            map = models::decoder_map(*m.dis);
        }
        const std::size_t d = map->in_dim();
        if (from_data || m.kind == "oracle") {
            const auto& ds = eval_split(*p, cfg);
            check_input_width(m, ds);
            std::vector<std::size_t> order(ds.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            rng.shuffle(order);
            order.resize(std::min(m_points, order.size()));
            const Matrix x = numerics::gather_rows(ds.samples, order);
            if (m.kind == "oracle") points = numerics::gather_rows(*ds.latent, order);
            else if (m.vae) points = models::encode(*m.vae, x);
            else points = models::encode(*m.dis, x);
        } else {
            points = Matrix(m_points, d);
            for (double& v : points.data()) v = rng.normal();
        }
        const auto rep = geometry::jacobian_rank_report(*map, points, cfg.number("rel_tol"));
        for (std::size_t i = 0; i < rep.ranks.size(); ++i) out << m.id << ',' << i << ',' << rep.ranks[i] << '\n';
        out << m.id << ",min," << rep.min << '\n';
        out << m.id << ",median," << rep.median << '\n';
        out << m.id << ",max," << rep.max << '\n';
        summary.push_back({{"model", m.id}, {"latent_dim", d}, {"min", rep.min}, {"median", rep.median}, {"max", rep.max}});
        log << m.id << ": latent dim " << d << ", jacobian rank min " << rep.min << ", median " << rep.median
            << ", max " << rep.max << '\n';
    }
    out.close();
    fs::path echo = csv;
    echo.replace_extension(".json");
    nlohmann::ordered_json extra;
    extra["summary"] = summary;
    write_echo("rank-report", cfg, echo, extra);
    log << "wrote " << csv.string() << '\n';
}

void cmd_geodesic(const ResolvedConfig& cfg, std::ostream& log, std::ostream& warn) {
    check_model_spec(cfg.str("model"), cfg);
    check_inputs(cfg);
    parse_index(cfg, "index_a");
    parse_index(cfg, "index_b");
    const bool explicit_ab = !cfg.str("a").empty() || !cfg.str("b").empty();
    Vector a_in, b_in;
    if (explicit_ab) {
        a_in = parse_vector("a", cfg.str("a"));
        b_in = parse_vector("b", cfg.str("b"));
        require(!a_in.empty() && a_in.size() == b_in.size(), ErrorKind::Config,
                "keys 'a' and 'b' must both be given with equal lengths");
    }
    ensure_out_dir(cfg);

    const Prepared p = prepare_data(cfg);
    const auto& ds = eval_split(p, cfg);
    const LoadedModel m = load_model(cfg.str("model"), cfg);
    check_input_width(m, ds);
    const auto [ia, ib] = choose_pair(cfg, ds);
    PairView v = pair_view(m, p, ds, ia, ib);
    if (explicit_ab) {
        require(a_in.size() == v.map->in_dim(), ErrorKind::Config,
                "keys 'a'/'b' need " + std::to_string(v.map->in_dim()) + " coordinates");
        v.a = a_in;
        v.b = b_in;
    }
    const auto curve = geometry::geodesic(*v.map, v.a, v.b, geodesic_options(cfg));
    if (!curve.converged)
        warn << "warning: geodesic did not converge within " << cfg.size("max_iters") << " iterations\n";
    const double chord = numerics::distance(curve.decoded.row(0), curve.decoded.row(curve.decoded.rows() - 1));
    const double straight = geometry::curve_energy(*v.map, [&] {
                                Matrix line(curve.points.rows(), curve.points.cols());
                                const double k = static_cast<double>(line.rows() - 1);
                                for (std::size_t i = 0; i < line.rows(); ++i)
                                    for (std::size_t c = 0; c < line.cols(); ++c)
                                        line(i, c) = v.a[c] + static_cast<double>(i) / k * (v.b[c] - v.a[c]);
                                return line;
                            }()).length;

    const fs::path csv = out_path(cfg, "curve");
    std::ofstream out(csv, std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + csv.string());
    out << "i";
    for (std::size_t c = 0; c < curve.points.cols(); ++c) out << ",z" << c;
    out << '\n';
    for (std::size_t i = 0; i < curve.points.rows(); ++i) {
        out << i;
        write_matrix_rows(out, curve.points.row(i));
        out << '\n';
    }
    nlohmann::ordered_json extra;
    extra["distance"] = curve.length;
    extra["energy"] = curve.energy;
    extra["initial_energy"] = curve.initial_energy;
    extra["straight_length"] = straight;
    extra["chord"] = chord;
    extra["iterations"] = curve.iterations;
    extra["converged"] = curve.converged;
    if (!explicit_ab) {
        extra["index_a"] = ia;
        extra["index_b"] = ib;
    }
    fs::path echo = csv;
    echo.replace_extension(".json");
    write_echo("geodesic", cfg, echo, extra);
    log << "riemannian distance " << fmt(curve.length) << " (straight latent path " << fmt(straight) << ", chord "
        << fmt(chord) << ", " << curve.iterations << " iterations" << (curve.converged ? "" : ", not converged")
        << ")\n";
    log << "wrote " << csv.string() << '\n';
}

void cmd_data(const ResolvedConfig& cfg, std::ostream& log, std::ostream&) {
    const std::string action = cfg.str("action");
    if (action == "generate") {
        require(is_synthetic(cfg), ErrorKind::Config, "data action=generate needs a synthetic dataset kind");
        check_inputs(cfg);
        ensure_out_dir(cfg);
        const Prepared p = prepare_data(cfg);
        const fs::path csv = out_path(cfg, "output");
        data::write_csv(p.split.first, csv);
        fs::path echo = csv;
        echo.replace_extension(".json");
        write_echo("data", cfg, echo);
        log << "wrote " << p.split.first.size() << " samples to " << csv.string() << '\n';
    } else if (action == "fetch") {
        const fs::path src = cfg.str("source");
        require(!src.empty(), ErrorKind::Config, "data action=fetch needs key 'source' (a local CSV)");
        require(fs::exists(src), ErrorKind::Io, "source not found: " + src.string());
        ensure_out_dir(cfg);
        std::ifstream in(src);
        require(static_cast<bool>(in), ErrorKind::Io, "cannot read " + src.string());
        data::IdxTensor images, labels;
        labels.dims = {0};
        std::string line;
        std::size_t width = 0, count = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cells = split_list(line);
            require(cells.size() >= 2, ErrorKind::Parse, "row " + std::to_string(count + 1) + " has no pixels");
            if (width == 0) width = cells.size() - 1;
            require(cells.size() - 1 == width, ErrorKind::Parse, "row " + std::to_string(count + 1) + " has a different width");
            for (std::size_t i = 0; i < cells.size(); ++i) {
                std::size_t used = 0;
                int v = -1;
                try {
                    v = std::stoi(cells[i], &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                require(used == cells[i].size() && v >= 0 && v <= 255, ErrorKind::Parse,
                        "row " + std::to_string(count + 1) + ": '" + cells[i] + "' is not a byte");
                (i + 1 < cells.size() ? images.payload : labels.payload).push_back(static_cast<std::uint8_t>(v));
            }
            ++count;
        }
        require(count > 0, ErrorKind::Parse, "source holds no rows");
        const auto side = static_cast<std::uint32_t>(std::llround(std::sqrt(static_cast<double>(width))));
        images.dims = side * side == width ? std::vector<std::uint32_t>{static_cast<std::uint32_t>(count), side, side}
                                           : std::vector<std::uint32_t>{static_cast<std::uint32_t>(count),
                                                                        static_cast<std::uint32_t>(width)};
        labels.dims = {static_cast<std::uint32_t>(count)};
        const fs::path out_dir = cfg.path("out_dir");
        const fs::path img = out_dir / (cfg.str("prefix") + "-images-idx3-ubyte");
        const fs::path lab = out_dir / (cfg.str("prefix") + "-labels-idx1-ubyte");
        data::write_idx(images, img);
        data::write_idx(labels, lab);
        log << "imported " << count << " samples into " << img.string() << " and " << lab.string() << '\n';
    } else {
        check_inputs(cfg);
        ensure_out_dir(cfg);
        const Prepared p = prepare_data(cfg);
        const fs::path train = cfg.path("out_dir") / "train.csv";
        const fs::path test = cfg.path("out_dir") / "test.csv";
        data::write_csv(p.split.first, train);
        data::write_csv(p.split.second, test);
        write_echo("data", cfg, cfg.path("out_dir") / "split.json");
        log << "wrote " << p.split.first.size() << " training and " << p.split.second.size() << " test samples\n";
    }
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"train",     "metrics",  "interpolate", "synthesize",
                                                   "rank-report", "geodesic", "data"};
    return names;
}

const std::vector<KeySpec>& schema(const std::string& command) {
    const auto& s = schemas();
    const auto it = s.find(command);
    require(it != s.end(), ErrorKind::Config, "unknown command '" + command + "'");
    return it->second;
}

std::string help(const std::string& command) { return config::describe(schema(command)); }

void run(const std::string& command, const config::RunConfig& raw, std::ostream& log, std::ostream& warn) {
    const ResolvedConfig cfg(schema(command), raw);
    if (command == "train") cmd_train(cfg, log, warn);
    else if (command == "metrics") cmd_metrics(cfg, log, warn);
    else if (command == "interpolate") cmd_interpolate(cfg, log, warn);
    else if (command == "synthesize") cmd_synthesize(cfg, log, warn);
    else if (command == "rank-report") cmd_rank_report(cfg, log, warn);
    else if (command == "geodesic") cmd_geodesic(cfg, log, warn);
    else cmd_data(cfg, log, warn);
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config:
        case ErrorKind::InvalidInput:
        case ErrorKind::Shape:
        case ErrorKind::SingleClass:
        case ErrorKind::InsufficientNeighbors: return 2;
        case ErrorKind::Io:
        case ErrorKind::Parse:
        case ErrorKind::VersionMismatch:
        case ErrorKind::MissingCheckpoint: return 3;
        case ErrorKind::Numerical:
        case ErrorKind::DisconnectedGraph:
        case ErrorKind::ZeroVariance: return 4;
    }
    return 4;
}

}  // namespace latentgeo::commands
