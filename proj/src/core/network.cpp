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

#include "latentgeo/network.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "json.hpp"

namespace latentgeo::network {

using numerics::SeededRng;

Activation Activation::parse(const std::string& name) {
    if (name == "elu") return elu();
    if (name == "relu") return relu();
    if (name == "tanh") return tanh();
    if (name == "identity" || name == "linear") return identity();
    fail(ErrorKind::Config, "unknown activation '" + name + "' (expected elu, relu, tanh or identity)");
}

double Activation::apply(double x) const noexcept {
    switch (kind) {
        case ActivationKind::Elu: return x > 0.0 ? x : alpha * std::expm1(x);
        case ActivationKind::Relu: return x > 0.0 ? x : 0.0;
        case ActivationKind::Tanh: return std::tanh(x);
        case ActivationKind::Identity: return x;
    }
    return x;
}

double Activation::derivative(double pre, double post) const noexcept {
    switch (kind) {
        case ActivationKind::Elu: return pre > 0.0 ? 1.0 : post + alpha;
        case ActivationKind::Relu: return pre > 0.0 ? 1.0 : 0.0;
        case ActivationKind::Tanh: return 1.0 - post * post;
        case ActivationKind::Identity: return 1.0;
    }
    return 1.0;
}

std::string Activation::name() const {
    switch (kind) {
        case ActivationKind::Elu: return "elu";
        case ActivationKind::Relu: return "relu";
        case ActivationKind::Tanh: return "tanh";
        case ActivationKind::Identity: return "identity";
    }
    return "identity";
}

FeedForwardNet::FeedForwardNet(std::vector<Layer> layers) : layers_(std::move(layers)) {
    require(!layers_.empty(), ErrorKind::Shape, "network needs at least one layer");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const Layer& l = layers_[i];
        require(l.bias.size() == l.weight.rows(), ErrorKind::Shape,
                "layer " + std::to_string(i) + ": bias length does not match weight rows");
        if (i > 0)
            require(layers_[i - 1].weight.rows() == l.weight.cols(), ErrorKind::Shape,
                    "layer " + std::to_string(i) + ": input width " + std::to_string(l.weight.cols()) +
                        " does not chain with previous output " + std::to_string(layers_[i - 1].weight.rows()));
    }
}

FeedForwardNet FeedForwardNet::random(std::span<const std::size_t> widths, std::span<const Activation> acts,
                                      SeededRng& rng) {
    require(widths.size() >= 2 && acts.size() == widths.size() - 1, ErrorKind::Config,
            "network spec needs n+1 widths for n activations");
    std::vector<Layer> layers;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        const std::size_t in = widths[i], out = widths[i + 1];
        require(in > 0 && out > 0, ErrorKind::Config, "layer widths must be positive");
        Layer l{Matrix(out, in), Vector(out, 0.0), acts[i]};
        const double limit = std::sqrt(6.0 / static_cast<double>(in));
        for (double& w : l.weight.data()) w = rng.uniform(-limit, limit);
        layers.push_back(std::move(l));
    }
    return FeedForwardNet(std::move(layers));
}

std::size_t FeedForwardNet::in_dim() const noexcept { return layers_.empty() ? 0 : layers_.front().weight.cols(); }

std::size_t FeedForwardNet::out_dim() const noexcept { return layers_.empty() ? 0 : layers_.back().weight.rows(); }

Vector FeedForwardNet::forward(std::span<const double> z) const {
    require(z.size() == in_dim(), ErrorKind::Shape,
            "forward: input length " + std::to_string(z.size()) + " != " + std::to_string(in_dim()));
    Vector h(z.begin(), z.end());
    for (const Layer& l : layers_) {
        Vector y = numerics::matvec(l.weight, h);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = l.act.apply(y[i] + l.bias[i]);
        h = std::move(y);
    }
    return h;
}

Matrix FeedForwardNet::forward_batch(const Matrix& x) const {
    require(x.cols() == in_dim(), ErrorKind::Shape,
            "forward_batch: input width " + std::to_string(x.cols()) + " != " + std::to_string(in_dim()));
    Matrix h = x;
    for (const Layer& l : layers_) {
        Matrix y = numerics::matmul_bt(h, l.weight);
        for (std::size_t r = 0; r < y.rows(); ++r) {
            auto row = y.row(r);
            for (std::size_t i = 0; i < row.size(); ++i) row[i] = l.act.apply(row[i] + l.bias[i]);
        }
        h = std::move(y);
    }
    return h;
}

Matrix FeedForwardNet::jacobian(std::span<const double> z) const {
    require(z.size() == in_dim(), ErrorKind::Shape,
            "jacobian: input length " + std::to_string(z.size()) + " != " + std::to_string(in_dim()));
    // forward-mode: carry d h / d z (width x in_dim) through the layers
    Vector h(z.begin(), z.end());
    Matrix dh = Matrix::identity(in_dim());
    for (const Layer& l : layers_) {
        Vector pre = numerics::matvec(l.weight, h);
        Matrix next = numerics::matmul(l.weight, dh);
        for (std::size_t i = 0; i < pre.size(); ++i) {
            pre[i] += l.bias[i];
            const double post = l.act.apply(pre[i]);
            const double g = l.act.derivative(pre[i], post);
            for (double& v : next.row(i)) v *= g;
            pre[i] = post;
        }
        h = std::move(pre);
        dh = std::move(next);
    }
    return dh;
}

Vector FeedForwardNet::vjp(std::span<const double> z, std::span<const double> v) const {
    require(v.size() == out_dim(), ErrorKind::Shape, "vjp: adjoint length mismatch");
    Matrix x(1, z.size(), Vector(z.begin(), z.end()));
    ForwardTrace trace = forward_trace(*this, x);
    Matrix adj(1, v.size(), Vector(v.begin(), v.end()));
    // walk back without the parameter gradients
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const Layer& l = layers_[li];
        const auto pre = trace.pre[li].row(0);
        const auto post = li + 1 < layers_.size() ? trace.inputs[li + 1].row(0) : trace.output.row(0);
        for (std::size_t i = 0; i < pre.size(); ++i) adj(0, i) *= l.act.derivative(pre[i], post[i]);
        adj = numerics::matmul(adj, l.weight);
    }
    return adj.row_vector(0);
}

std::size_t FeedForwardNet::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const Layer& l : layers_) n += l.weight.size() + l.bias.size();
    return n;
}

Vector FeedForwardNet::flat_parameters() const {
    Vector p;
    p.reserve(parameter_count());
    for (const Layer& l : layers_) {
        p.insert(p.end(), l.weight.data().begin(), l.weight.data().end());
        p.insert(p.end(), l.bias.begin(), l.bias.end());
    }
    return p;
}

void FeedForwardNet::set_flat_parameters(std::span<const double> p) {
    require(p.size() == parameter_count(), ErrorKind::Shape, "parameter vector length mismatch");
    auto it = p.begin();
    for (Layer& l : layers_) {
        std::copy_n(it, l.weight.size(), l.weight.data().begin());
        it += static_cast<std::ptrdiff_t>(l.weight.size());
        std::copy_n(it, l.bias.size(), l.bias.begin());
        it += static_cast<std::ptrdiff_t>(l.bias.size());
    }
}

bool FeedForwardNet::all_finite() const noexcept {
    for (const Layer& l : layers_) {
        if (!l.weight.all_finite()) return false;
        for (double b : l.bias)
            if (!std::isfinite(b)) return false;
    }
    return true;
}

ForwardTrace forward_trace(const FeedForwardNet& net, const Matrix& x) {
    require(x.cols() == net.in_dim(), ErrorKind::Shape,
            "forward_trace: input width " + std::to_string(x.cols()) + " != " + std::to_string(net.in_dim()));
    ForwardTrace t;
    t.inputs.reserve(net.num_layers());
    t.pre.reserve(net.num_layers());
    Matrix h = x;
    for (const Layer& l : net.layers()) {
        Matrix pre = numerics::matmul_bt(h, l.weight);
        Matrix post(pre.rows(), pre.cols());
        for (std::size_t r = 0; r < pre.rows(); ++r) {
            auto pr = pre.row(r);
            auto po = post.row(r);
            for (std::size_t i = 0; i < pr.size(); ++i) {
                pr[i] += l.bias[i];
                po[i] = l.act.apply(pr[i]);
            }
        }
        t.inputs.push_back(std::move(h));
        t.pre.push_back(std::move(pre));
        h = std::move(post);
    }
    t.output = std::move(h);
    return t;
}

Gradients backprop(const FeedForwardNet& net, const ForwardTrace& trace, const Matrix& output_adjoint,
                   bool want_input) {
    const auto& layers = net.layers();
    require(output_adjoint.rows() == trace.output.rows() && output_adjoint.cols() == net.out_dim(),
            ErrorKind::Shape, "backprop: adjoint shape does not match the traced output");
    Gradients g;
    g.params.assign(net.parameter_count(), 0.0);

    std::vector<std::size_t> offsets(layers.size());
    std::size_t off = 0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        offsets[i] = off;
        off += layers[i].weight.size() + layers[i].bias.size();
    }

    Matrix adj = output_adjoint;
    for (std::size_t li = layers.size(); li-- > 0;) {
        const Layer& l = layers[li];
        const Matrix& pre = trace.pre[li];
        const Matrix& post = li + 1 < layers.size() ? trace.inputs[li + 1] : trace.output;
        for (std::size_t r = 0; r < adj.rows(); ++r) {
            auto a = adj.row(r);
            auto p = pre.row(r);
            auto q = post.row(r);
            for (std::size_t i = 0; i < a.size(); ++i) a[i] *= l.act.derivative(p[i], q[i]);
        }
        Matrix dw = numerics::matmul_at(adj, trace.inputs[li]);
        std::copy(dw.data().begin(), dw.data().end(), g.params.begin() + static_cast<std::ptrdiff_t>(offsets[li]));
        double* db = g.params.data() + offsets[li] + dw.size();
        for (std::size_t r = 0; r < adj.rows(); ++r) {
            auto a = adj.row(r);
            for (std::size_t i = 0; i < a.size(); ++i) db[i] += a[i];
        }
        if (li == 0 && !want_input) return g;
        adj = numerics::matmul(adj, l.weight);
    }
    g.input = std::move(adj);
    return g;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, const AdamConfig& cfg) {
    require(params.size() == grads.size(), ErrorKind::Shape, "adam: gradient length mismatch");
    if (state.m.size() != params.size()) {
        state.m.assign(params.size(), 0.0);
        state.v.assign(params.size(), 0.0);
        state.step = 0;
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
}

void adam_step(FeedForwardNet& net, std::span<const double> grads, AdamState& state, const AdamConfig& cfg) {
    Vector p = net.flat_parameters();
    adam_step(p, grads, state, cfg);
    net.set_flat_parameters(p);
}

const FeedForwardNet& Checkpoint::net(const std::string& name) const {
    for (const auto& [n, net] : nets)
        if (n == name) return net;
    fail(ErrorKind::Parse, "checkpoint has no net named '" + name + "'");
}

bool Checkpoint::has_net(const std::string& name) const {
    return std::any_of(nets.begin(), nets.end(), [&](const auto& p) { return p.first == name; });
}

namespace {

constexpr char kMagic[4] = {'L', 'G', 'C', 'K'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const std::string& in, std::size_t pos, int nbytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < nbytes; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)])) << (8 * i);
    return v;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    nlohmann::ordered_json header;
    header["kind"] = ckpt.kind;
    header["seed"] = ckpt.seed;
    header["config"] = ckpt.config;
    header["nets"] = nlohmann::ordered_json::array();
    for (const auto& [name, net] : ckpt.nets) {
        nlohmann::ordered_json n;
        n["name"] = name;
        n["layers"] = nlohmann::ordered_json::array();
        for (const Layer& l : net.layers())
            n["layers"].push_back({{"in", l.weight.cols()},
                                   {"out", l.weight.rows()},
                                   {"activation", l.act.name()},
                                   {"alpha", l.act.alpha}});
        header["nets"].push_back(std::move(n));
    }
    const std::string text = header.dump();

    std::string bytes(kMagic, 4);
    put_u32(bytes, ckpt.format_version);
    put_u64(bytes, text.size());
    bytes += text;
    for (const auto& entry : ckpt.nets)
        for (double v : entry.second.flat_parameters()) put_u64(bytes, std::bit_cast<std::uint64_t>(v));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot open checkpoint for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorKind::Io, "failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open checkpoint: " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    require(bytes.size() >= 16 && std::equal(kMagic, kMagic + 4, bytes.begin()), ErrorKind::Parse,
            "not a checkpoint file (bad magic or too short): " + path.string());
    Checkpoint ckpt;
    ckpt.format_version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
    require(ckpt.format_version == kCheckpointVersion, ErrorKind::VersionMismatch,
            "checkpoint format_version " + std::to_string(ckpt.format_version) + " is not supported (expected " +
                std::to_string(kCheckpointVersion) + ")");
    const std::uint64_t header_len = get_le(bytes, 8, 8);
    require(header_len <= bytes.size() - 16, ErrorKind::Parse, "checkpoint header truncated");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(header_len));
        ckpt.kind = header.at("kind").get<std::string>();
        ckpt.seed = header.at("seed").get<std::uint64_t>();
        ckpt.config = header.at("config").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, std::string("checkpoint header is malformed: ") + e.what());
    }

    std::size_t pos = 16 + header_len;
    try {
        for (const auto& n : header.at("nets")) {
            std::vector<Layer> layers;
            for (const auto& ld : n.at("layers")) {
                const auto in_dim = ld.at("in").get<std::size_t>();
                const auto out_dim = ld.at("out").get<std::size_t>();
                Activation act = Activation::parse(ld.at("activation").get<std::string>());
                act.alpha = ld.at("alpha").get<double>();
                const std::size_t count = in_dim * out_dim + out_dim;
                require(pos + 8 * count <= bytes.size(), ErrorKind::Parse,
                        "checkpoint payload truncated: need " + std::to_string(pos + 8 * count) + " bytes, file has " +
                            std::to_string(bytes.size()));
                Layer l{Matrix(out_dim, in_dim), Vector(out_dim), act};
                for (double& w : l.weight.data()) {
                    w = std::bit_cast<double>(get_le(bytes, pos, 8));
                    pos += 8;
                }
                for (double& b : l.bias) {
                    b = std::bit_cast<double>(get_le(bytes, pos, 8));
                    pos += 8;
                }
                layers.push_back(std::move(l));
            }
            ckpt.nets.emplace_back(n.at("name").get<std::string>(), FeedForwardNet(std::move(layers)));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Parse, std::string("checkpoint net descriptor is malformed: ") + e.what());
    }
    require(pos == bytes.size(), ErrorKind::Parse,
            "checkpoint has " + std::to_string(bytes.size() - pos) + " trailing bytes");
    return ckpt;
}

}  // namespace latentgeo::network
