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

#include "latentgeo/latentgeo.h"

#include "latentgeo/commands.hpp"
#include "latentgeo/error.hpp"
#include "latentgeo/geometry.hpp"
#include "latentgeo/models.hpp"

#include <new>
#include <optional>
#include <sstream>
#include <string>

struct lg_config {
    latentgeo::config::RunConfig raw;
};

struct lg_model {
    std::string kind;
    std::optional<latentgeo::models::VaeModel> vae;
    std::optional<latentgeo::models::DisentangledModel> dis;
    latentgeo::geometry::MapPtr decoder;
};

namespace {

using latentgeo::ErrorKind;

thread_local std::string g_last_error;

lg_status status_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return LG_ERR_INVALID_INPUT;
        case ErrorKind::Shape: return LG_ERR_SHAPE;
        case ErrorKind::Io: return LG_ERR_IO;
        case ErrorKind::Parse: return LG_ERR_PARSE;
        case ErrorKind::VersionMismatch: return LG_ERR_VERSION_MISMATCH;
        case ErrorKind::Config: return LG_ERR_CONFIG;
        case ErrorKind::MissingCheckpoint: return LG_ERR_MISSING_CHECKPOINT;
        case ErrorKind::DisconnectedGraph: return LG_ERR_DISCONNECTED_GRAPH;
        case ErrorKind::InsufficientNeighbors: return LG_ERR_INSUFFICIENT_NEIGHBORS;
        case ErrorKind::SingleClass: return LG_ERR_SINGLE_CLASS;
        case ErrorKind::ZeroVariance: return LG_ERR_ZERO_VARIANCE;
        case ErrorKind::Numerical: return LG_ERR_NUMERICAL;
    }
    return LG_ERR_INTERNAL;
}

lg_status set_error(lg_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <class F>
lg_status guarded(F&& f) {
    try {
        f();
        return LG_OK;
    } catch (const latentgeo::Error& e) {
        return set_error(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(LG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(LG_ERR_INTERNAL, e.what());
    }
}

#define LG_REQUIRE_ARG(p) \
    if (!(p)) return set_error(LG_ERR_NULL_ARGUMENT, "argument '" #p "' is null")

// Buffers text and forwards it line by line.
class LineSink : public std::streambuf {
public:
    LineSink(lg_line_callback cb, void* user) : cb_(cb), user_(user) {}
    ~LineSink() override {
        if (!pending_.empty()) emit();
    }

protected:
    int_type overflow(int_type ch) override {
        if (ch == traits_type::eof()) return traits_type::not_eof(ch);
        if (ch == '\n') emit();
        else pending_.push_back(static_cast<char>(ch));
        return ch;
    }

private:
    void emit() {
        if (cb_) cb_(pending_.c_str(), user_);
        pending_.clear();
    }

    lg_line_callback cb_;
    void* user_;
    std::string pending_;
};

}  // namespace

extern "C" {

const char* lg_version(void) { return "1.0.0"; }

const char* lg_last_error(void) { return g_last_error.c_str(); }

const char* lg_status_name(lg_status status) {
    switch (status) {
        case LG_OK: return "ok";
        case LG_ERR_INVALID_INPUT: return "invalid_input";
        case LG_ERR_SHAPE: return "shape";
        case LG_ERR_IO: return "io";
        case LG_ERR_PARSE: return "parse";
        case LG_ERR_VERSION_MISMATCH: return "version_mismatch";
        case LG_ERR_CONFIG: return "config";
        case LG_ERR_MISSING_CHECKPOINT: return "missing_checkpoint";
        case LG_ERR_DISCONNECTED_GRAPH: return "disconnected_graph";
        case LG_ERR_INSUFFICIENT_NEIGHBORS: return "insufficient_neighbors";
        case LG_ERR_SINGLE_CLASS: return "single_class";
        case LG_ERR_ZERO_VARIANCE: return "zero_variance";
        case LG_ERR_NUMERICAL: return "numerical";
        case LG_ERR_NULL_ARGUMENT: return "null_argument";
        case LG_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

int lg_exit_code(lg_status status) {
    switch (status) {
        case LG_OK: return 0;
        case LG_ERR_INVALID_INPUT: return latentgeo::commands::exit_code(ErrorKind::InvalidInput);
        case LG_ERR_SHAPE: return latentgeo::commands::exit_code(ErrorKind::Shape);
        case LG_ERR_IO: return latentgeo::commands::exit_code(ErrorKind::Io);
        case LG_ERR_PARSE: return latentgeo::commands::exit_code(ErrorKind::Parse);
        case LG_ERR_VERSION_MISMATCH: return latentgeo::commands::exit_code(ErrorKind::VersionMismatch);
        case LG_ERR_CONFIG: return latentgeo::commands::exit_code(ErrorKind::Config);
        case LG_ERR_MISSING_CHECKPOINT: return latentgeo::commands::exit_code(ErrorKind::MissingCheckpoint);
        case LG_ERR_DISCONNECTED_GRAPH: return latentgeo::commands::exit_code(ErrorKind::DisconnectedGraph);
        case LG_ERR_INSUFFICIENT_NEIGHBORS: return latentgeo::commands::exit_code(ErrorKind::InsufficientNeighbors);
        case LG_ERR_SINGLE_CLASS: return latentgeo::commands::exit_code(ErrorKind::SingleClass);
        case LG_ERR_ZERO_VARIANCE: return latentgeo::commands::exit_code(ErrorKind::ZeroVariance);
        case LG_ERR_NUMERICAL: return latentgeo::commands::exit_code(ErrorKind::Numerical);
        case LG_ERR_NULL_ARGUMENT: return 2;
        case LG_ERR_INTERNAL: return 1;
    }
    return 1;
}

lg_status lg_config_create(lg_config** out) {
    LG_REQUIRE_ARG(out);
    return guarded([&] { *out = new lg_config(); });
}

void lg_config_destroy(lg_config* cfg) { delete cfg; }

lg_status lg_config_load_file(lg_config* cfg, const char* path) {
    LG_REQUIRE_ARG(cfg);
    LG_REQUIRE_ARG(path);
    return guarded([&] { cfg->raw.load_file(path); });
}

lg_status lg_config_set(lg_config* cfg, const char* key, const char* value) {
    LG_REQUIRE_ARG(cfg);
    LG_REQUIRE_ARG(key);
    LG_REQUIRE_ARG(value);
    return guarded([&] { cfg->raw.set_override(key, value); });
}

size_t lg_command_count(void) { return latentgeo::commands::command_names().size(); }

const char* lg_command_name(size_t index) {
    const auto& names = latentgeo::commands::command_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

lg_status lg_command_help(const char* command, const char** out) {
    LG_REQUIRE_ARG(command);
    LG_REQUIRE_ARG(out);
    thread_local std::string text;
    return guarded([&] {
        text = latentgeo::commands::help(command);
        *out = text.c_str();
    });
}

lg_status lg_run(const char* command, const lg_config* cfg, lg_line_callback log, lg_line_callback warn, void* user) {
    LG_REQUIRE_ARG(command);
    LG_REQUIRE_ARG(cfg);
    return guarded([&] {
        LineSink log_buf(log, user), warn_buf(warn, user);
        std::ostream log_os(&log_buf), warn_os(&warn_buf);
        latentgeo::commands::run(command, cfg->raw, log_os, warn_os);
    });
}

lg_status lg_model_load(const char* path, lg_model** out) {
    LG_REQUIRE_ARG(path);
    LG_REQUIRE_ARG(out);
    *out = nullptr;
    return guarded([&] {
        latentgeo::require(std::filesystem::exists(path), ErrorKind::MissingCheckpoint,
                           std::string("checkpoint not found: ") + path);
        const auto ckpt = latentgeo::network::load_checkpoint(path);
        auto m = std::make_unique<lg_model>();
        m->kind = ckpt.kind;
        if (ckpt.kind == "vae") {
            m->vae = latentgeo::models::vae_from_checkpoint(ckpt);
            m->decoder = latentgeo::models::decoder_map(*m->vae);
        } else if (ckpt.kind == "disentangled") {
            m->dis = latentgeo::models::disentangled_from_checkpoint(ckpt);
            m->decoder = latentgeo::models::decoder_map(*m->dis);
        } else {
            latentgeo::fail(ErrorKind::Parse, "unknown model kind '" + ckpt.kind + "'");
        }
        *out = m.release();
    });
}

void lg_model_destroy(lg_model* model) { delete model; }

const char* lg_model_kind(const lg_model* model) { return model ? model->kind.c_str() : ""; }

size_t lg_model_input_dim(const lg_model* model) { return model ? model->decoder->out_dim() : 0; }

size_t lg_model_latent_dim(const lg_model* model) { return model ? model->decoder->in_dim() : 0; }

lg_status lg_model_encode(const lg_model* model, const double* x, size_t n, double* latent_out) {
    LG_REQUIRE_ARG(model);
    LG_REQUIRE_ARG(x);
    LG_REQUIRE_ARG(latent_out);
    return guarded([&] {
        const std::size_t in = model->decoder->out_dim();
        latentgeo::numerics::Matrix xm(n, in);
        std::copy(x, x + n * in, xm.data().begin());
        const auto codes = model->vae ? latentgeo::models::encode(*model->vae, xm)
                                      : latentgeo::models::encode(*model->dis, xm);
        std::copy(codes.data().begin(), codes.data().end(), latent_out);
    });
}

lg_status lg_model_decode(const lg_model* model, const double* latent, size_t n, double* x_out) {
    LG_REQUIRE_ARG(model);
    LG_REQUIRE_ARG(latent);
    LG_REQUIRE_ARG(x_out);
    return guarded([&] {
        const std::size_t d = model->decoder->in_dim();
        latentgeo::numerics::Matrix zm(n, d);
        std::copy(latent, latent + n * d, zm.data().begin());
        const auto x = model->decoder->value_batch(zm);
        std::copy(x.data().begin(), x.data().end(), x_out);
    });
}

lg_status lg_model_geodesic_distance(const lg_model* model, const double* a, const double* b, size_t segments,
                                     double* distance_out) {
    LG_REQUIRE_ARG(model);
    LG_REQUIRE_ARG(a);
    LG_REQUIRE_ARG(b);
    LG_REQUIRE_ARG(distance_out);
    return guarded([&] {
        const std::size_t d = model->decoder->in_dim();
        latentgeo::geometry::GeodesicOptions opts;
        if (segments > 0) opts.segments = segments;
        const auto r = latentgeo::geometry::riemannian_distance(*model->decoder, std::span(a, d), std::span(b, d), opts);
        *distance_out = r.value;
    });
}

}  // extern "C"
