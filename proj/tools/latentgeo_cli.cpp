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

// latentgeo command-line front end. Everything goes through the C API.

#include "latentgeo/latentgeo.h"

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace {

void print_line(const char* line, void* stream) {
    std::fputs(line, static_cast<FILE*>(stream));
    std::fputc('\n', static_cast<FILE*>(stream));
}

void print_warning(const char* line, void*) { print_line(line, stderr); }

int report(lg_status s) {
    std::fprintf(stderr, "error (%s): %s\n", lg_status_name(s), lg_last_error());
    return lg_exit_code(s);
}

struct Invocation {
    std::string config_file;
    std::vector<std::string> overrides;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riemannian geometry of generative-model latent spaces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lg_version());

    std::vector<Invocation> inv(lg_command_count());
    for (std::size_t i = 0; i < inv.size(); ++i) {
        const char* name = lg_command_name(i);
        const char* keys = "";
        lg_command_help(name, &keys);
        auto* sub = app.add_subcommand(name, std::string("keys:\n") + keys);
        sub->add_option("-c,--config", inv[i].config_file, "config file of key = value lines");
        sub->add_option("-s,--set,overrides", inv[i].overrides, "key=value overrides (win over the file)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (std::size_t i = 0; i < inv.size(); ++i) {
        const char* name = lg_command_name(i);
        if (!app.got_subcommand(name)) continue;
        lg_config* cfg = nullptr;
        lg_status s = lg_config_create(&cfg);
        if (s != LG_OK) return report(s);
        if (!inv[i].config_file.empty()) s = lg_config_load_file(cfg, inv[i].config_file.c_str());
        for (const std::string& kv : inv[i].overrides) {
            if (s != LG_OK) break;
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) {
                std::fprintf(stderr, "error (config): override '%s' is not of the form key=value\n", kv.c_str());
                lg_config_destroy(cfg);
                return 2;
            }
            s = lg_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        }
        if (s == LG_OK) s = lg_run(name, cfg, print_line, print_warning, stdout);
        lg_config_destroy(cfg);
        return s == LG_OK ? 0 : report(s);
    }
    return 2;
}
