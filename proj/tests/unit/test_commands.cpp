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
#include "latentgeo/error.hpp"

#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "json.hpp"

using namespace latentgeo;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "latentgeo_unit" / "commands";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::string run(const std::string& command, const std::map<std::string, std::string>& kv) {
    config::RunConfig raw;
    for (const auto& [k, v] : kv) raw.set_override(k, v);
    std::ostringstream log, warn;
    commands::run(command, raw, log, warn);
    return log.str();
}

ErrorKind failure(const std::string& command, const std::map<std::string, std::string>& kv) {
    try {
        run(command, kv);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("command '" << command << "' was expected to fail");
    return ErrorKind::InvalidInput;
}

// All regular files under a directory, keyed by name.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) out[e.path().filename().string()] = slurp(e.path());
    return out;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(LATENTGEO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("command table") {
    const auto& names = commands::command_names();
    CHECK(names.size() == 7);
    for (const auto& n : names) {
        CHECK_FALSE(commands::schema(n).empty());
        CHECK(commands::help(n).find("seed") != std::string::npos);
    }
    CHECK(failure("fly", {}) == ErrorKind::Config);
    CHECK(commands::exit_code(ErrorKind::Config) == 2);
    CHECK(commands::exit_code(ErrorKind::SingleClass) == 2);
    CHECK(commands::exit_code(ErrorKind::Io) == 3);
    CHECK(commands::exit_code(ErrorKind::MissingCheckpoint) == 3);
    CHECK(commands::exit_code(ErrorKind::DisconnectedGraph) == 4);
    CHECK(commands::exit_code(ErrorKind::Numerical) == 4);
}

TEST_CASE("pipeline on synthetic manifolds") {
    fs::remove_all(kRoot);
    const fs::path out = kRoot / "pipe";
    const std::string dir = out.string();
    const std::map<std::string, std::string> circle{{"dataset", "circle"}, {"n_points", "60"}, {"out_dir", dir}};
    const std::map<std::string, std::string> sphere{{"dataset", "sphere"}, {"n_points", "60"}, {"out_dir", dir}};
    auto with = [](std::map<std::string, std::string> base, std::map<std::string, std::string> extra) {
        for (auto& [k, v] : extra) base[k] = v;
        return base;
    };
    const auto all_commands = [&] {
        run("train", with(circle, {{"epochs", "2"}, {"encoder_hidden", "8"}, {"decoder_hidden", "8"},
                                   {"latent_dim", "1"}}));
        run("train", with(sphere, {{"model", "disentangled"}, {"epochs", "2"}, {"encoder_hidden", "8"},
                                   {"decoder_hidden", "8"}, {"ds", "2"}, {"dz", "2"}}));
        run("metrics", with(circle, {{"models", "oracle," + (out / "vae.lgck").string()}, {"n_pairs", "20"}}));
        run("interpolate", with(sphere, {{"model", "oracle"}, {"n_steps", "5"}}));
        run("synthesize", with(sphere, {{"model", (out / "disentangled.lgck").string()}, {"n_steps", "3"},
                                        {"n_rows", "2"}}));
        run("rank-report", with(sphere, {{"models", "oracle," + (out / "disentangled.lgck").string()},
                                         {"m", "6"}, {"points", "data"}}));
        run("geodesic", with(sphere, {{"model", "oracle"}, {"a", "0,0"}, {"b", "0,1.5"}}));
        run("data", with(sphere, {{"action", "generate"}}));
        run("data", with(sphere, {{"action", "split"}}));
    };
    all_commands();
    const auto first = snapshot(out);
    for (const char* f : {"vae.lgck", "vae_loss.csv", "disentangled.lgck", "metrics.csv", "metrics.json",
                          "interpolation.pgm", "interpolation.csv", "synthesis.pgm", "synthesis.csv",
                          "rank_report.csv", "geodesic.csv", "geodesic.json", "synthetic.csv", "train.csv",
                          "test.csv"})
        CHECK_MESSAGE(first.count(f) == 1, f);

    SUBCASE("outputs carry the expected content") {
        const auto g = nlohmann::json::parse(first.at("geodesic.json"));
        CHECK(std::abs(g["distance"].get<double>() - 1.5) < 0.02 * 1.5);
        CHECK(g["distance"].get<double>() >= g["chord"].get<double>());
        CHECK(first.at("metrics.csv").rfind("model,space,", 0) == 0);
        CHECK(first.at("interpolation.pgm").rfind("P5\n# latentgeo interpolate seed=0\n", 0) == 0);
        CHECK(first.at("rank_report.csv").find("oracle-sphere") != std::string::npos);
        CHECK(first.at("vae_loss.csv").rfind("epoch,loss\n", 0) == 0);
    }
    SUBCASE("re-running reproduces every byte") {
        all_commands();
        const auto second = snapshot(out);
        CHECK(second.size() == first.size());
        for (const auto& [name, bytes] : first) CHECK_MESSAGE(second.at(name) == bytes, name);
    }
    SUBCASE("a different seed changes the outputs") {
        run("interpolate", with(sphere, {{"model", "oracle"}, {"n_steps", "5"}, {"seed", "3"}}));
        CHECK(slurp(out / "interpolation.csv") != first.at("interpolation.csv"));
    }
}

TEST_CASE("command failures map to error kinds") {
    const std::string dir = (kRoot / "fail").string();
    CHECK(failure("train", {{"bogus", "1"}}) == ErrorKind::Config);
    CHECK(failure("train", {{"epochs", "zero"}}) == ErrorKind::Config);
    CHECK(failure("train", {{"mnist_images", "/nonexistent/images"}, {"out_dir", dir}}) == ErrorKind::Io);
    CHECK(failure("metrics", {{"models", "/nonexistent/m.lgck"}, {"dataset", "plane"}, {"n_points", "20"},
                              {"out_dir", dir}}) == ErrorKind::MissingCheckpoint);
    CHECK(failure("metrics", {{"models", "oracle"}, {"out_dir", dir}}) == ErrorKind::Config);
    CHECK(failure("geodesic", {{"model", "oracle"}, {"dataset", "plane"}, {"n_points", "20"}, {"a", "0,0,0"},
                               {"b", "1,1"}, {"out_dir", dir}}) == ErrorKind::Config);
    CHECK(failure("data", {{"action", "fetch"}, {"out_dir", dir}}) == ErrorKind::Config);
}

TEST_CASE("command line front end") {
    const std::string dir = (kRoot / "cli").string();
    CHECK(cli("--version") == 0);
    CHECK(cli("") == 2);
    CHECK(cli("teleport") == 2);
    CHECK(cli("geodesic model=oracle dataset=plane n_points=20 a=0,0 b=1,1 out_dir=" + dir) == 0);
    CHECK(fs::exists(fs::path(dir) / "geodesic.csv"));
    CHECK(cli("geodesic not_a_pair out_dir=" + dir) == 2);
    CHECK(cli("train unknown=1") == 2);
    CHECK(cli("metrics models=" + dir + "/absent.lgck dataset=plane n_points=20 out_dir=" + dir) == 3);
    CHECK(cli("train -c " + dir + "/absent.cfg") == 3);
    std::ofstream(fs::path(dir) / "run.cfg") << "dataset = plane\nn_points = 20\nmodel = oracle\na = 0,0\nb = 2,0\n";
    CHECK(cli("geodesic -c " + dir + "/run.cfg out_dir=" + dir) == 0);
    const auto j = nlohmann::json::parse(slurp(fs::path(dir) / "geodesic.json"));
    CHECK(j["distance"].get<double>() == doctest::Approx(2.0));
}

}  // TEST_SUITE
