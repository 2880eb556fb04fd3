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

#include "latentgeo/config.hpp"
#include "latentgeo/error.hpp"
#include "latentgeo/image.hpp"

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <iterator>

using namespace latentgeo;
using config::KeySpec;
using config::ValueKind;

namespace {

const std::filesystem::path kDir = std::filesystem::temp_directory_path() / "latentgeo_unit";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const std::vector<KeySpec>& schema() {
    static const std::vector<KeySpec> s{
        {"name", ValueKind::String, "x", ""},
        {"epochs", ValueKind::PositiveSize, "20", ""},
        {"offset", ValueKind::Size, "0", ""},
        {"seed", ValueKind::Seed, "0", ""},
        {"lr", ValueKind::PositiveDouble, "1e-3", ""},
        {"beta", ValueKind::Double, "1", ""},
        {"verbose", ValueKind::Bool, "false", ""},
        {"hidden", ValueKind::SizeList, "256", ""},
        {"out", ValueKind::Path, ".", ""},
        {"act", ValueKind::Choice, "elu", "", {"elu", "relu"}},
    };
    return s;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("PGM grids") {
    std::filesystem::create_directories(kDir);
    image::ImageGrid g(1, 2, 1, 2);
    g.set_cell(0, 0, std::vector<double>{0.0, 1.0});
    g.set_cell(0, 1, std::vector<double>{-0.5, 0.5});
    const std::vector<std::string> comments{"hello"};
    image::write_pgm_grid(g, kDir / "g.pgm", comments);
    const std::string want = std::string("P5\n# hello\n5 1\n255\n") + '\x00' + '\xff' + '\x80' + '\x00' + '\x80';
    CHECK(slurp(kDir / "g.pgm") == want);

    std::size_t h = 0, w = 0;
    const auto px = image::ImageGrid::from_rows(numerics::Matrix{{1, 1}, {0, 0}, {1, 0}, {0, 1}}, 2, 1, 2).render(h, w);
    CHECK(h == 3);
    CHECK(w == 5);
    CHECK(px[2] == image::kSeparatorValue);
    CHECK(px[5 + 0] == image::kSeparatorValue);
    CHECK(px[10 + 0] == 255);
    CHECK(px[10 + 4] == 255);

    CHECK_THROWS_AS(g.set_cell(0, 0, std::vector<double>{1.0}), Error);
    CHECK_THROWS_AS(g.cell(1, 0), Error);
    const std::vector<std::string> bad{"two\nlines"};
    CHECK_THROWS_AS(image::write_pgm_grid(g, kDir / "bad.pgm", bad), Error);
    CHECK_THROWS_AS(image::write_pgm_grid(g, kDir / "no/such/dir/x.pgm"), Error);
}

TEST_CASE("config layering") {
    std::filesystem::create_directories(kDir);
    std::ofstream(kDir / "run.cfg") << "# comment\nepochs = 5\n\n lr=0.01  # trailing\nname = from file\n";
    config::RunConfig raw;
    raw.set_override("epochs=7");
    raw.load_file(kDir / "run.cfg");
    const config::ResolvedConfig c(schema(), raw);
    CHECK(c.size("epochs") == 7);
    CHECK(c.number("lr") == doctest::Approx(0.01));
    CHECK(c.str("name") == "from file");
    CHECK(c.seed("seed") == 0);
    CHECK_FALSE(c.flag("verbose"));
    CHECK(c.sizes("hidden") == std::vector<std::size_t>{256});
    CHECK(c.is_set("lr"));
    CHECK_FALSE(c.is_set("beta"));
    CHECK(c.values().at("epochs") == "7");

    config::RunConfig lists;
    lists.set_override("hidden", "64, 32");
    lists.set_override("verbose", "yes");
    lists.set_override("seed", "18446744073709551615");
    const config::ResolvedConfig l(schema(), lists);
    CHECK(l.sizes("hidden") == std::vector<std::size_t>{64, 32});
    CHECK(l.flag("verbose"));
    CHECK(l.seed("seed") == 18446744073709551615ull);
    CHECK(config::describe(schema()).find("epochs") != std::string::npos);
}

TEST_CASE("config errors") {
    const auto config_error = [](const std::string& key, const std::string& value) {
        config::RunConfig raw;
        raw.set_override(key, value);
        try {
            config::ResolvedConfig c(schema(), raw);
        } catch (const Error& e) {
            return e.kind() == ErrorKind::Config;
        }
        return false;
    };
    CHECK(config_error("epochs", "0"));
    CHECK(config_error("epochs", "-3"));
    CHECK(config_error("offset", "1.5"));
    CHECK(config_error("seed", "abc"));
    CHECK(config_error("lr", "0"));
    CHECK(config_error("beta", "nan"));
    CHECK(config_error("verbose", "maybe"));
    CHECK(config_error("hidden", "64,,2"));
    CHECK(config_error("out", ""));
    CHECK(config_error("act", "gelu"));
    CHECK(config_error("unknown_key", "1"));
    CHECK_FALSE(config_error("offset", "0"));

    config::RunConfig raw;
    CHECK_THROWS_AS(raw.set_override("no equals sign"), Error);
    try {
        raw.load_file(kDir / "missing.cfg");
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
    std::ofstream(kDir / "broken.cfg") << "epochs 5\n";
    try {
        raw.load_file(kDir / "broken.cfg");
        FAIL("expected config error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
        CHECK(std::string(e.what()).find(":1:") != std::string::npos);
    }
}

}  // TEST_SUITE
