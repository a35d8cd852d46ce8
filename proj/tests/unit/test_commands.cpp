// Copyright 2026 The phaselock Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "phaselock/commands.hpp"
#include "support/test_support.hpp"

using namespace phaselock;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;

namespace {

RunConfig config_in(const testing::TempDir &dir, const std::vector<std::string> &overrides = {}) {
    auto all = overrides;
    all.push_back("output_dir=" + dir.path().string());
    return parse_config("", all);
}

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(PHASELOCK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("numbers round-trip through their CSV text", "[csv]") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 1000; ++k) {
        double v = std::bit_cast<double>(rng());
        if (!std::isfinite(v)) {
            continue;
        }
        CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
    CsvBuilder csv;
    csv.comment("note").header({"a", "b"}).values(1, 0.5).values("x", std::size_t{3});
    CHECK(csv.str() == "# note\na,b\n1,0.5\nx,3\n");
}

TEST_CASE("table2 has the reference layout", "[commands]") {
    testing::TempDir dir;
    std::ostringstream log;
    const auto result = run_command("table2", config_in(dir), log);
    REQUIRE(result.files.size() == 2);
    const auto lines = lines_of(testing::slurp(dir.path() / "table2.csv"));
    REQUIRE(lines.size() == 4);
    CHECK_THAT(lines[0], StartsWith("# phaselock 0.1.0") && ContainsSubstring("lambda=116.558") &&
                             ContainsSubstring("wigner_prefactor=1/pi") &&
                             ContainsSubstring("overlap_factor=2pi"));
    CHECK(lines[1] == "theta,0,pi/8,pi/4,3pi/8,pi/2,5pi/8,3pi/4,7pi/8,pi");
    const auto eighth = split(lines[2]);
    const auto sixteenth = split(lines[3]);
    REQUIRE(eighth.size() == 10);
    REQUIRE(sixteenth.size() == 10);
    CHECK(eighth[0] == "T_rev/8");
    CHECK(sixteenth[0] == "T_rev/16");
    const double compass = std::stod(eighth[5]);
    const double direct = tile_area(testing::iodine_model().phase_locked_state(std::numbers::pi / 2, testing::revival() / 8));
    CHECK(compass == direct);

    const auto report = lines_of(testing::slurp(dir.path() / "table2_conventions.csv"));
    REQUIRE(report.size() == 3 + 18);
    CHECK_THAT(report[2], StartsWith("time,theta,tile_conjugate,tile_r0_scaled,reference"));
}

TEST_CASE("table1 has the reference layout", "[commands]") {
    testing::TempDir dir;
    std::ostringstream log;
    run_command("table1", config_in(dir), log);
    const auto lines = lines_of(testing::slurp(dir.path() / "table1.csv"));
    REQUIRE(lines.size() == 3);
    CHECK_THAT(lines[0], StartsWith("# phaselock 0.1.0") && ContainsSubstring("overlap_factor=2pi"));
    CHECK(lines[1] == "theta,0,pi/8,pi/4,3pi/8,pi/2,5pi/8,3pi/4,7pi/8,pi");
    const auto row = split(lines[2]);
    REQUIRE(row.size() == 10);
    CHECK(row[0] == "A_m");
}

TEST_CASE("state at theta = 0, t = 0 is the odd eigen-expansion", "[commands]") {
    testing::TempDir dir;
    std::ostringstream log;
    run_command("state", config_in(dir, {"theta=0", "t_frac=0"}), log);
    const auto lines = lines_of(testing::slurp(dir.path() / "state_th0_t0.csv"));
    REQUIRE(lines.size() == 3 + 2048);
    CHECK(lines[2] == "x,re,im,density");

    // Odd-level binomial amplitudes, renormalized, times eigenfunctions.
    const MorseParams params = MorseParams::iodine();
    const UniformGrid grid = default_position_grid();
    std::vector<double> d(24, 0.0);
    double total = 0.0;
    for (int m = 1; m < 24; m += 2) {
        d[static_cast<std::size_t>(m)] = std::sqrt(std::tgamma(24.0) / (std::tgamma(m + 1.0) * std::tgamma(24.0 - m)) *
                                                   std::pow(0.8, m) * std::pow(0.2, 23 - m));
        total += d[static_cast<std::size_t>(m)] * d[static_cast<std::size_t>(m)];
    }
    std::vector<double> psi(grid.size(), 0.0);
    for (int m = 1; m < 24; m += 2) {
        const auto e = evaluate_eigenfunction(params, m, grid);
        for (std::size_t i = 0; i < psi.size(); ++i) {
            psi[i] += d[static_cast<std::size_t>(m)] / std::sqrt(total) * e.values[i];
        }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const auto cells = split(lines[3 + i]);
        REQUIRE(cells.size() == 4);
        CHECK(std::stod(cells[2]) == 0.0);
        worst = std::max(worst, std::abs(std::stod(cells[3]) - psi[i] * psi[i]));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("compass Wigner grid carries its lobe count", "[commands]") {
    testing::TempDir dir;
    std::ostringstream log;
    run_command("wigner", config_in(dir, {"theta=pi/2", "t_frac=1/8"}), log);
    const GridFile g = read_grid(dir.path() / "wigner_th0_t0.wgrd");
    CHECK(g.dims == std::vector<std::uint64_t>{2048, 512});
    CHECK(g.metadata.at("lobe_count") == "4");
    CHECK(g.metadata.at("code_version") == "0.1.0");
    CHECK(g.metadata.at("axes") == "x,p");
    CHECK_THAT(std::stod(g.metadata.at("integral")), WithinAbs(1.0, 1e-3));
    CHECK_THAT(std::stod(g.metadata.at("t_frac")), WithinAbs(0.125, 1e-15));
    CHECK_THAT(g.metadata.at("conventions"), ContainsSubstring("1/pi") && ContainsSubstring("2pi"));
    CHECK(std::filesystem::exists(dir.path() / "wigner_summary.csv"));
    CHECK_FALSE(std::filesystem::exists(dir.path() / "wigner_th0_t0.csv"));
}

TEST_CASE("outputs are identical for one and four workers", "[commands][determinism]") {
    const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"wigner", {"theta=pi/2", "t_frac=1/8", "np=128", "format=both"}},
        {"carpet", {"t_frac=1/8", "theta_count=9", "format=both"}},
        {"sensitivity", {"theta=pi/2", "t_frac=1/8", "steps=40", "wigner_samples=2", "np=128"}},
        {"metrics", {"theta=0,pi/2", "t_frac=1/16"}},
    };
    for (const auto &[name, overrides] : runs) {
        testing::TempDir one;
        testing::TempDir four;
        std::ostringstream log;
        auto a = overrides;
        a.push_back("workers=1");
        auto b = overrides;
        b.push_back("workers=4");
        run_command(name, config_in(one, a), log);
        run_command(name, config_in(four, b), log);
        const auto fa = testing::list_files(one.path());
        const auto fb = testing::list_files(four.path());
        REQUIRE(fa.size() == fb.size());
        REQUIRE_FALSE(fa.empty());
        for (std::size_t k = 0; k < fa.size(); ++k) {
            INFO(name << ": " << fa[k].filename());
            CHECK(fa[k].filename() == fb[k].filename());
            CHECK(testing::slurp(fa[k]) == testing::slurp(fb[k]));
        }
    }
}

TEST_CASE("eigen command lists every level", "[commands]") {
    testing::TempDir dir;
    std::ostringstream log;
    run_command("eigen", config_in(dir), log);
    const auto lines = lines_of(testing::slurp(dir.path() / "eigen.csv"));
    REQUIRE(lines.size() == 6 + 24);
    CHECK_THAT(lines[1], ContainsSubstring("bound_state_count=117"));
    CHECK(lines[5] == "m,energy_au,s,captured_norm");
    const auto first = split(lines[6]);
    CHECK(std::stod(first[1]) == energy(MorseParams::iodine(), 0));
}

TEST_CASE("failures leave no partial outputs", "[commands][errors]") {
    SECTION("error while staging") {
        testing::TempDir dir;
        try {
            OutputSet out(dir.path());
            out.text("a.csv", "1\n");
            throw Error(ErrorKind::Contract, "boom");
        } catch (const Error &) {
        }
        CHECK(testing::list_files(dir.path()).empty());
    }
    SECTION("error while moving files into place") {
        testing::TempDir dir;
        std::filesystem::create_directories(dir.path() / "wigner_summary.csv" / "blocker");
        std::ostringstream log;
        try {
            run_command("wigner", config_in(dir, {"theta=pi/2", "t_frac=1/8", "np=128"}), log);
            FAIL("expected a format error");
        } catch (const Error &e) {
            CHECK(e.kind() == ErrorKind::Format);
        }
        CHECK(testing::list_files(dir.path()).empty());
    }
    SECTION("degenerate coefficient set") {
        testing::TempDir dir;
        std::ostringstream log;
        const RunConfig cfg = config_in(dir, {"alpha=0", "n_levels=2"});
        CHECK_NOTHROW(run_command("eigen", cfg, log));
        std::filesystem::remove(dir.path() / "eigen.csv");
        try {
            run_command("state", cfg, log);
            FAIL("expected a degenerate-split error");
        } catch (const Error &e) {
            CHECK(e.kind() == ErrorKind::DegenerateSplit);
            CHECK(exit_status(e.kind()) == 1);
        }
        CHECK(testing::list_files(dir.path()).empty());
    }
    std::ostringstream log;
    CHECK_THROWS_AS(run_command("plot", parse_config(""), log), Error);
}

TEST_CASE("command-line exit codes", "[cli]") {
    testing::TempDir dir;
    const std::string out = "--set output_dir=" + dir.path().string();
    CHECK(run_cli("table1 -q " + out) == 0);
    CHECK(std::filesystem::exists(dir.path() / "table1.csv"));
    CHECK(run_cli("eigen " + out + " --set n_levels=500") == 1);
    CHECK(run_cli("eigen " + out + " --set no_such_key=1") == 1);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("eigen --config /nonexistent/phaselock.cfg") == 1);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("--version") == 0);

    const auto cfg_path = dir.path() / "run.cfg";
    std::ofstream(cfg_path) << "# sample\ntheta = pi/2\nt_frac = 1/8\nsteps = 32\nmax_shift = 0.02\n";
    CHECK(run_cli("sensitivity -q --config " + cfg_path.string() + " " + out) == 0);
    CHECK(std::filesystem::exists(dir.path() / "sensitivity_th0_t0.csv"));
    CHECK(run_cli("eigen -q " + out + " --set alpha=0 --set n_levels=2") == 0);
    CHECK(run_cli("state -q " + out + " --set alpha=0 --set n_levels=2") == 1);
    setenv("PHASELOCK_WORKERS", "3", 1);
    CHECK(run_cli("table1 -q " + out) == 0);
    unsetenv("PHASELOCK_WORKERS");

    CHECK(exit_status(ErrorKind::Config) == 1);
    CHECK(exit_status(ErrorKind::Aliasing) == 1);
    CHECK(exit_status(ErrorKind::Contract) == 2);
    CHECK(exit_status(ErrorKind::Shape) == 2);
}
