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

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "phaselock/config.hpp"

using namespace phaselock;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

/// Message of the config error raised by `text`, or "" when it parses.
std::string config_error(const std::string &text, const std::vector<std::string> &overrides = {}) {
    try {
        (void)parse_config(text, overrides);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::Config);
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("empty configuration yields the iodine defaults", "[config]") {
    const RunConfig c = parse_config("");
    CHECK(c.beta == 4.954);
    CHECK(c.mu == 1.156e5);
    CHECK(c.r0 == 5.03);
    CHECK(c.D == 0.057);
    CHECK(c.alpha == 2.0);
    CHECK(c.n_levels == 24);
    CHECK(c.nx == 2048);
    CHECK(c.np == 512);
    CHECK_FALSE(c.p_max.has_value());
    CHECK(c.x_min == -0.25);
    CHECK(c.x_max == 0.45);
    REQUIRE(c.theta.size() == 9);
    CHECK(c.theta[8] == kPi);
    CHECK(c.t_frac == std::vector<double>{1.0 / 8, 1.0 / 16});
    CHECK(c.workers == 1);
    CHECK(c.format == OutputFormat::Grid);
    CHECK(c.lobe_threshold == 0.3);
    CHECK(parse_config("# only a comment\n\n   \n").beta == 4.954);
}

TEST_CASE("degenerate coherent state is a valid configuration", "[config]") {
    const RunConfig c = parse_config("alpha=0\nn_levels=2");
    CHECK(c.alpha == 0.0);
    CHECK(c.n_levels == 2);
}

TEST_CASE("violated invariants name the key and line", "[config][errors]") {
    CHECK_THAT(config_error("n_levels=500"), ContainsSubstring("n_levels") && ContainsSubstring("117"));
    CHECK_THAT(config_error("alpha = 2\nbogus = 1\n"),
               ContainsSubstring("line 2") && ContainsSubstring("bogus") && ContainsSubstring("unknown"));
    CHECK_THAT(config_error("\n\nbeta = fast"), ContainsSubstring("line 3") && ContainsSubstring("beta"));
    CHECK_THAT(config_error("nx = 1000"), ContainsSubstring("nx"));
    CHECK_THAT(config_error("np = 64"), ContainsSubstring("np"));
    CHECK_THAT(config_error("nx = 2048.5"), ContainsSubstring("nx"));
    CHECK_THAT(config_error("beta = -1"), ContainsSubstring("beta"));
    CHECK_THAT(config_error("x_min = 0.5"), ContainsSubstring("x_max"));
    CHECK_THAT(config_error("lobe_threshold = 1.2"), ContainsSubstring("lobe_threshold"));
    CHECK_THAT(config_error("theta_count = 5"), ContainsSubstring("theta_count"));
    CHECK_THAT(config_error("steps = 8"), ContainsSubstring("steps"));
    CHECK_THAT(config_error("format = png"), ContainsSubstring("format"));
    CHECK_THAT(config_error("direction = sideways"), ContainsSubstring("direction"));
    CHECK_THAT(config_error("workers = 0"), ContainsSubstring("workers"));
    CHECK_THAT(config_error("alpha 2"), ContainsSubstring("line 1"));
    CHECK_THAT(config_error("theta = pi/0"), ContainsSubstring("theta"));
    CHECK_THAT(config_error("theta = 1,,2"), ContainsSubstring("theta"));
    CHECK_THAT(config_error("n_levels = 1"), ContainsSubstring("n_levels"));
}

TEST_CASE("phase and time expressions", "[config]") {
    const RunConfig c = parse_config("theta = 0, pi/4, -pi/2, 3pi/8, 3*pi/4, pi, 0.25\n"
                                     "t_frac = 1/8, 1/16, 0\n");
    const std::vector<double> expect{0, kPi / 4, -kPi / 2, 3 * kPi / 8, 3 * kPi / 4, kPi, 0.25};
    REQUIRE(c.theta.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK_THAT(c.theta[i], WithinAbs(expect[i], 1e-15));
    }
    CHECK(c.t_frac == std::vector<double>{0.125, 0.0625, 0.0});

    const RunConfig r = parse_config("theta = 0:pi:5");
    REQUIRE(r.theta.size() == 5);
    CHECK_THAT(r.theta[2], WithinAbs(kPi / 2, 1e-15));
    CHECK(r.theta[4] == kPi);
}

TEST_CASE("evaluation times", "[config]") {
    const RunConfig c = parse_config("t_frac = 1/8");
    const double revival = characteristic_times(c.params()).revival;
    const auto times = evaluation_times(c);
    REQUIRE(times.size() == 1);
    CHECK_THAT(times[0].first, WithinRel(revival / 8, 1e-15));
    CHECK(times[0].second == 0.125);

    const auto absolute = evaluation_times(parse_config("t_au = 1000, 2000"));
    REQUIRE(absolute.size() == 2);
    CHECK(absolute[1].first == 2000.0);
    CHECK_THAT(absolute[1].second, WithinRel(2000.0 / revival, 1e-15));
}

TEST_CASE("command-line overrides apply after the file", "[config]") {
    const RunConfig c = parse_config("alpha = 1.5\nworkers = 2\n", {"alpha=2.5", "theta=pi/2", "p_max=auto"});
    CHECK(c.alpha == 2.5);
    CHECK(c.workers == 2);
    CHECK(c.theta == std::vector<double>{kPi / 2});
    CHECK_THAT(config_error("", {"nope=1"}), ContainsSubstring("override") && ContainsSubstring("nope"));
    CHECK_THAT(config_error("", {"alpha"}), ContainsSubstring("alpha"));
    CHECK(parse_config("", {"p_max = 300"}).p_max == 300.0);
    CHECK(parse_config("", {"format=both"}).format == OutputFormat::Both);
    CHECK(parse_config("", {"format=csv"}).format == OutputFormat::Csv);
    CHECK(parse_config("", {"output_dir=some/where"}).output_dir == "some/where");
}
