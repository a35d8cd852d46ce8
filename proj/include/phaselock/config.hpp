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


/**
 * @file
 * Run configuration: `key = value` lines with `#` comments. Unknown keys,
 * unparsable values and violated invariants are rejected with the key and
 * line number in the message.
 */

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "grid.hpp"
#include "morse.hpp"

namespace phaselock {

inline constexpr std::string_view kVersion = "0.1.0";

enum class OutputFormat { Grid, Csv, Both };

struct RunConfig {
    double beta = 4.954;
    double mu = 1.156e5;
    double r0 = 5.03;
    double D = 0.057;
    double alpha = 2.0;
    int n_levels = 24;

    double x_min = -0.25;
    double x_max = 0.45;
    std::size_t nx = 2048;
    std::size_t np = 512;
    std::optional<double> p_max; ///< unset: auto-ranged per state

    std::vector<double> theta{0.0,
                              std::numbers::pi / 8,
                              std::numbers::pi / 4,
                              3 * std::numbers::pi / 8,
                              std::numbers::pi / 2,
                              5 * std::numbers::pi / 8,
                              3 * std::numbers::pi / 4,
                              7 * std::numbers::pi / 8,
                              std::numbers::pi};
    std::size_t theta_count = 65; ///< carpet rows
    std::vector<double> t_frac{1.0 / 8, 1.0 / 16};
    std::vector<double> t_au; ///< overrides t_frac when non-empty

    std::string output_dir = "out";
    unsigned workers = 1;
    OutputFormat format = OutputFormat::Grid;

    double lobe_threshold = 0.3;
    std::string direction = "position";
    double max_shift = 0.05;
    std::size_t steps = 201;
    std::size_t wigner_samples = 0;

    [[nodiscard]] MorseParams params() const { return {beta, mu, r0, D}; }
    [[nodiscard]] UniformGrid x_grid() const { return {x_min, x_max, nx}; }
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return std::string(s.substr(a, b - a));
}

inline std::optional<double> to_double(std::string_view s) {
    const std::string t = trim(s);
    if (t.empty()) {
        return std::nullopt;
    }
    double v = 0.0;
    const auto *end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

/// "0.3", "pi", "-pi/2", "3pi/8", "3*pi/4", "1/8".
inline std::optional<double> parse_number(std::string_view text) {
    const std::string s = trim(text);
    if (s.empty()) {
        return std::nullopt;
    }
    std::string head = s;
    double denom = 1.0;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const auto d = to_double(std::string_view(s).substr(slash + 1));
        if (!d || *d == 0.0) {
            return std::nullopt;
        }
        denom = *d;
        head = trim(std::string_view(s).substr(0, slash));
    }
    if (const auto pi = head.find("pi"); pi != std::string::npos) {
        if (pi + 2 != head.size()) {
            return std::nullopt;
        }
        std::string coef = trim(std::string_view(head).substr(0, pi));
        if (!coef.empty() && coef.back() == '*') {
            coef.pop_back();
        }
        double c = 1.0;
        if (coef == "-") {
            c = -1.0;
        } else if (!coef.empty() && coef != "+") {
            const auto v = to_double(coef);
            if (!v) {
                return std::nullopt;
            }
            c = *v;
        }
        return c * std::numbers::pi / denom;
    }
    const auto v = to_double(head);
    if (!v) {
        return std::nullopt;
    }
    return *v / denom;
}

/// Comma-separated numbers; an element "a:b:n" expands to n points from a to b.
inline std::optional<std::vector<double>> parse_list(std::string_view text) {
    std::vector<double> out;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            return std::nullopt;
        }
        if (item.find(':') != std::string::npos) {
            const auto c1 = item.find(':');
            const auto c2 = item.find(':', c1 + 1);
            if (c2 == std::string::npos) {
                return std::nullopt;
            }
            const auto a = parse_number(item.substr(0, c1));
            const auto b = parse_number(item.substr(c1 + 1, c2 - c1 - 1));
            const auto n = to_double(item.substr(c2 + 1));
            if (!a || !b || !n || *n < 2 || *n != std::floor(*n)) {
                return std::nullopt;
            }
            const auto count = static_cast<std::size_t>(*n);
            for (std::size_t k = 0; k < count; ++k) {
                out.push_back(*a + (*b - *a) * static_cast<double>(k) / static_cast<double>(count - 1));
            }
            continue;
        }
        const auto v = parse_number(item);
        if (!v) {
            return std::nullopt;
        }
        out.push_back(*v);
    }
    if (out.empty()) {
        return std::nullopt;
    }
    return out;
}

[[noreturn]] inline void config_error(std::size_t line, std::string_view key, const std::string &why) {
    std::string where = line == 0 ? "override" : "line " + std::to_string(line);
    throw Error(ErrorKind::Config, where + ", key '" + std::string(key) + "': " + why);
}

} // namespace detail

/// Applies one `key = value` assignment. `line` is 0 for command-line overrides.
inline void set_config_value(RunConfig &cfg, std::string_view key_in, std::string_view value_in,
                             std::size_t line = 0) {
    const std::string key = detail::trim(key_in);
    const std::string value = detail::trim(value_in);
    auto real = [&]() {
        const auto v = detail::parse_number(value);
        if (!v) {
            detail::config_error(line, key, "cannot parse '" + value + "' as a number");
        }
        return *v;
    };
    auto count = [&]() -> std::size_t {
        const auto v = detail::to_double(value);
        if (!v || *v < 0 || *v != std::floor(*v) || *v > 1e12) {
            detail::config_error(line, key, "expected a non-negative integer, got '" + value + "'");
        }
        return static_cast<std::size_t>(*v);
    };
    auto list = [&]() {
        const auto v = detail::parse_list(value);
        if (!v) {
            detail::config_error(line, key, "cannot parse '" + value + "' as a list");
        }
        return *v;
    };

    if (key == "beta") {
        cfg.beta = real();
    } else if (key == "mu") {
        cfg.mu = real();
    } else if (key == "r0") {
        cfg.r0 = real();
    } else if (key == "D") {
        cfg.D = real();
    } else if (key == "alpha") {
        cfg.alpha = real();
    } else if (key == "n_levels") {
        cfg.n_levels = static_cast<int>(std::min<std::size_t>(count(), 1U << 30));
    } else if (key == "x_min") {
        cfg.x_min = real();
    } else if (key == "x_max") {
        cfg.x_max = real();
    } else if (key == "nx") {
        cfg.nx = count();
    } else if (key == "np") {
        cfg.np = count();
    } else if (key == "p_max") {
        if (value == "auto") {
            cfg.p_max.reset();
        } else {
            cfg.p_max = real();
        }
    } else if (key == "theta") {
        cfg.theta = list();
    } else if (key == "theta_count") {
        cfg.theta_count = count();
    } else if (key == "t_frac") {
        cfg.t_frac = list();
        cfg.t_au.clear();
    } else if (key == "t_au") {
        cfg.t_au = list();
    } else if (key == "output_dir") {
        if (value.empty()) {
            detail::config_error(line, key, "must not be empty");
        }
        cfg.output_dir = value;
    } else if (key == "workers") {
        const std::size_t w = count();
        if (w == 0 || w > 4096) {
            detail::config_error(line, key, "must be between 1 and 4096");
        }
        cfg.workers = static_cast<unsigned>(w);
    } else if (key == "format") {
        if (value == "grid") {
            cfg.format = OutputFormat::Grid;
        } else if (value == "csv") {
            cfg.format = OutputFormat::Csv;
        } else if (value == "both") {
            cfg.format = OutputFormat::Both;
        } else {
            detail::config_error(line, key, "expected grid, csv or both");
        }
    } else if (key == "lobe_threshold") {
        cfg.lobe_threshold = real();
    } else if (key == "direction") {
        if (value != "position" && value != "momentum") {
            detail::config_error(line, key, "expected position or momentum");
        }
        cfg.direction = value;
    } else if (key == "max_shift") {
        cfg.max_shift = real();
    } else if (key == "steps") {
        cfg.steps = count();
    } else if (key == "wigner_samples") {
        cfg.wigner_samples = count();
    } else {
        detail::config_error(line, key, "unknown key");
    }
}

/// Checks cross-field invariants; throws a config error naming the offending key.
inline void validate(const RunConfig &cfg) {
    auto fail = [](std::string_view key, const std::string &why) {
        detail::config_error(0, key, why);
    };
    for (const auto &[key, v] : {std::pair{"beta", cfg.beta}, std::pair{"mu", cfg.mu},
                                 std::pair{"r0", cfg.r0}, std::pair{"D", cfg.D}}) {
        if (!(v > 0.0)) {
            fail(key, "must be positive");
        }
    }
    const double lambda = MorseParams::derive_lambda(cfg.beta, cfg.mu, cfg.r0, cfg.D);
    if (!(lambda > 0.5)) {
        fail("beta", "parameters give lambda <= 1/2 (no bound state)");
    }
    const MorseParams params = cfg.params();
    if (cfg.n_levels < 2) {
        fail("n_levels", "need at least 2 levels (one even, one odd)");
    }
    if (cfg.n_levels > params.bound_state_count()) {
        fail("n_levels", std::to_string(cfg.n_levels) + " exceeds the " +
                             std::to_string(params.bound_state_count()) + " bound states");
    }
    if (!(cfg.x_max > cfg.x_min)) {
        fail("x_max", "must exceed x_min");
    }
    if (cfg.nx < 128 || !is_power_of_two(cfg.nx)) {
        fail("nx", "must be a power of two >= 128");
    }
    if (cfg.np < 128 || !is_power_of_two(cfg.np)) {
        fail("np", "must be a power of two >= 128");
    }
    if (cfg.p_max && !(*cfg.p_max > 0.0)) {
        fail("p_max", "must be positive or auto");
    }
    if (cfg.theta_count < 9) {
        fail("theta_count", "carpet needs at least 9 rows");
    }
    if (!(cfg.lobe_threshold > 0.0 && cfg.lobe_threshold < 1.0)) {
        fail("lobe_threshold", "must lie in (0, 1)");
    }
    if (!(cfg.max_shift > 0.0)) {
        fail("max_shift", "must be positive");
    }
    if (cfg.steps < 32) {
        fail("steps", "must be at least 32");
    }
    for (double t : cfg.t_frac) {
        if (t < 0.0) {
            fail("t_frac", "times must be non-negative");
        }
    }
}

inline RunConfig parse_config(std::string_view text,
                              const std::vector<std::string> &overrides = {}) {
    RunConfig cfg;
    std::stringstream ss{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string content = detail::trim(raw);
        if (content.empty()) {
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Config,
                        "line " + std::to_string(line) + ": expected key=value, got '" + content + "'");
        }
        set_config_value(cfg, content.substr(0, eq), content.substr(eq + 1), line);
    }
    for (const auto &o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Config, "override '" + o + "' is not key=value");
        }
        set_config_value(cfg, o.substr(0, eq), o.substr(eq + 1), 0);
    }
    validate(cfg);
    return cfg;
}

/// Absolute evaluation times in a.u. with their T_rev fractions (NaN when given in a.u.).
inline std::vector<std::pair<double, double>> evaluation_times(const RunConfig &cfg) {
    const double revival = characteristic_times(cfg.params()).revival;
    std::vector<std::pair<double, double>> out;
    if (!cfg.t_au.empty()) {
        for (double t : cfg.t_au) {
            out.emplace_back(t, t / revival);
        }
    } else {
        for (double f : cfg.t_frac) {
            out.emplace_back(f * revival, f);
        }
    }
    return out;
}

} // namespace phaselock
