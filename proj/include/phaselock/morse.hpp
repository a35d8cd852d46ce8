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
 * Morse-oscillator model in the dimensionless coordinate x = r/r0 - 1:
 *
 *     H = -1/(2 M) d^2/dx^2 + D (exp(-2 beta x) - 2 exp(-beta x)),  M = mu r0^2,
 *
 * in atomic units. Bound states are evaluated in log space because the
 * analytic normalization overflows for deep wells (lambda ~ 10^2).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "grid.hpp"

namespace phaselock {

/// Atomic unit of time in seconds.
inline constexpr double kAtomicTimeSeconds = 2.4188843265857e-17;

/// Molecule constants plus the cached depth parameter.
class MorseParams {
  public:
    MorseParams(double beta, double mu, double r0, double dissociation)
        : beta_(beta), mu_(mu), r0_(r0), d_(dissociation) {
        require(beta > 0 && mu > 0 && r0 > 0 && dissociation > 0 && std::isfinite(beta) &&
                    std::isfinite(mu) && std::isfinite(r0) && std::isfinite(dissociation),
                ErrorKind::InvalidParameter, "beta, mu, r0 and D must be positive and finite");
        lambda_ = derive_lambda(beta, mu, r0, dissociation);
        require(lambda_ > 0.5, ErrorKind::InvalidParameter,
                "lambda = " + std::to_string(lambda_) + " <= 1/2 supports no bound state");
    }

    /// I2 ground electronic state.
    static MorseParams iodine() { return {4.954, 1.156e5, 5.03, 0.057}; }

    [[nodiscard]] double beta() const noexcept { return beta_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }
    [[nodiscard]] double r0() const noexcept { return r0_; }
    [[nodiscard]] double dissociation() const noexcept { return d_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    /// Mass conjugate to the dimensionless coordinate.
    [[nodiscard]] double mass() const noexcept { return mu_ * r0_ * r0_; }

    [[nodiscard]] int max_level() const noexcept {
        return static_cast<int>(std::floor(lambda_ - 0.5));
    }
    [[nodiscard]] int bound_state_count() const noexcept { return max_level() + 1; }

    [[nodiscard]] double potential(double x) const noexcept {
        const double e = std::exp(-beta_ * x);
        return d_ * (e * e - 2.0 * e);
    }

    static double derive_lambda(double beta, double mu, double r0, double dissociation) {
        require(beta > 0 && mu > 0 && r0 > 0 && dissociation > 0, ErrorKind::InvalidParameter,
                "beta, mu, r0 and D must be positive");
        return r0 * std::sqrt(2.0 * mu * dissociation) / beta;
    }

  private:
    double beta_;
    double mu_;
    double r0_;
    double d_;
    double lambda_{};
};

inline void check_level(const MorseParams &params, int m) {
    require(m >= 0 && m <= params.max_level(), ErrorKind::Domain,
            "level " + std::to_string(m) + " outside bound range [0, " +
                std::to_string(params.max_level()) + "]");
}

/// Exponent s_m = lambda - m - 1/2 of the bound state.
inline double level_exponent(const MorseParams &params, int m) {
    check_level(params, m);
    return params.lambda() - m - 0.5;
}

inline double energy(const MorseParams &params, int m) {
    const double s = level_exponent(params, m);
    const double lam = params.lambda();
    return -(params.dissociation() / (lam * lam)) * s * s;
}

struct Eigenstate {
    int m;
    double energy;
    double s;
};

inline Eigenstate eigenstate(const MorseParams &params, int m) {
    return {m, energy(params, m), level_exponent(params, m)};
}

struct CharacteristicTimes {
    double classical; ///< a.u.
    double revival;   ///< a.u.
};

inline CharacteristicTimes characteristic_times(const MorseParams &params) {
    const double lam = params.lambda();
    const double revival = 2.0 * std::numbers::pi * lam * lam / params.dissociation();
    return {revival / (2.0 * lam - 1.0), revival};
}

namespace detail {

/// ln|L_m^(a)(z)| and its sign from the three-term recurrence in the degree,
/// rescaling whenever the running values grow large.
inline std::pair<double, double> log_laguerre(int m, double a, double z) {
    double prev = 1.0;
    if (m == 0) {
        return {0.0, 1.0};
    }
    double cur = 1.0 + a - z;
    double log_scale = 0.0;
    constexpr double kBig = 1e150;
    for (int k = 1; k < m; ++k) {
        const double next = ((2.0 * k + 1.0 + a - z) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > kBig) {
            cur /= kBig;
            prev /= kBig;
            log_scale += std::log(kBig);
        }
    }
    if (cur == 0.0) {
        return {-INFINITY, 0.0};
    }
    return {log_scale + std::log(std::abs(cur)), cur > 0 ? 1.0 : -1.0};
}

} // namespace detail

inline constexpr std::size_t kMinGridPoints = 16;
inline constexpr double kTruncationTolerance = 1e-6;

struct EigenfunctionSamples {
    std::vector<double> values; ///< renormalized on the grid
    double captured_norm{};     ///< grid norm under the analytic normalization
    [[nodiscard]] bool truncated() const noexcept {
        return captured_norm < 1.0 - kTruncationTolerance;
    }
};

/**
 * Samples psi_m(x) = N_m xi^s exp(-xi/2) L_m^(2s)(xi), xi = 2 lambda exp(-beta x).
 *
 * Every factor is accumulated as a logarithm and exponentiated once per
 * point. The result is renormalized so its trapezoid norm on `grid` is 1;
 * `captured_norm` keeps the norm before renormalization.
 */
inline EigenfunctionSamples evaluate_eigenfunction(const MorseParams &params, int m,
                                                   const UniformGrid &grid) {
    check_level(params, m);
    require(grid.size() >= kMinGridPoints, ErrorKind::InvalidParameter,
            "eigenfunction grid needs at least 16 points");
    const double lam = params.lambda();
    const double beta = params.beta();
    const double s = lam - m - 0.5;
    const double log_norm = 0.5 * (std::log(beta) + std::log(2.0 * s) + std::lgamma(m + 1.0) -
                                   std::lgamma(2.0 * lam - m));

    EigenfunctionSamples out;
    out.values.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double log_xi = std::log(2.0 * lam) - beta * grid[i];
        const double xi = std::exp(log_xi);
        const auto [log_l, sign] = detail::log_laguerre(m, 2.0 * s, xi);
        const double log_psi = log_norm + s * log_xi - 0.5 * xi + log_l;
        out.values[i] = sign * std::exp(log_psi);
    }
    std::vector<double> sq(out.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        sq[i] = out.values[i] * out.values[i];
    }
    out.captured_norm = trapezoid(sq, grid.spacing());
    require(out.captured_norm > 0.0 && std::isfinite(out.captured_norm), ErrorKind::Truncation,
            "level " + std::to_string(m) + " has no support on the grid");
    const double scale = 1.0 / std::sqrt(out.captured_norm);
    for (double &v : out.values) {
        v *= scale;
    }
    return out;
}

/// Eigenfunctions 0..n_levels-1 sampled once on a shared grid (row m = level m).
struct EigenTable {
    UniformGrid grid;
    std::vector<std::vector<double>> psi;
    std::vector<double> energies;
    std::vector<double> captured_norms;

    [[nodiscard]] std::size_t levels() const noexcept { return psi.size(); }

    [[nodiscard]] double min_captured_norm() const noexcept {
        double v = 1.0;
        for (double c : captured_norms) {
            v = std::min(v, c);
        }
        return v;
    }
};

inline EigenTable build_eigen_table(const MorseParams &params, int n_levels,
                                    const UniformGrid &grid) {
    require(n_levels >= 1 && n_levels <= params.bound_state_count(), ErrorKind::Domain,
            "requested " + std::to_string(n_levels) + " levels but the well holds " +
                std::to_string(params.bound_state_count()));
    EigenTable table{grid, {}, {}, {}};
    for (int m = 0; m < n_levels; ++m) {
        auto samples = evaluate_eigenfunction(params, m, grid);
        table.captured_norms.push_back(samples.captured_norm);
        table.psi.push_back(std::move(samples.values));
        table.energies.push_back(energy(params, m));
    }
    return table;
}

/// Default position grid covering the lowest 24 levels of I2 plus tails.
inline UniformGrid default_position_grid() { return {-0.25, 0.45, 2048}; }

} // namespace phaselock
