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
 * Observables derived from the phase-locked packet: uncertainty products and
 * interference-tile areas, spatial fringe amplitudes, quantum carpets over
 * the control phase, and displacement-sensitivity scans.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "error.hpp"
#include "fourier.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "wavepacket.hpp"
#include "wigner.hpp"

namespace phaselock {

struct Uncertainties {
    double dx;
    double dp;
};

/// Position spread by trapezoid quadrature, momentum spread from the DFT of the state.
inline Uncertainties uncertainties(const StateGrid &state) {
    const auto rho = state.density();
    const UniformGrid &g = state.x;
    std::vector<double> f1(rho.size()), f2(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        f1[i] = rho[i] * g[i];
        f2[i] = rho[i] * g[i] * g[i];
    }
    const double n = trapezoid(rho, g.spacing());
    const double mx = trapezoid(f1, g.spacing()) / n;
    const double dx = std::sqrt(std::max(trapezoid(f2, g.spacing()) / n - mx * mx, 0.0));
    const auto mom = momentum_distribution(state);
    const double mp = mom.mean();
    const double dp = std::sqrt(std::max(mom.second_moment() - mp * mp, 0.0));
    return {dx, dp};
}

/// Phase-space area of the smallest interference tiles, 1/(dx dp) with hbar = 1.
inline double tile_area(const Uncertainties &u) { return 1.0 / (u.dx * u.dp); }
inline double tile_area(const StateGrid &state) { return tile_area(uncertainties(state)); }

struct FringeOptions {
    double window_factor = 7.0;   ///< background window in units of the median maxima spacing
    double min_window = 0.02;     ///< background window floor, in x
    double cluster_width = 0.05;  ///< a fringe and its two neighbours must fit in this x span
    double neighbour_ratio = 0.5; ///< both neighbouring maxima reach this fraction of the fringe
    double density_floor = 0.02;  ///< fringe maxima below this fraction of the peak density are ignored
};

/**
 * Largest spatial interference-fringe amplitude of a density normalized in
 * x, reported per unit of r (divided by r0).
 *
 * A moving-average background is subtracted first. A residual maximum is
 * a fringe when its two neighbouring maxima lie within `cluster_width`
 * and each reaches `neighbour_ratio` of its height, which rejects the
 * one-sided decaying ripple next to a turning point. Maxima in the far
 * tails, below `density_floor` of the peak density, are not considered.
 * The amplitude is the larger half-range to the adjacent residual troughs.
 * Returns 0 if no fringe is found.
 */
inline double fringe_amplitude(std::span<const double> density, const UniformGrid &x, double r0,
                               const FringeOptions &opt = {}) {
    require(density.size() == x.size(), ErrorKind::Shape, "density and grid sizes differ");
    require(r0 > 0.0, ErrorKind::InvalidParameter, "r0 must be positive");
    const double h = x.spacing();
    const double norm = trapezoid(density, h);
    require(std::abs(norm - 1.0) <= 1e-3, ErrorKind::Contract,
            "fringe amplitude needs a density normalized in x (got " + std::to_string(norm) + ")");
    const std::size_t n = density.size();
    if (n < 5) {
        return 0.0;
    }

    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (density[i - 1] < density[i] && density[i] >= density[i + 1]) {
            maxima.push_back(i);
        }
    }
    double window = opt.min_window;
    if (maxima.size() >= 2) {
        std::vector<double> gaps;
        for (std::size_t k = 1; k < maxima.size(); ++k) {
            gaps.push_back(static_cast<double>(maxima[k] - maxima[k - 1]) * h);
        }
        std::sort(gaps.begin(), gaps.end());
        const std::size_t mid = gaps.size() / 2;
        const double median = gaps.size() % 2 == 1 ? gaps[mid] : 0.5 * (gaps[mid - 1] + gaps[mid]);
        window = std::max(opt.window_factor * median, opt.min_window);
    }
    const auto half = static_cast<std::size_t>(std::llround(window / h)) / 2;

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + density[i];
    }
    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i >= half ? i - half : 0;
        const std::size_t b = std::min(n, i + half + 1);
        residual[i] = density[i] - (prefix[b] - prefix[a]) / static_cast<double>(b - a);
    }

    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (residual[i - 1] < residual[i] && residual[i] >= residual[i + 1]) {
            peaks.push_back(i);
        }
    }
    const double floor = opt.density_floor * *std::max_element(density.begin(), density.end());
    double best = 0.0;
    for (std::size_t k = 1; k + 1 < peaks.size(); ++k) {
        const std::size_t a = peaks[k - 1];
        const std::size_t b = peaks[k];
        const std::size_t c = peaks[k + 1];
        if (static_cast<double>(c - a) * h > opt.cluster_width) {
            continue;
        }
        if (density[b] < floor) {
            continue;
        }
        if (density[a] < opt.neighbour_ratio * density[b] ||
            density[c] < opt.neighbour_ratio * density[b]) {
            continue;
        }
        const double left = *std::min_element(residual.begin() + static_cast<std::ptrdiff_t>(a),
                                              residual.begin() + static_cast<std::ptrdiff_t>(b));
        const double right = *std::min_element(residual.begin() + static_cast<std::ptrdiff_t>(b),
                                               residual.begin() + static_cast<std::ptrdiff_t>(c));
        best = std::max(best, 0.5 * std::max(residual[b] - left, residual[b] - right));
    }
    return best / r0;
}

/// |Phi_theta(x, t)|^2 on rows of uniformly spaced theta in [0, 2 pi].
struct CarpetGrid {
    UniformGrid x;
    std::vector<double> theta;
    std::vector<double> density; ///< theta rows by x columns
    double t{};

    [[nodiscard]] std::span<const double> row(std::size_t k) const {
        return {density.data() + k * x.size(), x.size()};
    }
};

inline CarpetGrid carpet(const WavePacketModel &model, double t, std::size_t theta_count,
                         unsigned workers = 1) {
    require(theta_count >= 9, ErrorKind::InvalidParameter, "carpet needs at least 9 theta rows");
    CarpetGrid out;
    out.x = model.grid();
    out.t = t;
    out.theta.resize(theta_count);
    for (std::size_t k = 0; k < theta_count; ++k) {
        out.theta[k] = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(theta_count - 1);
    }
    const std::size_t nx = out.x.size();
    out.density.assign(theta_count * nx, 0.0);
    const auto even = model.expand(model.coefficients().d_even, t);
    const auto odd = model.expand(model.coefficients().d_odd, t);
    parallel_for(theta_count, workers, [&](std::size_t k) {
        // Rows use the unreduced theta so the 2 pi row is evaluated as such.
        const cplx e(std::cos(out.theta[k]), std::sin(out.theta[k]));
        const cplx a = (1.0 - e) / 2.0;
        const cplx b = (1.0 + e) / 2.0;
        for (std::size_t i = 0; i < nx; ++i) {
            out.density[k * nx + i] = std::norm(a * even[i] + b * odd[i]);
        }
    });
    return out;
}

namespace detail {

inline double fft_wavenumber(std::size_t k, std::size_t n, double h) {
    const double idx = k < (n + 1) / 2 ? static_cast<double>(k)
                                       : static_cast<double>(k) - static_cast<double>(n);
    return 2.0 * std::numbers::pi * idx / (static_cast<double>(n) * h);
}

} // namespace detail

/**
 * Rigid phase-space displacement: spectral (band-limited) translation by
 * `dx_shift` followed by a momentum kick exp(i dp_shift x), renormalized.
 */
inline StateGrid displaced_state(const StateGrid &state, double dx_shift, double dp_shift) {
    const std::size_t n = state.psi.size();
    const double h = state.x.spacing();
    StateGrid out = state;
    if (dx_shift != 0.0) {
        const auto rho = state.density();
        double leaving = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool exits = dx_shift > 0 ? state.x[i] > state.x.max() - dx_shift
                                            : state.x[i] < state.x.min() - dx_shift;
            if (exits) {
                leaving += rho[i] * h;
            }
        }
        require(leaving <= 1e-6, ErrorKind::Truncation,
                "shift of " + std::to_string(dx_shift) + " moves " + std::to_string(leaving) +
                    " of the norm off the grid");
        Eigen::FFT<double> fft;
        std::vector<cplx> spectrum;
        fft.fwd(spectrum, state.psi);
        for (std::size_t k = 0; k < n; ++k) {
            const double kk = detail::fft_wavenumber(k, n, h);
            spectrum[k] *= cplx(std::cos(kk * dx_shift), -std::sin(kk * dx_shift));
        }
        fft.inv(out.psi, spectrum);
    }
    if (dp_shift != 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double phase = dp_shift * state.x[i];
            out.psi[i] *= cplx(std::cos(phase), std::sin(phase));
        }
    }
    if (dx_shift != 0.0 || dp_shift != 0.0) {
        const double scale = 1.0 / std::sqrt(norm_squared(out.psi, h));
        for (auto &v : out.psi) {
            v *= scale;
        }
    }
    return out;
}

enum class ShiftDirection { Position, Momentum };

struct SensitivityScan {
    ShiftDirection direction{};
    std::vector<double> shift;
    std::vector<double> overlap;
    /// Wigner-route overlap at sampled shifts, NaN elsewhere.
    std::vector<double> wigner_overlap;
    std::optional<double> first_zero;
};

inline constexpr double kDistinguishableOverlap = 1e-2;

/**
 * |<Phi|Phi_shifted(s)>|^2 for s in [0, max_shift]. `wigner_samples` shifts,
 * evenly spread over the scan, are also evaluated through 2 pi Int W W'.
 */
inline SensitivityScan sensitivity_scan(const StateGrid &state, ShiftDirection direction,
                                        double max_shift, std::size_t steps,
                                        std::size_t wigner_samples = 0, unsigned workers = 1) {
    require(steps >= 32, ErrorKind::InvalidParameter, "sensitivity scan needs at least 32 steps");
    require(max_shift > 0.0, ErrorKind::InvalidParameter, "max_shift must be positive");
    SensitivityScan out;
    out.direction = direction;
    out.shift.resize(steps);
    out.overlap.resize(steps);
    out.wigner_overlap.assign(steps, std::numeric_limits<double>::quiet_NaN());
    const double h = state.x.spacing();
    parallel_for(steps, workers, [&](std::size_t i) {
        const double s = max_shift * static_cast<double>(i) / static_cast<double>(steps - 1);
        out.shift[i] = s;
        const StateGrid moved = direction == ShiftDirection::Position
                                    ? displaced_state(state, s, 0.0)
                                    : displaced_state(state, 0.0, s);
        out.overlap[i] = std::norm(inner_product(state.psi, moved.psi, h));
    });
    for (std::size_t i = 0; i < steps; ++i) {
        if (out.overlap[i] < kDistinguishableOverlap) {
            out.first_zero = out.shift[i];
            break;
        }
    }
    if (wigner_samples > 0) {
        UniformGrid pg = auto_momentum_grid(state);
        if (direction == ShiftDirection::Momentum) {
            pg = UniformGrid(pg.min() - max_shift, pg.max() + max_shift, pg.size());
        }
        const WignerGrid base = wigner_transform(state, pg, workers);
        const std::size_t count = std::min(wigner_samples, steps);
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t i = count == 1 ? 0 : k * (steps - 1) / (count - 1);
            const StateGrid moved = direction == ShiftDirection::Position
                                        ? displaced_state(state, out.shift[i], 0.0)
                                        : displaced_state(state, 0.0, out.shift[i]);
            out.wigner_overlap[i] = phaselock::wigner_overlap(base, wigner_transform(moved, pg, workers));
        }
    }
    return out;
}

/// Per-(theta, t) summary row.
struct MetricsReport {
    double theta;
    double t;
    double dx;
    double dp;
    double action;
    double tile_area;
    double fringe_amplitude;
    int lobe_count;
};

inline MetricsReport compute_metrics(const WavePacketModel &model, double theta, double t,
                                     double lobe_threshold = 0.3, unsigned workers = 1) {
    const StateGrid state = model.phase_locked_state(theta, t);
    const Uncertainties u = uncertainties(state);
    const double fringe = fringe_amplitude(state.density(), state.x, model.params().r0());
    const WignerGrid W = wigner_transform(state, workers);
    return {state.theta, t,        u.dx, u.dp, u.dx * u.dp, tile_area(u),
            fringe,      lobe_count(W, lobe_threshold)};
}

/// theta = k pi / 8, k = 0..8.
inline std::vector<double> table_thetas() {
    std::vector<double> v(9);
    for (int k = 0; k < 9; ++k) {
        v[static_cast<std::size_t>(k)] = k * std::numbers::pi / 8.0;
    }
    return v;
}

} // namespace phaselock
