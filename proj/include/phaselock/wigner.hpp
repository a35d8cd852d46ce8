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
 * Wigner distribution of a sampled pure state,
 *
 *     W(x, p) = (1/pi) Int Phi*(x - y) Phi(x + y) exp(-2 i p y) dy   (hbar = 1),
 *
 * its marginals, purity and overlaps, and a lobe counter for the
 * macroscopic packet clones.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "error.hpp"
#include "fourier.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "wavepacket.hpp"

namespace phaselock {

/// W sampled on x (rows) by p (columns), row-major.
struct WignerGrid {
    UniformGrid x;
    UniformGrid p;
    std::vector<double> w;
    double theta{};
    double t{};
    double norm_captured{1.0};

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return w[i * p.size() + j];
    }
    [[nodiscard]] double max() const { return *std::max_element(w.begin(), w.end()); }
    [[nodiscard]] double min() const { return *std::min_element(w.begin(), w.end()); }
};

/// Largest |p| the x' quadrature resolves without folding: pi / (2 h).
inline double wigner_nyquist(const UniformGrid &x) { return std::numbers::pi / (2.0 * x.spacing()); }

/// Symmetric grid spanning +-width_factor sqrt(<p^2>) of the state.
inline UniformGrid auto_momentum_grid(const StateGrid &state, std::size_t np = 512,
                                      double width_factor = 5.0) {
    const double pmax = width_factor * std::sqrt(momentum_distribution(state).second_moment());
    return {-pmax, pmax, np};
}

/// Grid enclosing the auto ranges of several states, for overlap comparisons.
inline UniformGrid common_momentum_grid(const std::vector<const StateGrid *> &states,
                                        std::size_t np = 512, double width_factor = 5.0) {
    double pmax = 0.0;
    for (const auto *s : states) {
        pmax = std::max(pmax, width_factor * std::sqrt(momentum_distribution(*s).second_moment()));
    }
    return {-pmax, pmax, np};
}

inline void check_aliasing(const StateGrid &state, const UniformGrid &p_grid) {
    const double nyquist = wigner_nyquist(state.x);
    const double spectral = 5.0 * std::sqrt(momentum_distribution(state).second_moment());
    require(spectral <= nyquist, ErrorKind::Aliasing,
            "state momentum content " + std::to_string(spectral) + " exceeds the resolvable band " +
                std::to_string(nyquist) + "; refine the position grid");
    require(std::max(std::abs(p_grid.min()), std::abs(p_grid.max())) <= nyquist, ErrorKind::Aliasing,
            "momentum grid extends past the resolvable band " + std::to_string(nyquist));
}

namespace detail {

/// Index range [lo, hi] where |psi| exceeds 1e-10 of its maximum.
inline std::pair<std::size_t, std::size_t> support(const std::vector<cplx> &psi) {
    double peak = 0.0;
    for (const auto &v : psi) {
        peak = std::max(peak, std::abs(v));
    }
    const double cut = 1e-10 * peak;
    std::size_t lo = 0;
    while (lo + 1 < psi.size() && std::abs(psi[lo]) <= cut) {
        ++lo;
    }
    std::size_t hi = psi.size() - 1;
    while (hi > lo && std::abs(psi[hi]) <= cut) {
        --hi;
    }
    return {lo, hi};
}

/// Number of lags x' = k h usable at row j.
inline std::size_t lag_count(std::size_t j, std::size_t lo, std::size_t hi) {
    if (j < lo || j > hi) {
        return 0;
    }
    return std::min(j - lo, hi - j);
}

} // namespace detail

/**
 * Direct quadrature over x' = k h for every (x, p). The lag sum runs in
 * increasing k for every point and rows are independent, so the result is
 * bit-identical for any worker count.
 */
inline WignerGrid wigner_transform(const StateGrid &state, const UniformGrid &p_grid,
                                   unsigned workers = 1) {
    check_aliasing(state, p_grid);
    const std::size_t nx = state.psi.size();
    const std::size_t np = p_grid.size();
    const double h = state.x.spacing();
    const auto [lo, hi] = detail::support(state.psi);
    const std::size_t kmax = (hi - lo) / 2;

    std::vector<double> cos_table(np * kmax);
    std::vector<double> sin_table(np * kmax);
    for (std::size_t l = 0; l < np; ++l) {
        const double p = p_grid[l];
        for (std::size_t k = 1; k <= kmax; ++k) {
            const double phase = 2.0 * p * static_cast<double>(k) * h;
            cos_table[l * kmax + k - 1] = std::cos(phase);
            sin_table[l * kmax + k - 1] = std::sin(phase);
        }
    }

    WignerGrid out{state.x, p_grid, std::vector<double>(nx * np, 0.0), state.theta, state.t,
                   state.norm_captured};
    const double pref = h / std::numbers::pi;
    parallel_for(nx, workers, [&, lo = lo, hi = hi](std::size_t j) {
        const std::size_t kj = detail::lag_count(j, lo, hi);
        std::vector<double> fr(kj);
        std::vector<double> fi(kj);
        for (std::size_t k = 1; k <= kj; ++k) {
            const cplx f = std::conj(state.psi[j - k]) * state.psi[j + k];
            fr[k - 1] = f.real();
            fi[k - 1] = f.imag();
        }
        const double diag = std::norm(state.psi[j]);
        double *row = out.w.data() + j * np;
        for (std::size_t l = 0; l < np; ++l) {
            const double *c = cos_table.data() + l * kmax;
            const double *s = sin_table.data() + l * kmax;
            double acc = 0.0;
            for (std::size_t k = 0; k < kj; ++k) {
                acc += fr[k] * c[k] + fi[k] * s[k];
            }
            row[l] = pref * (diag + 2.0 * acc);
        }
    });
    return out;
}

inline WignerGrid wigner_transform(const StateGrid &state, unsigned workers = 1) {
    return wigner_transform(state, auto_momentum_grid(state), workers);
}

/// p_l = (l - K/2) pi / (K h): the grid on which the lag sum is a length-K DFT.
inline UniformGrid dft_momentum_grid(const UniformGrid &x, std::size_t count) {
    require(count >= 2 && count % 2 == 0, ErrorKind::InvalidParameter,
            "DFT momentum grid needs an even point count");
    const double step = std::numbers::pi / (static_cast<double>(count) * x.spacing());
    const double half = static_cast<double>(count / 2);
    return {-half * step, (half - 1.0) * step, count};
}

/// Same quantity as wigner_transform on dft_momentum_grid(state.x, count), one FFT per row.
inline WignerGrid wigner_transform_dft(const StateGrid &state, std::size_t count,
                                       unsigned workers = 1) {
    const UniformGrid p_grid = dft_momentum_grid(state.x, count);
    const std::size_t nx = state.psi.size();
    const double h = state.x.spacing();
    const auto [lo, hi] = detail::support(state.psi);
    require((hi - lo) / 2 < count / 2, ErrorKind::Aliasing,
            "state support needs more lags than the DFT length provides");

    WignerGrid out{state.x, p_grid, std::vector<double>(nx * count, 0.0), state.theta, state.t,
                   state.norm_captured};
    const double pref = h / std::numbers::pi;
    parallel_for(nx, workers, [&, lo = lo, hi = hi](std::size_t j) {
        const std::size_t kj = detail::lag_count(j, lo, hi);
        std::vector<cplx> lags(count, cplx{});
        lags[0] = std::norm(state.psi[j]);
        for (std::size_t k = 1; k <= kj; ++k) {
            const cplx f = std::conj(state.psi[j - k]) * state.psi[j + k];
            lags[k] = f;
            lags[count - k] = std::conj(f);
        }
        Eigen::FFT<double> fft;
        std::vector<cplx> spectrum;
        fft.fwd(spectrum, lags);
        for (std::size_t l = 0; l < count; ++l) {
            const std::size_t bin = (l + count / 2) % count;
            out.w[j * count + l] = pref * spectrum[bin].real();
        }
    });
    return out;
}

struct Marginals {
    std::vector<double> position;
    std::vector<double> momentum;
};

inline Marginals marginals(const WignerGrid &W) {
    const std::size_t nx = W.x.size();
    const std::size_t np = W.p.size();
    Marginals out{std::vector<double>(nx), std::vector<double>(np)};
    std::vector<double> buf;
    for (std::size_t i = 0; i < nx; ++i) {
        out.position[i] = trapezoid({W.w.data() + i * np, np}, W.p.spacing());
    }
    buf.resize(nx);
    for (std::size_t j = 0; j < np; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            buf[i] = W(i, j);
        }
        out.momentum[j] = trapezoid(buf, W.x.spacing());
    }
    return out;
}

namespace detail {

/// 2D trapezoid of f(W1(i,j), W2(i,j)), rows first.
template <typename F>
double integrate2(const WignerGrid &a, const WignerGrid &b, F &&f) {
    const std::size_t nx = a.x.size();
    const std::size_t np = a.p.size();
    std::vector<double> row(np);
    std::vector<double> col(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < np; ++j) {
            row[j] = f(a.w[i * np + j], b.w[i * np + j]);
        }
        col[i] = trapezoid(row, a.p.spacing());
    }
    return trapezoid(col, a.x.spacing());
}

} // namespace detail

inline double integral(const WignerGrid &W) {
    return detail::integrate2(W, W, [](double v, double) { return v; });
}

/// 2 pi Int W^2; equals 1 for a pure state.
inline double purity(const WignerGrid &W) {
    return 2.0 * std::numbers::pi * detail::integrate2(W, W, [](double a, double b) { return a * b; });
}

/// 2 pi Int W1 W2 = |<Phi1|Phi2>|^2 for pure states.
inline double wigner_overlap(const WignerGrid &W1, const WignerGrid &W2) {
    require(W1.x == W2.x && W1.p == W2.p && W1.w.size() == W2.w.size(), ErrorKind::Shape,
            "Wigner overlap needs identical grids");
    return 2.0 * std::numbers::pi *
           detail::integrate2(W1, W2, [](double a, double b) { return a * b; });
}

struct PhaseSpaceMoments {
    double mean_x, sigma_x, mean_p, sigma_p;
};

inline PhaseSpaceMoments moments(const WignerGrid &W) {
    const auto m = marginals(W);
    auto stats = [](const std::vector<double> &rho, const UniformGrid &g) {
        std::vector<double> f0(rho.size()), f1(rho.size()), f2(rho.size());
        for (std::size_t i = 0; i < rho.size(); ++i) {
            f0[i] = rho[i];
            f1[i] = rho[i] * g[i];
            f2[i] = rho[i] * g[i] * g[i];
        }
        const double n = trapezoid(f0, g.spacing());
        const double mean = trapezoid(f1, g.spacing()) / n;
        const double var = trapezoid(f2, g.spacing()) / n - mean * mean;
        return std::pair{mean, std::sqrt(std::max(var, 0.0))};
    };
    const auto [mx, sx] = stats(m.position, W.x);
    const auto [mp, sp] = stats(m.momentum, W.p);
    return {mx, sx, mp, sp};
}

/// One macroscopic lobe: basin mass (probability units) and peak location.
struct Lobe {
    double mass;
    double peak;
    double x;
    double p;
};

struct LobeOptions {
    /// Minimum peak-to-saddle drop, as a fraction of the global maximum.
    double prominence = 0.02;
    /// Smoothing widths; non-positive values derive a minimum-uncertainty
    /// cell (sigma_x sigma_p = 1/2) with the aspect ratio of the state.
    double sigma_x = 0.0;
    double sigma_p = 0.0;
    /// Kernel truncation in standard deviations.
    double truncate = 4.0;
};

namespace detail {

inline std::vector<double> gaussian_kernel(double sigma_px, double truncate) {
    if (sigma_px < 0.5) {
        return {1.0};
    }
    const auto radius = static_cast<std::ptrdiff_t>(std::ceil(truncate * sigma_px));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (i / sigma_px) * (i / sigma_px));
        k[static_cast<std::size_t>(i + radius)] = v;
        total += v;
    }
    for (double &v : k) {
        v /= total;
    }
    return k;
}

/// Separable convolution with zero padding; axis 0 = rows (x), axis 1 = columns (p).
inline std::vector<double> convolve_axis(const std::vector<double> &in, std::size_t nx,
                                         std::size_t np, const std::vector<double> &kernel,
                                         int axis) {
    if (kernel.size() == 1) {
        return in;
    }
    const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    std::vector<double> out(in.size(), 0.0);
    const auto n_along = static_cast<std::ptrdiff_t>(axis == 0 ? nx : np);
    const std::size_t n_across = axis == 0 ? np : nx;
    for (std::size_t a = 0; a < n_across; ++a) {
        for (std::ptrdiff_t i = 0; i < n_along; ++i) {
            double acc = 0.0;
            const std::ptrdiff_t k0 = std::max<std::ptrdiff_t>(-radius, -i);
            const std::ptrdiff_t k1 = std::min<std::ptrdiff_t>(radius, n_along - 1 - i);
            for (std::ptrdiff_t k = k0; k <= k1; ++k) {
                const std::size_t src = axis == 0 ? static_cast<std::size_t>(i + k) * np + a
                                                  : a * np + static_cast<std::size_t>(i + k);
                acc += kernel[static_cast<std::size_t>(k + radius)] * in[src];
            }
            const std::size_t dst =
                axis == 0 ? static_cast<std::size_t>(i) * np + a : a * np + static_cast<std::size_t>(i);
            out[dst] = acc;
        }
    }
    return out;
}

} // namespace detail

/**
 * W smoothed by a Gaussian whose widths form a minimum-uncertainty cell.
 * This removes sub-Planck interference tiles and keeps the packet lobes.
 */
inline WignerGrid coarse_grain(const WignerGrid &W, const LobeOptions &opt = {}) {
    double sx = opt.sigma_x;
    double sp = opt.sigma_p;
    if (sx <= 0.0 || sp <= 0.0) {
        const auto mom = moments(W);
        require(mom.sigma_x > 0.0 && mom.sigma_p > 0.0, ErrorKind::Degenerate,
                "Wigner grid has no spread to derive a smoothing cell from");
        sx = std::sqrt(mom.sigma_x / (2.0 * mom.sigma_p));
        sp = std::sqrt(mom.sigma_p / (2.0 * mom.sigma_x));
    }
    const auto kx = detail::gaussian_kernel(sx / W.x.spacing(), opt.truncate);
    const auto kp = detail::gaussian_kernel(sp / W.p.spacing(), opt.truncate);
    WignerGrid out = W;
    out.w = detail::convolve_axis(detail::convolve_axis(W.w, W.x.size(), W.p.size(), kx, 0),
                                  W.x.size(), W.p.size(), kp, 1);
    return out;
}

/**
 * Lobes of the coarse-grained distribution. Pixels are flooded in order of
 * decreasing value (4-neighbour union-find). When two components meet, the
 * lower one becomes a separate lobe if its peak stands at least
 * `prominence * max` above the meeting level; otherwise it is absorbed.
 * A lobe's mass is the smoothed probability collected before it merged.
 */
inline std::vector<Lobe> find_lobes(const WignerGrid &W, const LobeOptions &opt = {}) {
    const WignerGrid q = coarse_grain(W, opt);
    const std::size_t nx = q.x.size();
    const std::size_t np = q.p.size();
    const std::size_t n = q.w.size();
    const double top = q.max();
    require(top > 0.0, ErrorKind::Degenerate, "Wigner grid has no positive region");
    const double cell = q.x.spacing() * q.p.spacing();

    std::vector<std::uint32_t> order;
    order.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (q.w[i] > 0.0) {
            order.push_back(static_cast<std::uint32_t>(i));
        }
    }
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return q.w[a] != q.w[b] ? q.w[a] > q.w[b] : a < b;
    });

    constexpr std::uint32_t kUnset = 0xFFFFFFFFU;
    std::vector<std::uint32_t> parent(n, kUnset);
    std::vector<double> mass(n, 0.0);
    std::vector<std::uint32_t> peak_at(n, 0);
    auto find = [&](std::uint32_t a) {
        std::uint32_t r = a;
        while (parent[r] != r) {
            r = parent[r];
        }
        while (parent[a] != r) {
            const std::uint32_t next = parent[a];
            parent[a] = r;
            a = next;
        }
        return r;
    };
    auto make_lobe = [&](std::uint32_t root) {
        const std::uint32_t at = peak_at[root];
        return Lobe{mass[root] * cell, q.w[at], q.x[at / np], q.p[at % np]};
    };

    std::vector<Lobe> lobes;
    const double min_drop = opt.prominence * top;
    for (const std::uint32_t idx : order) {
        const double v = q.w[idx];
        const std::size_t i = idx / np;
        const std::size_t j = idx % np;
        std::uint32_t roots[4];
        int nroots = 0;
        auto visit = [&](std::size_t a) {
            if (parent[a] == kUnset) {
                return;
            }
            const std::uint32_t r = find(static_cast<std::uint32_t>(a));
            for (int k = 0; k < nroots; ++k) {
                if (roots[k] == r) {
                    return;
                }
            }
            roots[nroots++] = r;
        };
        if (i > 0) visit(idx - np);
        if (i + 1 < nx) visit(idx + np);
        if (j > 0) visit(idx - 1);
        if (j + 1 < np) visit(idx + 1);

        if (nroots == 0) {
            parent[idx] = idx;
            mass[idx] = v;
            peak_at[idx] = idx;
            continue;
        }
        std::sort(roots, roots + nroots, [&](std::uint32_t a, std::uint32_t b) {
            const double pa = q.w[peak_at[a]];
            const double pb = q.w[peak_at[b]];
            return pa != pb ? pa > pb : a < b;
        });
        const std::uint32_t keep = roots[0];
        for (int k = 1; k < nroots; ++k) {
            const std::uint32_t r = roots[k];
            if (q.w[peak_at[r]] - v >= min_drop) {
                lobes.push_back(make_lobe(r));
            } else {
                mass[keep] += mass[r];
            }
            parent[r] = keep;
        }
        parent[idx] = keep;
        mass[keep] += v;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (parent[i] == i && q.w[peak_at[i]] >= min_drop) {
            lobes.push_back(make_lobe(static_cast<std::uint32_t>(i)));
        }
    }
    std::sort(lobes.begin(), lobes.end(), [](const Lobe &a, const Lobe &b) {
        return a.mass != b.mass ? a.mass > b.mass : a.x < b.x;
    });
    return lobes;
}

/// Number of lobes whose mass is at least `threshold_fraction` of the heaviest lobe.
inline int lobe_count(const std::vector<Lobe> &lobes, double threshold_fraction = 0.3) {
    require(threshold_fraction > 0.0 && threshold_fraction < 1.0, ErrorKind::InvalidParameter,
            "lobe threshold must lie in (0, 1)");
    require(!lobes.empty(), ErrorKind::Degenerate, "no lobes found");
    const double heaviest = lobes.front().mass;
    return static_cast<int>(std::count_if(lobes.begin(), lobes.end(), [&](const Lobe &l) {
        return l.mass >= threshold_fraction * heaviest;
    }));
}

inline int lobe_count(const WignerGrid &W, double threshold_fraction = 0.3,
                      const LobeOptions &opt = {}) {
    require(threshold_fraction > 0.0 && threshold_fraction < 1.0, ErrorKind::InvalidParameter,
            "lobe threshold must lie in (0, 1)");
    return lobe_count(find_lobes(W, opt), threshold_fraction);
}

} // namespace phaselock
