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
 * SU(2) coherent-state amplitudes, the even/odd subsidiary packets and the
 * phase-locked superposition
 *
 *     Phi_theta = [(1 - e^{i theta}) Phi_even + (1 + e^{i theta}) Phi_odd] / 2.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "error.hpp"
#include "grid.hpp"
#include "morse.hpp"

namespace phaselock {

/**
 * Amplitudes over levels 0..N. `d_even` and `d_odd` have the same length as
 * `c` and hold zeros on the opposite parity; each is renormalized to unit
 * sum of squares.
 */
struct CoefficientSet {
    int N{};
    double alpha{};
    std::vector<double> c;
    std::vector<double> d_even;
    std::vector<double> d_odd;
    double even_weight{}; ///< sum of c_m^2 over even m before renormalization
};

/// c_m = sqrt(C(N, m)) alpha^m / (1 + alpha^2)^(N/2), evaluated through log-gamma.
inline CoefficientSet su2_coefficients(double alpha, int N) {
    require(N >= 1, ErrorKind::InvalidParameter, "SU(2) coherent state needs N >= 1");
    require(std::isfinite(alpha), ErrorKind::InvalidParameter, "alpha must be finite");
    CoefficientSet set;
    set.N = N;
    set.alpha = alpha;
    set.c.assign(static_cast<std::size_t>(N) + 1, 0.0);
    if (alpha == 0.0) {
        set.c[0] = 1.0;
        return set;
    }
    const double log_alpha = std::log(std::abs(alpha));
    const double log_den = 0.5 * N * std::log1p(alpha * alpha);
    const double log_nfact = std::lgamma(N + 1.0);
    double total = 0.0;
    for (int m = 0; m <= N; ++m) {
        const double log_binom = log_nfact - std::lgamma(m + 1.0) - std::lgamma(N - m + 1.0);
        double v = std::exp(0.5 * log_binom + m * log_alpha - log_den);
        if (alpha < 0 && (m % 2) == 1) {
            v = -v;
        }
        set.c[static_cast<std::size_t>(m)] = v;
        total += v * v;
    }
    const double scale = 1.0 / std::sqrt(total);
    for (double &v : set.c) {
        v *= scale;
    }
    return set;
}

inline CoefficientSet split_even_odd(CoefficientSet set) {
    const std::size_t n = set.c.size();
    set.d_even.assign(n, 0.0);
    set.d_odd.assign(n, 0.0);
    double even = 0.0;
    double odd = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double v = set.c[m];
        if (m % 2 == 0) {
            set.d_even[m] = v;
            even += v * v;
        } else {
            set.d_odd[m] = v;
            odd += v * v;
        }
    }
    require(even > 0.0 && odd > 0.0, ErrorKind::DegenerateSplit,
            "coefficient set has no weight on " + std::string(even > 0.0 ? "odd" : "even") +
                " levels");
    set.even_weight = even;
    const double se = 1.0 / std::sqrt(even);
    const double so = 1.0 / std::sqrt(odd);
    for (std::size_t m = 0; m < n; ++m) {
        set.d_even[m] *= se;
        set.d_odd[m] *= so;
    }
    return set;
}

enum class Parity { Even, Odd };

inline double reduce_phase(double theta) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(theta, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    return r;
}

struct StateProvenance {
    double lambda{};
    double alpha{};
    int n_levels{};
    std::string component; ///< "phase-locked", "even" or "odd"
};

/// Complex wave function samples at a single (theta, t).
struct StateGrid {
    UniformGrid x;
    std::vector<cplx> psi;
    double theta{};
    double t{};
    double norm_captured{1.0};
    StateProvenance provenance;

    [[nodiscard]] std::vector<double> density() const {
        std::vector<double> rho(psi.size());
        for (std::size_t i = 0; i < psi.size(); ++i) {
            rho[i] = std::norm(psi[i]);
        }
        return rho;
    }
    [[nodiscard]] double norm() const { return norm_squared(psi, x.spacing()); }
};

struct PhaseCircle {
    double even;
    double odd;
    double cross;
};

/// Weights of |Phi_even|^2, |Phi_odd|^2 and i(Phi_odd Phi_even* - Phi_even Phi_odd*).
inline PhaseCircle phase_circle_coeffs(double theta) {
    return {(1.0 - std::cos(theta)) / 2.0, (1.0 + std::cos(theta)) / 2.0, std::sin(theta) / 2.0};
}

struct DensityDecomposition {
    std::vector<double> even_part;
    std::vector<double> odd_part;
    std::vector<double> cross_part;
};

/**
 * Immutable eigen-expansion of the phase-locked packet on a fixed grid. All
 * member functions are const and safe to call concurrently.
 */
class WavePacketModel {
  public:
    WavePacketModel(const MorseParams &params, CoefficientSet coefficients, const UniformGrid &grid)
        : params_(params), coefficients_(std::move(coefficients)) {
        require(coefficients_.N + 1 <= params_.bound_state_count(), ErrorKind::Domain,
                "coefficient set spans " + std::to_string(coefficients_.N + 1) +
                    " levels but the well holds " + std::to_string(params_.bound_state_count()));
        if (coefficients_.d_even.empty()) {
            coefficients_ = split_even_odd(std::move(coefficients_));
        }
        table_ = build_eigen_table(params_, coefficients_.N + 1, grid);
    }

    /// I2 parameters, alpha = 2, 24 levels, default grid.
    static WavePacketModel iodine_default() {
        return {MorseParams::iodine(), su2_coefficients(2.0, 23), default_position_grid()};
    }

    [[nodiscard]] const MorseParams &params() const noexcept { return params_; }
    [[nodiscard]] const CoefficientSet &coefficients() const noexcept { return coefficients_; }
    [[nodiscard]] const EigenTable &eigen_table() const noexcept { return table_; }
    [[nodiscard]] const UniformGrid &grid() const noexcept { return table_.grid; }
    [[nodiscard]] CharacteristicTimes times() const { return characteristic_times(params_); }

    /// Sum_m d_m psi_m(x) exp(-i E_m t) over arbitrary amplitudes, in fixed m order.
    [[nodiscard]] std::vector<cplx> expand(const std::vector<double> &amplitudes, double t) const {
        const std::size_t nx = table_.grid.size();
        std::vector<cplx> out(nx, cplx{});
        for (std::size_t m = 0; m < amplitudes.size() && m < table_.levels(); ++m) {
            if (amplitudes[m] == 0.0) {
                continue;
            }
            const double phase = table_.energies[m] * t;
            const cplx w = amplitudes[m] * cplx(std::cos(phase), -std::sin(phase));
            const auto &row = table_.psi[m];
            for (std::size_t i = 0; i < nx; ++i) {
                out[i] += w * row[i];
            }
        }
        return out;
    }

    [[nodiscard]] StateGrid subsidiary_state(Parity parity, double t) const {
        const auto &d = parity == Parity::Even ? coefficients_.d_even : coefficients_.d_odd;
        StateGrid s = make_state(expand(d, t), 0.0, t);
        s.provenance.component = parity == Parity::Even ? "even" : "odd";
        return s;
    }

    [[nodiscard]] StateGrid phase_locked_state(double theta, double t) const {
        theta = reduce_phase(theta);
        const cplx e(std::cos(theta), std::sin(theta));
        const cplx a = (1.0 - e) / 2.0;
        const cplx b = (1.0 + e) / 2.0;
        const auto even = expand(coefficients_.d_even, t);
        const auto odd = expand(coefficients_.d_odd, t);
        std::vector<cplx> psi(even.size());
        for (std::size_t i = 0; i < psi.size(); ++i) {
            psi[i] = a * even[i] + b * odd[i];
        }
        StateGrid s = make_state(std::move(psi), theta, t);
        s.provenance.component = "phase-locked";
        return s;
    }

    [[nodiscard]] std::vector<double> density(double theta, double t) const {
        return phase_locked_state(theta, t).density();
    }

    [[nodiscard]] DensityDecomposition density_decomposition(double theta, double t) const {
        const PhaseCircle k = phase_circle_coeffs(reduce_phase(theta));
        const auto even = expand(coefficients_.d_even, t);
        const auto odd = expand(coefficients_.d_odd, t);
        DensityDecomposition out;
        const std::size_t n = even.size();
        out.even_part.resize(n);
        out.odd_part.resize(n);
        out.cross_part.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.even_part[i] = k.even * std::norm(even[i]);
            out.odd_part[i] = k.odd * std::norm(odd[i]);
            // i (Phi_o Phi_e* - Phi_e Phi_o*) = -2 Im(Phi_o Phi_e*)
            out.cross_part[i] = -2.0 * k.cross * std::imag(odd[i] * std::conj(even[i]));
        }
        return out;
    }

    [[nodiscard]] StateProvenance provenance() const {
        return {params_.lambda(), coefficients_.alpha, coefficients_.N + 1, ""};
    }

  private:
    [[nodiscard]] StateGrid make_state(std::vector<cplx> psi, double theta, double t) const {
        StateGrid s;
        s.x = table_.grid;
        s.psi = std::move(psi);
        s.theta = theta;
        s.t = t;
        s.norm_captured = table_.min_captured_norm();
        s.provenance = provenance();
        return s;
    }

    MorseParams params_;
    CoefficientSet coefficients_;
    EigenTable table_;
};

} // namespace phaselock
