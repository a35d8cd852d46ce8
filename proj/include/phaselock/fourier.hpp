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
 * Momentum-space view of a sampled wave function via the discrete Fourier
 * transform.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "grid.hpp"
#include "wavepacket.hpp"

namespace phaselock {

/// Momentum probabilities p_n = 2 pi n / (N h), n in FFT order, normalized to sum 1.
struct MomentumDistribution {
    std::vector<double> p;
    std::vector<double> probability;

    [[nodiscard]] double mean() const {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            s += probability[i] * p[i];
        }
        return s;
    }
    [[nodiscard]] double second_moment() const {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            s += probability[i] * p[i] * p[i];
        }
        return s;
    }
};

inline MomentumDistribution momentum_distribution(const StateGrid &state) {
    const std::size_t n = state.psi.size();
    const double h = state.x.spacing();
    Eigen::FFT<double> fft;
    std::vector<cplx> spectrum;
    fft.fwd(spectrum, state.psi);
    MomentumDistribution out;
    out.p.resize(n);
    out.probability.resize(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double idx = k < (n + 1) / 2 ? static_cast<double>(k)
                                           : static_cast<double>(k) - static_cast<double>(n);
        out.p[k] = 2.0 * std::numbers::pi * idx / (static_cast<double>(n) * h);
        out.probability[k] = std::norm(spectrum[k]);
        total += out.probability[k];
    }
    for (double &v : out.probability) {
        v /= total;
    }
    return out;
}

} // namespace phaselock
