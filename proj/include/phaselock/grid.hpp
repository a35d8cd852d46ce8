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
 * Uniform one-dimensional grids and the fixed-order quadratures used on them.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "error.hpp"

namespace phaselock {

using cplx = std::complex<double>;

/// Uniformly spaced, strictly increasing sample points including both ends.
class UniformGrid {
  public:
    UniformGrid() = default;

    UniformGrid(double lo, double hi, std::size_t n) : lo_(lo), hi_(hi), n_(n) {
        require(n >= 2, ErrorKind::InvalidParameter, "grid needs at least 2 points");
        require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, ErrorKind::InvalidParameter,
                "grid bounds must be finite and increasing");
    }

    [[nodiscard]] double min() const noexcept { return lo_; }
    [[nodiscard]] double max() const noexcept { return hi_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double spacing() const noexcept {
        return (hi_ - lo_) / static_cast<double>(n_ - 1);
    }
    [[nodiscard]] double operator[](std::size_t i) const noexcept {
        // Interpolate from both ends so the last point is exactly hi_.
        const double f = static_cast<double>(i) / static_cast<double>(n_ - 1);
        return lo_ * (1.0 - f) + hi_ * f;
    }
    [[nodiscard]] std::vector<double> values() const {
        std::vector<double> v(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            v[i] = (*this)[i];
        }
        return v;
    }

    friend bool operator==(const UniformGrid &, const UniformGrid &) = default;

  private:
    double lo_{0.0};
    double hi_{1.0};
    std::size_t n_{2};
};

/// Trapezoid rule with uniform spacing, summed left to right.
inline double trapezoid(std::span<const double> f, double h) {
    if (f.size() < 2) {
        return 0.0;
    }
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        s += f[i];
    }
    return s * h;
}

inline double norm_squared(std::span<const cplx> psi, double h) {
    std::vector<double> rho(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        rho[i] = std::norm(psi[i]);
    }
    return trapezoid(rho, h);
}

/// Trapezoid approximation of <a|b>.
inline cplx inner_product(std::span<const cplx> a, std::span<const cplx> b, double h) {
    require(a.size() == b.size(), ErrorKind::Shape, "inner product of unequal lengths");
    const std::size_t n = a.size();
    if (n < 2) {
        return {};
    }
    cplx s = 0.5 * (std::conj(a[0]) * b[0] + std::conj(a[n - 1]) * b[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s * h;
}

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

} // namespace phaselock
