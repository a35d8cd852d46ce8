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

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "phaselock/morse.hpp"
#include "support/test_support.hpp"

using namespace phaselock;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const MorseParams kIodine = MorseParams::iodine();

// Explicit finite sum in extended precision: L_m^(a)(z) = sum_k (-1)^k [prod_{j=k+1..m} (a+j)] / (m-k)! z^k / k!.
double laguerre_by_sum(int m, double a, double z) {
    long double total = 0.0L;
    for (int k = 0; k <= m; ++k) {
        long double binom = 1.0L;
        for (int j = k + 1; j <= m; ++j) {
            binom *= (a + j);
        }
        binom /= std::tgamma(m - k + 1.0L);
        total += ((k % 2 == 0) ? 1.0L : -1.0L) * binom * std::pow(static_cast<long double>(z), k) /
                 std::tgamma(k + 1.0L);
    }
    return static_cast<double>(total);
}

} // namespace

TEST_CASE("depth parameter from molecular constants", "[morse]") {
    CHECK_THAT(MorseParams::derive_lambda(2.828427, 2, 1, 2), WithinAbs(1.0, 1e-6));
    const double expected = 5.03 * std::sqrt(2.0 * 1.156e5 * 0.057) / 4.954;
    CHECK_THAT(kIodine.lambda(), WithinRel(expected, 1e-14));
    CHECK_THAT(kIodine.lambda(), WithinAbs(116.56, 0.01));
    CHECK(kIodine.bound_state_count() == 117);

    const MorseParams shallow(1.0, 0.5, 1.0, 0.5);
    CHECK_THAT(shallow.lambda(), WithinAbs(std::sqrt(0.5), 1e-12));
    CHECK(shallow.bound_state_count() == 1);
}

TEST_CASE("nonpositive molecular constants are rejected", "[morse][errors]") {
    for (const auto &bad : std::vector<std::array<double, 4>>{
             {0, 1, 1, 1}, {1, -1, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, -0.1}}) {
        try {
            MorseParams::derive_lambda(bad[0], bad[1], bad[2], bad[3]);
            FAIL("expected an invalid-parameter error");
        } catch (const Error &e) {
            CHECK(e.kind() == ErrorKind::InvalidParameter);
        }
        CHECK_THROWS_AS(MorseParams(bad[0], bad[1], bad[2], bad[3]), Error);
    }
}

TEST_CASE("bound-state energies", "[morse]") {
    const MorseParams unit(std::sqrt(8.0), 2.0, 1.0, 2.0); // lambda = 1
    CHECK_THAT(unit.lambda(), WithinAbs(1.0, 1e-14));
    CHECK_THAT(energy(unit, 0), WithinRel(-2.0 / 4.0, 1e-14));
    CHECK_THAT(energy(kIodine, 0), WithinAbs(-0.05651, 5e-6));

    // Anharmonic-oscillator form: E = -D + w (m+1/2) - w^2 (m+1/2)^2 / (4D), w = beta sqrt(2D/M).
    const double D = kIodine.dissociation();
    const double w = kIodine.beta() * std::sqrt(2.0 * D / (kIodine.mu() * kIodine.r0() * kIodine.r0()));
    for (int m = 0; m <= kIodine.max_level(); ++m) {
        const double n = m + 0.5;
        CHECK_THAT(energy(kIodine, m), WithinRel(-D + w * n - w * w * n * n / (4.0 * D), 1e-9));
        CHECK(energy(kIodine, m) < 0.0);
        if (m > 0) {
            CHECK(energy(kIodine, m) > energy(kIodine, m - 1));
        }
        CHECK(level_exponent(kIodine, m) > 0.0);
    }
}

TEST_CASE("levels outside the bound range are domain errors", "[morse][errors]") {
    for (int m : {-1, 117, 500}) {
        try {
            (void)energy(kIodine, m);
            FAIL("expected a domain error");
        } catch (const Error &e) {
            CHECK(e.kind() == ErrorKind::Domain);
        }
    }
    CHECK_THROWS_AS(build_eigen_table(kIodine, 118, default_position_grid()), Error);
}

TEST_CASE("classical and revival periods", "[morse]") {
    const MorseParams unit(std::sqrt(4.0 * std::numbers::pi), 1.0, 1.0, 2.0 * std::numbers::pi);
    const auto tu = characteristic_times(unit);
    CHECK_THAT(tu.revival, WithinRel(1.0, 1e-12));
    CHECK_THAT(tu.classical, WithinRel(1.0, 1e-12));

    const auto t = characteristic_times(kIodine);
    const double lam = kIodine.lambda();
    CHECK_THAT(t.revival, WithinRel(2 * std::numbers::pi * lam * lam / 0.057, 1e-14));
    CHECK_THAT(t.revival, WithinAbs(1.498e6, 1.5e3));
    CHECK_THAT(t.classical, WithinAbs(6.45e3, 10.0));
    CHECK_THAT(t.revival * kAtomicTimeSeconds * 1e12, WithinAbs(36.2, 0.2));
    CHECK_THAT(t.classical * kAtomicTimeSeconds * 1e15, WithinAbs(156.0, 1.0));
    CHECK_THAT(t.revival / t.classical, WithinRel(2 * lam - 1, 1e-14));
    CHECK_THAT(t.revival * (2 * lam - 1), WithinRel(t.classical * (2 * lam - 1) * (2 * lam - 1), 1e-14));
}

TEST_CASE("Laguerre recurrence in log space matches the explicit sum", "[morse]") {
    for (int m : {0, 1, 2, 3, 5, 8}) {
        for (double a : {0.5, 10.0, 210.0}) {
            for (double z : {0.3, 5.0, 120.0, 260.0}) {
                const double ref = laguerre_by_sum(m, a, z);
                const auto [log_abs, sign] = detail::log_laguerre(m, a, z);
                CHECK_THAT(sign * std::exp(log_abs), WithinRel(ref, 1e-9));
            }
        }
    }
}

TEST_CASE("eigenfunctions on the default grid", "[morse]") {
    const UniformGrid grid = default_position_grid();
    const EigenTable table = build_eigen_table(kIodine, 24, grid);
    const double h = grid.spacing();

    SECTION("ground state is nodeless with a single maximum near the minimum") {
        const auto &psi = table.psi[0];
        CHECK(testing::sign_changes(psi, 1e-12) == 0);
        std::size_t peak = 0;
        int maxima = 0;
        for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
            if (std::abs(psi[i]) > std::abs(psi[peak])) {
                peak = i;
            }
            if (std::abs(psi[i]) > std::abs(psi[i - 1]) && std::abs(psi[i]) >= std::abs(psi[i + 1]) &&
                std::abs(psi[i]) > 1e-6) {
                ++maxima;
            }
        }
        CHECK(maxima == 1);
        CHECK(std::abs(grid[peak]) < 0.01);
    }

    SECTION("level m has exactly m nodes") {
        for (int m = 0; m < 24; ++m) {
            const auto &psi = table.psi[static_cast<std::size_t>(m)];
            double peak = 0.0;
            for (double v : psi) {
                peak = std::max(peak, std::abs(v));
            }
            CHECK(testing::sign_changes(psi, 1e-8 * peak) == m);
        }
    }

    SECTION("orthonormal within 1e-6 and fully captured") {
        double worst = 0.0;
        for (std::size_t m = 0; m < 24; ++m) {
            CHECK(table.captured_norms[m] > 1.0 - 1e-8);
            for (double v : table.psi[m]) {
                REQUIRE(std::isfinite(v));
            }
            for (std::size_t n = 0; n < 24; ++n) {
                std::vector<double> prod(grid.size());
                for (std::size_t i = 0; i < prod.size(); ++i) {
                    prod[i] = table.psi[m][i] * table.psi[n][i];
                }
                worst = std::max(worst, std::abs(trapezoid(prod, h) - (m == n ? 1.0 : 0.0)));
            }
        }
        CHECK(worst < 1e-6);
        std::vector<double> p37(grid.size());
        for (std::size_t i = 0; i < p37.size(); ++i) {
            p37[i] = table.psi[3][i] * table.psi[7][i];
        }
        CHECK(std::abs(trapezoid(p37, h)) < 1e-6);
    }
}

TEST_CASE("energies agree with the finite-difference Rayleigh quotient", "[morse]") {
    const UniformGrid fine(-0.25, 0.45, 4096);
    for (int m : {0, 5, 12, 23}) {
        const auto samples = evaluate_eigenfunction(kIodine, m, fine);
        const double rq = testing::rayleigh_quotient(kIodine, samples.values, fine);
        CHECK(std::abs(rq - energy(kIodine, m)) / std::abs(energy(kIodine, m)) < 1e-3);
    }
}

TEST_CASE("narrow grids report the captured norm", "[morse][errors]") {
    const auto wide = evaluate_eigenfunction(kIodine, 10, default_position_grid());
    CHECK_FALSE(wide.truncated());
    const auto narrow = evaluate_eigenfunction(kIodine, 10, UniformGrid(-0.03, 0.03, 256));
    CHECK(narrow.truncated());
    CHECK(narrow.captured_norm < 0.9);
    std::vector<double> sq(narrow.values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) {
        sq[i] = narrow.values[i] * narrow.values[i];
    }
    CHECK_THAT(trapezoid(sq, UniformGrid(-0.03, 0.03, 256).spacing()), WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(evaluate_eigenfunction(kIodine, 0, UniformGrid(-0.2, 0.4, 15)), Error);
}
