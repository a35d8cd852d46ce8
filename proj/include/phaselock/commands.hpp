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
 * Scenario commands. Every command stages its files under temporary names
 * and renames them only after all outputs were produced, so a failure
 * leaves no partial results behind.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "analysis.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "gridfile.hpp"
#include "morse.hpp"
#include "wavepacket.hpp"
#include "wigner.hpp"

namespace phaselock {

/// Reference tile areas at theta = k pi / 8 for T_rev/8 and T_rev/16.
inline constexpr std::array<double, 9> kReferenceTileEighth{0.185, 0.148, 0.108, 0.089, 0.083,
                                                            0.089, 0.109, 0.157, 0.210};
inline constexpr std::array<double, 9> kReferenceTileSixteenth{
    0.0766, 0.0769, 0.0776, 0.0786, 0.0800, 0.0814, 0.0827, 0.0835, 0.0837};
/// Reference fringe amplitudes (per bohr of r) at T_rev/8, theta = k pi / 8.
inline constexpr std::array<double, 9> kReferenceFringe{0.0,  0.305, 1.14, 2.39, 3.85,
                                                        5.31, 6.54,  7.35, 7.63};
inline constexpr double kTileTolerance = 0.15;

struct CommandResult {
    std::vector<std::filesystem::path> files;
};

/// Files staged as "<name>.partial" until commit(); uncommitted files are removed.
class OutputSet {
  public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        require(!ec, ErrorKind::Format, "cannot create output directory " + dir_.string());
    }
    OutputSet(const OutputSet &) = delete;
    OutputSet &operator=(const OutputSet &) = delete;
    ~OutputSet() {
        if (!committed_) {
            std::error_code ec;
            for (const auto &f : staged_) {
                std::filesystem::remove(partial(f), ec);
            }
        }
    }

    void text(const std::string &name, const std::string &content) {
        const auto path = stage(name);
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        os << content;
        os.flush();
        require(static_cast<bool>(os), ErrorKind::Format, "write failed for " + path.string());
    }

    void grid(const std::string &name, const GridFile &g) { write_grid(stage(name), g); }

    CommandResult commit() {
        CommandResult result;
        std::error_code ec;
        for (const auto &f : staged_) {
            std::filesystem::rename(partial(f), f, ec);
            if (ec) {
                for (const auto &done : result.files) {
                    std::error_code ignored;
                    std::filesystem::remove(done, ignored);
                }
                throw Error(ErrorKind::Format, "cannot move output into place at " + f.string() +
                                                   ": " + ec.message());
            }
            result.files.push_back(f);
        }
        committed_ = true;
        return result;
    }

  private:
    static std::filesystem::path partial(const std::filesystem::path &p) {
        auto q = p;
        q += ".partial";
        return q;
    }

    std::filesystem::path stage(const std::string &name) {
        staged_.push_back(dir_ / name);
        return partial(staged_.back());
    }

    std::filesystem::path dir_;
    std::vector<std::filesystem::path> staged_;
    bool committed_ = false;
};

namespace detail {

inline std::string theta_label(int k) {
    static constexpr std::array<const char *, 9> labels{
        "0", "pi/8", "pi/4", "3pi/8", "pi/2", "5pi/8", "3pi/4", "7pi/8", "pi"};
    return labels[static_cast<std::size_t>(k)];
}

inline std::string conventions() {
    return "wigner_prefactor=1/pi; overlap_factor=2pi; momentum=conjugate to x (hbar=1); "
           "state normalized in x";
}

inline std::string provenance_line(const RunConfig &cfg) {
    return "phaselock " + std::string(kVersion) + "; lambda=" + format_number(cfg.params().lambda()) +
           "; alpha=" + format_number(cfg.alpha) + "; n_levels=" + format_number(cfg.n_levels) +
           "; nx=" + format_number(cfg.nx) + "; " + conventions();
}

inline std::map<std::string, std::string> base_metadata(const RunConfig &cfg) {
    return {{"code_version", std::string(kVersion)},
            {"lambda", format_number(cfg.params().lambda())},
            {"alpha", format_number(cfg.alpha)},
            {"n_levels", format_number(cfg.n_levels)},
            {"conventions", conventions()}};
}

inline WavePacketModel make_model(const RunConfig &cfg) {
    return {cfg.params(), su2_coefficients(cfg.alpha, cfg.n_levels - 1), cfg.x_grid()};
}

inline std::string tag(std::size_t i, std::size_t j) {
    return "th" + std::to_string(i) + "_t" + std::to_string(j);
}

inline UniformGrid momentum_grid(const RunConfig &cfg, const StateGrid &state) {
    if (cfg.p_max) {
        return {-*cfg.p_max, *cfg.p_max, cfg.np};
    }
    return auto_momentum_grid(state, cfg.np);
}

/// Applies `body(i, theta, j, t_au, t_frac)` over the configured theta x t lattice.
inline void for_each_case(const RunConfig &cfg,
                          const std::function<void(std::size_t, double, std::size_t, double, double)> &body) {
    const auto times = evaluation_times(cfg);
    for (std::size_t i = 0; i < cfg.theta.size(); ++i) {
        for (std::size_t j = 0; j < times.size(); ++j) {
            body(i, cfg.theta[i], j, times[j].first, times[j].second);
        }
    }
}

inline CommandResult cmd_eigen(const RunConfig &cfg, std::ostream &log) {
    const MorseParams params = cfg.params();
    const EigenTable table = build_eigen_table(params, cfg.n_levels, cfg.x_grid());
    const auto times = characteristic_times(params);
    const double h = table.grid.spacing();
    double ortho = 0.0;
    for (std::size_t m = 0; m < table.levels(); ++m) {
        for (std::size_t n = 0; n <= m; ++n) {
            std::vector<double> prod(table.grid.size());
            for (std::size_t i = 0; i < prod.size(); ++i) {
                prod[i] = table.psi[m][i] * table.psi[n][i];
            }
            ortho = std::max(ortho, std::abs(trapezoid(prod, h) - (m == n ? 1.0 : 0.0)));
        }
    }
    CsvBuilder csv;
    csv.comment(provenance_line(cfg))
        .comment("bound_state_count=" + format_number(params.bound_state_count()))
        .comment("T_cl_au=" + format_number(times.classical) +
                 "; T_cl_fs=" + format_number(times.classical * kAtomicTimeSeconds * 1e15))
        .comment("T_rev_au=" + format_number(times.revival) +
                 "; T_rev_ps=" + format_number(times.revival * kAtomicTimeSeconds * 1e12))
        .comment("orthonormality_max_error=" + format_number(ortho))
        .header({"m", "energy_au", "s", "captured_norm"});
    for (std::size_t m = 0; m < table.levels(); ++m) {
        const int level = static_cast<int>(m);
        csv.values(level, table.energies[m], level_exponent(params, level), table.captured_norms[m]);
    }
    OutputSet out(cfg.output_dir);
    out.text("eigen.csv", csv.str());
    log << "eigen: " << table.levels() << " levels, orthonormality error " << format_number(ortho) << '\n';
    return out.commit();
}

inline CommandResult cmd_state(const RunConfig &cfg, std::ostream &log) {
    const WavePacketModel model = make_model(cfg);
    OutputSet out(cfg.output_dir);
    for_each_case(cfg, [&](std::size_t i, double theta, std::size_t j, double t, double frac) {
        const StateGrid s = model.phase_locked_state(theta, t);
        CsvBuilder csv;
        csv.comment(provenance_line(cfg))
            .comment("theta=" + format_number(s.theta) + "; t_au=" + format_number(t) +
                     "; t_frac=" + format_number(frac) + "; norm=" + format_number(s.norm()))
            .header({"x", "re", "im", "density"});
        for (std::size_t k = 0; k < s.psi.size(); ++k) {
            csv.values(s.x[k], s.psi[k].real(), s.psi[k].imag(), std::norm(s.psi[k]));
        }
        out.text("state_" + tag(i, j) + ".csv", csv.str());
    });
    log << "state: " << cfg.theta.size() << " phases\n";
    return out.commit();
}

inline CommandResult cmd_wigner(const RunConfig &cfg, std::ostream &log) {
    const WavePacketModel model = make_model(cfg);
    OutputSet out(cfg.output_dir);
    CsvBuilder summary;
    summary.comment(provenance_line(cfg))
        .header({"file", "theta", "t_frac", "t_au", "integral", "purity", "w_min", "w_max",
                 "lobe_count"});
    for_each_case(cfg, [&](std::size_t i, double theta, std::size_t j, double t, double frac) {
        const StateGrid s = model.phase_locked_state(theta, t);
        const WignerGrid W = wigner_transform(s, momentum_grid(cfg, s), cfg.workers);
        const int lobes = lobe_count(W, cfg.lobe_threshold);
        const double norm = integral(W);
        const double pur = purity(W);
        GridFile g;
        g.dims = {W.x.size(), W.p.size()};
        g.axes = {W.x.values(), W.p.values()};
        g.payload = W.w;
        g.metadata = base_metadata(cfg);
        g.metadata["axes"] = "x,p";
        g.metadata["theta"] = format_number(W.theta);
        g.metadata["t_au"] = format_number(t);
        g.metadata["t_frac"] = format_number(frac);
        g.metadata["norm_captured"] = format_number(W.norm_captured);
        g.metadata["integral"] = format_number(norm);
        g.metadata["purity"] = format_number(pur);
        g.metadata["lobe_count"] = format_number(lobes);
        g.metadata["lobe_threshold"] = format_number(cfg.lobe_threshold);
        const std::string name = "wigner_" + tag(i, j);
        out.grid(name + ".wgrd", g);
        if (cfg.format != OutputFormat::Grid) {
            CsvBuilder csv;
            csv.comment(provenance_line(cfg)).header({"x", "p", "W"});
            for (std::size_t a = 0; a < W.x.size(); ++a) {
                for (std::size_t b = 0; b < W.p.size(); ++b) {
                    csv.values(W.x[a], W.p[b], W(a, b));
                }
            }
            out.text(name + ".csv", csv.str());
        }
        summary.values(name + ".wgrd", W.theta, frac, t, norm, pur, W.min(), W.max(), lobes);
        log << name << ": lobes " << lobes << ", purity " << format_number(pur) << '\n';
    });
    out.text("wigner_summary.csv", summary.str());
    return out.commit();
}

inline CommandResult cmd_carpet(const RunConfig &cfg, std::ostream &log) {
    const WavePacketModel model = make_model(cfg);
    OutputSet out(cfg.output_dir);
    const auto times = evaluation_times(cfg);
    CsvBuilder summary;
    summary.comment(provenance_line(cfg)).header({"file", "theta", "t_frac", "t_au", "norm", "fringe_amplitude"});
    for (std::size_t j = 0; j < times.size(); ++j) {
        const auto [t, frac] = times[j];
        const CarpetGrid c = carpet(model, t, cfg.theta_count, cfg.workers);
        GridFile g;
        g.dims = {c.theta.size(), c.x.size()};
        g.axes = {c.theta, c.x.values()};
        g.payload = c.density;
        g.metadata = base_metadata(cfg);
        g.metadata["axes"] = "theta,x";
        g.metadata["t_au"] = format_number(t);
        g.metadata["t_frac"] = format_number(frac);
        const std::string name = "carpet_t" + std::to_string(j);
        out.grid(name + ".wgrd", g);
        if (cfg.format != OutputFormat::Grid) {
            CsvBuilder csv;
            csv.comment(provenance_line(cfg)).header({"theta", "x", "density"});
            for (std::size_t k = 0; k < c.theta.size(); ++k) {
                for (std::size_t a = 0; a < c.x.size(); ++a) {
                    csv.values(c.theta[k], c.x[a], c.density[k * c.x.size() + a]);
                }
            }
            out.text(name + ".csv", csv.str());
        }
        for (std::size_t k = 0; k < c.theta.size(); ++k) {
            const auto row = c.row(k);
            summary.values(name + ".wgrd", c.theta[k], frac, t, trapezoid(row, c.x.spacing()),
                           fringe_amplitude(row, c.x, cfg.r0));
        }
        log << name << ": " << c.theta.size() << " phase rows\n";
    }
    out.text("carpet_summary.csv", summary.str());
    return out.commit();
}

inline CommandResult cmd_metrics(const RunConfig &cfg, std::ostream &log) {
    const WavePacketModel model = make_model(cfg);
    CsvBuilder csv;
    csv.comment(provenance_line(cfg))
        .header({"theta", "t_frac", "t_au", "dx", "dp", "action", "tile_area", "fringe_amplitude",
                 "lobe_count"});
    for_each_case(cfg, [&](std::size_t, double theta, std::size_t, double t, double frac) {
        const MetricsReport r = compute_metrics(model, theta, t, cfg.lobe_threshold, cfg.workers);
        csv.values(r.theta, frac, t, r.dx, r.dp, r.action, r.tile_area, r.fringe_amplitude, r.lobe_count);
    });
    OutputSet out(cfg.output_dir);
    out.text("metrics.csv", csv.str());
    log << "metrics: " << cfg.theta.size() * evaluation_times(cfg).size() << " rows\n";
    return out.commit();
}

inline CommandResult cmd_sensitivity(const RunConfig &cfg, std::ostream &log) {
    const WavePacketModel model = make_model(cfg);
    const auto dir = cfg.direction == "momentum" ? ShiftDirection::Momentum : ShiftDirection::Position;
    OutputSet out(cfg.output_dir);
    for_each_case(cfg, [&](std::size_t i, double theta, std::size_t j, double t, double frac) {
        const StateGrid s = model.phase_locked_state(theta, t);
        const SensitivityScan scan =
            sensitivity_scan(s, dir, cfg.max_shift, cfg.steps, cfg.wigner_samples, cfg.workers);
        const Uncertainties u = uncertainties(s);
        CsvBuilder csv;
        csv.comment(provenance_line(cfg))
            .comment("theta=" + format_number(s.theta) + "; t_au=" + format_number(t) +
                     "; t_frac=" + format_number(frac) + "; direction=" + cfg.direction)
            .comment("dx=" + format_number(u.dx) + "; dp=" + format_number(u.dp) + "; first_zero=" +
                     (scan.first_zero ? format_number(*scan.first_zero) : std::string("none")))
            .header({"shift", "overlap", "wigner_overlap"});
        for (std::size_t k = 0; k < scan.shift.size(); ++k) {
            csv.values(scan.shift[k], scan.overlap[k], scan.wigner_overlap[k]);
        }
        out.text("sensitivity_" + tag(i, j) + ".csv", csv.str());
    });
    log << "sensitivity: " << cfg.direction << " scans written\n";
    return out.commit();
}

inline std::vector<std::string> theta_header() {
    std::vector<std::string> h{"theta"};
    for (int k = 0; k < 9; ++k) {
        h.push_back(theta_label(k));
    }
    return h;
}

inline CommandResult cmd_table1(const RunConfig &cfg, std::ostream &log) {
    const WavePacketModel model = make_model(cfg);
    const double t = model.times().revival / 8.0;
    std::vector<std::string> row{"A_m"};
    for (double theta : table_thetas()) {
        const StateGrid s = model.phase_locked_state(theta, t);
        row.push_back(format_number(fringe_amplitude(s.density(), s.x, cfg.r0)));
    }
    CsvBuilder csv;
    csv.comment(provenance_line(cfg) + "; t=T_rev/8; A_m per bohr of r")
        .row(theta_header())
        .row(row);
    OutputSet out(cfg.output_dir);
    out.text("table1.csv", csv.str());
    log << "table1 written\n";
    return out.commit();
}

inline CommandResult cmd_table2(const RunConfig &cfg, std::ostream &log) {
    const WavePacketModel model = make_model(cfg);
    const double revival = model.times().revival;
    const std::array<std::pair<const char *, double>, 2> rows{{{"T_rev/8", 8.0}, {"T_rev/16", 16.0}}};
    const std::array<const std::array<double, 9> *, 2> refs{&kReferenceTileEighth,
                                                            &kReferenceTileSixteenth};
    CsvBuilder table;
    table.comment(provenance_line(cfg) + "; tile=1/(dx dp)").row(theta_header());
    CsvBuilder report;
    report.comment(provenance_line(cfg))
        .comment("tile areas under two momentum scalings against the reference table")
        .header({"time", "theta", "tile_conjugate", "tile_r0_scaled", "reference",
                 "rel_dev_conjugate", "rel_dev_r0_scaled", "within_tolerance"});
    int flagged = 0;
    const auto thetas = table_thetas();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::string> cells{rows[r].first};
        for (std::size_t k = 0; k < thetas.size(); ++k) {
            const double a = tile_area(model.phase_locked_state(thetas[k], revival / rows[r].second));
            cells.push_back(format_number(a));
            const double ref = (*refs[r])[k];
            const double a_r0 = a * cfg.r0;
            const double dev = (a - ref) / ref;
            const bool ok = std::abs(dev) <= kTileTolerance;
            flagged += ok ? 0 : 1;
            report.values(rows[r].first, theta_label(static_cast<int>(k)), a, a_r0, ref, dev,
                          (a_r0 - ref) / ref, ok ? "yes" : "no");
        }
        table.row(cells);
    }
    OutputSet out(cfg.output_dir);
    out.text("table2.csv", table.str());
    out.text("table2_conventions.csv", report.str());
    if (flagged > 0) {
        log << "table2: convention discrepancy, " << flagged
            << " of 18 entries outside 15% of the reference; see table2_conventions.csv\n";
    } else {
        log << "table2 written\n";
    }
    return out.commit();
}

} // namespace detail

/// Process exit status for a failure: 1 when the configuration or inputs are at fault, 2 otherwise.
inline int exit_status(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Shape:
    case ErrorKind::Degenerate:
    case ErrorKind::Contract:
        return 2;
    default:
        return 1;
    }
}

inline const std::vector<std::string> &command_names() {
    static const std::vector<std::string> names{"eigen",   "state",       "wigner", "carpet",
                                                "metrics", "sensitivity", "table1", "table2"};
    return names;
}

/// Runs one named command; throws phaselock::Error on failure after removing staged files.
inline CommandResult run_command(std::string_view name, const RunConfig &cfg, std::ostream &log) {
    if (name == "eigen") {
        return detail::cmd_eigen(cfg, log);
    }
    if (name == "state") {
        return detail::cmd_state(cfg, log);
    }
    if (name == "wigner") {
        return detail::cmd_wigner(cfg, log);
    }
    if (name == "carpet") {
        return detail::cmd_carpet(cfg, log);
    }
    if (name == "metrics") {
        return detail::cmd_metrics(cfg, log);
    }
    if (name == "sensitivity") {
        return detail::cmd_sensitivity(cfg, log);
    }
    if (name == "table1") {
        return detail::cmd_table1(cfg, log);
    }
    if (name == "table2") {
        return detail::cmd_table2(cfg, log);
    }
    throw Error(ErrorKind::Config, "unknown command '" + std::string(name) + "'");
}

} // namespace phaselock
