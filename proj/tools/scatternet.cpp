// Command-line front end: composes network descriptions, runs sweeps and
// finders, and emits CSV/JSON artifacts.  Exit codes: 0 success, 1 usage or
// configuration error, 2 numerical failure, 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scatternet/config.hpp"
#include "scatternet/io.hpp"
#include "scatternet/selftest.hpp"

namespace {

using namespace scatternet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

std::string fmt(double x) { return format_g17(x); }

std::string fmt(const Complex& z) {
    return "(" + format_g17(z.real()) + ", " + format_g17(z.imag()) + ")";
}

int resolve_threads(int flag_value, bool flag_given) {
    if (flag_given) {
        return flag_value;
    }
    if (const char* env = std::getenv("SCATTERNET_THREADS")) {
        return std::atoi(env);
    }
    return 1;
}

struct ConfigLoadError {};

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read config file '" << path << "'\n";
        throw ConfigLoadError{};
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    ParseResult parsed = parse_config(buffer.str());
    for (const ValidationIssue& w : parsed.warnings) {
        std::cerr << "warning: " << w.path << ": " << w.message << "\n";
    }
    if (!parsed.ok()) {
        for (const ValidationIssue& e : parsed.errors) {
            std::cerr << "error: " << e.path << ": " << e.message << "\n";
        }
        throw ConfigLoadError{};
    }
    return *parsed.config;
}

void print_matrix_block(const TransferMatrix& m) {
    std::cout << "m11 = " << fmt(m.m11()) << "\n"
              << "m12 = " << fmt(m.m12()) << "\n"
              << "m21 = " << fmt(m.m21()) << "\n"
              << "m22 = " << fmt(m.m22()) << "\n"
              << "det = " << fmt(m.det()) << "\n";
}

void print_scattering_block(const TransferMatrix& m) {
    try {
        const ScatteringAmplitudes amps = transfer_to_scattering(m);
        std::cout << "t       = " << fmt(amps.t) << "\n"
                  << "r_left  = " << fmt(amps.r_left) << "\n"
                  << "r_right = " << fmt(amps.r_right) << "\n"
                  << "T       = " << fmt(amps.T) << "\n"
                  << "R_left  = " << fmt(amps.R_left) << "\n"
                  << "R_right = " << fmt(amps.R_right) << "\n";
    } catch (const SpectralSingularity& e) {
        std::cout << "t       = singular (|m22| = " << fmt(e.entry_abs()) << ")\n";
    }
    try {
        const SEigenvalues eig = s_eigenvalues(pt_params(m));
        std::cout << "lambda+ = " << fmt(eig.lambda_plus) << "\n"
                  << "lambda- = " << fmt(eig.lambda_minus) << "\n"
                  << "|l+|/|l-| = " << fmt(eig.ratio) << "\n";
    } catch (const DegenerateSMatrix&) {
        std::cout << "s-matrix eigenvalues undefined (a = 0)\n";
    }
}

std::filesystem::path output_path(const RunConfig& config, const std::string& out_override,
                                  const std::string& suffix) {
    const std::string dir =
        out_override.empty() ? config.output.directory : out_override;
    return std::filesystem::path(dir) / (config.output.basename + suffix);
}

const AnalysisSpec* find_analysis(const RunConfig& config, AnalysisSpec::Kind kind) {
    for (const AnalysisSpec& spec : config.analyses) {
        if (spec.kind == kind) {
            return &spec;
        }
    }
    return nullptr;
}

std::vector<SweepRecord> run_config_sweep(const RunConfig& config, int steps_override,
                                          int threads) {
    if (!config.sweep.present) {
        std::cerr << "error: config has no sweep block\n";
        throw ConfigLoadError{};
    }
    const int steps = steps_override > 0 ? steps_override : config.sweep.steps;
    return sweep(config.family(), config.sweep.lo, config.sweep.hi, steps, threads);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scattering network composition and analysis toolkit"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int steps_override = 0;
    double tol_override = 0.0;
    int threads_flag = 1;
    bool threads_given = false;
    std::uint64_t seed = 42;

    const auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* copt = cmd->add_option("--config", config_path, "run configuration (JSON)");
        if (needs_config) {
            copt->required();
        }
        cmd->add_option("--out", out_dir, "output directory (overrides config)");
        cmd->add_option("--steps", steps_override, "sweep steps (overrides config)");
        cmd->add_option("--tol", tol_override, "finder tolerance (overrides config)");
        cmd->add_option("--threads", threads_flag,
                        "worker threads, 0 = auto (env SCATTERNET_THREADS as fallback)")
            ->each([&](const std::string&) { threads_given = true; });
    };

    auto* compose_cmd = app.add_subcommand("compose", "print the effective transfer matrix");
    add_common(compose_cmd, true);
    double compose_omega = 0.0;
    bool compose_omega_given = false;
    compose_cmd->add_option("--omega", compose_omega, "control parameter value")
        ->each([&](const std::string&) { compose_omega_given = true; });

    auto* sweep_cmd = app.add_subcommand("sweep", "write a parameter sweep CSV");
    add_common(sweep_cmd, true);

    auto* sing_cmd =
        app.add_subcommand("singularities", "locate spectral singularities (JSON report)");
    add_common(sing_cmd, true);
    std::string sing_kind = "";
    sing_cmd->add_option("--kind", sing_kind, "lasing|cpa (overrides config)");

    auto* ep_cmd =
        app.add_subcommand("exceptional-points", "locate exceptional points (JSON report)");
    add_common(ep_cmd, true);
    std::string ep_mode_flag;
    int ep_n_flag = 0;
    ep_cmd->add_option("--mode", ep_mode_flag, "single|serial|parallel (overrides config)");
    ep_cmd->add_option("--N", ep_n_flag, "coupled-cell count (overrides config)");

    auto* atr_cmd =
        app.add_subcommand("atr", "detect anisotropic transmission resonances (JSON report)");
    add_common(atr_cmd, true);

    auto* ab_cmd = app.add_subcommand("ab-ring", "two-arm flux-pierced ring preset");
    double ab_k = 1.0;
    double ab_length = 6.283185307179586;
    double ab_psi = 0.0;
    double ab_flux = 0.0;
    bool ab_psi_given = false;
    double ab_l1 = 0.0;
    ab_cmd->add_option("--k", ab_k, "lead wavenumber")->required();
    ab_cmd->add_option("--L", ab_length, "ring circumference")->required();
    ab_cmd->add_option("--flux-phase", ab_psi, "flux phase psi = -e Phi/(hbar c)")
        ->each([&](const std::string&) { ab_psi_given = true; });
    ab_cmd->add_option("--flux", ab_flux, "magnetic flux (natural units)");
    ab_cmd->add_option("--L1", ab_l1, "upper arm length (default L/2)");

    auto* bragg_cmd = app.add_subcommand("bragg", "PT-symmetric Bragg cell preset");
    double bg_n0 = 1.0;
    double bg_n1 = 0.1;
    double bg_n2 = 0.1;
    double bg_grating = 1.0;
    double bg_length = 10.0;
    double bg_k = 1.0;
    int bg_parallel = 1;
    bragg_cmd->add_option("--n0", bg_n0, "background index");
    bragg_cmd->add_option("--n1", bg_n1, "index modulation amplitude");
    bragg_cmd->add_option("--n2", bg_n2, "gain/loss modulation amplitude");
    bragg_cmd->add_option("--grating", bg_grating, "grating number")->required();
    bragg_cmd->add_option("--length", bg_length, "cell length")->required();
    bragg_cmd->add_option("--k", bg_k, "wavenumber")->required();
    bragg_cmd->add_option("--N", bg_parallel, "parallel-coupled cell count for the "
                                              "backward-decoupling condition");

    auto* selftest_cmd =
        app.add_subcommand("selftest", "run the randomized cross-check suite");
    selftest_cmd->add_option("--seed", seed, "RNG seed for the randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const int threads = resolve_threads(threads_flag, threads_given);

    try {
        if (compose_cmd->parsed()) {
            const RunConfig config = load_config(config_path);
            if (config.bound_cells > 0 && !compose_omega_given) {
                std::cerr << "error: network has a parameter binding; pass --omega\n";
                return kExitUsage;
            }
            const ComposeResult composed = compose(config.instantiate(compose_omega));
            if (composed.used_oracle_fallback) {
                std::cerr << "note: degenerate channel link, used the direct solver\n";
            }
            print_matrix_block(composed.matrix);
            print_scattering_block(composed.matrix);
            return kExitOk;
        }

        if (sweep_cmd->parsed()) {
            const RunConfig config = load_config(config_path);
            const std::vector<SweepRecord> records =
                run_config_sweep(config, steps_override, threads);
            const auto path = output_path(config, out_dir, "_sweep.csv");
            write_file(path, sweep_csv(records));
            std::cout << "wrote " << path.string() << " (" << records.size() << " rows)\n";
            return kExitOk;
        }

        if (sing_cmd->parsed()) {
            const RunConfig config = load_config(config_path);
            if (!config.sweep.present) {
                std::cerr << "error: config has no sweep block\n";
                return kExitUsage;
            }
            const AnalysisSpec* spec =
                find_analysis(config, AnalysisSpec::Kind::singularities);
            SingularityKind kind =
                spec != nullptr ? spec->singularity_kind : SingularityKind::lasing;
            if (sing_kind == "lasing") {
                kind = SingularityKind::lasing;
            } else if (sing_kind == "cpa") {
                kind = SingularityKind::cpa;
            } else if (!sing_kind.empty()) {
                std::cerr << "error: --kind must be lasing or cpa\n";
                return kExitUsage;
            }
            const double tol = tol_override > 0.0
                                   ? tol_override
                                   : (spec != nullptr ? spec->tol : kDefaultFinderTol);
            int skipped = 0;
            const auto reports =
                find_spectral_singularities(config.family(), config.sweep.lo,
                                            config.sweep.hi, kind, tol,
                                            kDefaultScanPoints, &skipped);
            if (skipped > 0) {
                std::cerr << "note: " << skipped
                          << " scan points failed to compose and were skipped\n";
            }
            const auto path = output_path(config, out_dir, "_singularities.json");
            write_file(path, singularities_json(reports));
            std::cout << "wrote " << path.string() << " (" << reports.size()
                      << " reports)\n";
            return kExitOk;
        }

        if (ep_cmd->parsed()) {
            const RunConfig config = load_config(config_path);
            if (!config.sweep.present) {
                std::cerr << "error: config has no sweep block\n";
                return kExitUsage;
            }
            const AnalysisSpec* spec =
                find_analysis(config, AnalysisSpec::Kind::exceptional_points);
            EPMode mode = spec != nullptr ? spec->ep_mode : EPMode::single;
            int n_coupled = spec != nullptr ? spec->ep_n : 1;
            if (ep_mode_flag == "single") {
                mode = EPMode::single;
            } else if (ep_mode_flag == "serial") {
                mode = EPMode::serial;
            } else if (ep_mode_flag == "parallel") {
                mode = EPMode::parallel;
            } else if (!ep_mode_flag.empty()) {
                std::cerr << "error: --mode must be single, serial or parallel\n";
                return kExitUsage;
            }
            if (ep_n_flag > 0) {
                n_coupled = ep_n_flag;
            }
            const double tol = tol_override > 0.0
                                   ? tol_override
                                   : (spec != nullptr ? spec->tol : kDefaultFinderTol);
            int skipped = 0;
            const auto reports =
                find_exceptional_points(config.family(), config.sweep.lo, config.sweep.hi,
                                        mode, n_coupled, tol, kDefaultScanPoints, &skipped);
            if (skipped > 0) {
                std::cerr << "note: " << skipped
                          << " scan points skipped on sin(N phi) = 0 transition lines\n";
            }
            const auto path = output_path(config, out_dir, "_exceptional_points.json");
            write_file(path, exceptional_points_json(reports));
            std::cout << "wrote " << path.string() << " (" << reports.size()
                      << " reports)\n";
            return kExitOk;
        }

        if (atr_cmd->parsed()) {
            const RunConfig config = load_config(config_path);
            const AnalysisSpec* spec = find_analysis(config, AnalysisSpec::Kind::atr);
            const double tol = tol_override > 0.0
                                   ? tol_override
                                   : (spec != nullptr ? spec->tol : kDefaultAtrTol);
            const std::vector<SweepRecord> records =
                run_config_sweep(config, steps_override, threads);
            const ATRScan scan = detect_atr(records, tol);
            const auto path = output_path(config, out_dir, "_atr.json");
            write_file(path, atr_json(scan));
            std::cout << "wrote " << path.string() << " (" << scan.resonances.size()
                      << " resonances, " << scan.bidirectional.size()
                      << " bidirectional)\n";
            return kExitOk;
        }

        if (ab_cmd->parsed()) {
            ABRingSpec spec;
            if (ab_psi_given) {
                spec = ABRingSpec::from_flux_phase(ab_k, ab_psi, ab_length);
            } else {
                spec.k = ab_k;
                spec.flux = ab_flux;
                spec.circumference = ab_length;
                spec.l1 = spec.l2 = ab_length / 2.0;
            }
            if (ab_l1 > 0.0) {
                spec.l1 = ab_l1;
                spec.l2 = ab_length - ab_l1;
            }
            const auto [k1, k2] = ab_ring_wavevectors(spec);
            std::cout << "k = " << fmt(spec.k) << ", psi = " << fmt(spec.flux_phase())
                      << ", k1 = " << fmt(k1) << ", k2 = " << fmt(k2) << "\n";
            const ComposeResult composed = compose(ab_ring_network(spec));
            if (composed.used_oracle_fallback) {
                std::cerr << "note: degenerate channel link, used the direct solver\n";
            }
            print_matrix_block(composed.matrix);
            print_scattering_block(composed.matrix);
            return kExitOk;
        }

        if (bragg_cmd->parsed()) {
            BraggParams params{bg_n0, bg_n1, bg_n2, bg_grating, bg_length};
            const TransferMatrix cell = bragg_matrix(params, bg_k);
            const double delta = bg_grating - bg_k;
            std::cout << "delta = " << fmt(delta) << "\n";
            print_matrix_block(cell);
            print_scattering_block(cell);
            const PTParams p = pt_params(cell);
            std::cout << "b = " << fmt(p.b) << "\nc = " << fmt(p.c) << "\n";
            if (bg_parallel >= 1) {
                const double n2_ep =
                    bragg_parallel_ep(bg_n0, bg_n1, delta, bg_k, bg_parallel);
                params.n2 = n2_ep;
                const TransferMatrix coupled =
                    parallel_identical(bragg_matrix(params, bg_k), bg_parallel);
                std::cout << "backward-decoupling n2 (N = " << bg_parallel
                          << ") = " << fmt(n2_ep)
                          << ", |M21| = " << fmt(std::abs(coupled.m21())) << "\n";
            }
            return kExitOk;
        }

        if (selftest_cmd->parsed()) {
            const SelftestReport report = run_selftest(seed);
            for (const SelftestRow& row : report.rows) {
                std::cout << (row.pass ? "PASS" : "FAIL") << "  " << row.name
                          << "  (worst " << fmt(row.worst) << ", bound " << fmt(row.bound)
                          << ")\n";
            }
            std::cout << (report.all_pass() ? "all checks passed\n" : "FAILURES present\n");
            return report.all_pass() ? kExitOk : kExitNumerical;
        }
    } catch (const ConfigLoadError&) {
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
