// Acceptance suite: one pass/fail line per criterion, executable standalone
// or through ctest.  Exit code is the number of failed criteria.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "scatternet/config.hpp"
#include "scatternet/io.hpp"
#include "scatternet/selftest.hpp"

using namespace scatternet;

namespace {

constexpr double kPi = 3.14159265358979323846;

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << index << ". " << name;
    if (!detail.empty()) {
        std::cout << "  (" << detail << ")";
    }
    std::cout << "\n";
    if (!pass) {
        ++failures;
    }
}

std::string worst_str(double worst, double bound) {
    return "worst " + format_g17(worst) + ", bound " + format_g17(bound);
}

// --- 1: junction reduction vs brute-force solver --------------------------

void criterion_oracle_equivalence() {
    testing::Rng rng(0xACC01);
    std::uniform_int_distribution<int> ndist(2, 5);
    double worst = 0.0;
    int fallbacks = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const ParallelNode node = testing::random_parallel_node(rng, ndist(rng));
        const ComposeResult composed = parallel_compose(node);
        const OracleSolution left = solve_bruteforce(node);
        const OracleSolution right =
            solve_bruteforce(node, Complex(0.0, 0.0), Complex(1.0, 0.0));
        const ScatteringAmplitudes amps = transfer_to_scattering(composed.matrix);
        // left incidence: r = -m21/m22, t = det/m22; right: r = m12/m22, t = 1/m22
        double err = testing::rel_err(amps.r_left, left.reflected);
        err = std::max(err,
                       testing::rel_err(amps.t * composed.matrix.det(), left.transmitted));
        err = std::max(err, testing::rel_err(amps.r_right, right.transmitted));
        err = std::max(err, testing::rel_err(amps.t, right.reflected));
        if (composed.used_oracle_fallback) {
            ++fallbacks;
        }
        worst = std::max(worst, err);
    }
    report(1, "oracle equivalence over 200 random bundles", worst < 1e-9,
           worst_str(worst, 1e-9) + ", fallbacks " + std::to_string(fallbacks));
}

// --- 2: flux-pierced ring structure ----------------------------------------

void criterion_ab_ring() {
    const double length = 2.0;
    double worst_ratio = 0.0;
    double worst_zero = 0.0;
    const auto ring_transmittance = [](const ABRingSpec& spec) -> double {
        const NetworkNode ring = ab_ring_network(spec);
        try {
            return transfer_to_scattering(compose(ring).matrix).T;
        } catch (const SpectralSingularity&) {
            return std::numeric_limits<double>::infinity();
        } catch (const NoUniqueSolution&) {
            // exactly opaque point: the effective matrix has no finite
            // representation but the amplitudes usually still do
            try {
                return std::norm(
                    solve_bruteforce(std::get<ParallelNode>(ring.value)).transmitted);
            } catch (const NoUniqueSolution&) {
                // doubly degenerate corner (both zero lines cross): the ring
                // carries a lead-decoupled bound state and the scattering
                // solution is not unique
                return std::numeric_limits<double>::quiet_NaN();
            }
        }
    };
    // The transmittance follows T = 64 (1 - cos kL)(1 + cos psi) / |D|^2 with
    // the flux- and k-dependent resonance denominator
    //   D = -9 e^{i kL} - e^{-i kL} + 2 + 8 cos(psi)
    // (the L1 = L2 = L/2 specialization).  The denominator depends on psi, so
    // the bare ratio T / [(1 - cos kL)(1 + cos psi)] is *not* constant in psi;
    // the structural check divides it out.  Zero lines are exact.
    for (int i = 0; i < 101; ++i) {
        const double kl = 4.0 * kPi * static_cast<double>(i + 1) / 102.0;
        const double k = kl / length;
        for (int j = 0; j < 101; ++j) {
            const double psi = -kPi + 2.0 * kPi * static_cast<double>(j) / 100.0;
            const ABRingSpec spec = ABRingSpec::from_flux_phase(k, psi, length);
            const double t_sq = ring_transmittance(spec);
            const double numerator = (1.0 - std::cos(kl)) * (1.0 + std::cos(psi));
            const Complex d = -9.0 * std::exp(iu * kl) - std::exp(-iu * kl) + 2.0 +
                              8.0 * std::cos(psi);
            if (std::isfinite(t_sq) && std::abs(1.0 - std::cos(kl)) > 1e-3 &&
                std::abs(1.0 + std::cos(psi)) > 1e-3) {
                const double ratio = t_sq * std::norm(d) / (64.0 * numerator);
                worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
            }
        }
    }
    // zero lines: psi = pi at arbitrary k, and kL = 2 pi n at arbitrary psi
    for (const double kl : {0.9, 2.2, 5.3, 11.0}) {
        worst_zero = std::max(worst_zero, ring_transmittance(ABRingSpec::from_flux_phase(
                                              kl / length, kPi, length)));
    }
    for (const double psi : {-2.0, 0.4, 2.9}) {
        for (const int n : {1, 2}) {
            const double k = 2.0 * kPi * n / length;
            worst_zero = std::max(worst_zero, ring_transmittance(
                                                  ABRingSpec::from_flux_phase(k, psi, length)));
        }
    }
    const bool pass = worst_ratio < 1e-8 && worst_zero < 1e-10;
    report(2, "ring transmittance structure on a 101x101 grid", pass,
           "worst structure dev " + format_g17(worst_ratio) + ", worst zero " +
               format_g17(worst_zero));
}

// --- 3: Bloch-phase chain identity ------------------------------------------

void criterion_chebyshev() {
    testing::Rng rng(0xACC03);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const TransferMatrix m = testing::random_unimodular(rng);
        for (const int n : {2, 3, 10, 50}) {
            TransferMatrix direct;
            for (int i = 0; i < n; ++i) {
                direct = m * direct;
            }
            worst = std::max(worst, serial_identical(m, n).mat().distance(direct.mat()) /
                                        std::max(1.0, direct.norm()));
        }
    }
    // limit-path probe at |Tr m / 2 - 1| = 1e-8
    for (const int n : {2, 10, 50}) {
        const double z = 1.0 - 1e-8;
        const double d = 0.2;
        const double b = 0.7;
        const double c = (z * z - d * d - 1.0) / b;
        const TransferMatrix m = TransferMatrix::from(Mat2{
            Complex(z + d, 0.0), Complex(b, 0.0), Complex(c, 0.0), Complex(z - d, 0.0)});
        TransferMatrix direct;
        for (int i = 0; i < n; ++i) {
            direct = m * direct;
        }
        worst = std::max(worst, serial_identical(m, n).mat().distance(direct.mat()) /
                                    std::max(1.0, direct.norm()));
    }
    report(3, "chain identity vs repeated products (N in {2,3,10,50})", worst < 1e-9,
           worst_str(worst, 1e-9));
}

// --- 4: identical-cell bundle formula ---------------------------------------

void criterion_parallel_identical() {
    testing::Rng rng(0xACC04);
    double worst_pipeline = 0.0;
    double worst_similarity = 0.0;
    double worst_det = 0.0;
    double worst_relation = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const PTParams p = testing::random_pt_params(rng);
        const TransferMatrix m = pt_cell(p);
        const int n = 2 + trial % 4;
        const TransferMatrix big = parallel_identical(m, n);
        // general pipeline on identical channels
        const Complex k(1.0 + 0.01 * (trial % 7), 0.0);
        ParallelNode node;
        node.vertex_in = VertexParams::kirchhoff(k);
        node.vertex_out = node.vertex_in;
        for (int j = 0; j < n; ++j) {
            node.branches.push_back(BranchSpec::uniform(make_node(leaf(m)), k));
        }
        worst_pipeline =
            std::max(worst_pipeline, parallel_compose(node).matrix.mat().distance(big.mat()));
        // similarity form
        const double nn = n;
        const Mat2 t{0.5 * (nn + 1.0), -0.5 * (nn - 1.0), -0.5 * (nn - 1.0),
                     0.5 * (nn + 1.0)};
        worst_similarity =
            std::max(worst_similarity, big.mat().distance(t * m.mat() * t.inverse()));
        worst_det = std::max(worst_det, std::abs(big.det() - Complex(1.0, 0.0)));
        // Compound coefficients are defined through M12 = -i bN, M21 = +i cN
        // while the cell map reads m12 = +i b, m21 = -i c; the similarity
        // transform preserves m12 + m21, so bN - cN = -(b - c) exactly.
        const Complex b_n = iu * big.m12();
        const Complex c_n = -iu * big.m21();
        worst_relation = std::max(worst_relation, std::abs((b_n - c_n) + (p.b - p.c)));
        worst_relation = std::max(
            worst_relation, std::abs((big.m12() + big.m21()) - (m.m12() + m.m21())));
    }
    const bool pass = worst_pipeline < 1e-12 && worst_similarity < 1e-12 &&
                      worst_det < 1e-10 && worst_relation < 1e-12;
    report(4, "identical-cell bundle: pipeline, similarity, det, bN-cN=-(b-c)", pass,
           "pipeline " + format_g17(worst_pipeline) + ", similarity " +
               format_g17(worst_similarity) + ", det " + format_g17(worst_det) +
               ", relation " + format_g17(worst_relation));
}

// --- 5: eigenvalue phase machinery -------------------------------------------

void criterion_pt_phase() {
    testing::Rng rng(0xACC05);
    double worst_unbroken = 0.0;
    double worst_product = 0.0;
    double worst_ep = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const PTParams p = testing::random_pt_params(rng, /*unbroken=*/true);
        const SEigenvalues eig = s_eigenvalues(p);
        worst_unbroken = std::max(
            worst_unbroken, std::abs(std::abs(eig.lambda_plus) - std::abs(eig.lambda_minus)));
        worst_product = std::max(
            worst_product,
            std::abs(eig.lambda_plus * eig.lambda_minus + std::conj(p.a) / p.a));
    }
    for (int trial = 0; trial < 100; ++trial) {
        // exactly at the coalescence condition b - c = +-2; the dyadic grid
        // keeps b - c exact in binary64 (the split grows as sqrt of any
        // rounding in the gap)
        const double c = -1.0 + 0.015625 * trial;
        for (const double sign : {1.0, -1.0}) {
            const double b = c + 2.0 * sign;
            if (b * c <= -0.95) {
                continue;
            }
            const Complex a = std::sqrt(1.0 + b * c) * std::exp(iu * (0.1 * trial));
            const SEigenvalues eig = s_eigenvalues(PTParams{a, b, c});
            worst_ep = std::max(worst_ep, std::abs(eig.lambda_plus - eig.lambda_minus));
        }
    }
    const bool pass = worst_unbroken < 1e-12 && worst_product < 1e-12 && worst_ep < 1e-10;
    report(5, "eigenvalue phase machinery (unbroken, product, coalescence)", pass,
           "unbroken " + format_g17(worst_unbroken) + ", product " +
               format_g17(worst_product) + ", coalescence " + format_g17(worst_ep));
}

// --- 6: Bragg cell -----------------------------------------------------------

void criterion_bragg_cell() {
    testing::Rng rng(0xACC06);
    std::uniform_real_distribution<double> ndist(0.5, 2.0);
    std::uniform_real_distribution<double> mdist(0.0, 0.6);
    double worst_det = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const BraggParams p{ndist(rng), mdist(rng), mdist(rng), ndist(rng) + 1.0,
                            4.0 * ndist(rng)};
        worst_det = std::max(
            worst_det,
            std::abs(bragg_matrix(p, ndist(rng)).mat().det() - Complex(1.0, 0.0)));
    }
    const BraggParams matched{1.0, 0.3, 0.3, 2.0, 5.0};
    const TransferMatrix cell = bragg_matrix(matched, 1.7);
    const bool m21_zero = std::abs(cell.m21()) == 0.0;
    const double t_dev = std::abs(std::abs(transfer_to_scattering(cell).t) - 1.0);
    const NetworkFamily family = [matched](double k) {
        return leaf(bragg_matrix(matched, k));
    };
    const ATRScan scan = detect_atr(sweep(family, 1.6, 1.8, 21));
    bool flagged = false;
    for (const ATRRecord& rec : scan.resonances) {
        flagged = flagged || (std::abs(rec.omega - 1.7) < 1e-9 &&
                              rec.direction == AtrSide::left);
    }
    const bool pass = worst_det < 1e-10 && m21_zero && t_dev < 1e-10 && flagged;
    report(6, "bragg cell: det, matched-modulation invisibility, detection", pass,
           "det " + format_g17(worst_det) + ", |t|-1 " + format_g17(t_dev) +
               (m21_zero ? ", m21 = 0" : ", m21 != 0") +
               (flagged ? ", flagged" : ", not flagged"));
}

// --- 7: bundle backward-decoupling gain ---------------------------------------

void criterion_bragg_parallel() {
    const double n0 = 1.0;
    const double n1 = 0.15;
    const double k = 2.0;
    const double delta = 0.03;
    const double length = 1.7;
    double worst = 0.0;
    for (const int n : {2, 3, 5}) {
        const double n2 = bragg_parallel_ep(n0, n1, delta, k, n);
        const TransferMatrix coupled =
            parallel_identical(bragg_matrix(BraggParams{n0, n1, n2, delta + k, length}, k), n);
        worst = std::max(worst, std::abs(coupled.m21()));
    }
    const bool n1_reduction = bragg_parallel_ep(n0, n1, delta, k, 1) == n1;
    report(7, "bundle backward-decoupling gain (N in {2,3,5}, N=1 reduction)",
           worst < 1e-8 && n1_reduction, worst_str(worst, 1e-8));
}

// --- 8: chain singularity condition -------------------------------------------

void criterion_serial_singularity() {
    const double n0 = 1.0;
    const double n1 = 0.2;
    const double length = 3.0;
    const double k = 2.0;
    const int n = 4;
    const NetworkFamily family = [&](double n2) {
        return serial_repeat(leaf(bragg_matrix(BraggParams{n0, n1, n2, k, length}, k)), n);
    };
    const auto reports =
        find_spectral_singularities(family, 0.21, 0.28, SingularityKind::lasing, 1e-9);
    bool pass = reports.size() == 1 && !reports[0].near_miss && reports[0].residual < 1e-9;
    double reverify = std::numeric_limits<double>::infinity();
    double condition = std::numeric_limits<double>::infinity();
    if (pass) {
        const double wc = reports[0].omega_c;
        reverify = std::abs(compose_matrix(family(wc)).m22());
        const TransferMatrix unit =
            bragg_matrix(BraggParams{n0, n1, wc, k, length}, k);
        const Complex phi = std::acos(unit.mat().trace() / 2.0);
        condition = std::abs(unit.m22() - std::sin((n - 1.0) * phi) /
                                              std::sin(static_cast<double>(n) * phi));
        pass = reverify < 1e-9 && condition < 1e-9;
    }
    report(8, "chain singularity located where m22 = sin((N-1)phi)/sin(N phi)", pass,
           "re-eval " + format_g17(reverify) + ", condition " + format_g17(condition));
}

// --- 9: flux conservation -------------------------------------------------------

void criterion_flux_conservation() {
    testing::Rng rng(0xACC09);
    double worst = 0.0;
    for (int config = 0; config < 10; ++config) {
        std::uniform_int_distribution<int> ndist(2, 4);
        const int n = ndist(rng);
        std::vector<TransferMatrix> cells;
        std::vector<double> lengths;
        for (int j = 0; j < n; ++j) {
            cells.push_back(testing::random_unitary_compatible(rng));
            lengths.push_back(0.3 + 0.2 * j);
        }
        const NetworkFamily family = [&, n](double k) {
            ParallelNode node;
            node.vertex_in = VertexParams::kirchhoff(Complex(k, 0.0));
            node.vertex_out = node.vertex_in;
            for (int j = 0; j < n; ++j) {
                const TransferMatrix chain =
                    free_segment_matrix(
                        FreeSegment{lengths[static_cast<std::size_t>(j)], Complex(k, 0.0),
                                    Complex(k, 0.0), 1.0}) *
                    cells[static_cast<std::size_t>(j)];
                node.branches.push_back(
                    BranchSpec::uniform(make_node(leaf(chain)), Complex(k, 0.0)));
            }
            return NetworkNode{node};
        };
        for (const SweepRecord& rec : sweep(family, 0.5, 2.0, 41)) {
            worst = std::max(worst, std::abs(rec.T + rec.R_left - 1.0));
        }
        // oracle route at a few points
        for (const double k : {0.6, 1.1, 1.9}) {
            const NetworkNode at = family(k);
            const OracleSolution sol = solve_bruteforce(std::get<ParallelNode>(at.value));
            worst = std::max(worst, std::abs(std::norm(sol.transmitted) +
                                             std::norm(sol.reflected) - 1.0));
        }
    }
    report(9, "flux conservation across sweeps (pipeline and solver)", worst < 1e-10,
           worst_str(worst, 1e-10));
}

// --- 10: byte-identical threaded sweeps -----------------------------------------

void criterion_determinism() {
#ifndef SCATTERNET_CLI_PATH
    report(10, "deterministic threaded sweep output", false, "CLI path not wired");
#else
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() /
                          ("scatternet_accept_" + std::to_string(::getpid()));
    fs::create_directories(base);
    const fs::path config_path = base / "run.json";
    {
        std::ofstream config(config_path);
        config << R"({
  "network": {"type": "serial_repeat", "count": 3,
              "cell": {"type": "leaf", "cell": {"type": "bragg",
                       "n0": 1.0, "n1": 0.2, "n2": 0.32, "grating": 2.0,
                       "length": 3.0, "k": "$k"}}},
  "sweep": {"parameter": "k", "lo": 1.2, "hi": 2.8, "steps": 512},
  "output": {"basename": "det"}
})";
    }
    const auto run = [&](const std::string& out_dir) {
        const std::string cmd = std::string(SCATTERNET_CLI_PATH) + " sweep --config " +
                                config_path.string() + " --out " + (base / out_dir).string() +
                                " --threads 4 > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    bool pass = run("a") == 0 && run("b") == 0;
    std::string detail = "CLI runs";
    if (pass) {
        const std::string first = slurp(base / "a" / "det_sweep.csv");
        const std::string second = slurp(base / "b" / "det_sweep.csv");
        pass = !first.empty() && first == second;
        detail = pass ? "byte-identical CSV (" + std::to_string(first.size()) + " bytes)"
                      : "CSV outputs differ";
    } else {
        detail = "CLI invocation failed";
    }
    std::error_code ec;
    fs::remove_all(base, ec);
    report(10, "deterministic threaded sweep output", pass, detail);
#endif
}

}  // namespace

int main() {
    criterion_oracle_equivalence();
    criterion_ab_ring();
    criterion_chebyshev();
    criterion_parallel_identical();
    criterion_pt_phase();
    criterion_bragg_cell();
    criterion_bragg_parallel();
    criterion_serial_singularity();
    criterion_flux_conservation();
    criterion_determinism();
    if (failures == 0) {
        std::cout << "all acceptance criteria passed\n";
    } else {
        std::cout << failures << " criteria failed\n";
    }
    return failures;
}
