#pragma once

#include <cstdint>
#include <random>

#include "scatternet/analysis.hpp"

namespace scatternet {

// -----------------------------------------------------------------------------
// Randomized cross-check suite
//
// The same generators back the CLI selftest and the randomized test suites:
// everything is seeded, so failures reproduce.
// -----------------------------------------------------------------------------

namespace testing {

using Rng = std::mt19937_64;

[[nodiscard]] inline Complex random_complex(Rng& rng, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    return Complex(dist(rng), dist(rng));
}

/// Random matrix with det = 1 (entries O(1)).
[[nodiscard]] inline TransferMatrix random_unimodular(Rng& rng) {
    for (;;) {
        const Mat2 m{random_complex(rng), random_complex(rng), random_complex(rng),
                     random_complex(rng)};
        const Complex d = m.det();
        if (std::abs(d) < 0.1) {
            continue;
        }
        const Complex s = Complex(1.0, 0.0) / std::sqrt(d);
        return TransferMatrix::from(s * m);
    }
}

/// Random flux-preserving cell: m22 = conj(m11), m12 = conj(m21),
/// |m11|^2 - |m21|^2 = 1.
[[nodiscard]] inline TransferMatrix random_unitary_compatible(Rng& rng) {
    std::uniform_real_distribution<double> rdist(0.0, 1.5);
    std::uniform_real_distribution<double> adist(0.0, 2.0 * 3.14159265358979323846);
    const double r = rdist(rng);
    const Complex m11 = std::cosh(r) * std::exp(iu * adist(rng));
    const Complex m21 = std::sinh(r) * std::exp(iu * adist(rng));
    return TransferMatrix::from(Mat2{m11, std::conj(m21), m21, std::conj(m11)});
}

/// Random unimodular cell of the [[conj(a), ib], [-ic, a]] form with real b, c.
/// With `unbroken` the coefficients satisfy (b - c)^2 < 4.
[[nodiscard]] inline PTParams random_pt_params(Rng& rng, bool unbroken = false) {
    std::uniform_real_distribution<double> bdist(-1.5, 1.5);
    std::uniform_real_distribution<double> adist(0.0, 2.0 * 3.14159265358979323846);
    for (;;) {
        const double b = bdist(rng);
        const double c = bdist(rng);
        if (b * c <= -0.9) {
            continue;  // keep |a|^2 = 1 + bc comfortably positive
        }
        if (unbroken && (b - c) * (b - c) >= 3.9) {
            continue;
        }
        const double mod_a = std::sqrt(1.0 + b * c);
        const Complex a = mod_a * std::exp(iu * adist(rng));
        return PTParams{a, Complex(b, 0.0), Complex(c, 0.0)};
    }
}

/// Random parallel bundle with plain junctions (zero contact potential),
/// random real wavevectors in [0.5, 2] and random masses in [0.5, 2].
[[nodiscard]] inline ParallelNode random_parallel_node(Rng& rng, int n_branches,
                                                       bool unitary_cells = false) {
    std::uniform_real_distribution<double> kdist(0.5, 2.0);
    ParallelNode node;
    node.vertex_in = VertexParams::kirchhoff(Complex(kdist(rng), 0.0), kdist(rng));
    node.vertex_in.k_back = Complex(kdist(rng), 0.0);
    node.vertex_out = VertexParams::kirchhoff(Complex(kdist(rng), 0.0), kdist(rng));
    node.vertex_out.k_back = Complex(kdist(rng), 0.0);
    for (int j = 0; j < n_branches; ++j) {
        const TransferMatrix cell =
            unitary_cells ? random_unitary_compatible(rng) : random_unimodular(rng);
        BranchSpec branch;
        branch.node = make_node(leaf(cell));
        branch.k_in = Complex(kdist(rng), 0.0);
        branch.k_in_back = Complex(kdist(rng), 0.0);
        branch.k_out = Complex(kdist(rng), 0.0);
        branch.k_out_back = Complex(kdist(rng), 0.0);
        branch.mass_in = kdist(rng);
        branch.mass_out = kdist(rng);
        node.branches.push_back(branch);
    }
    node.reference = 1;
    return node;
}

/// Relative distance between two amplitudes.
[[nodiscard]] inline double rel_err(const Complex& got, const Complex& want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testing

// -----------------------------------------------------------------------------
// Selftest suite
// -----------------------------------------------------------------------------

struct SelftestRow {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    double bound = 0.0;
};

struct SelftestReport {
    std::vector<SelftestRow> rows;

    [[nodiscard]] bool all_pass() const {
        for (const SelftestRow& row : rows) {
            if (!row.pass) {
                return false;
            }
        }
        return true;
    }
};

/// Runs the junction-reduction cross-checks against the brute-force solver
/// plus the composition identities.  Every check is seeded and deterministic
/// for a fixed seed.
[[nodiscard]] inline SelftestReport run_selftest(std::uint64_t seed) {
    using namespace testing;
    SelftestReport report;
    const auto record = [&](const std::string& name, double worst, double bound) {
        report.rows.push_back({name, worst < bound, worst, bound});
    };

    {
        Rng rng(seed);
        std::uniform_int_distribution<int> ndist(2, 5);
        double worst = 0.0;
        for (int trial = 0; trial < 60; ++trial) {
            const ParallelNode node = random_parallel_node(rng, ndist(rng));
            const ComposeResult composed = parallel_compose(node);
            const OracleSolution left = solve_bruteforce(node);
            const OracleSolution right =
                solve_bruteforce(node, Complex(0.0, 0.0), Complex(1.0, 0.0));
            const ScatteringAmplitudes amps = transfer_to_scattering(composed.matrix);
            // left incidence: r = -m21/m22 and t = det/m22
            worst = std::max(worst, rel_err(amps.r_left, left.reflected));
            worst = std::max(worst,
                             rel_err(amps.t * composed.matrix.det(), left.transmitted));
            // right incidence: r = m12/m22 and t = 1/m22
            worst = std::max(worst, rel_err(amps.r_right, right.transmitted));
            worst = std::max(worst, rel_err(amps.t, right.reflected));
        }
        record("oracle equivalence (amplitudes)", worst, 1e-9);
    }
    {
        Rng rng(seed + 1);
        std::uniform_int_distribution<int> ndist(2, 5);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            ParallelNode node = random_parallel_node(rng, ndist(rng));
            const TransferMatrix base = parallel_compose(node).matrix;
            for (int s = 2; s <= static_cast<int>(node.branches.size()); ++s) {
                node.reference = s;
                worst = std::max(worst,
                                 parallel_compose(node).matrix.mat().distance(base.mat()));
            }
        }
        record("reference-channel independence", worst, 1e-10);
    }
    {
        Rng rng(seed + 2);
        double worst = 0.0;
        for (int trial = 0; trial < 25; ++trial) {
            const TransferMatrix m = random_unimodular(rng);
            for (const int n : {2, 3, 10, 50}) {
                TransferMatrix direct;
                for (int i = 0; i < n; ++i) {
                    direct = m * direct;
                }
                const double scale = std::max(1.0, direct.norm());
                worst = std::max(
                    worst, serial_identical(m, n).mat().distance(direct.mat()) / scale);
            }
        }
        record("serial repetition identity", worst, 1e-9);
    }
    {
        Rng rng(seed + 3);
        std::uniform_real_distribution<double> kdist(0.5, 2.0);
        double worst = 0.0;
        for (int trial = 0; trial < 25; ++trial) {
            const TransferMatrix m = pt_cell(random_pt_params(rng));
            const int n = 2 + trial % 4;
            const Complex k(kdist(rng), 0.0);
            ParallelNode node;
            node.vertex_in = VertexParams::kirchhoff(k);
            node.vertex_out = node.vertex_in;
            for (int j = 0; j < n; ++j) {
                node.branches.push_back(BranchSpec::uniform(make_node(leaf(m)), k));
            }
            const TransferMatrix direct = parallel_identical(m, n);
            worst = std::max(worst,
                             parallel_compose(node).matrix.mat().distance(direct.mat()));
            worst = std::max(worst, std::abs(direct.det() - Complex(1.0, 0.0)));
        }
        record("parallel identical-cell identity", worst, 1e-10);
    }
    {
        Rng rng(seed + 4);
        std::uniform_int_distribution<int> ndist(2, 5);
        double worst = 0.0;
        for (int trial = 0; trial < 25; ++trial) {
            const ParallelNode node = random_parallel_node(rng, ndist(rng), true);
            // flux conservation needs one real lead wavevector on both sides
            ParallelNode herm = node;
            const Complex k = node.vertex_in.k;
            herm.vertex_in.k_back = k;
            herm.vertex_out.k = herm.vertex_out.k_back = k;
            herm.vertex_in.mass = herm.vertex_out.mass;
            for (BranchSpec& branch : herm.branches) {
                branch.k_in_back = branch.k_in;
                branch.k_out = branch.k_in;
                branch.k_out_back = branch.k_in;
                branch.mass_out = branch.mass_in;
            }
            const ScatteringAmplitudes amps =
                transfer_to_scattering(parallel_compose(herm).matrix);
            worst = std::max(worst, std::abs(amps.T + amps.R_left - 1.0));
            const OracleSolution oracle = solve_bruteforce(herm);
            worst = std::max(worst, std::abs(std::norm(oracle.transmitted) +
                                             std::norm(oracle.reflected) - 1.0));
        }
        record("flux conservation (unitary cells)", worst, 1e-10);
    }
    {
        double worst = 0.0;
        const double pi = 3.14159265358979323846;
        {
            const ABRingSpec spec = ABRingSpec::from_flux_phase(1.1, pi, 2.0);
            const OracleSolution sol =
                solve_bruteforce(std::get<ParallelNode>(ab_ring_network(spec).value));
            worst = std::max(worst, std::norm(sol.transmitted));
        }
        {
            const ABRingSpec spec = ABRingSpec::from_flux_phase(2.0 * pi / 2.0, 0.9, 2.0);
            const ComposeResult composed =
                compose(ab_ring_network(spec));
            worst = std::max(worst, std::norm(Complex(1.0, 0.0) / composed.matrix.m22()));
        }
        record("ring transmission zeros", worst, 1e-10);
    }
    return report;
}

}  // namespace scatternet
