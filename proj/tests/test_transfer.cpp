#include <catch2/catch_amalgamated.hpp>

#include "scatternet/cells.hpp"
#include "scatternet/selftest.hpp"

using namespace scatternet;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("identity scatters trivially", "[transfer]") {
    const auto amps = transfer_to_scattering(TransferMatrix{});
    REQUIRE(std::abs(amps.t - Complex(1.0, 0.0)) == 0.0);
    REQUIRE(std::abs(amps.r_left) == 0.0);
    REQUIRE(std::abs(amps.r_right) == 0.0);
    REQUIRE(amps.T == 1.0);
}

TEST_CASE("free propagation at kL = pi/2 transmits i", "[transfer]") {
    const TransferMatrix m = TransferMatrix::from(
        Mat2{std::exp(iu * (kPi / 2.0)), 0.0, 0.0, std::exp(-iu * (kPi / 2.0))});
    const auto amps = transfer_to_scattering(m);
    REQUIRE(std::abs(amps.t - iu) < 1e-15);
    REQUIRE(amps.R_left == 0.0);
    REQUIRE(amps.R_right == 0.0);
    REQUIRE(std::abs(amps.T - 1.0) < 1e-15);
}

TEST_CASE("balanced gain/loss cell splits flux evenly", "[transfer]") {
    // a = 1+i, b = c = 1: |a|^2 = 1 + bc, so det = 1
    const TransferMatrix m = pt_cell(PTParams{Complex(1.0, 1.0), 1.0, 1.0});
    const auto amps = transfer_to_scattering(m);
    REQUIRE(std::abs(amps.T - 0.5) < 1e-15);
    REQUIRE(std::abs(amps.R_left - 0.5) < 1e-15);
    REQUIRE(std::abs(amps.R_right - 0.5) < 1e-15);
    // generalized conservation for this family: |T - 1| = sqrt(R_left R_right)
    REQUIRE(std::abs(std::abs(amps.T - 1.0) - std::sqrt(amps.R_left * amps.R_right)) <
            1e-12);
}

TEST_CASE("vanishing m22 raises the singularity signal", "[transfer]") {
    const TransferMatrix m = TransferMatrix::from(Mat2{1.0, 1.0, 1.0, Complex(0.0, 1e-12)});
    try {
        (void)transfer_to_scattering(m);
        FAIL("expected SpectralSingularity");
    } catch (const SpectralSingularity& e) {
        REQUIRE(e.entry_abs() == Catch::Approx(1e-12));
    }
}

TEST_CASE("coefficient extraction", "[transfer]") {
    SECTION("identity") {
        const PTParams p = pt_params(TransferMatrix{});
        REQUIRE(std::abs(p.a - Complex(1.0, 0.0)) == 0.0);
        REQUIRE(std::abs(p.b) == 0.0);
        REQUIRE(std::abs(p.c) == 0.0);
    }
    SECTION("round trip with the cell constructor") {
        const PTParams in{Complex(1.0, 1.0), 1.0, 1.0};
        const PTParams out = pt_params(pt_cell(in));
        REQUIRE(std::abs(out.a - in.a) == 0.0);
        REQUIRE(std::abs(out.b - in.b) < 1e-16);
        REQUIRE(std::abs(out.c - in.c) < 1e-16);
    }
    SECTION("bragg forward coupling coefficient") {
        const BraggParams p{1.2, 0.25, 0.1, 2.0, 3.0};
        const double k = 1.8;
        const double delta = p.grating - k;
        const double lam2 =
            delta * delta - k * k * (p.n1 * p.n1 - p.n2 * p.n2) / (4.0 * p.n0 * p.n0);
        const Complex lam = std::sqrt(Complex(lam2, 0.0));
        const Complex expected =
            (p.n1 + p.n2) * k * std::sin(lam * p.length) / (2.0 * p.n0 * lam);
        REQUIRE(std::abs(pt_params(bragg_matrix(p, k)).b - expected) < 1e-12);
    }
    SECTION("unimodular cells satisfy |a|^2 - bc = 1") {
        testing::Rng rng(201);
        for (int trial = 0; trial < 100; ++trial) {
            const PTParams p = pt_params(pt_cell(testing::random_pt_params(rng)));
            const Complex mod = std::conj(p.a) * p.a - p.b * p.c;
            REQUIRE(std::abs(mod - Complex(1.0, 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("scattering eigenvalues", "[transfer]") {
    SECTION("identity cell") {
        const SEigenvalues eig = s_eigenvalues(PTParams{1.0, 0.0, 0.0});
        REQUIRE(std::abs(eig.lambda_plus - Complex(-1.0, 0.0)) < 1e-15);
        REQUIRE(std::abs(eig.lambda_minus - Complex(1.0, 0.0)) < 1e-15);
        REQUIRE(eig.ratio == Catch::Approx(1.0));
    }
    SECTION("coalescence at b - c = 2") {
        const PTParams p{Complex(0.8, 0.3), 2.5, 0.5};
        const SEigenvalues eig = s_eigenvalues(p);
        const Complex expected = iu * (p.b + p.c) / (2.0 * p.a);
        REQUIRE(std::abs(eig.lambda_plus - eig.lambda_minus) < 1e-12);
        REQUIRE(std::abs(eig.lambda_plus - expected) < 1e-12);
    }
    SECTION("broken-phase sample (a=1, b=3, c=0)") {
        const SEigenvalues eig = s_eigenvalues(PTParams{1.0, 3.0, 0.0});
        const double s5 = std::sqrt(5.0);
        REQUIRE(std::abs(eig.lambda_plus - iu * ((3.0 + s5) / 2.0)) < 1e-14);
        REQUIRE(std::abs(eig.lambda_minus - iu * ((3.0 - s5) / 2.0)) < 1e-14);
        REQUIRE(eig.ratio == Catch::Approx((3.0 + s5) / (3.0 - s5)).epsilon(1e-12));
    }
    SECTION("degenerate for a = 0") {
        REQUIRE_THROWS_AS(s_eigenvalues(PTParams{0.0, 1.0, 1.0}), DegenerateSMatrix);
    }
    SECTION("product identity lambda+ lambda- = -|a|^2/a^2") {
        testing::Rng rng(202);
        for (int trial = 0; trial < 100; ++trial) {
            const PTParams p = testing::random_pt_params(rng);
            const SEigenvalues eig = s_eigenvalues(p);
            const Complex expected = -std::conj(p.a) / p.a;
            REQUIRE(std::abs(eig.lambda_plus * eig.lambda_minus - expected) < 1e-12);
        }
    }
    SECTION("real b, c: unimodular eigenvalue pair iff (b-c)^2 < 4") {
        testing::Rng rng(203);
        for (int trial = 0; trial < 200; ++trial) {
            const PTParams p = testing::random_pt_params(rng);
            const double gap = std::real(p.b - p.c);
            const SEigenvalues eig = s_eigenvalues(p);
            if (gap * gap < 4.0) {
                REQUIRE(std::abs(std::abs(eig.lambda_plus) - std::abs(eig.lambda_minus)) <
                        1e-12);
            } else if (gap * gap > 4.0 + 1e-9) {
                REQUIRE(eig.ratio > 1.0);
            }
        }
    }
}

TEST_CASE("cell scattering has the 1/a denominators", "[transfer]") {
    const PTParams p{Complex(0.7, -0.4), 0.9, -0.2};
    const auto amps = transfer_to_scattering(pt_cell(p));
    REQUIRE(std::abs(amps.t - Complex(1.0, 0.0) / p.a) < 1e-16);
    REQUIRE(std::abs(amps.r_left - iu * p.c / p.a) < 1e-16);
    REQUIRE(std::abs(amps.r_right - iu * p.b / p.a) < 1e-16);
}

TEST_CASE("conjugation-symmetry check", "[transfer]") {
    SECTION("free segment with real wavevector passes") {
        const CellFunction cell = [](Complex w) {
            return free_segment_matrix(FreeSegment{2.0, w, w, 1.0});
        };
        const PTSymmetryReport rep = check_pt_symmetry(cell, Complex(1.3, 0.0), 1e-12);
        REQUIRE(rep.pass);
    }
    SECTION("bragg cell with real indices passes") {
        const CellFunction cell = [](Complex w) {
            return bragg_matrix(BraggParams{1.0, 0.2, 0.35, 2.0, 4.0}, w.real());
        };
        const PTSymmetryReport rep = check_pt_symmetry(cell, Complex(1.7, 0.0), 1e-12);
        REQUIRE(rep.pass);
    }
    SECTION("real nonzero m12 violates the off-diagonal constraint") {
        const CellFunction cell = [](Complex) {
            return TransferMatrix::from(Mat2{1.0, 0.5, 0.0, 1.0});
        };
        const PTSymmetryReport rep = check_pt_symmetry(cell, Complex(1.0, 0.0), 1e-12);
        REQUIRE_FALSE(rep.pass);
        REQUIRE(rep.residual_m12 == Catch::Approx(1.0));
        REQUIRE(rep.residual_diag < 1e-15);
        REQUIRE(rep.residual_m21 < 1e-15);
    }
}
