#pragma once

#include <algorithm>
#include <vector>

#include "scatternet/transfer.hpp"

namespace scatternet {

// -----------------------------------------------------------------------------
// Physical constants (natural units by default)
// -----------------------------------------------------------------------------

struct PhysicalConstants {
    double hbar = 1.0;
    double e_charge = 1.0;
    double c_light = 1.0;
    double default_mass = 1.0;

    void validate() const {
        if (!(hbar > 0.0 && e_charge > 0.0 && c_light > 0.0 && default_mass > 0.0)) {
            throw Error("physical constants must be strictly positive");
        }
    }
};

// -----------------------------------------------------------------------------
// Free segment
// -----------------------------------------------------------------------------

/// Uniform branch segment with independent forward/backward wavevectors.
/// A flux-pierced ring arm carries k_forward on one arm equal to the other
/// arm's k_backward, which is why the two directions are kept separate.
struct FreeSegment {
    double length = 0.0;
    Complex k_forward{0.0, 0.0};
    Complex k_backward{0.0, 0.0};
    double mass = 1.0;
};

/// diag(e^{i k_f L}, e^{-i k_b L}) in the global convention.
[[nodiscard]] inline TransferMatrix free_segment_matrix(const FreeSegment& seg) {
    if (!(seg.length >= 0.0) || !(seg.mass > 0.0) || !is_finite(seg.k_forward) ||
        !is_finite(seg.k_backward)) {
        throw Error("free segment requires finite wavevectors, length >= 0 and mass > 0");
    }
    const Complex phase_f = std::exp(iu * seg.k_forward * seg.length);
    const Complex phase_b = std::exp(-iu * seg.k_backward * seg.length);
    return TransferMatrix::from(Mat2{phase_f, 0.0, 0.0, phase_b});
}

// -----------------------------------------------------------------------------
// Parameterized PT cell
// -----------------------------------------------------------------------------

/// Builds [[conj(a), i b], [-i c, a]].  det = |a|^2 - b c; non-unimodular
/// coefficient sets are allowed and the determinant is carried through.
[[nodiscard]] inline TransferMatrix pt_cell(const PTParams& p) {
    if (!is_finite(p.a) || !is_finite(p.b) || !is_finite(p.c)) {
        throw Error("pt_cell requires finite coefficients");
    }
    return TransferMatrix::from(Mat2{std::conj(p.a), iu * p.b, -iu * p.c, p.a});
}

/// Arbitrary coefficient evaluator over a real control parameter.  Callbacks
/// must be safe for concurrent invocation (threaded sweeps call them from
/// several workers).
using PTCellEvaluator = std::function<PTParams(double)>;

/// Cell whose (a, b, c) coefficients are sampled on a parameter grid and
/// linearly interpolated; the CLI front end uses this for table-driven cells.
/// Library callers may instead pass arbitrary evaluator callbacks anywhere a
/// cell family is expected.
struct PTCellTable {
    std::vector<double> omega;
    std::vector<Complex> a;
    std::vector<Complex> b;
    std::vector<Complex> c;

    [[nodiscard]] PTParams eval(double w) const {
        if (omega.size() < 2 || a.size() != omega.size() || b.size() != omega.size() ||
            c.size() != omega.size()) {
            throw Error("pt table requires >= 2 samples with equally sized columns");
        }
        const auto hi = std::upper_bound(omega.begin(), omega.end(), w);
        std::size_t i1 = static_cast<std::size_t>(hi - omega.begin());
        i1 = std::clamp<std::size_t>(i1, 1, omega.size() - 1);
        const std::size_t i0 = i1 - 1;
        const double span = omega[i1] - omega[i0];
        const double s = span > 0.0 ? std::clamp((w - omega[i0]) / span, 0.0, 1.0) : 0.0;
        const auto lerp = [s](const Complex& x, const Complex& y) { return x + s * (y - x); };
        return PTParams{lerp(a[i0], a[i1]), lerp(b[i0], b[i1]), lerp(c[i0], c[i1])};
    }
};

// -----------------------------------------------------------------------------
// PT-symmetric Bragg cell
// -----------------------------------------------------------------------------

/// Refractive-index profile n0 + n1 cos(2 beta z) + i n2 sin(2 beta z) over a
/// length L, in the near-resonance (small detuning) approximation.
struct BraggParams {
    double n0 = 1.0;
    double n1 = 0.0;
    double n2 = 0.0;
    double grating = 1.0;  // grating number beta; detuning is grating - k
    double length = 1.0;
};

namespace detail {

/// sin(z)/z with the removable singularity filled by its series.
[[nodiscard]] inline Complex sinc(const Complex& z) {
    if (std::abs(z) < 1e-4) {
        const Complex z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

}  // namespace detail

/// Transfer matrix of the Bragg cell at wavenumber k.  The internal rate is
/// lambda^2 = delta^2 - k^2 (n1^2 - n2^2) / (4 n0^2), the unique choice with
/// det = 1; entries depend on lambda^2 only, so the sqrt branch is immaterial.
[[nodiscard]] inline TransferMatrix bragg_matrix(const BraggParams& p, double k) {
    if (!(p.n0 > 0.0) || !(p.length > 0.0)) {
        throw Error("bragg cell requires n0 > 0 and length > 0");
    }
    if (!(k > 0.0)) {
        throw Error("bragg cell requires k > 0");
    }
    const double delta = p.grating - k;
    const Complex lambda2{delta * delta -
                              k * k * (p.n1 * p.n1 - p.n2 * p.n2) / (4.0 * p.n0 * p.n0),
                          0.0};
    const Complex lambda = std::sqrt(lambda2);
    const Complex arg = lambda * p.length;
    const Complex cosl = std::cos(arg);
    const Complex sinc_l = detail::sinc(arg) * p.length;  // sin(lambda L)/lambda
    const Complex off = k / (2.0 * p.n0) * sinc_l;
    return TransferMatrix::from(Mat2{cosl - iu * delta * sinc_l, iu * (p.n1 + p.n2) * off,
                                     -iu * (p.n1 - p.n2) * off, cosl + iu * delta * sinc_l});
}

// -----------------------------------------------------------------------------
// Aharonov-Bohm ring
// -----------------------------------------------------------------------------

/// Two-arm flux-pierced ring.  The flux phase is psi = -e Phi / (hbar c); the
/// arm wavevectors are k +- e Phi / (hbar c L).
struct ABRingSpec {
    double k = 1.0;
    double flux = 0.0;
    double circumference = 1.0;
    double l1 = 0.5;
    double l2 = 0.5;

    void validate() const {
        if (!(l1 > 0.0) || !(l2 > 0.0) ||
            std::abs(l1 + l2 - circumference) > 1e-12 * std::max(1.0, circumference)) {
            throw Error("AB ring requires l1, l2 > 0 with l1 + l2 = circumference");
        }
    }

    [[nodiscard]] double flux_phase(const PhysicalConstants& c = {}) const {
        return -c.e_charge * flux / (c.hbar * c.c_light);
    }

    /// Spec with the flux chosen so that flux_phase() == psi.
    [[nodiscard]] static ABRingSpec from_flux_phase(double k, double psi, double circumference,
                                                    const PhysicalConstants& c = {}) {
        ABRingSpec spec;
        spec.k = k;
        spec.flux = -psi * c.hbar * c.c_light / c.e_charge;
        spec.circumference = circumference;
        spec.l1 = circumference / 2.0;
        spec.l2 = circumference / 2.0;
        return spec;
    }
};

/// Arm wavevectors (k1, k2) = k +- e Phi / (hbar c L).  On each arm the
/// backward wavevector equals the other arm's forward one.
[[nodiscard]] inline std::pair<double, double> ab_ring_wavevectors(
    const ABRingSpec& spec, const PhysicalConstants& c = {}) {
    spec.validate();
    c.validate();
    const double shift = c.e_charge * spec.flux / (c.hbar * c.c_light * spec.circumference);
    return {spec.k + shift, spec.k - shift};
}

}  // namespace scatternet
