#pragma once

#include <functional>
#include <utility>

#include "scatternet/matrix2.hpp"

namespace scatternet {

/// Default tolerance below which |m22| (relative to the matrix norm) is
/// treated as an exact spectral singularity.
inline constexpr double kSingularityTol = 1e-9;

// -----------------------------------------------------------------------------
// TransferMatrix
// -----------------------------------------------------------------------------

/// Complex 2x2 transfer matrix in the global amplitude convention: it maps the
/// left-lead (forward, backward) amplitude pair to the right-lead pair.  Under
/// this convention t = 1/m22, r_left = -m21/m22 and r_right = m12/m22.
/// The determinant is tracked alongside the entries so that products of long
/// chains keep an O(eps)-accurate determinant.
class TransferMatrix {
public:
    TransferMatrix() : mat_(Mat2::identity()), det_(1.0, 0.0) {}

    /// Builds from entries; rejects non-finite input.
    [[nodiscard]] static TransferMatrix from(const Mat2& m) {
        if (!m.all_finite()) {
            throw Error("transfer matrix entries must be finite");
        }
        return TransferMatrix(m, m.det());
    }

    /// Builds with a caller-supplied determinant, for constructions where an
    /// analytically exact value beats the cancellation-prone entry formula.
    [[nodiscard]] static TransferMatrix from(const Mat2& m, const Complex& det) {
        if (!m.all_finite() || !is_finite(det)) {
            throw Error("transfer matrix entries must be finite");
        }
        return TransferMatrix(m, det);
    }

    [[nodiscard]] const Mat2& mat() const { return mat_; }
    [[nodiscard]] Complex m11() const { return mat_.m11; }
    [[nodiscard]] Complex m12() const { return mat_.m12; }
    [[nodiscard]] Complex m21() const { return mat_.m21; }
    [[nodiscard]] Complex m22() const { return mat_.m22; }

    /// Cached determinant (product-accumulated under composition).
    [[nodiscard]] Complex det() const { return det_; }

    [[nodiscard]] double norm() const { return mat_.norm(); }

    [[nodiscard]] bool is_unimodular(double tol = 1e-10) const {
        return std::abs(det_ - Complex(1.0, 0.0)) <= tol * std::max(1.0, std::abs(det_));
    }

    /// Matrix product; the cached determinants multiply exactly.
    [[nodiscard]] TransferMatrix operator*(const TransferMatrix& r) const {
        return TransferMatrix(mat_ * r.mat_, det_ * r.det_);
    }

    [[nodiscard]] TransferMatrix inverse() const {
        return TransferMatrix(mat_.inverse(), Complex(1.0, 0.0) / det_);
    }

private:
    TransferMatrix(const Mat2& m, const Complex& d) : mat_(m), det_(d) {}

    Mat2 mat_;
    Complex det_;
};

/// Cell evaluator over a (possibly complex) control parameter.
using CellFunction = std::function<TransferMatrix(Complex)>;

// -----------------------------------------------------------------------------
// Scattering quantities
// -----------------------------------------------------------------------------

struct ScatteringAmplitudes {
    Complex t;
    Complex r_left;
    Complex r_right;
    double T = 0.0;
    double R_left = 0.0;
    double R_right = 0.0;
};

/// The (a, b, c) coefficients of a transfer matrix written as
/// [[conj(a), i b], [-i c, a]]; extraction below works for any matrix.
struct PTParams {
    Complex a;
    Complex b;
    Complex c;
};

struct SEigenvalues {
    Complex lambda_plus;
    Complex lambda_minus;
    /// |lambda_plus| / |lambda_minus| after ordering; >= 1.
    double ratio = 1.0;
};

struct PTSymmetryReport {
    Complex omega;
    double residual_diag = 0.0;  // |m22(w) - conj(m11(w*))|
    double residual_m12 = 0.0;   // |m12(w) + conj(m12(w*))|
    double residual_m21 = 0.0;   // |m21(w) + conj(m21(w*))|
    double tol = 0.0;
    bool pass = false;

    [[nodiscard]] double max_residual() const {
        return std::max(residual_diag, std::max(residual_m12, residual_m21));
    }
};

// -----------------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------------

/// Scattering amplitudes for the global convention: t = 1/m22,
/// r_left = -m21/m22, r_right = m12/m22.  Throws SpectralSingularity when
/// |m22| < tol * norm (the amplitudes have no finite value there).
[[nodiscard]] inline ScatteringAmplitudes transfer_to_scattering(
    const TransferMatrix& m, double tol = kSingularityTol) {
    const Complex d = m.m22();
    if (std::abs(d) < tol * std::max(1.0, m.norm())) {
        throw SpectralSingularity(std::abs(d));
    }
    ScatteringAmplitudes out;
    out.t = Complex(1.0, 0.0) / d;
    out.r_left = -m.m21() / d;
    out.r_right = m.m12() / d;
    out.T = std::norm(out.t);
    out.R_left = std::norm(out.r_left);
    out.R_right = std::norm(out.r_right);
    return out;
}

/// Coefficient extraction: a = m22, b = -i m12, c = i m21.  Inverse of the
/// pt_cell constructor for matrices of that form.
[[nodiscard]] inline PTParams pt_params(const TransferMatrix& m) {
    return PTParams{m.m22(), -iu * m.m12(), iu * m.m21()};
}

/// Eigenvalues of the scattering matrix, lambda = i/(2a) [(b+c) +- sqrt((b-c)^2 - 4)],
/// ordered so |lambda_plus| >= |lambda_minus| (modulus ties keep the + branch
/// first unless the - branch has larger imaginary part).
[[nodiscard]] inline SEigenvalues s_eigenvalues(const PTParams& p) {
    if (std::abs(p.a) == 0.0) {
        throw DegenerateSMatrix("scattering matrix undefined for a = 0");
    }
    const Complex disc = std::sqrt((p.b - p.c) * (p.b - p.c) - Complex(4.0, 0.0));
    const Complex pref = iu / (2.0 * p.a);
    Complex plus = pref * (p.b + p.c + disc);
    Complex minus = pref * (p.b + p.c - disc);
    const double ap = std::abs(plus);
    const double am = std::abs(minus);
    if (am > ap || (am == ap && minus.imag() > plus.imag())) {
        std::swap(plus, minus);
    }
    SEigenvalues out{plus, minus, 1.0};
    out.ratio = std::abs(minus) > 0.0 ? std::abs(plus) / std::abs(minus)
                                      : std::numeric_limits<double>::infinity();
    return out;
}

/// Checks the conjugation constraints m22(w) = conj(m11(w*)),
/// m12(w) = -conj(m12(w*)), m21(w) = -conj(m21(w*)) at the given parameter.
[[nodiscard]] inline PTSymmetryReport check_pt_symmetry(const CellFunction& cell,
                                                        const Complex& omega,
                                                        double tol) {
    const TransferMatrix at = cell(omega);
    const TransferMatrix at_conj = cell(std::conj(omega));
    PTSymmetryReport rep;
    rep.omega = omega;
    rep.tol = tol;
    rep.residual_diag = std::abs(at.m22() - std::conj(at_conj.m11()));
    rep.residual_m12 = std::abs(at.m12() + std::conj(at_conj.m12()));
    rep.residual_m21 = std::abs(at.m21() + std::conj(at_conj.m21()));
    rep.pass = rep.max_residual() <= tol;
    return rep;
}

}  // namespace scatternet
