#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace scatternet {

using Complex = std::complex<double>;

/// The imaginary unit.
inline constexpr Complex iu{0.0, 1.0};

[[nodiscard]] inline bool is_finite(double x) { return std::isfinite(x); }

[[nodiscard]] inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// -----------------------------------------------------------------------------
// Error types
// -----------------------------------------------------------------------------

/// Base class for all numerical failures raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when |m22| (or |m11|) sits below the singularity tolerance, i.e. the
/// scattering amplitudes diverge.  Carries the offending modulus.
class SpectralSingularity : public Error {
public:
    explicit SpectralSingularity(double entry_abs)
        : Error("transfer matrix entry modulus " + std::to_string(entry_abs) +
                " below singularity tolerance"),
          entry_abs_(entry_abs) {}
    [[nodiscard]] double entry_abs() const { return entry_abs_; }

private:
    double entry_abs_;
};

class DegenerateSMatrix : public Error {
public:
    using Error::Error;
};

class DegenerateVertex : public Error {
public:
    using Error::Error;
};

class DegenerateLink : public Error {
public:
    using Error::Error;
};

class NotUnimodular : public Error {
public:
    using Error::Error;
};

class NoUniqueSolution : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// -----------------------------------------------------------------------------
// Mat2: complex 2x2 matrix
// -----------------------------------------------------------------------------

/// Complex 2x2 matrix with value semantics.  Entry names follow the row/column
/// position (m11 is the top-left entry).
struct Mat2 {
    Complex m11{1.0, 0.0};
    Complex m12{0.0, 0.0};
    Complex m21{0.0, 0.0};
    Complex m22{1.0, 0.0};

    [[nodiscard]] static Mat2 identity() { return Mat2{}; }

    [[nodiscard]] Complex det() const { return m11 * m22 - m12 * m21; }

    [[nodiscard]] Complex trace() const { return m11 + m22; }

    /// Max-modulus entry norm.
    [[nodiscard]] double norm() const {
        return std::max(std::max(std::abs(m11), std::abs(m12)),
                        std::max(std::abs(m21), std::abs(m22)));
    }

    [[nodiscard]] bool all_finite() const {
        return is_finite(m11) && is_finite(m12) && is_finite(m21) && is_finite(m22);
    }

    [[nodiscard]] Mat2 operator*(const Mat2& r) const {
        return Mat2{m11 * r.m11 + m12 * r.m21, m11 * r.m12 + m12 * r.m22,
                    m21 * r.m11 + m22 * r.m21, m21 * r.m12 + m22 * r.m22};
    }

    [[nodiscard]] Mat2 operator+(const Mat2& r) const {
        return Mat2{m11 + r.m11, m12 + r.m12, m21 + r.m21, m22 + r.m22};
    }

    [[nodiscard]] Mat2 operator-(const Mat2& r) const {
        return Mat2{m11 - r.m11, m12 - r.m12, m21 - r.m21, m22 - r.m22};
    }

    Mat2& operator+=(const Mat2& r) {
        m11 += r.m11;
        m12 += r.m12;
        m21 += r.m21;
        m22 += r.m22;
        return *this;
    }

    /// Inverse via the adjugate.  Requires |det| > tol * norm()^2.
    [[nodiscard]] Mat2 inverse(double tol = 1e-14) const {
        const Complex d = det();
        const double scale = norm();
        if (std::abs(d) <= tol * std::max(1.0, scale * scale)) {
            throw Error("2x2 matrix is numerically singular (|det| = " +
                        std::to_string(std::abs(d)) + ")");
        }
        return Mat2{m22 / d, -m12 / d, -m21 / d, m11 / d};
    }

    /// Entrywise max-modulus distance.
    [[nodiscard]] double distance(const Mat2& r) const {
        return std::max(std::max(std::abs(m11 - r.m11), std::abs(m12 - r.m12)),
                        std::max(std::abs(m21 - r.m21), std::abs(m22 - r.m22)));
    }
};

[[nodiscard]] inline Mat2 operator*(const Complex& s, const Mat2& m) {
    return Mat2{s * m.m11, s * m.m12, s * m.m21, s * m.m22};
}

[[nodiscard]] inline Mat2 operator*(double s, const Mat2& m) {
    return Complex(s, 0.0) * m;
}

}  // namespace scatternet
