#pragma once

#include <functional>
#include <optional>
#include <thread>

#include "scatternet/network.hpp"

namespace scatternet {

/// A one-parameter family of networks; the binding of the control parameter
/// (wavenumber, detuning, gain strength, ...) is the family's own business.
using NetworkFamily = std::function<NetworkNode(double)>;

/// A single parameterized cell as a family.
[[nodiscard]] inline NetworkFamily pt_cell_family(PTCellEvaluator evaluator) {
    return [evaluator = std::move(evaluator)](double omega) {
        return leaf(pt_cell(evaluator(omega)));
    };
}

// -----------------------------------------------------------------------------
// Sweeps
// -----------------------------------------------------------------------------

struct SweepRecord {
    double omega = 0.0;
    Complex t{0.0, 0.0};
    Complex r_left{0.0, 0.0};
    Complex r_right{0.0, 0.0};
    double T = 0.0;
    double R_left = 0.0;
    double R_right = 0.0;
    double eig_ratio = 1.0;
    double det_residual = 0.0;  // |det(M) - 1|
    std::string flags;          // semicolon-joined markers; empty when clean
};

namespace detail {

inline void append_flag(std::string& flags, const std::string& flag) {
    if (!flags.empty()) {
        flags += ';';
    }
    flags += flag;
}

inline SweepRecord sweep_point(const NetworkFamily& family, double omega) {
    SweepRecord rec;
    rec.omega = omega;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        const ComposeResult composed = compose(family(omega));
        if (composed.used_oracle_fallback) {
            detail::append_flag(rec.flags, "link_fallback");
        }
        const TransferMatrix& m = composed.matrix;
        rec.det_residual = std::abs(m.det() - Complex(1.0, 0.0));
        try {
            const ScatteringAmplitudes amps = transfer_to_scattering(m);
            rec.t = amps.t;
            rec.r_left = amps.r_left;
            rec.r_right = amps.r_right;
            rec.T = amps.T;
            rec.R_left = amps.R_left;
            rec.R_right = amps.R_right;
        } catch (const SpectralSingularity&) {
            detail::append_flag(rec.flags, "m22_singular");
            const double inf = std::numeric_limits<double>::infinity();
            rec.t = rec.r_left = rec.r_right = Complex(inf, 0.0);
            rec.T = rec.R_left = rec.R_right = inf;
        }
        try {
            rec.eig_ratio = s_eigenvalues(pt_params(m)).ratio;
        } catch (const DegenerateSMatrix&) {
            detail::append_flag(rec.flags, "s_matrix_degenerate");
            rec.eig_ratio = nan;
        }
    } catch (const Error& e) {
        detail::append_flag(rec.flags, std::string("error:") + e.what());
        rec.t = rec.r_left = rec.r_right = Complex(nan, nan);
        rec.T = rec.R_left = rec.R_right = nan;
        rec.eig_ratio = nan;
        rec.det_residual = nan;
    }
    return rec;
}

}  // namespace detail

/// Uniform grid evaluation of a family.  Composition failures are recorded in
/// the point's flags and the sweep continues.  Grid evaluation may run on
/// several threads; records are always ordered by grid index, so the output
/// is independent of the thread count.  threads <= 0 picks the hardware
/// concurrency.
[[nodiscard]] inline std::vector<SweepRecord> sweep(const NetworkFamily& family, double lo,
                                                    double hi, int steps, int threads = 1) {
    if (!(lo < hi) || steps < 2) {
        throw Error("sweep requires lo < hi and steps >= 2");
    }
    std::vector<SweepRecord> records(static_cast<std::size_t>(steps));
    const auto grid = [&](int i) {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    };
    int workers = threads;
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
    }
    workers = std::clamp(workers, 1, steps);
    if (workers == 1) {
        for (int i = 0; i < steps; ++i) {
            records[static_cast<std::size_t>(i)] = detail::sweep_point(family, grid(i));
        }
        return records;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const int begin = steps * w / workers;
        const int end = steps * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            for (int i = begin; i < end; ++i) {
                records[static_cast<std::size_t>(i)] = detail::sweep_point(family, grid(i));
            }
        });
    }
    for (std::thread& th : pool) {
        th.join();
    }
    return records;
}

// -----------------------------------------------------------------------------
// Root scanning helpers
// -----------------------------------------------------------------------------

inline constexpr int kDefaultScanPoints = 2001;
inline constexpr double kDefaultFinderTol = 1e-9;

namespace detail {

/// Golden-section minimization of |f| on [lo, hi]; the bracket is shrunk to
/// machine-level width so refined roots are stable under rescanning.
inline double golden_min(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    const double width_tol = 1e-13 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    while (b - a > width_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Bisection on a sign change of a real function.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo > 0.0) == (fhi > 0.0)) {
        return golden_min([&](double w) { return std::abs(f(w)); }, lo, hi);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct ScanRoot {
    double omega = 0.0;
    double residual = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

/// Locates minima of |f| over a uniform scan, refining each bracketed local
/// minimum.  Points where `skip` holds are left out (with a count reported).
inline std::vector<ScanRoot> scan_complex_roots(const std::function<Complex(double)>& f,
                                                double lo, double hi, int points,
                                                const std::function<bool(double)>& skip,
                                                int* skipped) {
    std::vector<double> ws;
    std::vector<double> mags;
    ws.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double w =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        if (skip && skip(w)) {
            if (skipped != nullptr) {
                ++*skipped;
            }
            continue;
        }
        double mag;
        try {
            mag = std::abs(f(w));
        } catch (const Error&) {
            if (skipped != nullptr) {
                ++*skipped;
            }
            continue;
        }
        ws.push_back(w);
        mags.push_back(mag);
    }
    std::vector<ScanRoot> out;
    const auto abs_f = [&](double w) -> double {
        try {
            return std::abs(f(w));
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    for (std::size_t i = 1; i + 1 < ws.size(); ++i) {
        if (mags[i] <= mags[i - 1] && mags[i] <= mags[i + 1]) {
            ScanRoot root;
            root.bracket_lo = ws[i - 1];
            root.bracket_hi = ws[i + 1];
            // prefer a sign-change bisection when one component crosses zero
            const double nan = std::numeric_limits<double>::quiet_NaN();
            const auto re = [&, nan](double w) -> double {
                try {
                    return f(w).real();
                } catch (const Error&) {
                    return nan;
                }
            };
            const auto im = [&, nan](double w) -> double {
                try {
                    return f(w).imag();
                } catch (const Error&) {
                    return nan;
                }
            };
            double w_star;
            if (re(root.bracket_lo) * re(root.bracket_hi) < 0.0) {
                w_star = bisect(re, root.bracket_lo, root.bracket_hi);
            } else if (im(root.bracket_lo) * im(root.bracket_hi) < 0.0) {
                w_star = bisect(im, root.bracket_lo, root.bracket_hi);
            } else {
                w_star = golden_min(abs_f, root.bracket_lo, root.bracket_hi);
            }
            // golden polish around the located point for mixed crossings
            const double h = (root.bracket_hi - root.bracket_lo) * 1e-3;
            w_star = golden_min(abs_f, std::max(root.bracket_lo, w_star - h),
                                std::min(root.bracket_hi, w_star + h));
            root.omega = w_star;
            root.residual = abs_f(w_star);
            if (!out.empty() &&
                std::abs(out.back().omega - root.omega) <
                    1e-9 * std::max(1.0, std::abs(root.omega))) {
                if (root.residual < out.back().residual) {
                    out.back() = root;
                }
                continue;
            }
            out.push_back(root);
        }
    }
    return out;
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Spectral singularities
// -----------------------------------------------------------------------------

enum class SingularityKind { lasing, cpa };

struct SingularityReport {
    SingularityKind kind = SingularityKind::lasing;
    double omega_c = 0.0;
    double residual = 0.0;  // |M22| (lasing) or |M11| (cpa) at omega_c
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    /// True for local minima that do not reach the tolerance; reported so
    /// near-misses remain visible, never counted as singularities.
    bool near_miss = false;
};

/// Locates zeros of M22 (self-oscillation threshold) or M11 (coherent perfect
/// absorption) over the parameter range.  Local minima of the entry modulus
/// are refined; those with residual < tol are singularities, minima within
/// 1e3 * tol are flagged near-misses.
[[nodiscard]] inline std::vector<SingularityReport> find_spectral_singularities(
    const NetworkFamily& family, double lo, double hi, SingularityKind kind,
    double tol = kDefaultFinderTol, int scan_points = kDefaultScanPoints,
    int* skipped = nullptr) {
    const auto entry = [&](double w) -> Complex {
        const TransferMatrix m = compose(family(w)).matrix;
        return kind == SingularityKind::lasing ? m.m22() : m.m11();
    };
    const std::vector<detail::ScanRoot> roots =
        detail::scan_complex_roots(entry, lo, hi, scan_points, nullptr, skipped);
    std::vector<SingularityReport> out;
    for (const detail::ScanRoot& root : roots) {
        if (root.residual >= 1e3 * tol) {
            continue;
        }
        SingularityReport rep;
        rep.kind = kind;
        rep.omega_c = root.omega;
        rep.residual = root.residual;
        rep.bracket_lo = root.bracket_lo;
        rep.bracket_hi = root.bracket_hi;
        rep.near_miss = root.residual >= tol;
        out.push_back(rep);
    }
    return out;
}

// -----------------------------------------------------------------------------
// Exceptional points
// -----------------------------------------------------------------------------

enum class EPMode { single, serial, parallel };

struct ExceptionalPointReport {
    EPMode mode = EPMode::single;
    double omega = 0.0;
    double condition_residual = 0.0;
    int branch_sign = +1;  // which sign of the defining condition was hit
    /// Eigenvalue-modulus ratio of the composed system evaluated just below
    /// and just above the root; a crossing between 1 and > 1 marks a phase
    /// boundary.
    double ratio_below = 1.0;
    double ratio_above = 1.0;
};

/// Locates exceptional points of a cell family.
///   single:     roots of (b - c) -+ 2
///   serial(N):  roots of (b - c) -+ 2 sin(phi)/sin(N phi), phi from the trace
///   parallel(N) roots of lambda_{+-} - (N+1)/(N-1)
/// Scan points where sin(N phi) vanishes are skipped (they sit on the
/// phi = m pi / N transition lines); the count lands in `skipped` when given.
[[nodiscard]] inline std::vector<ExceptionalPointReport> find_exceptional_points(
    const NetworkFamily& family, double lo, double hi, EPMode mode, int n_coupled = 1,
    double tol = kDefaultFinderTol, int scan_points = kDefaultScanPoints,
    int* skipped = nullptr) {
    if (mode != EPMode::single && n_coupled < 2) {
        throw Error("coupled exceptional-point modes require N >= 2");
    }
    const auto cell_params = [&](double w) { return pt_params(compose(family(w)).matrix); };

    std::vector<ExceptionalPointReport> out;
    for (const int sign : {+1, -1}) {
        std::function<Complex(double)> residual;
        std::function<bool(double)> skip;
        if (mode == EPMode::single) {
            residual = [&, sign](double w) {
                const PTParams p = cell_params(w);
                return p.b - p.c - Complex(2.0 * sign, 0.0);
            };
        } else if (mode == EPMode::serial) {
            const double nn = n_coupled;
            skip = [&, nn](double w) {
                const Complex phi = std::acos(compose(family(w)).matrix.mat().trace() / 2.0);
                return std::abs(std::sin(nn * phi)) < 1e-12;
            };
            residual = [&, sign, nn](double w) {
                const TransferMatrix m = compose(family(w)).matrix;
                const PTParams p = pt_params(m);
                const Complex phi = std::acos(m.mat().trace() / 2.0);
                return p.b - p.c -
                       2.0 * static_cast<double>(sign) * std::sin(phi) / std::sin(nn * phi);
            };
        } else {
            const double target = (static_cast<double>(n_coupled) + 1.0) /
                                  (static_cast<double>(n_coupled) - 1.0);
            residual = [&, sign, target](double w) {
                const SEigenvalues eig = s_eigenvalues(cell_params(w));
                const Complex lambda = sign > 0 ? eig.lambda_plus : eig.lambda_minus;
                return lambda - Complex(target, 0.0);
            };
        }
        const std::vector<detail::ScanRoot> roots =
            detail::scan_complex_roots(residual, lo, hi, scan_points, skip, skipped);
        for (const detail::ScanRoot& root : roots) {
            if (root.residual >= tol) {
                continue;
            }
            ExceptionalPointReport rep;
            rep.mode = mode;
            rep.omega = root.omega;
            rep.condition_residual = root.residual;
            rep.branch_sign = sign;
            const double h =
                std::max(1e-6 * (hi - lo), 1e-9 * std::max(1.0, std::abs(root.omega)));
            const auto ratio_at = [&](double w) -> double {
                try {
                    TransferMatrix m = compose(family(w)).matrix;
                    if (mode == EPMode::serial) {
                        m = serial_identical(m, n_coupled);
                    } else if (mode == EPMode::parallel) {
                        m = parallel_identical(m, n_coupled);
                    }
                    return s_eigenvalues(pt_params(m)).ratio;
                } catch (const Error&) {
                    return std::numeric_limits<double>::quiet_NaN();
                }
            };
            rep.ratio_below = ratio_at(root.omega - h);
            rep.ratio_above = ratio_at(root.omega + h);
            out.push_back(rep);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ExceptionalPointReport& x, const ExceptionalPointReport& y) {
                  return x.omega < y.omega;
              });
    return out;
}

// -----------------------------------------------------------------------------
// Parallel Bragg invisibility condition
// -----------------------------------------------------------------------------

/// Gain amplitude n2 at which N parallel-coupled Bragg cells lose their
/// backward coupling (M21 = 0):
///   n2 = (N^2+1)/(2N) n1 - (N^2-1)/N * n0 delta / k.
/// N = 1 recovers the single-cell condition n2 = n1.
[[nodiscard]] inline double bragg_parallel_ep(double n0, double n1, double delta, double k,
                                              int n_coupled) {
    if (!(k > 0.0) || n_coupled < 1) {
        throw Error("bragg_parallel_ep requires k > 0 and N >= 1");
    }
    const double nn = static_cast<double>(n_coupled);
    return (nn * nn + 1.0) / (2.0 * nn) * n1 - (nn * nn - 1.0) / nn * (n0 * delta / k);
}

// -----------------------------------------------------------------------------
// Anisotropic transmission resonances
// -----------------------------------------------------------------------------

enum class AtrSide { left, right };

struct ATRRecord {
    double omega = 0.0;
    AtrSide direction = AtrSide::left;  // the reflectionless incidence side
    double T = 0.0;
    double dead_side_R = 0.0;
};

struct TransparencyPoint {
    double omega = 0.0;
    double T = 0.0;
    double R_left = 0.0;
    double R_right = 0.0;
};

struct ATRScan {
    std::vector<ATRRecord> resonances;
    /// Points transparent from both sides; excluded from the resonance list.
    std::vector<TransparencyPoint> bidirectional;
};

inline constexpr double kDefaultAtrTol = 1e-6;

/// Flags sweep points with unit transmission and exactly one vanishing
/// reflection.  Bidirectionally transparent points are reported separately.
[[nodiscard]] inline ATRScan detect_atr(const std::vector<SweepRecord>& records,
                                        double tol = kDefaultAtrTol) {
    if (records.empty()) {
        throw Error("detect_atr requires a non-empty record list");
    }
    ATRScan scan;
    for (const SweepRecord& rec : records) {
        if (!std::isfinite(rec.T) || std::abs(rec.T - 1.0) >= tol) {
            continue;
        }
        const bool left_dead = rec.R_left < tol;
        const bool right_dead = rec.R_right < tol;
        if (left_dead && right_dead) {
            scan.bidirectional.push_back({rec.omega, rec.T, rec.R_left, rec.R_right});
            continue;
        }
        if (left_dead || right_dead) {
            ATRRecord atr;
            atr.omega = rec.omega;
            atr.direction = left_dead ? AtrSide::left : AtrSide::right;
            atr.T = rec.T;
            atr.dead_side_R = left_dead ? rec.R_left : rec.R_right;
            scan.resonances.push_back(atr);
        }
    }
    return scan;
}

}  // namespace scatternet
