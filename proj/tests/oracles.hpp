#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they check: quadratic residuals are evaluated directly from the raw
// polynomial, the coefficient chain is re-derived formula by formula, and
// minimizers come from dense grid scans rather than closed forms.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "rotor/aero.hpp"

namespace oracle {

// Raw residual of the induced-inflow quadratic.
inline double quad_residual(const rotor::AeroCoefficients& c, double ls, double li) {
    return c.c4 * li * li + li * (c.c4 * ls + c.c1) + c.c1 * (ls - c.c2);
}

// Forward chain evaluated independently (quadratic formula written out,
// selecting the smallest non-negative root).
struct Chain {
    double lambda_i;
    double ct;
    double kappa;
    double cpam;
};

inline std::optional<Chain> forward_chain(const rotor::AeroCoefficients& c, double ls) {
    const double a = c.c4;
    const double b = c.c4 * ls + c.c1;
    const double cc = c.c1 * (ls - c.c2);
    const double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0) {
        return std::nullopt;
    }
    const double sq = std::sqrt(disc);
    const double r1 = (-b + sq) / (2.0 * a);
    const double r2 = (-b - sq) / (2.0 * a);
    double li = std::numeric_limits<double>::infinity();
    if (r1 >= 0.0) {
        li = r1;
    }
    if (r2 >= 0.0 && r2 < li) {
        li = r2;
    }
    if (!std::isfinite(li)) {
        return std::nullopt;
    }
    Chain out;
    out.lambda_i = li;
    out.ct = c.c1 * (c.c2 - (ls + li));
    out.kappa = c.d0 + c.d1 * out.ct;
    out.cpam = c.c3 + out.ct * (out.kappa * li + ls) * c.c0;
    return out;
}

// Minimum of |quadratic| over a uniform lambda_i grid, restricted to one side
// of zero so the admissible root is unambiguous. Serial reference.
struct ScanResult {
    double x = 0.0;
    double value = std::numeric_limits<double>::infinity();
};

inline ScanResult scan_lambda_i_serial(const rotor::AeroCoefficients& c, double ls, double lo,
                                       double hi, double step) {
    const double a = c.c4;
    const double b = c.c4 * ls + c.c1;
    const double cc = c.c1 * (ls - c.c2);
    ScanResult best;
    const std::int64_t n = static_cast<std::int64_t>((hi - lo) / step) + 1;
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = lo + step * static_cast<double>(i);
        const double q = std::fabs((a * x + b) * x + cc);
        if (q < best.value) {
            best.value = q;
            best.x = x;
        }
    }
    return best;
}

// Same scan with an OpenMP SIMD min-reduction over blocks followed by a
// scalar rescan of the winning block; must agree with the serial reference.
inline ScanResult scan_lambda_i_fast(const rotor::AeroCoefficients& c, double ls, double lo,
                                     double hi, double step) {
    const double a = c.c4;
    const double b = c.c4 * ls + c.c1;
    const double cc = c.c1 * (ls - c.c2);
    const std::int64_t n = static_cast<std::int64_t>((hi - lo) / step) + 1;
    constexpr std::int64_t block = 1 << 16;

    double best_val = std::numeric_limits<double>::infinity();
    std::int64_t best_block = 0;
    for (std::int64_t base = 0; base < n; base += block) {
        const std::int64_t end = std::min(base + block, n);
        double m = std::numeric_limits<double>::infinity();
#pragma omp simd reduction(min : m)
        for (std::int64_t i = base; i < end; ++i) {
            const double x = lo + step * static_cast<double>(i);
            double q = (a * x + b) * x + cc;
            q = q < 0.0 ? -q : q;
            m = q < m ? q : m;
        }
        if (m < best_val) {
            best_val = m;
            best_block = base;
        }
    }
    // locate the first index attaining the block minimum
    ScanResult best;
    best.value = best_val;
    const std::int64_t end = std::min(best_block + block, n);
    for (std::int64_t i = best_block; i < end; ++i) {
        const double x = lo + step * static_cast<double>(i);
        const double q = std::fabs((a * x + b) * x + cc);
        if (q == best_val) {
            best.x = x;
            break;
        }
    }
    return best;
}

// Dense scan for the lambda_s that minimizes |cpam_target - model cpam|.
inline double scan_lambda_s(const rotor::AeroCoefficients& c, double cpam_target, double lo,
                            double hi, double step) {
    double best_x = lo;
    double best = std::numeric_limits<double>::infinity();
    const std::int64_t n = static_cast<std::int64_t>((hi - lo) / step) + 1;
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = lo + step * static_cast<double>(i);
        const auto ch = forward_chain(c, x);
        if (!ch) {
            continue;
        }
        const double r = std::fabs(cpam_target - ch->cpam);
        if (r < best) {
            best = r;
            best_x = x;
        }
    }
    return best_x;
}

} // namespace oracle
