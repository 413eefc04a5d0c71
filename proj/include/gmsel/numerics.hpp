#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "gmsel/errors.hpp"

namespace gmsel {

/// A probability kept as its natural logarithm so that tails far below the
/// smallest double (down to e^-1e300 and beyond) stay representable.
class TailProb {
public:
    TailProb() = default;

    static TailProb from_log(double log_value) {
        if (!(log_value <= 0.0)) {
            if (log_value < 1e-14) return TailProb(0.0);  // rounding above 1
            throw DomainError("TailProb: log probability must be <= 0");
        }
        return TailProb(log_value);
    }
    static TailProb from_value(double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("TailProb: value must lie in [0, 1]");
        return TailProb(p == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(p));
    }

    double value() const noexcept { return std::exp(log_); }
    double log_value() const noexcept { return log_; }

private:
    explicit TailProb(double log_value) : log_(log_value) {}
    double log_ = 0.0;
};

/// log B(a, b) for a, b > 0.
double ln_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b) and its complement, in log space.
/// `x` and `y` must satisfy x + y = 1; passing both keeps the complement
/// accurate when x is close to 1. Continued fraction with the usual
/// symmetry switch at x = (a + 1) / (a + b + 2).
struct IncompleteBeta {
    double log_lower;  ///< log I_x(a, b)
    double log_upper;  ///< log (1 - I_x(a, b))
};
IncompleteBeta log_ibeta(double a, double b, double x, double y);

/// P(F >= x) for a Fisher variable with (d1, d2) degrees of freedom.
/// Degrees of freedom may be non-integral internally; the public contract
/// is positive integers.
TailProb fisher_sf(double d1, double d2, double x);
inline TailProb fisher_sf(int d1, int d2, double x) {
    return fisher_sf(static_cast<double>(d1), static_cast<double>(d2), x);
}

/// P(X >= x) for a chi-square variable with k degrees of freedom.
TailProb chisq_sf(double k, double x);
inline TailProb chisq_sf(int k, double x) { return chisq_sf(static_cast<double>(k), x); }

/// log Q(a, x), the regularized upper incomplete gamma function.
double log_gamma_q(double a, double x);

/// log C(n, k) through log-gamma.
double log_binomial(double n, double k);

/// log(exp(a) - exp(b)) for a >= b.
inline double log_diff_exp(double a, double b) {
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(-std::exp(b - a));
}

/// log(exp(a) + exp(b)).
inline double log_add_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

struct SolveOptions {
    double f_rel_tol = 1e-12;  ///< stop when |f(x) - target| <= f_rel_tol * |target|
    double x_rel_tol = 1e-9;   ///< or when the bracket is narrower than x_rel_tol * (1 + x)
    int max_iter = 2000;
};

/// Solves f(x) = target for a continuous, strictly decreasing f on [0, inf).
///
/// The bracket is grown by doubling from `hi_hint`; the root is then
/// refined by false-position steps (Illinois variant) with a bisection
/// fallback whenever a step fails to halve the bracket.
///
/// Throws NoSolutionError when f(0) < target and DivergenceError when no
/// bracket is found below 2^60 * hi_hint.
template <class F>
double solve_monotone(F&& f, double target, double hi_hint, const SolveOptions& opt = {}) {
    if (!(hi_hint > 0.0)) throw DomainError("solve_monotone: hi_hint must be positive");
    const double f0 = f(0.0);
    if (f0 < target) throw NoSolutionError("solve_monotone: target exceeds f(0)");
    const double ftol = opt.f_rel_tol * std::abs(target);
    if (std::abs(f0 - target) <= ftol) return 0.0;

    double lo = 0.0, flo = f0;
    double hi = hi_hint, fhi = f(hi);
    const double limit = std::ldexp(hi_hint, 60);
    while (fhi > target) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        if (hi > limit) throw DivergenceError("solve_monotone: no bracket below 2^60 * hi_hint");
        fhi = f(hi);
    }
    if (std::abs(fhi - target) <= ftol) return hi;

    // Offsets g = f - target: g(lo) > 0 >= g(hi).
    double glo = flo - target, ghi = fhi - target;
    int side = 0;
    double prev_width = hi - lo;
    bool bisect_next = false;
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        double x;
        if (bisect_next || !std::isfinite(glo) || !std::isfinite(ghi)) {
            x = 0.5 * (lo + hi);
        } else {
            x = lo + glo * (hi - lo) / (glo - ghi);
            if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        }
        const double gx = f(x) - target;
        if (std::abs(gx) <= ftol) return x;
        if (gx > 0.0) {
            lo = x;
            glo = gx;
            if (side == +1) ghi *= 0.5;
            side = +1;
        } else {
            hi = x;
            ghi = gx;
            if (side == -1) glo *= 0.5;
            side = -1;
        }
        const double width = hi - lo;
        if (width <= opt.x_rel_tol * (1.0 + std::abs(x))) {
            return std::abs(glo) < std::abs(ghi) ? lo : hi;
        }
        bisect_next = width > 0.5 * prev_width;
        prev_width = width;
    }
    return 0.5 * (lo + hi);
}

}  // namespace gmsel
