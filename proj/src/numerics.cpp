#include "gmsel/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gmsel {
namespace {

constexpr double kEps = 3e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta: continued fraction did not converge (a=" +
                             std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

double safe_log(double v) {
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

}  // namespace

double ln_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("ln_beta: arguments must be positive");
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_binomial(double n, double k) {
    if (k < 0.0 || k > n) throw DomainError("log_binomial: need 0 <= k <= n");
    if (k == 0.0 || k == n) return 0.0;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

IncompleteBeta log_ibeta(double a, double b, double x, double y) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_ibeta: shape parameters must be positive");
    if (!(x >= 0.0 && y >= 0.0)) throw DomainError("log_ibeta: x must lie in [0, 1]");
    constexpr double ninf = -std::numeric_limits<double>::infinity();
    if (x == 0.0) return {ninf, 0.0};
    if (y == 0.0) return {0.0, ninf};

    const double log_front = a * std::log(x) + b * std::log(y) - ln_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lower = log_front + std::log(beta_continued_fraction(a, b, x)) - std::log(a);
        return {lower, std::log1p(-std::exp(lower))};
    }
    const double upper = log_front + std::log(beta_continued_fraction(b, a, y)) - std::log(b);
    return {std::log1p(-std::exp(upper)), upper};
}

TailProb fisher_sf(double d1, double d2, double x) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw DomainError("fisher_sf: degrees of freedom must be positive");
    if (!(x >= 0.0)) throw DomainError("fisher_sf: x must be non-negative");
    if (x == 0.0) return TailProb::from_log(0.0);
    if (std::isinf(x)) return TailProb::from_log(-std::numeric_limits<double>::infinity());
    // P(F >= x) = I_z(d2/2, d1/2) with z = d2 / (d2 + d1 x).
    const double denom = d2 + d1 * x;
    const double z = d2 / denom;
    const double w = d1 * x / denom;
    return TailProb::from_log(std::min(0.0, log_ibeta(0.5 * d2, 0.5 * d1, z, w).log_lower));
}

double log_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw DomainError("log_gamma_q: shape must be positive");
    if (!(x >= 0.0)) throw DomainError("log_gamma_q: x must be non-negative");
    if (x == 0.0) return 0.0;
    const double log_front = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        // Series for the lower tail P(a, x).
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int n = 0; n < kMaxIter; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * kEps) {
                return std::log1p(-std::exp(log_front + std::log(sum)));
            }
        }
        throw std::runtime_error("incomplete gamma: series did not converge");
    }
    // Continued fraction for Q(a, x) (modified Lentz).
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return log_front + safe_log(h);
    }
    throw std::runtime_error("incomplete gamma: continued fraction did not converge");
}

TailProb chisq_sf(double k, double x) {
    if (!(k >= 1.0)) throw DomainError("chisq_sf: degrees of freedom must be >= 1");
    if (!(x >= 0.0)) throw DomainError("chisq_sf: x must be non-negative");
    return TailProb::from_log(std::min(0.0, log_gamma_q(0.5 * k, 0.5 * x)));
}

}  // namespace gmsel
