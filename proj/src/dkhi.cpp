#include "gmsel/dkhi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gmsel/errors.hpp"
#include "gmsel/numerics.hpp"

namespace gmsel {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_dkhi_args(int D, int N, double x, const char* who) {
    if (D < 1 || N < 1) throw DomainError(std::string(who) + ": need D >= 1 and N >= 1");
    if (!(x >= 0.0)) throw DomainError(std::string(who) + ": x must be non-negative");
}

void check_fish_args(int D, int N, double x, const char* who) {
    if (D < 1) throw DomainError(std::string(who) + ": need D >= 1");
    if (N < 3) throw DomainError(std::string(who) + ": need N >= 3 for a finite Fisher mean");
    if (!(x >= 0.0)) throw DomainError(std::string(who) + ": x must be non-negative");
}

// log(a - b) from log a and log b, or -inf when rounding makes b >= a.
double log_difference(double log_a, double log_b) {
    if (log_b >= log_a) return kNegInf;
    return log_diff_exp(log_a, log_b);
}

double log_dkhi_beta_form(int D, int N, double x) {
    const double d = D, n = N;
    return -ln_beta(0.5 * n, 1.0 + 0.5 * d) + 0.5 * n * std::log(n / (n + x)) +
           0.5 * d * std::log(x / (n + x)) + std::log(2.0 * (2.0 * x + n * d)) -
           std::log(n * (n + 2.0) * x);
}

double log_fish_beta_form(int D, int N, double x) {
    const double d = D, n = N;
    return std::log(2.0) - ln_beta(0.5 * d, 0.5 * n) + 0.5 * n * std::log(n / (n + d * x)) +
           (0.5 * d - 1.0) * std::log(d * x / (n + d * x)) + std::log(2.0 * x + n) -
           2.0 * std::log(n);
}

// Starting point for the bracket search from the tail decay rate: Dkhi
// falls like x^(-N/2) and Fish like x^(1 - N/2).
double tail_hint(double decay, double scale, double log_q) {
    const double guess = scale * std::exp(std::min(690.0, -log_q / decay));
    return std::max(2.0, std::min(guess, 1e300));
}

// Solves log_f(x) = log_q over x >= 0 where log_f is decreasing. The result
// is pushed up until log_f(x) <= log_q so that it never undershoots the root.
template <class F>
double invert_upper(F&& log_f, double log_q, double hi_hint) {
    SolveOptions opt;
    opt.f_rel_tol = 0.0;
    opt.x_rel_tol = 1e-15;
    double x = solve_monotone(log_f, log_q, hi_hint, opt);
    for (int i = 0; i < 200 && log_f(x) > log_q; ++i) {
        x = std::nextafter(x, std::numeric_limits<double>::infinity()) * (1.0 + 1e-15);
    }
    return x;
}

SolveOptions exact_inverse_options() {
    SolveOptions opt;
    opt.f_rel_tol = 1e-13;
    opt.x_rel_tol = 1e-14;
    return opt;
}

double check_log_q(double log_q, const char* who) {
    if (std::isnan(log_q) || log_q == kNegInf) throw DomainError(std::string(who) + ": q must be positive");
    return log_q;
}

}  // namespace

double log_dkhi(int D, int N, double x) {
    check_dkhi_args(D, N, x, "dkhi");
    if (x == 0.0) return 0.0;
    const double d = D, n = N;
    const double t1 = fisher_sf(d + 2.0, n, x / (d + 2.0)).log_value();
    const double t2 = std::log(x / d) + fisher_sf(d, n + 2.0, (n + 2.0) * x / (d * n)).log_value();
    return std::min(0.0, log_difference(t1, t2));
}

double dkhi(int D, int N, double x) { return std::exp(log_dkhi(D, N, x)); }

double log_fish(int D, int N, double x) {
    check_fish_args(D, N, x, "fish");
    if (x == 0.0) return 0.0;
    const double d = D, n = N;
    const double t1 = fisher_sf(d + 2.0, n - 2.0, (n - 2.0) * d * x / ((d + 2.0) * n)).log_value();
    const double t2 = std::log(x * (n - 2.0) / n) + fisher_sf(d, n, x).log_value();
    return std::min(0.0, log_difference(t1, t2));
}

double fish(int D, int N, double x) { return std::exp(log_fish(D, N, x)); }

double edkhi_log(int D, int N, double log_q) {
    check_log_q(log_q, "edkhi");
    if (D < 1 || N < 1) throw DomainError("edkhi: need D >= 1 and N >= 1");
    if (log_q > 0.0) throw DomainError("edkhi: q must lie in (0, 1]");
    if (log_q == 0.0) return 0.0;
    if (log_q < kSmallLogQ && D >= 2) {
        const double d = D;
        auto bound = [&](double y) { return log_dkhi_beta_form(D, N, d + y); };
        if (bound(0.0) >= log_q) return d + invert_upper(bound, log_q, tail_hint(0.5 * N, N + D, log_q));
    }
    return solve_monotone([&](double x) { return log_dkhi(D, N, x); }, log_q,
                          tail_hint(0.5 * N, N + D, log_q), exact_inverse_options());
}

double edkhi(int D, int N, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("edkhi: q must lie in (0, 1]");
    return edkhi_log(D, N, std::log(q));
}

double efish_log(int D, int N, double log_q) {
    check_log_q(log_q, "efish");
    check_fish_args(D, N, 0.0, "efish");
    if (log_q >= 0.0) return 0.0;
    if (log_q < kSmallLogQ && D >= 2) {
        const double x0 = static_cast<double>(N) / (N - 2);
        auto bound = [&](double y) { return log_fish_beta_form(D, N, x0 + y); };
        if (bound(0.0) >= log_q) return x0 + invert_upper(bound, log_q, tail_hint(0.5 * N - 1.0, 1.0, log_q));
    }
    return solve_monotone([&](double x) { return log_fish(D, N, x); }, log_q,
                          tail_hint(0.5 * N - 1.0, 1.0, log_q), exact_inverse_options());
}

double efish(int D, int N, double q) {
    if (!(q > 0.0)) throw DomainError("efish: q must be positive");
    return efish_log(D, N, std::log(q));
}

double DkhiBounds::min() const { return std::min({beta_form, fisher_form, exp_form}); }
double FishBounds::min() const { return std::min(beta_form, fisher_form); }

DkhiBounds dkhi_bounds(int D, int N, double x) {
    if (D < 2 || N < 1) throw DomainError("dkhi_upper: need D >= 2 and N >= 1");
    if (!(x >= D)) throw DomainError("dkhi_upper: need x >= D");
    const double d = D, n = N;
    const double t = (n + 2.0) * x / (n * d);
    const double log_front = std::log1p(2.0 * x / (n * d));
    const double psi = 0.5 * (t - 1.0 - std::log(t)) - d * (t - 1.0) * (t - 1.0) / (4.0 * (d + n + 2.0));
    return {std::exp(log_dkhi_beta_form(D, N, x)),
            std::exp(log_front + fisher_sf(d, n + 2.0, t).log_value()),
            std::exp(log_front - d * psi)};
}

double dkhi_upper(int D, int N, double x) { return dkhi_bounds(D, N, x).min(); }

FishBounds fish_bounds(int D, int N, double x) {
    if (D < 2 || N < 3) throw DomainError("fish_upper: need D >= 2 and N >= 3");
    if (!(x >= static_cast<double>(N) / (N - 2))) throw DomainError("fish_upper: need x >= N/(N-2)");
    const double n = N;
    return {std::exp(log_fish_beta_form(D, N, x)),
            std::exp(std::log1p(2.0 * x / n) + fisher_sf(static_cast<double>(D), n, x).log_value())};
}

double fish_upper(int D, int N, double x) { return fish_bounds(D, N, x).min(); }

namespace {

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t hits = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        if (v > 0.0) ++hits;
    }
    McEstimate finish(std::int64_t draws) const {
        McEstimate out;
        out.draws = draws;
        out.hits = hits;
        out.estimate = sum / static_cast<double>(draws);
        const double var = (sum_sq - sum * out.estimate) / static_cast<double>(draws - 1);
        out.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(draws));
        return out;
    }
};

void check_draws(std::int64_t draws) {
    if (draws < 2) throw DomainError("Monte Carlo estimators need at least 2 draws");
}

// P(chi2_k < t).
double chisq_cdf(double k, double t) {
    if (t <= 0.0) return 0.0;
    return -std::expm1(log_gamma_q(0.5 * k, 0.5 * t));
}

}  // namespace

std::vector<McEstimate> dkhi_mc_grid(int D, int N, const std::vector<double>& xs,
                                     std::int64_t draws, RngStream& stream) {
    for (double x : xs) check_dkhi_args(D, N, x, "dkhi_mc");
    check_draws(draws);
    std::vector<Accumulator> acc(xs.size());
    const double d = D, n = N;
    for (std::int64_t i = 0; i < draws; ++i) {
        const double xd = stream.chisq(d);
        const double xn = stream.chisq(n) / n;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            acc[j].add(std::max(0.0, xd - xs[j] * xn) / d);
        }
    }
    std::vector<McEstimate> out;
    out.reserve(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        out.push_back(acc[j].finish(draws));
        // At x = 0 the integrand is X_D / D, whose mean is exactly 1.
        if (xs[j] == 0.0) {
            out.back().estimate = 1.0;
            out.back().std_error = 0.0;
        }
    }
    return out;
}

McEstimate dkhi_mc(int D, int N, double x, std::int64_t draws, RngStream& stream) {
    return dkhi_mc_grid(D, N, {x}, draws, stream).front();
}

std::vector<McEstimate> fish_mc_grid(int D, int N, const std::vector<double>& xs,
                                     std::int64_t draws, RngStream& stream, FishMcMethod method) {
    for (double x : xs) check_fish_args(D, N, x, "fish_mc");
    check_draws(draws);
    std::vector<Accumulator> acc(xs.size());
    const double d = D, n = N;
    const double mean_f = n / (n - 2.0);
    for (std::int64_t i = 0; i < draws; ++i) {
        const double xd = stream.chisq(d);
        if (method == FishMcMethod::Direct) {
            const double f = (xd / d) / (stream.chisq(n) / n);
            for (std::size_t j = 0; j < xs.size(); ++j) acc[j].add(std::max(0.0, f - xs[j]) / mean_f);
        } else {
            // Given X_D, F = c / V with V ~ chi2_N, and
            // E[(c/V - x)_+] = c P(chi2_{N-2} < c/x) / (N-2) - x P(chi2_N < c/x).
            const double c = n * xd / d;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double x = xs[j];
                double v;
                if (x == 0.0) {
                    v = c / (n - 2.0);
                } else {
                    const double t = c / x;
                    v = std::max(0.0, c * chisq_cdf(n - 2.0, t) / (n - 2.0) - x * chisq_cdf(n, t));
                }
                acc[j].add(v / mean_f);
            }
        }
    }
    std::vector<McEstimate> out;
    out.reserve(xs.size());
    for (const auto& a : acc) out.push_back(a.finish(draws));
    return out;
}

McEstimate fish_mc(int D, int N, double x, std::int64_t draws, RngStream& stream,
                   FishMcMethod method) {
    return fish_mc_grid(D, N, {x}, draws, stream, method).front();
}

double inv_chisq_moment(int N, int p) {
    if (p < 1 || N <= 2 * p) throw DomainError("inv_chisq_moment: need p >= 1 and N > 2p");
    double prod = 1.0;
    for (int i = 1; i <= p; ++i) prod *= N - 2 * i;
    return 1.0 / prod;
}

McEstimate inv_chisq_moment_mc(int N, int p, std::int64_t draws, RngStream& stream) {
    if (p < 1 || N <= 2 * p) throw DomainError("inv_chisq_moment_mc: need p >= 1 and N > 2p");
    check_draws(draws);
    Accumulator acc;
    for (std::int64_t i = 0; i < draws; ++i) acc.add(std::pow(stream.chisq(N), -p));
    return acc.finish(draws);
}

}  // namespace gmsel
