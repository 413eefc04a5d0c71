#include "gmsel/penalties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "gmsel/dkhi.hpp"
#include "gmsel/errors.hpp"
#include "gmsel/numerics.hpp"

namespace gmsel {
namespace {

void check_K(double K, const char* who) {
    if (!(K > 1.0)) throw DomainError(std::string(who) + ": K must exceed 1");
}

void check_L(double L, const char* who) {
    if (!(L >= 0.0)) throw DomainError(std::string(who) + ": weight L must be non-negative");
}

double bracket_sq(double growth, double scale) {
    const double b = 1.0 + growth * std::sqrt(scale);
    return b * b;
}

}  // namespace

double phi(double x) {
    if (!(x >= 1.0)) throw DomainError("phi: x must be >= 1");
    return 0.5 * (x - 1.0 - std::log(x));
}

double phi_inv(double a) {
    if (!(a >= 0.0)) throw DomainError("phi_inv: a must be non-negative");
    if (a == 0.0) return 1.0;
    SolveOptions opt;
    opt.f_rel_tol = 1e-15;
    opt.x_rel_tol = 1e-15;
    return 1.0 + solve_monotone([](double y) { return -phi(1.0 + y); }, -a, 2.0 * a + 2.0, opt);
}

double pen_kl(double K, double L, int D, int n) {
    check_K(K, "pen_kl");
    check_L(L, "pen_kl");
    if (D < 0) throw DomainError("pen_kl: D must be non-negative");
    const int N = n - D;
    if (N < 2) throw DomainError("pen_kl: need n - D >= 2");
    if (L == 0.0) return 0.0;
    return K * N / (N - 1.0) * edkhi_log(D + 1, N - 1, -L);
}

double pen_kl_upper(double K, double L, int D, int n) {
    check_K(K, "pen_kl_upper");
    check_L(L, "pen_kl_upper");
    if (D < 0) throw DomainError("pen_kl_upper: D must be non-negative");
    const int Nm = n - D;
    if (D == 0) {
        if (Nm < 4) throw DomainError("pen_kl_upper: need n >= 4 when D = 0");
        const double N = Nm - 1.0;
        return 3.0 * K * (N + 1.0) / N *
               bracket_sq(std::exp(2.0 * L / N), (1.0 + 6.0 / N) * 2.0 * L / 3.0);
    }
    if (Nm < 7) throw DomainError("pen_kl_upper: need n - D >= 7");
    const double d = D + 1.0, N = Nm - 1.0;
    const double delta = (L + std::log(5.0) + 1.0 / N) / (1.0 - 5.0 / N);
    return K * (N + 1.0) / N *
           bracket_sq(std::exp(2.0 * delta / (N + 2.0)), (1.0 + 2.0 * d / (N + 2.0)) * 2.0 * delta / d) * d;
}

double pen_classical(ClassicalKind kind, int D, int n) {
    if (D < 0 || D > n - 1) throw DomainError("pen_classical: need 0 <= D <= n - 1");
    const double d = D, nn = n, N = n - D;
    switch (kind) {
        case ClassicalKind::FPE: return 2.0 * d;
        case ClassicalKind::AIC: return N * std::expm1(2.0 * d / nn);
        case ClassicalKind::BIC: return N * std::expm1(d * std::log(nn) / nn);
        case ClassicalKind::AMDL: return N * std::expm1(3.0 * d * std::log(nn) / nn);
    }
    throw DomainError("pen_classical: unknown kind");
}

double pen_convert(double value, int D, int n, PenDirection direction) {
    if (!(n > D) || D < 0) throw DomainError("pen_convert: need 0 <= D < n");
    const double N = n - D;
    if (direction == PenDirection::ToPrime) return n * std::log1p(value / N);
    return N * std::expm1(value / n);
}

double pen_minimal(double K, double a, int D) {
    check_K(K, "pen_minimal");
    if (D < 0) throw DomainError("pen_minimal: D must be non-negative");
    return K * K * phi_inv(a) * D;
}

HkaReport hka_check(double K, double M, double a, int n, int d_max_requested) {
    check_K(K, "hka_check");
    if (n < 1) throw DomainError("hka_check: n must be positive");
    if (!(M >= 0.0) || !(a >= 0.0)) throw DomainError("hka_check: complexity index must be non-negative");
    HkaReport r;
    r.t = K * phi_inv(a);
    r.residual_constant = K / (K - 1.0) *
                          (K * K * phi_inv(a) + 2.0 * K +
                           8.0 * K * M * std::exp(-a) / std::pow(std::expm1(phi(K) / 2.0), 2));
    if (!(r.t > 1.0)) return r;
    r.feasible = true;
    r.gamma1 = std::max(2.0 * r.t, (r.t + 1.0) / (r.t - 1.0));
    r.gamma2 = 2.0 * phi(K) / ((r.t - 1.0) * (r.t - 1.0));
    const double c1 = std::floor(std::max(0.0, n - r.gamma1));
    const double c2 = std::floor(std::max(0.0, (n + 2.0) * r.gamma2 - 1.0));
    r.d_max = static_cast<int>(std::min(c1, c2));
    r.request_ok = d_max_requested <= r.d_max;
    return r;
}

double pen_kullback(double K1, double K2, double L, int D, int n) {
    check_K(K1, "pen_kullback");
    if (!(K2 >= K1)) throw DomainError("pen_kullback: need K2 >= K1");
    check_L(L, "pen_kullback");
    if (D < 0) throw DomainError("pen_kullback: D must be non-negative");
    const int N = n - D;
    if (N < 4) throw DomainError("pen_kullback: need n - D >= 4");
    const double inner =
        L == 0.0 ? 0.0 : K1 * (D + 1.0) * N / (N - 1.0) * efish_log(D + 1, N - 1, -L);
    return K2 / (K2 - 1.0) * std::max(0.0, inner - D);
}

double pen_kullback_upper(double K1, double K2, double L, int D, int n) {
    check_K(K1, "pen_kullback_upper");
    if (!(K2 >= K1)) throw DomainError("pen_kullback_upper: need K2 >= K1");
    check_L(L, "pen_kullback_upper");
    if (D < 1) throw DomainError("pen_kullback_upper: need D >= 1");
    if (n - D < 9) throw DomainError("pen_kullback_upper: need n - D >= 9");
    const double d = D + 1.0, N = n - D - 1.0;
    const double delta = (L + std::log(5.0) + 1.0 / (N - 2.0)) / (1.0 - 5.0 / (N - 2.0));
    return K1 * K2 / (K2 - 1.0) * (N + 1.0) / (N - 2.0) *
           bracket_sq(std::exp(2.0 * delta / N), (1.0 + 2.0 * d / N) * 2.0 * delta / d) * d;
}

PenaltyRule PenaltyRule::kl(double K) {
    check_K(K, "PenaltyRule::kl");
    PenaltyRule r;
    r.kind = Kind::KL;
    r.K = K;
    return r;
}

PenaltyRule PenaltyRule::classical(Kind k) {
    PenaltyRule r;
    r.kind = k;
    return r;
}

PenaltyRule PenaltyRule::minimal(double K, double a) {
    check_K(K, "PenaltyRule::minimal");
    if (!(a >= 0.0)) throw DomainError("PenaltyRule::minimal: a must be non-negative");
    PenaltyRule r;
    r.kind = Kind::Minimal;
    r.K = K;
    r.a = a;
    return r;
}

PenaltyRule PenaltyRule::kullback(double K1, double K2) {
    check_K(K1, "PenaltyRule::kullback");
    if (!(K2 > 0.0)) K2 = K1 + 1.0;
    if (!(K2 >= K1)) throw DomainError("PenaltyRule::kullback: need K2 >= K1");
    PenaltyRule r;
    r.kind = Kind::Kullback;
    r.K1 = K1;
    r.K2 = K2;
    return r;
}

PenaltyRule PenaltyRule::user_table(std::map<int, double> table) {
    for (const auto& [d, v] : table) {
        if (d < 0 || !(v >= 0.0)) throw DomainError("PenaltyRule::user_table: entries must be non-negative");
    }
    PenaltyRule r;
    r.kind = Kind::UserTable;
    r.table = std::move(table);
    return r;
}

double PenaltyRule::operator()(int D, double L, int n) const {
    if (n < 3) throw DomainError("penalty: n must be at least 3");
    switch (kind) {
        case Kind::KL: return pen_kl(K, L, D, n);
        case Kind::FPE: return pen_classical(ClassicalKind::FPE, D, n);
        case Kind::AIC: return pen_classical(ClassicalKind::AIC, D, n);
        case Kind::BIC: return pen_classical(ClassicalKind::BIC, D, n);
        case Kind::AMDL: return pen_classical(ClassicalKind::AMDL, D, n);
        case Kind::Minimal: return pen_minimal(K, a, D);
        case Kind::Kullback: return pen_kullback(K1, K2, L, D, n);
        case Kind::UserTable: {
            const auto it = table.find(D);
            if (it == table.end()) {
                throw DomainError("penalty: user table has no entry for D = " + std::to_string(D));
            }
            return it->second;
        }
    }
    throw DomainError("penalty: unknown rule");
}

std::string PenaltyRule::name() const {
    char buf[64];
    switch (kind) {
        case Kind::KL: std::snprintf(buf, sizeof buf, "K=%g", K); return buf;
        case Kind::FPE: return "FPE";
        case Kind::AIC: return "AIC";
        case Kind::BIC: return "BIC";
        case Kind::AMDL: return "AMDL";
        case Kind::Minimal: std::snprintf(buf, sizeof buf, "minimal(K=%g,a=%g)", K, a); return buf;
        case Kind::Kullback: std::snprintf(buf, sizeof buf, "kullback(K1=%g,K2=%g)", K1, K2); return buf;
        case Kind::UserTable: return "table";
    }
    return "unknown";
}

double PenaltyEvaluator::operator()(int D, double L) const {
    const auto key = std::make_pair(D, rule_.uses_weights() ? L : 0.0);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const double v = rule_(D, L, n_);
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(key, v);
    return v;
}

}  // namespace gmsel
