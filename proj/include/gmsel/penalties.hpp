#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace gmsel {

/// phi(x) = (x - 1 - log x) / 2 on x >= 1.
double phi(double x);
/// Inverse of phi on [1, inf).
double phi_inv(double a);

/// The data-driven penalty K N/(N-1) EDkhi[D+1, N-1, e^-L] with N = n - D.
/// For very large L the inverse comes from the analytic-bound branch, so
/// the value is then an upper bound on the exact penalty.
double pen_kl(double K, double L, int D, int n);
/// Closed-form upper bound on pen_kl. Needs n - D >= 7 when D >= 1 and
/// n >= 4 when D = 0.
double pen_kl_upper(double K, double L, int D, int n);

enum class ClassicalKind { FPE, AIC, BIC, AMDL };
double pen_classical(ClassicalKind kind, int D, int n);

enum class PenDirection {
    ToPrime,   ///< pen  -> pen' = n log(1 + pen / (n - D))
    FromPrime  ///< pen' -> pen  = (n - D)(exp(pen' / n) - 1)
};
double pen_convert(double value, int D, int n, PenDirection direction);

/// K^2 phi^-1(a) D.
double pen_minimal(double K, double a, int D);

struct HkaReport {
    bool feasible = false;  ///< t = K phi^-1(a) > 1
    double t = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    int d_max = 0;
    bool request_ok = false;  ///< requested maximal dimension <= d_max
    double residual_constant = 0.0;  ///< risk-bound remainder, diagnostic only
};
HkaReport hka_check(double K, double M, double a, int n, int d_max_requested);

/// Penalty for the Kullback-loss criterion:
/// K2/(K2-1) [K1 (D+1) N/(N-1) EFish[D+1, N-1, e^-L] - D]_+ with N = n - D.
double pen_kullback(double K1, double K2, double L, int D, int n);
/// Closed-form upper bound; needs D >= 1 and n - D >= 9.
double pen_kullback_upper(double K1, double K2, double L, int D, int n);

/// A named rule mapping (D, L, n) to a penalty.
struct PenaltyRule {
    enum class Kind { KL, FPE, AIC, BIC, AMDL, Minimal, Kullback, UserTable };

    Kind kind = Kind::KL;
    double K = 1.1;
    double a = 0.0;
    double K1 = 0.0;
    double K2 = 0.0;
    std::map<int, double> table;

    static PenaltyRule kl(double K);
    static PenaltyRule fpe() { return classical(Kind::FPE); }
    static PenaltyRule aic() { return classical(Kind::AIC); }
    static PenaltyRule bic() { return classical(Kind::BIC); }
    static PenaltyRule amdl() { return classical(Kind::AMDL); }
    static PenaltyRule minimal(double K, double a);
    /// K2 defaults to K1 + 1 when not positive.
    static PenaltyRule kullback(double K1, double K2 = 0.0);
    static PenaltyRule user_table(std::map<int, double> table);

    double operator()(int D, double L, int n) const;
    /// True when the value depends on the weight L.
    bool uses_weights() const { return kind == Kind::KL || kind == Kind::Kullback; }
    /// True for the rule paired with the Kullback-loss criterion.
    bool is_kullback() const { return kind == Kind::Kullback; }
    std::string name() const;

private:
    static PenaltyRule classical(Kind k);
};

/// Memoizing wrapper around a rule at fixed n. Safe for concurrent use.
class PenaltyEvaluator {
public:
    PenaltyEvaluator(PenaltyRule rule, int n) : rule_(std::move(rule)), n_(n) {}

    double operator()(int D, double L) const;
    const PenaltyRule& rule() const noexcept { return rule_; }
    int n() const noexcept { return n_; }

private:
    PenaltyRule rule_;
    int n_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<int, double>, double> cache_;
};

}  // namespace gmsel
