#include "gmsel/kullback.hpp"

#include <algorithm>
#include <cmath>

#include "gmsel/errors.hpp"

namespace gmsel {

double kl_div(const ThetaPair& a, const ThetaPair& b) {
    if (!(a.sigma2 > 0.0) || !(b.sigma2 > 0.0)) throw DomainError("kl_div: variances must be positive");
    if (a.mu.size() != b.mu.size()) throw DomainError("kl_div: mean vectors differ in length");
    const double n = static_cast<double>(a.mu.size());
    const double r = a.sigma2 / b.sigma2;
    // log(1/r) + r - 1 loses everything to cancellation when r is near 1.
    const double shape = (r - 1.0) - std::log1p(r - 1.0);
    return 0.5 * n * shape + 0.5 * (a.mu - b.mu).squaredNorm() / b.sigma2;
}

double kl_bias(const Eigen::VectorXd& mu, double sigma2, const ModelKey& model, const Design* design) {
    if (!(sigma2 > 0.0)) throw DomainError("kl_bias: sigma2 must be positive");
    const FitRecord fit = project(mu, model, design);
    const double n = static_cast<double>(mu.size());
    return 0.5 * n * std::log1p(fit.rss / (n * sigma2));
}

ThetaPair kl_projection(const Eigen::VectorXd& mu, double sigma2, const ModelKey& model, const Design* design) {
    if (!(sigma2 > 0.0)) throw DomainError("kl_projection: sigma2 must be positive");
    const FitRecord fit = project(mu, model, design);
    return {fit.mu_hat, sigma2 + fit.rss / static_cast<double>(mu.size())};
}

ThetaPair theta_hat(const FitRecord& fit) {
    if (fit.N() <= 0) throw DomainError("theta_hat: model has no residual degrees of freedom");
    return {fit.mu_hat, fit.rss / fit.N()};
}

namespace {

int max_dimension(const CollectionSpec& spec) {
    switch (spec.family) {
        case Family::NonzeroComponents:
        case Family::OrderedVarsel:
        case Family::CompleteVarsel: return spec.p;
        case Family::ChangePointsConst: return spec.p + 1;
        case Family::PartitionPoly: {
            int best = 0;
            for (const auto& key : partition_models(spec.n, spec.d, spec.r_max)) best = std::max(best, key.dim);
            return best;
        }
        case Family::DyadicSplines: break;
    }
    throw DomainError("select_kullback: the collection must be finite");
}

}  // namespace

KullbackSelection select_kullback(const Eigen::VectorXd& y, const CollectionSpec& spec, double K1, double K2,
                                  const Design* design) {
    spec.validate();
    if (max_dimension(spec) > spec.n - 5) throw DomainError("select_kullback: every model needs D_m <= n - 5");
    KullbackSelection out;
    out.outcome = select_spec(y, spec, PenaltyRule::kullback(K1, K2), Criterion::CritKullback, design);
    out.theta = theta_hat(out.outcome.fit);
    return out;
}

RiskEstimate kl_risk_mc(const Eigen::VectorXd& mu, double sigma2, const ModelKey& model, int reps, RngStream& stream,
                        const Design* design) {
    if (!(sigma2 > 0.0)) throw DomainError("kl_risk_mc: sigma2 must be positive");
    if (reps < 1000) throw DomainError("kl_risk_mc: need at least 1000 replicates");
    if (model.N() <= 2) throw DomainError("kl_risk_mc: need N_m > 2");
    const ThetaPair truth{mu, sigma2};
    const double sigma = std::sqrt(sigma2);
    const int n = static_cast<int>(mu.size());
    Eigen::VectorXd y(n);
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        for (int i = 0; i < n; ++i) y[i] = mu[i] + sigma * stream.gaussian();
        const FitRecord fit = project(y, model, design);
        const double loss = kl_div(truth, theta_hat(fit));
        sum += loss;
        sum2 += loss * loss;
    }
    RiskEstimate est;
    est.reps = reps;
    est.estimate = sum / reps;
    const double var = std::max(0.0, (sum2 - reps * est.estimate * est.estimate) / (reps - 1));
    est.std_error = std::sqrt(var / reps);
    return est;
}

}  // namespace gmsel
