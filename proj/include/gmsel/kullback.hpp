#pragma once

#include <Eigen/Dense>

#include "gmsel/collections.hpp"
#include "gmsel/estimation.hpp"
#include "gmsel/rng.hpp"
#include "gmsel/selectors.hpp"

namespace gmsel {

/// A Gaussian law N(mu, sigma2 I_n).
struct ThetaPair {
    Eigen::VectorXd mu;
    double sigma2 = 1.0;
};

/// Kullback divergence between N(a.mu, a.sigma2 I) and N(b.mu, b.sigma2 I).
double kl_div(const ThetaPair& a, const ThetaPair& b);

/// Divergence from N(mu, sigma2 I) to its closest law with mean in S_m:
/// (n/2) log(1 + |mu - Pi_m mu|^2 / (n sigma2)).
double kl_bias(const Eigen::VectorXd& mu, double sigma2, const ModelKey& model, const Design* design = nullptr);

/// The minimizing law (Pi_m mu, sigma2 + |mu - Pi_m mu|^2 / n).
ThetaPair kl_projection(const Eigen::VectorXd& mu, double sigma2, const ModelKey& model,
                        const Design* design = nullptr);

/// Fitted law (Pi_m y, rss / N_m) of a model.
ThetaPair theta_hat(const FitRecord& fit);

struct KullbackSelection {
    SelectionOutcome outcome;
    ThetaPair theta;
};

/// Minimizes (n/2) log(rss / N_m) + pen_kullback / 2 over the collection.
/// Every model must satisfy D_m <= n - 5. K2 <= 0 selects K1 + 1.
KullbackSelection select_kullback(const Eigen::VectorXd& y, const CollectionSpec& spec, double K1, double K2 = 0.0,
                                  const Design* design = nullptr);

struct RiskEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    int reps = 0;
};

/// Monte Carlo estimate of E K(P_theta, P_theta_hat_m) for one fixed model.
/// Needs N_m > 2 and reps >= 1000.
RiskEstimate kl_risk_mc(const Eigen::VectorXd& mu, double sigma2, const ModelKey& model, int reps, RngStream& stream,
                        const Design* design = nullptr);

}  // namespace gmsel
