#pragma once

#include <cstdint>
#include <vector>

#include "gmsel/rng.hpp"

namespace gmsel {

// Dkhi[D, N, x] = E[(X_D - x X_N / N)_+] / E(X_D) for independent chi-square
// variables, and Fish[D, N, x] = E[(F_{D,N} - x)_+] / E(F_{D,N}). Both are
// evaluated through Fisher tail identities with every term in log space.

double log_dkhi(int D, int N, double x);
double dkhi(int D, int N, double x);

/// Requires N >= 3.
double log_fish(int D, int N, double x);
double fish(int D, int N, double x);

/// Below this log-probability the inverse functionals switch to the
/// analytic-bound branch.
inline constexpr double kSmallLogQ = -500.0;

/// EDkhi[D, N, q]: the x with Dkhi[D, N, x] = q, driven by log q so that
/// q far below the double range is accepted. For log q < -500 and D >= 2
/// the result is an upper bound (the root of the beta-form bound).
double edkhi_log(int D, int N, double log_q);
double edkhi(int D, int N, double q);

/// EFish[D, N, q]; zero for q >= 1. Same small-q strategy as edkhi_log.
double efish_log(int D, int N, double log_q);
double efish(int D, int N, double q);

/// The three chained bounds on Dkhi for D >= 2, x >= D, and their minimum.
struct DkhiBounds {
    double beta_form;
    double fisher_form;
    double exp_form;
    double min() const;
};
DkhiBounds dkhi_bounds(int D, int N, double x);
double dkhi_upper(int D, int N, double x);

/// The two bounds on Fish for D >= 2, x >= N/(N-2), and their minimum.
struct FishBounds {
    double beta_form;
    double fisher_form;
    double min() const;
};
FishBounds fish_bounds(int D, int N, double x);
double fish_upper(int D, int N, double x);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t draws = 0;
    std::int64_t hits = 0;  ///< draws with a strictly positive integrand
};

/// Sample-mean estimators of the defining expectations. The grid versions
/// reuse one set of draws for every threshold in `xs`.
McEstimate dkhi_mc(int D, int N, double x, std::int64_t draws, RngStream& stream);
std::vector<McEstimate> dkhi_mc_grid(int D, int N, const std::vector<double>& xs,
                                     std::int64_t draws, RngStream& stream);

enum class FishMcMethod {
    Direct,      ///< average of (F - x)_+ / E(F) over Fisher draws
    Conditional  ///< integrates the denominator chi-square out analytically
};
McEstimate fish_mc(int D, int N, double x, std::int64_t draws, RngStream& stream,
                   FishMcMethod method = FishMcMethod::Direct);
std::vector<McEstimate> fish_mc_grid(int D, int N, const std::vector<double>& xs,
                                     std::int64_t draws, RngStream& stream,
                                     FishMcMethod method = FishMcMethod::Direct);

/// 1 / ((N-2)(N-4)...(N-2p)), the p-th inverse moment of a chi-square with
/// N > 2p degrees of freedom.
double inv_chisq_moment(int N, int p);
McEstimate inv_chisq_moment_mc(int N, int p, std::int64_t draws, RngStream& stream);

}  // namespace gmsel
