#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace filtlab::mc {

struct McReport {
    std::string estimator;
    long n_paths = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::optional<double> target;
    std::optional<double> ks_statistic;
    std::uint64_t seed = 0;
    std::optional<double> dt;
    std::vector<std::string> flags;

    // Tolerance the CLI gates on: 3 standard errors plus any estimator
    // specific allowance recorded at construction.
    double tolerance = 0.0;
    bool within_tolerance() const;
};

// Brownian path stopped at the first hit of 1; sigma = last zero before
// that, tau = time of the maximum on [0, sigma]. Exact Gaussian skeleton
// with bridge-sampled crossings and maxima; the step doubles every 8192
// steps so heavy-tailed hitting times stay affordable.
//
// Estimators reported:
//   williams_ui_b        E[M_tau], M = B stopped at T1 and at -3   (0)
//   williams_ui_bsq      E[M_tau], M = B^2 - t stopped the same    (0)
//   williams_b_t1        E[B_tau], B stopped at T1 only            (1/2)
//   williams_b_at_t1     E[B_{T1}] sanity branch                   (1)
// B stopped at T1 alone is not uniformly integrable, so the optional
// stopping value at tau is the uniform-law mean 1/2, not 0; the two-sided
// stopped martingales are bounded, hence UI, and target 0.
std::vector<McReport> williams_tau(long n_paths, double dt, std::uint64_t seed);

// Poisson example: T1, T2-T1 ~ Exp(lambda), tau = (T1+T2)/2,
// M_s = 1{T2<=s} - lambda(s^T2 - s^T1). Reports E[M_tau] (target -1/2,
// pseudo-stopping fails), the stopped sanity branch E[M_T2] (target 0), and
// nested-MC agreement of the survival formula e^{-lambda(t-T1)} at five
// sampled (T1, t) points.
std::vector<McReport> poisson_example(double lambda, long n_paths, std::uint64_t seed);

// Cox construction with unit intensity: barrier Theta ~ Exp(1), tau = Theta,
// Ao_t = 1 - e^{-t}. Ao_tau is exactly Uniform[0,1]; reports the one-sample
// Kolmogorov-Smirnov statistic, plus an adversarial branch (Theta^2) that
// must fail the same test.
std::vector<McReport> cox_uniformity(long n_paths, std::uint64_t seed);

// 1% asymptotic Kolmogorov-Smirnov threshold used throughout.
double ks_threshold_1pct(long n);

}  // namespace filtlab::mc
