// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace restir {
namespace testbed {

using Fn1D = std::function<double(double)>;

/// Composite Simpson quadrature of g over [0,1], refining by interval
/// doubling until two successive levels agree to 1e-10 relative. Throws
/// std::runtime_error past 2^20 intervals (pathological integrand).
double quad_oracle(const Fn1D &g, int n = 16);

/// Regularized upper incomplete gamma Q(a, x); chi-square upper tail is
/// Q(dof/2, stat/2).
double gamma_q(double a, double x);
double chi_square_p_value(double stat, int dof);

/// Analytic 1D target on [0,1]: unnormalized target p_hat with full support
/// plus an integrand f. Norms are computed once with quad_oracle.
struct AnalyticTarget {
    Fn1D p_hat;
    Fn1D f;

    double p_hat_norm() const;
    double f_integral() const;

    /// Default bimodal Gaussian-mixture target with a constant floor, and a
    /// smooth integrand that differs from it.
    static AnalyticTarget defaults();
    /// Uniform target (any symmetric kernel is stationary for it).
    static AnalyticTarget uniform();

private:
    mutable double p_norm_ = -1, f_int_ = -1;
};

/// Source PDFs for candidate generation. Linear densities on [0,1] with
/// analytic inverse CDFs; Skewed* are deliberately poor matches to the
/// default target.
enum class Source { Uniform, SkewDown, SkewUp, Alternating };

double source_pdf(Source s, int candidate_index, double x);
double source_sample(Source s, int candidate_index, double u);

enum class MisMode { ConstantInvM, Balance };

struct UnbiasednessConfig {
    int M = 8;
    int k_mutations = 0;
    long long trials = 100000;
    uint64_t seed = 1;
    Source source = Source::Uniform;
    MisMode mis = MisMode::ConstantInvM;
    double proposal_scale = 0.05;
    int threads = 1;
};

struct UnbiasednessResult {
    double mean = 0;
    double std_error = 0;
    double oracle = 0;
    double z = 0;
    double variance = 0;
    double max_conservation_drift = 0; // max relative drift of W * p_hat over all chains
    double acceptance_rate = 0;
};

/// Monte Carlo check of E[f(x_k) W(x_k)] = integral of f: RIS-selects x_0
/// from M candidates, runs k Metropolis-Hastings steps with wrap-around
/// Gaussian proposals, applies the contribution-weight update, and averages
/// f(x_k) W(x_k) against the quadrature oracle.
UnbiasednessResult run_unbiasedness_trial(const AnalyticTarget &target, const UnbiasednessConfig &cfg);

struct TwoPixelConfig {
    Fn1D p_hat_1, p_hat_2;          // pixel targets
    std::vector<Fn1D> p_hat_inputs; // per-input targets (one per shared input)
    int mutations = 64;
    long long trials = 100000;
    uint64_t seed = 1;
    double proposal_scale = 0.05;
    int threads = 1;
    bool shared_inputs = true; // false: each pixel draws its own input set

    /// Dissimilar pixel targets sharing M broad inputs: the setup where
    /// mutations are expected to remove most of the covariance.
    static TwoPixelConfig dissimilar(int M);
    /// All targets identical with perfect importance sampling: both
    /// covariances vanish.
    static TwoPixelConfig identical(int M);
};

struct TwoPixelResult {
    double cov_without = 0;
    double cov_with = 0;
    double se_without = 0;
    double se_with = 0;
    double ratio = 0; // cov_with / cov_without
};

/// The two-pixel covariance experiment: both pixels resample the same shared
/// inputs (drawn exactly from their per-input targets, with exact reciprocal
/// weights) using constant 1/M MIS weights, once directly and once after
/// per-pixel independent mutations of each input.
TwoPixelResult run_two_pixel_covariance(const TwoPixelConfig &cfg);

struct ChainConfig {
    long long steps = 1000000;
    int bins = 32;
    uint64_t seed = 1;
    double proposal_scale = 0.05;
    bool always_accept = false; // negative control
    int threads = 1;            // histogram fill is single-chain; kept for CSV symmetry
};

struct ChainResult {
    double tv_distance = 0;
    double acceptance_rate = 0;
    std::vector<double> histogram; // empirical bin frequencies
    std::vector<double> expected;  // oracle bin masses
};

/// One long Metropolis-Hastings chain against the normalized target;
/// total-variation distance of the empirical bin marginal.
ChainResult chain_distribution_test(const AnalyticTarget &target, const ChainConfig &cfg);

} // namespace testbed
} // namespace restir
