// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "restir/reservoir.hpp"
#include "restir/rng.hpp"

namespace restir {

/// Metropolis-Hastings acceptance probability
///   a = min(1, p_hat(z)/p_hat(x) * T(z->x)/T(x->z)).
/// The chain must start on the target's support; RIS initialization
/// guarantees that, so a zero current target is a contract violation.
inline double mh_acceptance(double p_hat_x, double p_hat_z, double kernel_ratio) {
    if (!(p_hat_x > 0))
        throw std::invalid_argument("mh_acceptance: current state off the target support");
    if (!(p_hat_z > 0) || !(kernel_ratio > 0))
        return 0;
    return std::min(1.0, (p_hat_z / p_hat_x) * kernel_ratio);
}

/// Primary-sample-space coordinates: a short vector of reals in [0,1).
/// Perturbations wrap modulo 1, so the space is closed under mutation.
struct PssVector {
    static constexpr int kMaxDim = 4;
    std::array<double, kMaxDim> u{};
    int dim = 0;

    double &operator[](int i) { return u[static_cast<size_t>(i)]; }
    double operator[](int i) const { return u[static_cast<size_t>(i)]; }
};

inline double wrap01(double x) {
    x -= std::floor(x);
    return x < 1.0 ? x : 0.0; // floor can round to exactly 1.0
}

/// Gaussian primary-sample-space perturbation. Each component moves by a
/// zero-mean Gaussian step whose scale is drawn log-uniformly from (s1, s2]
/// via s = s2 * exp(-log(s2/s1) * U), then wraps into [0,1). The transition
/// density is symmetric on the unit torus.
///
/// Consumes a fixed number of random draws per call (one scale draw per
/// component plus one Box-Muller pair per two components), independent of the
/// values produced.
inline PssVector pss_perturb(const PssVector &u, double s1, double s2, Pcg32 &rng) {
    double log_ratio = std::log(s2 / s1);
    PssVector out = u;
    double g[PssVector::kMaxDim];
    for (int i = 0; i < u.dim; i += 2) {
        double g0, g1;
        gaussian_pair(rng, g0, g1);
        g[i] = g0;
        if (i + 1 < u.dim)
            g[i + 1] = g1;
    }
    for (int i = 0; i < u.dim; ++i) {
        double scale = s2 * std::exp(-log_ratio * rng.next_double());
        out[i] = wrap01(u[i] + scale * g[i]);
    }
    return out;
}

/// A candidate mutation: the proposed sample, the transition-kernel ratio
/// T(u'->u)/T(u->u') and the contribution-function ratio C(u')/C(u).
/// Infeasible candidates (target zero, occluded reconnection, failed
/// connectability) carry contribution_ratio = 0 and are never accepted.
template <typename S>
struct MutationProposal {
    S candidate{};
    double kernel_ratio = 1;
    double contribution_ratio = 0;
    double p_hat = 0; // target value at the candidate, in the reservoir's measure

    static MutationProposal rejected() { return {}; }
};

struct MutationStats {
    long long proposed = 0;
    long long accepted = 0;

    MutationStats &operator+=(const MutationStats &o) {
        proposed += o.proposed;
        accepted += o.accepted;
        return *this;
    }
};

/// Mutation step counts and perturbation bounds. s1 < s2 are the limits of
/// the log-uniform Gaussian step scale.
struct MutationConfig {
    int iters = 1;
    double s1 = 1.0 / 1024.0;
    double s2 = 1.0 / 64.0;
};

/// Runs `iters` Metropolis-Hastings steps on the reservoir's sample and
/// applies the contribution-weight update
///   W(x_k) = p_hat(x_0)/p_hat(x_k) * W(x_0),
/// which keeps W * p_hat — the estimated normalization of the target —
/// invariant along the chain. w_sum and M are untouched. The proposal
/// strategy is called as propose(x, rng) -> MutationProposal<S> and must
/// consume a fixed number of random draws per call.
///
/// p_hat_current is the target value at the reservoir's present sample (the
/// caller has it from finalization). Empty reservoirs and zero targets are
/// returned unchanged.
template <typename S, typename Strategy>
MutationStats mutate_sample(Reservoir<S> &r, double p_hat_current, Strategy &&propose,
                            int iters, Pcg32 &rng) {
    MutationStats stats;
    if (iters <= 0 || r.empty() || !(p_hat_current > 0) || !(r.W > 0))
        return stats;

    const double conserved = p_hat_current * r.W; // p_hat(x0) * W(x0)
    S x = *r.sample;
    double p_x = p_hat_current;
    bool moved = false;

    for (int k = 0; k < iters; ++k) {
        MutationProposal<S> prop = propose(x, rng);
        ++stats.proposed;
        double a = 0;
        if (prop.contribution_ratio > 0 && prop.kernel_ratio > 0)
            a = std::min(1.0, prop.contribution_ratio * prop.kernel_ratio);
        // Acceptance draw happens unconditionally to keep the per-iteration
        // stream consumption fixed.
        double u = rng.next_double();
        if (u < a) {
            x = prop.candidate;
            p_x = prop.p_hat;
            moved = true;
            ++stats.accepted;
        }
    }

    if (moved) {
        r.sample = x;
        r.W = p_x > 0 ? conserved / p_x : 0;
    }
    return stats;
}

} // namespace restir
