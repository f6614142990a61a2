// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace restir {

/// Balance heuristic over an arbitrary set of techniques:
/// m_j = q_j / sum_k q_k. Returns 0 on an empty denominator.
inline double mis_balance(std::span<const double> q_values, int j) {
    double denom = 0;
    for (double q : q_values)
        denom += q;
    if (denom <= 0)
        return 0;
    return q_values[static_cast<size_t>(j)] / denom;
}

enum class MisRole { Current, Previous };

/// Inputs for the two-technique confidence-weighted MIS used when combining a
/// pixel's reservoir with its temporal predecessor. p_hat_self is the target
/// value of the technique that produced the candidate; p_hat_other is the
/// competing technique's target value at the same candidate, already mapped
/// into that technique's domain and Jacobian-adjusted.
struct MisContext {
    double p_hat_self = 0;
    double p_hat_other = 0;
    double M_self = 0;
    double M_other = 0;
};

/// Confidence-weighted two-technique MIS weight:
///   m = M_self p_self / (M_self p_self + M_other p_other).
/// When the cross shift between the two domains does not exist, the current
/// pixel's technique takes full weight (1) and the reused one takes none (0).
inline double mis_temporal(const MisContext &ctx, MisRole role, bool cross_shift_valid = true) {
    if (!cross_shift_valid)
        return role == MisRole::Current ? 1.0 : 0.0;
    double self = ctx.M_self * ctx.p_hat_self;
    double other = ctx.M_other * ctx.p_hat_other;
    double denom = self + other;
    if (denom <= 0)
        return 0;
    return self / denom;
}

/// Defensive pairwise MIS over one canonical technique and k neighbor
/// techniques. Each neighbor duels only against the canonical technique, so
/// the whole pool needs O(k) target evaluations instead of the O(k^2) a full
/// balance heuristic would take. See docs/resampling.md for the algebra and
/// the partition-of-unity argument.
///
/// Densities are confidence-weighted and expressed in the canonical domain:
/// q_c(y) = M_c * p_hat_c(y), and for neighbor i,
/// q_i(y) = M_i * p_hat_i(S_i^{-1}(y)) * |dS_i^{-1}/dy|.
class PairwiseMis {
public:
    PairwiseMis(double M_canonical, double M_neighbors_total)
        : m_c_(M_canonical), m_n_(M_neighbors_total) {
        double total = m_c_ + m_n_;
        defensive_ = total > 0 ? m_c_ / total : 1.0;
    }

    /// MIS weight for neighbor i's own candidate.
    double neighbor_weight(double M_i, double q_i, double q_c) const {
        if (m_n_ <= 0)
            return 0;
        double share = M_i / m_n_;
        double denom = q_i + share * q_c;
        if (denom <= 0)
            return 0;
        return (1.0 - defensive_) * share * (q_i / denom);
    }

    /// Accumulates the canonical sample's duel against neighbor i. Call once
    /// per neighbor with that neighbor's density at the canonical sample.
    void add_canonical_duel(double M_i, double q_i_at_canonical, double q_c_at_canonical) {
        if (m_n_ <= 0)
            return;
        double share = M_i / m_n_;
        double denom = q_i_at_canonical + share * q_c_at_canonical;
        // If neither technique reaches the candidate the duel defaults to the
        // canonical side; the candidate cannot be produced there anyway.
        double duel = denom > 0 ? share * q_c_at_canonical / denom : 1.0;
        canonical_sum_ += share * duel;
    }

    double canonical_weight() const {
        if (m_n_ <= 0)
            return 1.0;
        return defensive_ + (1.0 - defensive_) * canonical_sum_;
    }

private:
    double m_c_;
    double m_n_;
    double defensive_ = 1.0;
    double canonical_sum_ = 0;
};

} // namespace restir
