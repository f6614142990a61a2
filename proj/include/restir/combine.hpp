// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <span>

#include "restir/mis.hpp"
#include "restir/reservoir.hpp"

namespace restir {

/// A sample re-expressed in another pixel's integration domain, together with
/// the Jacobian determinant of the mapping. Invalid shifts (occluded or
/// degenerate reconnections) contribute resampling weight zero.
template <typename S>
struct ShiftResult {
    S mapped_sample{};
    double jacobian = 1;
    bool valid = true;

    static ShiftResult invalid() { return {S{}, 0, false}; }
    static ShiftResult identity(const S &s) { return {s, 1, true}; }
};

/// Context concept for combining two reservoirs across frames. Implementations
/// provide the two target functions and the shift map between their domains:
///   double target_cur(const S&), target_prev(const S&);
///   ShiftResult<S> shift_to_cur(const S&);   // previous domain -> current
///   ShiftResult<S> shift_to_prev(const S&);  // current domain -> previous
///
/// Combines the current pixel's reservoir with the corresponding reservoir of
/// the previous frame. The reused reservoir's confidence weight is clamped to
/// m_cap first; the output carries M = r_i.M + min(r_j.M, m_cap) and a freshly
/// finalized contribution weight.
template <typename S, typename Ctx>
Reservoir<S> combine_temporal(const Reservoir<S> &r_i, const Reservoir<S> &r_j_in,
                              double m_cap, const Ctx &ctx, Pcg32 &rng) {
    Reservoir<S> r_j = r_j_in;
    r_j.M = std::min(r_j.M, m_cap);

    Reservoir<S> out;

    // Resampling weight for the current sample. The competing technique's
    // density at x_i needs x_i expressed in the previous domain.
    if (!r_i.empty()) {
        const S &x_i = *r_i.sample;
        double p_i = ctx.target_cur(x_i);
        ShiftResult<S> back = ctx.shift_to_prev(x_i);
        MisContext mc;
        mc.p_hat_self = p_i;
        mc.p_hat_other = back.valid ? ctx.target_prev(back.mapped_sample) * back.jacobian : 0;
        mc.M_self = r_i.M;
        mc.M_other = r_j.M;
        double m_i = mis_temporal(mc, MisRole::Current, back.valid);
        out.update(x_i, m_i * p_i * r_i.W, rng);
    }

    // Shift the previous sample into the current domain and weight it.
    if (!r_j.empty()) {
        ShiftResult<S> fwd = ctx.shift_to_cur(*r_j.sample);
        if (fwd.valid && fwd.jacobian > 0) {
            double p_cur_at_xj = ctx.target_cur(fwd.mapped_sample);
            MisContext mc;
            mc.p_hat_self = ctx.target_prev(*r_j.sample) / fwd.jacobian;
            mc.p_hat_other = p_cur_at_xj;
            mc.M_self = r_j.M;
            mc.M_other = r_i.M;
            double m_j = mis_temporal(mc, MisRole::Previous);
            out.update(fwd.mapped_sample, m_j * p_cur_at_xj * r_j.W * fwd.jacobian, rng);
        }
    }

    out.M = r_i.M + r_j.M;
    out.finalize(out.empty() ? 0 : ctx.target_cur(*out.sample));
    return out;
}

/// Context concept for spatial merging, indexed by neighbor:
///   double target_canonical(const S&);
///   double target_neighbor(int k, const S&);
///   ShiftResult<S> shift_to_canonical(int k, const S&);
///   ShiftResult<S> shift_to_neighbor(int k, const S&);
///
/// Merges k neighbor reservoirs into the pixel's own reservoir with defensive
/// pairwise MIS (for a single neighbor this reduces to the two-technique
/// weights above). The output confidence is the plain sum of all
/// participants' M values; capping is a temporal-reuse concern only.
template <typename S, typename Ctx>
Reservoir<S> combine_spatial(const Reservoir<S> &canonical,
                             std::span<const Reservoir<S> *const> neighbors,
                             const Ctx &ctx, Pcg32 &rng) {
    if (neighbors.empty())
        return canonical;

    double m_neighbors = 0;
    for (const Reservoir<S> *n : neighbors)
        m_neighbors += n->M;

    PairwiseMis mis(canonical.M, m_neighbors);
    Reservoir<S> out;

    // Canonical candidate: duel its density against every neighbor technique.
    if (!canonical.empty()) {
        const S &x_c = *canonical.sample;
        double p_c = ctx.target_canonical(x_c);
        double q_c = canonical.M * p_c;
        for (size_t k = 0; k < neighbors.size(); ++k) {
            ShiftResult<S> back = ctx.shift_to_neighbor(static_cast<int>(k), x_c);
            double q_k = 0;
            if (back.valid)
                q_k = neighbors[k]->M * ctx.target_neighbor(static_cast<int>(k), back.mapped_sample) * back.jacobian;
            mis.add_canonical_duel(neighbors[k]->M, q_k, q_c);
        }
        out.update(x_c, mis.canonical_weight() * p_c * canonical.W, rng);
    }

    // Neighbor candidates, shifted into the canonical domain.
    for (size_t k = 0; k < neighbors.size(); ++k) {
        const Reservoir<S> &r_k = *neighbors[k];
        if (r_k.empty())
            continue;
        ShiftResult<S> fwd = ctx.shift_to_canonical(static_cast<int>(k), *r_k.sample);
        if (!fwd.valid || !(fwd.jacobian > 0))
            continue;
        double p_c_at_xk = ctx.target_canonical(fwd.mapped_sample);
        double q_k = r_k.M * ctx.target_neighbor(static_cast<int>(k), *r_k.sample) / fwd.jacobian;
        double q_c = canonical.M * p_c_at_xk;
        double m_k = mis.neighbor_weight(r_k.M, q_k, q_c);
        out.update(fwd.mapped_sample, m_k * p_c_at_xk * r_k.W * fwd.jacobian, rng);
    }

    out.M = canonical.M + m_neighbors;
    out.finalize(out.empty() ? 0 : ctx.target_canonical(*out.sample));
    return out;
}

} // namespace restir
