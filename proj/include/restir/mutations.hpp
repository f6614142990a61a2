// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "restir/shading.hpp"
#include "restir/shift.hpp"

namespace restir {

/// Direct-lighting mutation: recovers the primary-sample-space coordinates of
/// the direction from the shading point to the light sample by inverting the
/// BRDF sampling map, perturbs them, and re-traces to find the new light
/// point. The contribution function is C(u) = p_hat(y(u)) / q(y(u)) with
/// q = brdf_pdf(w) |cos at light| / r^2; the perturbation is symmetric in
/// primary sample space, so the kernel ratio is 1.
///
/// Candidates whose ray escapes or lands off an emitter are infeasible
/// (contribution_ratio = 0). Consumes a fixed number of random draws.
MutationProposal<PathSample> di_direction_mutation(const Scene &scene, const ShadingContext &ctx,
                                                   const PathSample &sample,
                                                   const MutationConfig &cfg, Pcg32 &rng);

/// One-bounce path mutation: perturbs only the coordinates generating the
/// reconnection vertex from the primary hit, keeping the prefix and the
/// follow-on light vertex fixed. Because the follow-on vertex is pinned, the
/// transition kernels are asymmetric; their ratio is
///   (|cos t'| / |cos t|) * (r^2 / r'^2) * (pdf(w2') / pdf(w2)),
/// where t is the angle at the light vertex, r the reconnection-segment
/// length and pdf the solid-angle BRDF PDF of the connection direction at the
/// (mutated) reconnection vertex. A terminal light vertex samples no outgoing
/// direction, so no further factor appears.
///
/// Mutations that break connectability or whose reconnection segment is
/// occluded are rejected via contribution_ratio = 0. force_symmetric_kernel
/// reports kernel_ratio = 1 instead of the correct ratio (negative-control
/// switch for the stationarity experiments).
MutationProposal<PathSample> reconnection_mutation(const Scene &scene, const ShadingContext &ctx,
                                                   const PathSample &sample,
                                                   const MutationConfig &cfg, Pcg32 &rng,
                                                   const ShiftLimits &limits = {},
                                                   bool force_symmetric_kernel = false);

} // namespace restir
