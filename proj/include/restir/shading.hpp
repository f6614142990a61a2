// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "restir/mcmc.hpp"
#include "restir/scene.hpp"

namespace restir {

/// Per-pixel shading state at the primary hit. Defines the pixel's target
/// function and integrand; invalid for pixels whose primary ray missed or hit
/// an emitter (those shade directly).
struct ShadingContext {
    Vec3 position;
    Vec3 normal; // unit
    Vec3 wo;     // unit, toward the camera
    int material = -1;
    bool valid = false;
};

/// A light-carrying sample relative to a shading point. In direct-lighting
/// mode it is a point on an emitter (integration domain: light-surface area,
/// shared by all pixels). In one-bounce path mode it additionally carries the
/// reconnection vertex, and the domain is solid angle at the primary hit
/// times light-surface area.
///
/// The id is a stable identity used by impoverishment metrics: it survives
/// reuse and resampling, and is refreshed when a mutation is accepted.
struct PathSample {
    Vec3 light_point;
    Vec3 light_normal;
    Vec3 emission;
    int light_quad = -1;

    bool has_bounce = false;
    Vec3 bounce_point;
    Vec3 bounce_normal;
    int bounce_material = -1;

    PssVector u; // generating random numbers (regenerate the sample)
    uint64_t id = 0;
};

ShadingContext make_shading_context(const Scene &scene, const Hit &hit, const Ray &primary);

/// Direct-lighting integrand in light-area measure:
///   L_e * brdf * |cos at surface| * |cos at light| / r^2 * V.
/// Zero for occluded or backfacing configurations.
Vec3 f_di(const Scene &scene, const ShadingContext &ctx, const PathSample &s);

/// One-bounce path integrand in (solid angle at primary hit) x (light area)
/// measure. The bounce vertex is the first surface hit along the sampled
/// direction; callers maintain that invariant (shift validity re-checks it).
Vec3 f_path(const Scene &scene, const ShadingContext &ctx, const PathSample &s);

double p_hat_di(const Scene &scene, const ShadingContext &ctx, const PathSample &s);
double p_hat_path(const Scene &scene, const ShadingContext &ctx, const PathSample &s);

/// Uniform light-area source PDF for direct-lighting candidates.
double source_pdf_di(const Scene &scene);

/// Source PDF of trace_one_bounce in the path-mode measure:
/// brdf_pdf(direction) / total emitter area.
double source_pdf_path(const Scene &scene, const ShadingContext &ctx, const PathSample &s);

/// Generates a direct-lighting candidate from two uniform numbers.
PathSample sample_light_candidate(const Scene &scene, double u0, double u1);

/// Samples a bounce direction from the BRDF at the primary hit (recording the
/// primary-sample-space coordinates), finds the reconnection vertex, then
/// samples a light point. Escaped rays and emitter hits yield zero-target
/// samples (has_bounce = false).
PathSample trace_one_bounce(const Scene &scene, const ShadingContext &ctx, Pcg32 &rng);

/// Regenerates a path-mode sample from its stored coordinates; used by the
/// replay oracle in tests.
PathSample replay_one_bounce(const Scene &scene, const ShadingContext &ctx, const PssVector &u);

} // namespace restir
