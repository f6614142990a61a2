// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "restir/combine.hpp"
#include "restir/shading.hpp"

namespace restir {

enum class ShiftMode { Identity, Reconnection };

/// Connectability conditions for reconnection shifts and mutations. A
/// reconnection segment must be long enough relative to the scene, away from
/// grazing angles, and end on a surface that is not too specular.
struct ShiftLimits {
    double min_dist_frac = 0.01; // of scene diameter
    double min_cos = 1e-3;
    double max_glossy_exponent = 128;
};

inline bool reconnection_vertex_connectable(const Scene &scene, const PathSample &s,
                                            const ShiftLimits &limits) {
    const Material &m = scene.materials[static_cast<size_t>(s.bounce_material)];
    return m.type == MaterialType::Lambertian || m.exponent <= limits.max_glossy_exponent;
}

/// Re-expresses a sample from one pixel's domain in another pixel's domain.
///
/// Identity mode (direct lighting): all pixels integrate over the shared
/// light-surface area, so the mapping is the identity with Jacobian 1.
///
/// Reconnection mode (one-bounce paths): the path is re-anchored at the
/// destination pixel's primary hit and reconnected to the sample's
/// reconnection vertex. Pixel domains measure the first segment in solid
/// angle, so the Jacobian is the ratio of solid-angle-to-area factors
/// |cos| / r^2 of the reconnection segment at the two anchors. The shift is
/// invalid when the new segment is occluded, grazing, too short, or lands on
/// a surface too specular to reconnect.
inline ShiftResult<PathSample> shift_map(const Scene &scene, const PathSample &sample,
                                         const ShadingContext &from, const ShadingContext &to,
                                         ShiftMode mode, const ShiftLimits &limits = {}) {
    if (mode == ShiftMode::Identity)
        return ShiftResult<PathSample>::identity(sample);

    if (!sample.has_bounce || !from.valid || !to.valid)
        return ShiftResult<PathSample>::invalid();
    if (!reconnection_vertex_connectable(scene, sample, limits))
        return ShiftResult<PathSample>::invalid();

    double min_dist = limits.min_dist_frac * scene.diameter();

    Vec3 d_from = sample.bounce_point - from.position;
    double r2_from = length_squared(d_from);
    Vec3 d_to = sample.bounce_point - to.position;
    double r2_to = length_squared(d_to);
    if (r2_from < min_dist * min_dist || r2_to < min_dist * min_dist)
        return ShiftResult<PathSample>::invalid();

    Vec3 w_from = d_from / std::sqrt(r2_from);
    Vec3 w_to = d_to / std::sqrt(r2_to);
    double cos_from = dot(-w_from, sample.bounce_normal);
    double cos_to = dot(-w_to, sample.bounce_normal);
    if (cos_from < limits.min_cos || cos_to < limits.min_cos)
        return ShiftResult<PathSample>::invalid();
    if (dot(w_to, to.normal) <= 0)
        return ShiftResult<PathSample>::invalid();
    if (scene.occluded(to.position, sample.bounce_point))
        return ShiftResult<PathSample>::invalid();

    ShiftResult<PathSample> out;
    out.mapped_sample = sample;
    out.jacobian = (cos_to / r2_to) / (cos_from / r2_from);
    out.valid = true;

    // Keep the stored generating coordinates consistent with the new anchor.
    PssVector u_dir;
    if (brdf_invert(scene.materials[static_cast<size_t>(to.material)], to.normal, to.wo, w_to, u_dir)) {
        out.mapped_sample.u[0] = u_dir[0];
        out.mapped_sample.u[1] = u_dir[1];
    }
    return out;
}

} // namespace restir
