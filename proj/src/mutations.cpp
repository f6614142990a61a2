// SPDX-License-Identifier: Apache-2.0
#include "restir/mutations.hpp"

namespace restir {

namespace {

/// Direct-lighting target without the occlusion test, for chain states whose
/// visibility is already established (p_hat > 0 implies unoccluded, and
/// freshly traced candidates see their hit point by construction).
double p_hat_di_unoccluded(const Scene &scene, const ShadingContext &ctx, const PathSample &s) {
    Vec3 d = s.light_point - ctx.position;
    double r2 = length_squared(d);
    if (r2 <= 0)
        return 0;
    Vec3 wi = d / std::sqrt(r2);
    double cos_surf = dot(wi, ctx.normal);
    double cos_light = dot(-wi, s.light_normal);
    if (cos_surf <= 0 || cos_light <= 0)
        return 0;
    Vec3 rho = brdf_eval(scene.materials[static_cast<size_t>(ctx.material)], ctx.normal, ctx.wo, wi);
    return luminance(s.emission * rho) * cos_surf * cos_light / r2;
}

struct PathGeom {
    Vec3 w1, w2;
    double r1_2 = 0, r2_2 = 0;
    double cos_ctx = 0, cos_bounce_in = 0, cos_bounce_out = 0, cos_light = 0;
    bool ok = false;
};

PathGeom path_geometry(const ShadingContext &ctx, const PathSample &s) {
    PathGeom g;
    Vec3 d1 = s.bounce_point - ctx.position;
    g.r1_2 = length_squared(d1);
    Vec3 d2 = s.light_point - s.bounce_point;
    g.r2_2 = length_squared(d2);
    if (g.r1_2 <= 0 || g.r2_2 <= 0)
        return g;
    g.w1 = d1 / std::sqrt(g.r1_2);
    g.w2 = d2 / std::sqrt(g.r2_2);
    g.cos_ctx = dot(g.w1, ctx.normal);
    g.cos_bounce_in = dot(-g.w1, s.bounce_normal);
    g.cos_bounce_out = dot(g.w2, s.bounce_normal);
    g.cos_light = dot(-g.w2, s.light_normal);
    g.ok = g.cos_ctx > 0 && g.cos_bounce_in > 0 && g.cos_bounce_out > 0 && g.cos_light > 0;
    return g;
}

/// Path target in the pixel's solid-angle x light-area measure, no occlusion
/// tests (see above).
double p_hat_path_unoccluded(const Scene &scene, const ShadingContext &ctx, const PathSample &s,
                             const PathGeom &g) {
    if (!g.ok)
        return 0;
    Vec3 rho1 = brdf_eval(scene.materials[static_cast<size_t>(ctx.material)], ctx.normal, ctx.wo, g.w1);
    Vec3 rho2 = brdf_eval(scene.materials[static_cast<size_t>(s.bounce_material)],
                          s.bounce_normal, -g.w1, g.w2);
    return luminance(s.emission * rho1 * rho2) * g.cos_ctx * g.cos_bounce_out * g.cos_light / g.r2_2;
}

/// Random-replay source PDF of a one-bounce path in the same measure:
/// pdf(w1) * pdf(w2) * |cos at light| / r2^2.
double replay_pdf(const Scene &scene, const ShadingContext &ctx, const PathSample &s,
                  const PathGeom &g) {
    double p1 = brdf_pdf(scene.materials[static_cast<size_t>(ctx.material)], ctx.normal, ctx.wo, g.w1);
    double p2 = brdf_pdf(scene.materials[static_cast<size_t>(s.bounce_material)],
                         s.bounce_normal, -g.w1, g.w2);
    return p1 * p2 * g.cos_light / g.r2_2;
}

} // namespace

MutationProposal<PathSample> di_direction_mutation(const Scene &scene, const ShadingContext &ctx,
                                                   const PathSample &sample,
                                                   const MutationConfig &cfg, Pcg32 &rng) {
    const Material &mat = scene.materials[static_cast<size_t>(ctx.material)];

    Vec3 d = sample.light_point - ctx.position;
    double r2 = length_squared(d);
    Vec3 w = d / std::sqrt(r2);

    PssVector u;
    bool invertible = brdf_invert(mat, ctx.normal, ctx.wo, w, u);
    if (!invertible)
        u.dim = 2; // keep the draw count fixed even off-support
    PssVector u_new = pss_perturb(u, cfg.s1, cfg.s2, rng);
    if (!invertible)
        return MutationProposal<PathSample>::rejected();

    Vec3 w_new = brdf_sample(mat, ctx.normal, ctx.wo, u_new);
    if (dot(w_new, ctx.normal) <= 0)
        return MutationProposal<PathSample>::rejected();
    auto hit = scene.intersect(Ray{ctx.position, w_new});
    if (!hit || !hit->is_emitter())
        return MutationProposal<PathSample>::rejected();

    PathSample cand = sample;
    cand.light_point = hit->position;
    cand.light_normal = hit->normal;
    cand.emission = hit->emission;
    cand.light_quad = hit->quad;
    scene.invert_emitter_point(cand.light_quad, cand.light_point, cand.u[0], cand.u[1]);
    cand.u.dim = 2;

    double r2_new = length_squared(cand.light_point - ctx.position);
    double cos_light_new = dot(-w_new, cand.light_normal);
    if (cos_light_new <= 0)
        return MutationProposal<PathSample>::rejected();

    double p_hat_x = p_hat_di_unoccluded(scene, ctx, sample);
    double p_hat_z = p_hat_di_unoccluded(scene, ctx, cand);
    if (p_hat_x <= 0 || p_hat_z <= 0)
        return MutationProposal<PathSample>::rejected();

    double q_x = brdf_pdf(mat, ctx.normal, ctx.wo, w) * dot(-w, sample.light_normal) / r2;
    double q_z = brdf_pdf(mat, ctx.normal, ctx.wo, w_new) * cos_light_new / r2_new;
    if (q_x <= 0 || q_z <= 0)
        return MutationProposal<PathSample>::rejected();

    MutationProposal<PathSample> prop;
    prop.candidate = cand;
    prop.kernel_ratio = 1; // symmetric in primary sample space
    prop.contribution_ratio = (p_hat_z / q_z) / (p_hat_x / q_x);
    prop.p_hat = p_hat_z;
    return prop;
}

MutationProposal<PathSample> reconnection_mutation(const Scene &scene, const ShadingContext &ctx,
                                                   const PathSample &sample,
                                                   const MutationConfig &cfg, Pcg32 &rng,
                                                   const ShiftLimits &limits,
                                                   bool force_symmetric_kernel) {
    const Material &mat1 = scene.materials[static_cast<size_t>(ctx.material)];

    PathGeom g = path_geometry(ctx, sample);
    PssVector u;
    bool invertible = sample.has_bounce && g.ok &&
                      brdf_invert(mat1, ctx.normal, ctx.wo, g.w1, u);
    if (!invertible)
        u.dim = 2;
    PssVector u_new = pss_perturb(u, cfg.s1, cfg.s2, rng);
    if (!invertible)
        return MutationProposal<PathSample>::rejected();

    Vec3 w1_new = brdf_sample(mat1, ctx.normal, ctx.wo, u_new);
    if (dot(w1_new, ctx.normal) <= 0)
        return MutationProposal<PathSample>::rejected();
    auto hit = scene.intersect(Ray{ctx.position, w1_new});
    if (!hit || hit->is_emitter())
        return MutationProposal<PathSample>::rejected();

    PathSample cand = sample;
    cand.bounce_point = hit->position;
    cand.bounce_normal = hit->normal;
    cand.bounce_material = hit->material;
    cand.u[0] = u_new[0];
    cand.u[1] = u_new[1];

    if (!reconnection_vertex_connectable(scene, cand, limits))
        return MutationProposal<PathSample>::rejected();
    PathGeom gc = path_geometry(ctx, cand);
    if (!gc.ok)
        return MutationProposal<PathSample>::rejected();
    double min_dist = limits.min_dist_frac * scene.diameter();
    if (gc.r2_2 < min_dist * min_dist || gc.cos_bounce_out < limits.min_cos ||
        gc.cos_light < limits.min_cos)
        return MutationProposal<PathSample>::rejected();
    if (scene.occluded(cand.bounce_point, cand.light_point))
        return MutationProposal<PathSample>::rejected();

    double p_hat_x = p_hat_path_unoccluded(scene, ctx, sample, g);
    double p_hat_z = p_hat_path_unoccluded(scene, ctx, cand, gc);
    if (p_hat_x <= 0 || p_hat_z <= 0)
        return MutationProposal<PathSample>::rejected();
    double q_x = replay_pdf(scene, ctx, sample, g);
    double q_z = replay_pdf(scene, ctx, cand, gc);
    if (q_x <= 0 || q_z <= 0)
        return MutationProposal<PathSample>::rejected();

    // Transition-kernel ratio for the pinned connection vertex.
    double pdf2_x = brdf_pdf(scene.materials[static_cast<size_t>(sample.bounce_material)],
                             sample.bounce_normal, -g.w1, g.w2);
    double pdf2_z = brdf_pdf(scene.materials[static_cast<size_t>(cand.bounce_material)],
                             cand.bounce_normal, -gc.w1, gc.w2);
    double kernel = (gc.cos_light / g.cos_light) * (g.r2_2 / gc.r2_2) * (pdf2_z / pdf2_x);

    MutationProposal<PathSample> prop;
    prop.candidate = cand;
    prop.kernel_ratio = force_symmetric_kernel ? 1.0 : kernel;
    prop.contribution_ratio = (p_hat_z / q_z) / (p_hat_x / q_x);
    prop.p_hat = p_hat_z;
    return prop;
}

} // namespace restir
