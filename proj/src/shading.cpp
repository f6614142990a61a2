// SPDX-License-Identifier: Apache-2.0
#include "restir/shading.hpp"

namespace restir {

ShadingContext make_shading_context(const Scene &scene, const Hit &hit, const Ray &primary) {
    (void)scene;
    ShadingContext ctx;
    ctx.position = hit.position;
    ctx.normal = hit.normal;
    ctx.wo = -primary.dir;
    ctx.material = hit.material;
    ctx.valid = !hit.is_emitter() && dot(ctx.wo, ctx.normal) > 0;
    return ctx;
}

Vec3 f_di(const Scene &scene, const ShadingContext &ctx, const PathSample &s) {
    if (!ctx.valid || s.light_quad < 0)
        return Vec3(0.0);
    Vec3 d = s.light_point - ctx.position;
    double r2 = length_squared(d);
    if (r2 <= 0)
        return Vec3(0.0);
    Vec3 wi = d / std::sqrt(r2);
    double cos_surf = dot(wi, ctx.normal);
    double cos_light = dot(-wi, s.light_normal);
    if (cos_surf <= 0 || cos_light <= 0)
        return Vec3(0.0);
    Vec3 rho = brdf_eval(scene.materials[static_cast<size_t>(ctx.material)], ctx.normal, ctx.wo, wi);
    if (max_component(rho) <= 0)
        return Vec3(0.0);
    if (scene.occluded(ctx.position, s.light_point))
        return Vec3(0.0);
    return s.emission * rho * (cos_surf * cos_light / r2);
}

Vec3 f_path(const Scene &scene, const ShadingContext &ctx, const PathSample &s) {
    if (!ctx.valid || !s.has_bounce || s.light_quad < 0)
        return Vec3(0.0);

    Vec3 d1 = s.bounce_point - ctx.position;
    double r1_2 = length_squared(d1);
    if (r1_2 <= 0)
        return Vec3(0.0);
    Vec3 w1 = d1 / std::sqrt(r1_2);
    double cos_ctx = dot(w1, ctx.normal);
    double cos_bounce_in = dot(-w1, s.bounce_normal);
    if (cos_ctx <= 0 || cos_bounce_in <= 0)
        return Vec3(0.0);
    Vec3 rho1 = brdf_eval(scene.materials[static_cast<size_t>(ctx.material)], ctx.normal, ctx.wo, w1);
    if (max_component(rho1) <= 0)
        return Vec3(0.0);

    Vec3 d2 = s.light_point - s.bounce_point;
    double r2_2 = length_squared(d2);
    if (r2_2 <= 0)
        return Vec3(0.0);
    Vec3 w2 = d2 / std::sqrt(r2_2);
    double cos_bounce_out = dot(w2, s.bounce_normal);
    double cos_light = dot(-w2, s.light_normal);
    if (cos_bounce_out <= 0 || cos_light <= 0)
        return Vec3(0.0);
    Vec3 rho2 = brdf_eval(scene.materials[static_cast<size_t>(s.bounce_material)],
                          s.bounce_normal, -w1, w2);
    if (max_component(rho2) <= 0)
        return Vec3(0.0);

    if (scene.occluded(s.bounce_point, s.light_point))
        return Vec3(0.0);

    // Solid-angle measure at the primary hit: the first segment contributes
    // only the projected BRDF; the bounce vertex is pinned by ray tracing.
    return s.emission * rho1 * rho2 * (cos_ctx * cos_bounce_out * cos_light / r2_2);
}

double p_hat_di(const Scene &scene, const ShadingContext &ctx, const PathSample &s) {
    return luminance(f_di(scene, ctx, s));
}

double p_hat_path(const Scene &scene, const ShadingContext &ctx, const PathSample &s) {
    return luminance(f_path(scene, ctx, s));
}

double source_pdf_di(const Scene &scene) {
    return 1.0 / scene.total_emitter_area();
}

double source_pdf_path(const Scene &scene, const ShadingContext &ctx, const PathSample &s) {
    if (!s.has_bounce)
        return 0;
    Vec3 w1 = normalize(s.bounce_point - ctx.position);
    double pdf_dir = brdf_pdf(scene.materials[static_cast<size_t>(ctx.material)], ctx.normal, ctx.wo, w1);
    return pdf_dir / scene.total_emitter_area();
}

PathSample sample_light_candidate(const Scene &scene, double u0, double u1) {
    EmitterSample es = scene.sample_emitter(u0, u1);
    PathSample s;
    s.light_point = es.position;
    s.light_normal = es.normal;
    s.emission = es.emission;
    s.light_quad = es.quad;
    s.u.dim = 2;
    s.u[0] = u0;
    s.u[1] = u1;
    return s;
}

PathSample replay_one_bounce(const Scene &scene, const ShadingContext &ctx, const PssVector &u) {
    PathSample s;
    s.u = u;

    EmitterSample es = scene.sample_emitter(u[2], u[3]);
    s.light_point = es.position;
    s.light_normal = es.normal;
    s.emission = es.emission;
    s.light_quad = es.quad;

    PssVector u_dir;
    u_dir.dim = 2;
    u_dir[0] = u[0];
    u_dir[1] = u[1];
    Vec3 w1 = brdf_sample(scene.materials[static_cast<size_t>(ctx.material)], ctx.normal, ctx.wo, u_dir);
    if (dot(w1, ctx.normal) <= 0)
        return s; // below the surface: zero-target sample
    auto hit = scene.intersect(Ray{ctx.position, w1});
    if (!hit || hit->is_emitter())
        return s; // escaped or reached an emitter directly: zero-target
    s.has_bounce = true;
    s.bounce_point = hit->position;
    s.bounce_normal = hit->normal;
    s.bounce_material = hit->material;
    return s;
}

PathSample trace_one_bounce(const Scene &scene, const ShadingContext &ctx, Pcg32 &rng) {
    PssVector u;
    u.dim = 4;
    for (int i = 0; i < 4; ++i)
        u[i] = rng.next_double();
    return replay_one_bounce(scene, ctx, u);
}

} // namespace restir
