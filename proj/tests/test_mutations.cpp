// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "restir/mutations.hpp"
#include "restir/scene_library.hpp"

using namespace restir;

namespace {

PathSample di_state(const scene_library::ChainScene &cs, double u0, double u1) {
    // A chain state on the emitters with positive target.
    PathSample s;
    EmitterSample es = cs.scene.sample_emitter(u0, u1);
    s.light_point = es.position;
    s.light_normal = es.normal;
    s.emission = es.emission;
    s.light_quad = es.quad;
    s.u.dim = 2;
    s.u[0] = u0;
    s.u[1] = u1;
    return s;
}

} // namespace

TEST_CASE("near-zero perturbation proposes the same sample with acceptance ~1") {
    auto cs = scene_library::chain_di_scene();
    PathSample s = di_state(cs, 0.2, 0.5);
    REQUIRE(p_hat_di(cs.scene, cs.ctx, s) > 0);

    MutationConfig cfg;
    cfg.s1 = cfg.s2 = 1e-12;
    Pcg32 rng(1);
    auto prop = di_direction_mutation(cs.scene, cs.ctx, s, cfg, rng);
    REQUIRE(prop.contribution_ratio > 0);
    CHECK(length(prop.candidate.light_point - s.light_point) < 1e-6);
    CHECK(prop.contribution_ratio * prop.kernel_ratio == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(prop.kernel_ratio == 1.0);
}

TEST_CASE("direction proposals that miss every light are infeasible") {
    auto cs = scene_library::chain_di_scene();
    PathSample s = di_state(cs, 0.9, 0.5); // start near the dim lamp's far edge
    REQUIRE(p_hat_di(cs.scene, cs.ctx, s) > 0);

    MutationConfig cfg;
    cfg.s1 = 0.2;
    cfg.s2 = 0.5; // huge steps: many rays escape past the lamps
    Pcg32 rng(2);
    int rejected = 0, proposed = 0;
    for (int i = 0; i < 300; ++i) {
        auto prop = di_direction_mutation(cs.scene, cs.ctx, s, cfg, rng);
        ++proposed;
        if (prop.contribution_ratio == 0) {
            ++rejected;
            CHECK(prop.p_hat == 0.0);
        }
    }
    CHECK(rejected > 0);
    CHECK(rejected < proposed);
}

TEST_CASE("di mutation keeps the stored coordinates consistent with the light point") {
    auto cs = scene_library::chain_di_scene();
    PathSample s = di_state(cs, 0.3, 0.4);
    MutationConfig cfg;
    Pcg32 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto prop = di_direction_mutation(cs.scene, cs.ctx, s, cfg, rng);
        if (prop.contribution_ratio <= 0)
            continue;
        EmitterSample es = cs.scene.sample_emitter(prop.candidate.u[0], prop.candidate.u[1]);
        CHECK(es.quad == prop.candidate.light_quad);
        CHECK(length(es.position - prop.candidate.light_point) < 1e-9);
    }
}

namespace {

PathSample reconnection_state(const scene_library::ChainScene &cs, Vec3 on_floor) {
    PathSample s;
    s.has_bounce = true;
    s.bounce_point = on_floor;
    s.bounce_normal = cs.scene.quads[static_cast<size_t>(cs.slice_quad)].normal();
    s.bounce_material = cs.scene.quads[static_cast<size_t>(cs.slice_quad)].material;
    s.light_point = cs.fixed_light;
    s.light_normal = cs.fixed_light_normal;
    s.emission = cs.fixed_light_emission;
    s.light_quad = cs.fixed_light_quad;
    return s;
}

} // namespace

TEST_CASE("identity reconnection mutation has kernel ratio 1") {
    auto cs = scene_library::chain_reconnection_scene(false);
    PathSample s = reconnection_state(cs, Vec3(0.1, 0, 0.2));
    REQUIRE(p_hat_path(cs.scene, cs.ctx, s) > 0);

    MutationConfig cfg;
    cfg.s1 = cfg.s2 = 1e-12;
    Pcg32 rng(4);
    auto prop = reconnection_mutation(cs.scene, cs.ctx, s, cfg, rng);
    REQUIRE(prop.contribution_ratio > 0);
    CHECK(length(prop.candidate.bounce_point - s.bounce_point) < 1e-6);
    CHECK(prop.kernel_ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("reconnection kernel ratio matches the geometric factors") {
    auto cs = scene_library::chain_reconnection_scene(false);
    PathSample s = reconnection_state(cs, Vec3(0.3, 0, 0.1));
    REQUIRE(p_hat_path(cs.scene, cs.ctx, s) > 0);

    MutationConfig cfg;
    cfg.s1 = 0.02;
    cfg.s2 = 0.08;
    Pcg32 rng(5);
    const Material &floor = cs.scene.materials[0];
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        auto prop = reconnection_mutation(cs.scene, cs.ctx, s, cfg, rng);
        if (prop.contribution_ratio <= 0)
            continue;
        const PathSample &c = prop.candidate;

        Vec3 w1 = normalize(s.bounce_point - cs.ctx.position);
        Vec3 w1c = normalize(c.bounce_point - cs.ctx.position);
        Vec3 d2 = s.light_point - s.bounce_point;
        Vec3 d2c = c.light_point - c.bounce_point;
        double r2 = length_squared(d2), r2c = length_squared(d2c);
        Vec3 w2 = d2 / std::sqrt(r2), w2c = d2c / std::sqrt(r2c);

        double cos_l = dot(-w2, s.light_normal);
        double cos_lc = dot(-w2c, c.light_normal);
        double p2 = brdf_pdf(floor, s.bounce_normal, -w1, w2);
        double p2c = brdf_pdf(floor, c.bounce_normal, -w1c, w2c);
        double expect = (cos_lc / cos_l) * (r2 / r2c) * (p2c / p2);
        CHECK(prop.kernel_ratio == doctest::Approx(expect).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("occluded reconnection candidates are rejected") {
    auto cs = scene_library::chain_reconnection_scene(false);
    // Drop a blocker between parts of the floor and the pinned light.
    Quad blocker;
    blocker.corner = Vec3(0.2, 0.7, -0.3);
    blocker.edge_u = Vec3(0.5, 0, 0);
    blocker.edge_v = Vec3(0, 0, 0.6);
    blocker.material = 0;
    cs.scene.quads.push_back(blocker);
    cs.scene.finalize();

    PathSample s = reconnection_state(cs, Vec3(-0.6, 0, 0.1));
    REQUIRE(p_hat_path(cs.scene, cs.ctx, s) > 0);

    MutationConfig cfg;
    cfg.s1 = 0.1;
    cfg.s2 = 0.3;
    Pcg32 rng(6);
    int occluded_rejects = 0;
    for (int i = 0; i < 2000; ++i) {
        auto prop = reconnection_mutation(cs.scene, cs.ctx, s, cfg, rng);
        if (prop.contribution_ratio > 0) {
            // Accepted-candidate segments must be clear.
            CHECK(!cs.scene.occluded(prop.candidate.bounce_point, prop.candidate.light_point));
        } else {
            ++occluded_rejects;
        }
    }
    CHECK(occluded_rejects > 0);
}

TEST_CASE("forcing a symmetric kernel changes only the reported ratio") {
    auto cs = scene_library::chain_reconnection_scene(true);
    PathSample s = reconnection_state(cs, Vec3(0.7, 0, 0.6));
    REQUIRE(p_hat_path(cs.scene, cs.ctx, s) > 0);

    MutationConfig cfg;
    Pcg32 rng_a(7), rng_b(7);
    auto with = reconnection_mutation(cs.scene, cs.ctx, s, cfg, rng_a, {}, false);
    auto without = reconnection_mutation(cs.scene, cs.ctx, s, cfg, rng_b, {}, true);
    CHECK(without.kernel_ratio == 1.0);
    if (with.contribution_ratio > 0) {
        CHECK(with.contribution_ratio == without.contribution_ratio);
        CHECK(length(with.candidate.bounce_point - without.candidate.bounce_point) == 0.0);
    }
}
