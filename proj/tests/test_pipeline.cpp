// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "restir/pipeline.hpp"
#include "restir/scene_library.hpp"

using namespace restir;

namespace {

RenderSettings small_settings() {
    RenderSettings s;
    s.width = 24;
    s.height = 24;
    s.initial_candidates = 8;
    s.mutation_iters = 1;
    s.spatial_k = 3;
    s.spatial_radius = 4;
    s.seed = 42;
    s.threads = 1;
    return s;
}

bool images_identical(const Image &a, const Image &b) {
    if (a.width != b.width || a.height != b.height)
        return false;
    for (size_t i = 0; i < a.count(); ++i)
        if (!(a.pixels[i] == b.pixels[i]))
            return false;
    return true;
}

Scene gray_box() {
    // Achromatic variant: with gray materials and emission, the luminance of
    // the integrand equals the scalar target everywhere.
    return Scene::parse_json(R"({
      "camera": {"position": [0, 1.0, 3.2], "look_at": [0, 1.0, 0], "fov_deg": 50},
      "materials": [
        {"name": "wall", "type": "lambertian", "albedo": [0.6, 0.6, 0.6]},
        {"name": "lamp", "albedo": [0, 0, 0]}
      ],
      "quads": [
        {"corner": [-1, 0, -1], "edge_u": [0, 0, 2], "edge_v": [2, 0, 0], "material": "wall"},
        {"corner": [-1, 2, -1], "edge_u": [2, 0, 0], "edge_v": [0, 0, 2], "material": "wall"},
        {"corner": [-1, 0, -1], "edge_u": [2, 0, 0], "edge_v": [0, 2, 0], "material": "wall"},
        {"corner": [-1, 0, -1], "edge_u": [0, 2, 0], "edge_v": [0, 0, 2], "material": "wall"},
        {"corner": [1, 0, -1],  "edge_u": [0, 0, 2], "edge_v": [0, 2, 0], "material": "wall"},
        {"corner": [-0.3, 1.98, -0.3], "edge_u": [0.6, 0, 0], "edge_v": [0, 0, 0.6],
         "material": "lamp", "emission": [20, 20, 20]}
      ]
    })");
}

} // namespace

TEST_CASE("identical seed and config give bit-identical frames") {
    Scene scene = scene_library::glossy_box();
    RenderSettings s = small_settings();
    Renderer a(scene, s), b(scene, s);
    for (int f = 0; f < 3; ++f) {
        FrameOutput fa = a.render_frame();
        FrameOutput fb = b.render_frame();
        CHECK(images_identical(fa.image, fb.image));
        CHECK(fa.sample_ids == fb.sample_ids);
        CHECK(fa.mutation_stats.proposed == fb.mutation_stats.proposed);
        CHECK(fa.mutation_stats.accepted == fb.mutation_stats.accepted);
    }
}

TEST_CASE("no negative, NaN or Inf pixels ever reach the output") {
    Scene scene = scene_library::slot_box();
    RenderSettings s = small_settings();
    s.mutation_iters = 2;
    Renderer r(scene, s);
    for (int f = 0; f < 4; ++f) {
        FrameOutput out = r.render_frame();
        for (const Vec3 &p : out.image.pixels) {
            CHECK(is_finite(p));
            CHECK(p.x >= 0.0);
            CHECK(p.y >= 0.0);
            CHECK(p.z >= 0.0);
        }
    }
}

TEST_CASE("cap zero makes temporal reuse inert") {
    Scene scene = scene_library::glossy_box();
    RenderSettings s = small_settings();
    s.m_cap = 0;
    s.mutation_iters = 0;
    s.spatial_rounds = 0;
    Renderer r(scene, s);
    r.render_frame();
    r.render_frame();
    FrameOutput f2 = r.render_frame();
    (void)f2;
    // Confidence never grows past the per-frame candidate count.
    for (const auto &res : r.history())
        CHECK(res.M <= s.initial_candidates);
}

TEST_CASE("temporal confidence bookkeeping follows M_i + min(M_j, cap)") {
    Scene scene = scene_library::glossy_box();
    RenderSettings s = small_settings();
    s.m_cap = 20;
    s.mutation_iters = 0;
    s.spatial_rounds = 0; // keep M analyzable: no neighbor sums
    Renderer r(scene, s);
    // Frame f: M_f = M_init + min(M_{f-1}, cap): 8, 16, 24, 28, 28, ...
    std::vector<double> expect{8, 16, 24, 28, 28};
    for (double e : expect) {
        r.render_frame();
        bool any = false;
        for (const auto &res : r.history()) {
            if (res.M > 0) {
                CHECK(res.M == doctest::Approx(e));
                any = true;
            }
        }
        CHECK(any);
    }
}

TEST_CASE("frame zero works without temporal history and fills ids") {
    Scene scene = scene_library::glossy_box();
    RenderSettings s = small_settings();
    Renderer r(scene, s);
    FrameOutput f0 = r.render_frame();
    int lit = 0, with_id = 0;
    for (size_t i = 0; i < f0.image.count(); ++i) {
        if (luminance(f0.image.pixels[i]) > 0)
            ++lit;
        if (f0.sample_ids[i] != 0)
            ++with_id;
    }
    CHECK(lit > 50);
    CHECK(with_id > 50);
}

TEST_CASE("reset clears the temporal state deterministically") {
    Scene scene = scene_library::glossy_box();
    RenderSettings s = small_settings();
    Renderer r(scene, s);
    FrameOutput first = r.render_frame();
    r.render_frame();
    r.reset();
    FrameOutput again = r.render_frame();
    CHECK(images_identical(first.image, again.image));
}

TEST_CASE("achromatic scene: shaded luminance equals the reservoir weight sum") {
    Scene scene = gray_box();
    RenderSettings s = small_settings();
    s.mutation_iters = 0;
    s.spatial_rounds = 0;
    s.m_cap = 0;
    Renderer r(scene, s);
    FrameOutput out = r.render_frame();
    const auto &hist = r.history();
    int checked = 0;
    for (size_t i = 0; i < hist.size(); ++i) {
        const auto &res = hist[i];
        if (res.empty() || res.W <= 0)
            continue;
        // Direct-emitter pixels add L_e on top; skip them.
        if (r.contexts()[i].valid) {
            CHECK(luminance(out.image.pixels[i]) == doctest::Approx(res.w_sum).epsilon(1e-9));
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("one-bounce mode renders finite energy with reconnection mutations") {
    Scene scene = scene_library::glossy_box();
    RenderSettings s = small_settings();
    s.mode = RenderMode::OneBounce;
    s.strategy = MutationStrategy::ReconnectionVertex;
    s.mutation_iters = 2;
    Renderer r(scene, s);
    double total = 0;
    for (int f = 0; f < 3; ++f) {
        FrameOutput out = r.render_frame();
        for (const Vec3 &p : out.image.pixels) {
            REQUIRE(is_finite(p));
            total += luminance(p);
        }
    }
    CHECK(total > 0);
}

TEST_CASE("accepted mutations refresh the sample identity") {
    Scene scene = scene_library::glossy_box();
    RenderSettings s = small_settings();
    s.spatial_rounds = 0;
    s.m_cap = 0;
    Renderer with(scene, s);
    s.mutation_iters = 0;
    Renderer without(scene, s);

    FrameOutput a = with.render_frame();
    FrameOutput b = without.render_frame();
    REQUIRE(a.mutation_stats.accepted > 0);
    // Identities diverge exactly where mutations were accepted.
    int diff = 0;
    for (size_t i = 0; i < a.sample_ids.size(); ++i)
        if (a.sample_ids[i] != b.sample_ids[i])
            ++diff;
    CHECK(diff > 0);
}
