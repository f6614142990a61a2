// SPDX-License-Identifier: Apache-2.0
#include "restir/scene_library.hpp"

namespace restir {
namespace scene_library {

std::string glossy_box_json() {
    return R"json({
  "camera": {"position": [0, 1.0, 3.2], "look_at": [0, 1.0, 0], "up": [0, 1, 0], "fov_deg": 50},
  "materials": [
    {"name": "floor",   "type": "glossy", "albedo": [0.62, 0.62, 0.62], "exponent": 48},
    {"name": "left",    "type": "glossy", "albedo": [0.70, 0.25, 0.25], "exponent": 24},
    {"name": "right",   "type": "glossy", "albedo": [0.25, 0.70, 0.30], "exponent": 24},
    {"name": "back",    "type": "glossy", "albedo": [0.55, 0.55, 0.60], "exponent": 12},
    {"name": "ceiling", "type": "lambertian", "albedo": [0.55, 0.55, 0.55]},
    {"name": "panel",   "type": "lambertian", "albedo": [0.35, 0.35, 0.35]},
    {"name": "lamp",    "type": "lambertian", "albedo": [0, 0, 0]}
  ],
  "quads": [
    {"corner": [-1, 0, -1], "edge_u": [0, 0, 2], "edge_v": [2, 0, 0], "material": "floor"},
    {"corner": [-1, 2, -1], "edge_u": [2, 0, 0], "edge_v": [0, 0, 2], "material": "ceiling"},
    {"corner": [-1, 0, -1], "edge_u": [2, 0, 0], "edge_v": [0, 2, 0], "material": "back"},
    {"corner": [-1, 0, -1], "edge_u": [0, 2, 0], "edge_v": [0, 0, 2], "material": "left"},
    {"corner": [1, 0, -1],  "edge_u": [0, 0, 2], "edge_v": [0, 2, 0], "material": "right"},
    {"corner": [-0.16, 1.98, -0.36], "edge_u": [0.32, 0, 0], "edge_v": [0, 0, 0.32],
     "material": "lamp", "emission": [42, 42, 42]},
    {"corner": [-0.55, 1.62, -0.55], "edge_u": [0.75, 0, 0], "edge_v": [0, 0, 0.42],
     "material": "panel"}
  ]
})json";
}

Scene glossy_box() { return Scene::parse_json(glossy_box_json()); }

std::string slot_box_json() {
    return R"json({
  "camera": {"position": [0, 1.0, 3.2], "look_at": [0, 1.0, 0], "up": [0, 1, 0], "fov_deg": 50},
  "materials": [
    {"name": "floor",   "type": "glossy", "albedo": [0.62, 0.62, 0.62], "exponent": 48},
    {"name": "left",    "type": "glossy", "albedo": [0.70, 0.25, 0.25], "exponent": 24},
    {"name": "right",   "type": "glossy", "albedo": [0.25, 0.70, 0.30], "exponent": 24},
    {"name": "back",    "type": "glossy", "albedo": [0.55, 0.55, 0.60], "exponent": 12},
    {"name": "ceiling", "type": "lambertian", "albedo": [0.55, 0.55, 0.55]},
    {"name": "panel",   "type": "lambertian", "albedo": [0.35, 0.35, 0.35]},
    {"name": "lamp",    "type": "lambertian", "albedo": [0, 0, 0]}
  ],
  "quads": [
    {"corner": [-1, 0, -1], "edge_u": [0, 0, 2], "edge_v": [2, 0, 0], "material": "floor"},
    {"corner": [-1, 2, -1], "edge_u": [2, 0, 0], "edge_v": [0, 0, 2], "material": "ceiling"},
    {"corner": [-1, 0, -1], "edge_u": [2, 0, 0], "edge_v": [0, 2, 0], "material": "back"},
    {"corner": [-1, 0, -1], "edge_u": [0, 2, 0], "edge_v": [0, 0, 2], "material": "left"},
    {"corner": [1, 0, -1],  "edge_u": [0, 0, 2], "edge_v": [0, 2, 0], "material": "right"},
    {"corner": [-0.35, 1.9, -0.35], "edge_u": [0.7, 0, 0], "edge_v": [0, 0, 0.7],
     "material": "lamp", "emission": [60, 60, 60]},
    {"corner": [-0.9, 1.6, -0.55], "edge_u": [0.84, 0, 0], "edge_v": [0, 0, 1.1],
     "material": "panel"},
    {"corner": [0.06, 1.6, -0.55], "edge_u": [0.84, 0, 0], "edge_v": [0, 0, 1.1],
     "material": "panel"}
  ]
})json";
}

Scene slot_box() { return Scene::parse_json(slot_box_json()); }

ChainScene chain_di_scene() {
    ChainScene cs;
    // The shading point sits under the seam between a bright and a dim lamp,
    // with the glossy lobe pointed at the seam: the target concentrates on
    // the bright lamp while the proposal reach covers both.
    cs.scene = Scene::parse_json(R"json({
  "camera": {"position": [0, 0.5, 3], "look_at": [0, 0.5, 0], "fov_deg": 45},
  "materials": [
    {"name": "surface", "type": "glossy", "albedo": [0.7, 0.7, 0.7], "exponent": 28},
    {"name": "lamp", "type": "lambertian", "albedo": [0, 0, 0]}
  ],
  "quads": [
    {"corner": [-0.8, 1.5, -0.5], "edge_u": [0.8, 0, 0], "edge_v": [0, 0, 1.0],
     "material": "lamp", "emission": [50, 50, 50]},
    {"corner": [0.0, 1.5, -0.5], "edge_u": [0.8, 0, 0], "edge_v": [0, 0, 1.0],
     "material": "lamp", "emission": [1, 1, 1]}
  ]
})json");
    cs.ctx.position = Vec3(0, 0, 0);
    cs.ctx.normal = Vec3(0, 1, 0);
    cs.ctx.wo = normalize(Vec3(0.02, 1.0, 0.07));
    cs.ctx.material = 0;
    cs.ctx.valid = true;
    return cs;
}

ChainScene chain_reconnection_scene(bool asymmetric) {
    ChainScene cs;
    cs.scene = Scene::parse_json(R"json({
  "camera": {"position": [0, 1, 3], "look_at": [0, 0, 0], "fov_deg": 45},
  "materials": [
    {"name": "floor", "type": "lambertian", "albedo": [0.7, 0.7, 0.7]},
    {"name": "lamp", "type": "lambertian", "albedo": [0, 0, 0]}
  ],
  "quads": [
    {"corner": [-1, 0, -1], "edge_u": [0, 0, 2], "edge_v": [2, 0, 0], "material": "floor"},
    {"corner": [0.45, 1.5, -0.05], "edge_u": [0.1, 0, 0], "edge_v": [0, 0, 0.1],
     "material": "lamp", "emission": [30, 30, 30]}
  ]
})json");
    if (asymmetric) {
        // Hover the light just past the floor's edge, close to the ground:
        // the reconnection segment's cos / r^2 factors then vary by orders of
        // magnitude across the slice, while no floor point gets shadowed (the
        // lamp never blocks a primary-hit-to-floor ray).
        Quad &lamp = cs.scene.quads[1];
        lamp.corner = Vec3(1.04, 0.1, 0.5);
        cs.scene.finalize();
    }
    // Synthetic primary hit above the floor, looking down.
    cs.ctx.position = Vec3(-0.1, 1.1, 0.1);
    cs.ctx.normal = Vec3(0, -1, 0);
    cs.ctx.wo = normalize(Vec3(0.2, -1.0, -0.3));
    cs.ctx.material = 0;
    cs.ctx.valid = true;
    cs.slice_quad = 0;

    const Quad &lamp = cs.scene.quads[1];
    cs.fixed_light = lamp.point_at(0.5, 0.5);
    cs.fixed_light_normal = lamp.normal();
    cs.fixed_light_emission = lamp.emission;
    cs.fixed_light_quad = 1;
    return cs;
}

} // namespace scene_library
} // namespace restir
