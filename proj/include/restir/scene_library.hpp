// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "restir/shading.hpp"

namespace restir {
namespace scene_library {

/// Cornell-style box with glossy walls, a small partially baffled ceiling
/// light and an open front: difficult direct lighting that provokes heavy
/// sample reuse. Same content as scenes/glossy_box.json.
std::string glossy_box_json();
Scene glossy_box();

/// Hard-lighting variant: the emitter sits behind two panels that leave only
/// a narrow slot, so few candidate samples carry light. Same content as
/// scenes/slot_box.json.
std::string slot_box_json();
Scene slot_box();

/// Fixed single-slice fixtures for the Markov-chain stationarity experiments:
/// a synthetic shading point plus the scene it looks at.
struct ChainScene {
    Scene scene;
    ShadingContext ctx;
    int slice_quad = 0;    // quad the chain state lives on
    Vec3 fixed_light;      // pinned follow-on light vertex (reconnection mode)
    Vec3 fixed_light_normal;
    Vec3 fixed_light_emission;
    int fixed_light_quad = -1;
};

/// Direct-lighting chain: two coplanar emitters with strongly different
/// radiance; the chain mutates light points across both.
ChainScene chain_di_scene();

/// Reconnection chain: states are bounce vertices on a floor quad with a
/// pinned light vertex. The asymmetric variant moves the light close to the
/// floor so the transition-kernel ratio varies by orders of magnitude.
ChainScene chain_reconnection_scene(bool asymmetric);

} // namespace scene_library
} // namespace restir
