// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "restir/brdf.hpp"
#include "restir/vec.hpp"

namespace restir {

struct Ray {
    Vec3 origin;
    Vec3 dir; // unit length
};

/// Parallelogram: corner + a*edge_u + b*edge_v, (a, b) in [0,1]^2.
/// The geometric normal is cross(edge_u, edge_v) normalized; surfaces are
/// one-sided, emitters radiate from the normal side only.
struct Quad {
    Vec3 corner, edge_u, edge_v;
    int material = 0;
    Vec3 emission{0, 0, 0};

    Vec3 normal() const { return normalize(cross(edge_u, edge_v)); }
    double area() const { return length(cross(edge_u, edge_v)); }
    Vec3 point_at(double a, double b) const { return corner + edge_u * a + edge_v * b; }
    bool is_emitter() const { return max_component(emission) > 0; }
};

struct Sphere {
    Vec3 center;
    double radius = 1;
    int material = 0;
};

struct Camera {
    Vec3 position{0, 0, 0};
    Vec3 look_at{0, 0, -1};
    Vec3 up{0, 1, 0};
    double fov_deg = 60;
};

struct Hit {
    double t = 0;
    Vec3 position;
    Vec3 normal;
    int material = -1;
    int quad = -1;   // index if a quad was hit
    int sphere = -1; // index if a sphere was hit
    Vec3 emission{0, 0, 0};

    bool is_emitter() const { return max_component(emission) > 0; }
};

/// Uniform-area sample over the union of all emitting quads.
struct EmitterSample {
    Vec3 position;
    Vec3 normal;
    Vec3 emission;
    int quad = -1;
    double pdf_area = 0; // 1 / total emitter area
};

class Scene {
public:
    std::vector<Material> materials;
    std::vector<Quad> quads;
    std::vector<Sphere> spheres;
    Camera camera;

    /// Validates the scene and builds emitter tables; call after filling the
    /// geometry. Throws std::runtime_error on an invalid scene.
    void finalize();

    std::optional<Hit> intersect(const Ray &ray) const;

    /// True if the open segment between a and b is blocked.
    bool occluded(const Vec3 &a, const Vec3 &b) const;

    /// Uniform-area emitter sampling, bijective in (u0, u1): u0 picks the quad
    /// by area and is rescaled to its first coordinate, u1 is the second.
    EmitterSample sample_emitter(double u0, double u1) const;

    /// Exact inverse of sample_emitter for a point on emitting quad q.
    void invert_emitter_point(int quad_index, const Vec3 &point, double &u0, double &u1) const;

    double total_emitter_area() const { return total_emitter_area_; }
    double diameter() const { return diameter_; }
    const std::vector<int> &emitter_quads() const { return emitter_quads_; }

    Ray camera_ray(int px, int py, int width, int height) const;

    static Scene load_json_file(const std::string &path);
    static Scene parse_json(const std::string &text);

private:
    std::vector<int> emitter_quads_;
    std::vector<double> emitter_cdf_; // cumulative area fractions
    double total_emitter_area_ = 0;
    double diameter_ = 1;
};

} // namespace restir
