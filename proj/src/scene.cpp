// SPDX-License-Identifier: Apache-2.0
#include "restir/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace restir {

namespace {

constexpr double kRayEps = 1e-9;

bool intersect_quad(const Quad &q, const Ray &ray, double t_max, double &t_out,
                    double &a_out, double &b_out) {
    Vec3 n = cross(q.edge_u, q.edge_v);
    double denom = dot(n, ray.dir);
    if (std::fabs(denom) < 1e-14)
        return false; // parallel to the plane
    double t = dot(n, q.corner - ray.origin) / denom;
    if (t <= kRayEps || t >= t_max)
        return false;
    Vec3 p = ray.origin + ray.dir * t - q.corner;
    // Dual-basis planar coordinates.
    double uu = dot(q.edge_u, q.edge_u), vv = dot(q.edge_v, q.edge_v), uv = dot(q.edge_u, q.edge_v);
    double det = uu * vv - uv * uv;
    if (det <= 0)
        return false;
    double pu = dot(p, q.edge_u), pv = dot(p, q.edge_v);
    double a = (pu * vv - pv * uv) / det;
    double b = (pv * uu - pu * uv) / det;
    if (a < 0 || a > 1 || b < 0 || b > 1)
        return false;
    t_out = t;
    a_out = a;
    b_out = b;
    return true;
}

bool intersect_sphere(const Sphere &s, const Ray &ray, double t_max, double &t_out) {
    Vec3 oc = ray.origin - s.center;
    double b = dot(oc, ray.dir);
    double c = dot(oc, oc) - s.radius * s.radius;
    double disc = b * b - c;
    if (disc < 0)
        return false;
    double sq = std::sqrt(disc);
    double t = -b - sq;
    if (t <= kRayEps)
        t = -b + sq;
    if (t <= kRayEps || t >= t_max)
        return false;
    t_out = t;
    return true;
}

Vec3 parse_vec3(const nlohmann::json &j, const std::string &what) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error("scene: " + what + " must be an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

void Scene::finalize() {
    emitter_quads_.clear();
    emitter_cdf_.clear();
    total_emitter_area_ = 0;

    Vec3 lo(1e30), hi(-1e30);
    auto extend = [&](const Vec3 &p) {
        lo = {std::fmin(lo.x, p.x), std::fmin(lo.y, p.y), std::fmin(lo.z, p.z)};
        hi = {std::fmax(hi.x, p.x), std::fmax(hi.y, p.y), std::fmax(hi.z, p.z)};
    };

    for (size_t i = 0; i < quads.size(); ++i) {
        const Quad &q = quads[i];
        if (!is_finite(q.corner) || !is_finite(q.edge_u) || !is_finite(q.edge_v))
            throw std::runtime_error("scene: non-finite quad geometry");
        if (q.material < 0 || q.material >= static_cast<int>(materials.size()))
            throw std::runtime_error("scene: quad references unknown material");
        extend(q.corner);
        extend(q.corner + q.edge_u);
        extend(q.corner + q.edge_v);
        extend(q.corner + q.edge_u + q.edge_v);
        if (q.is_emitter()) {
            if (q.area() <= 0)
                throw std::runtime_error("scene: emitter with zero area");
            emitter_quads_.push_back(static_cast<int>(i));
            total_emitter_area_ += q.area();
        }
    }
    for (const Sphere &s : spheres) {
        if (!is_finite(s.center) || !std::isfinite(s.radius) || s.radius <= 0)
            throw std::runtime_error("scene: invalid sphere");
        if (s.material < 0 || s.material >= static_cast<int>(materials.size()))
            throw std::runtime_error("scene: sphere references unknown material");
        extend(s.center + Vec3(s.radius));
        extend(s.center - Vec3(s.radius));
    }
    if (emitter_quads_.empty())
        throw std::runtime_error("scene: at least one emitting quad is required");

    double acc = 0;
    for (int qi : emitter_quads_) {
        acc += quads[static_cast<size_t>(qi)].area();
        emitter_cdf_.push_back(acc / total_emitter_area_);
    }
    emitter_cdf_.back() = 1.0;
    diameter_ = length(hi - lo);
    if (!(diameter_ > 0))
        throw std::runtime_error("scene: degenerate bounds");
}

std::optional<Hit> Scene::intersect(const Ray &ray) const {
    double best_t = 1e30;
    Hit hit;
    bool found = false;

    for (size_t i = 0; i < quads.size(); ++i) {
        double t, a, b;
        if (intersect_quad(quads[i], ray, best_t, t, a, b)) {
            best_t = t;
            const Quad &q = quads[i];
            hit.t = t;
            hit.position = q.point_at(a, b);
            hit.normal = q.normal();
            hit.material = q.material;
            hit.quad = static_cast<int>(i);
            hit.sphere = -1;
            hit.emission = q.emission;
            found = true;
        }
    }
    for (size_t i = 0; i < spheres.size(); ++i) {
        double t;
        if (intersect_sphere(spheres[i], ray, best_t, t)) {
            best_t = t;
            const Sphere &s = spheres[i];
            hit.t = t;
            hit.position = ray.origin + ray.dir * t;
            hit.normal = normalize(hit.position - s.center);
            hit.material = s.material;
            hit.quad = -1;
            hit.sphere = static_cast<int>(i);
            hit.emission = Vec3(0.0);
            found = true;
        }
    }
    return found ? std::optional<Hit>(hit) : std::nullopt;
}

bool Scene::occluded(const Vec3 &a, const Vec3 &b) const {
    Vec3 d = b - a;
    double dist = length(d);
    if (dist <= 0)
        return false;
    Ray ray{a, d / dist};
    double eps = 1e-6 * diameter_;
    double t_max = dist - eps;
    for (const Quad &q : quads) {
        double t, u, v;
        if (intersect_quad(q, ray, t_max, t, u, v) && t > eps)
            return true;
    }
    for (const Sphere &s : spheres) {
        double t;
        if (intersect_sphere(s, ray, t_max, t) && t > eps)
            return true;
    }
    return false;
}

EmitterSample Scene::sample_emitter(double u0, double u1) const {
    // Find the quad whose CDF span contains u0, then rescale u0 within it.
    size_t k = 0;
    while (k + 1 < emitter_cdf_.size() && u0 >= emitter_cdf_[k])
        ++k;
    double c_lo = k == 0 ? 0.0 : emitter_cdf_[k - 1];
    double c_hi = emitter_cdf_[k];
    double a = (u0 - c_lo) / (c_hi - c_lo);
    a = std::fmin(std::fmax(a, 0.0), 1.0 - 1e-16);

    const Quad &q = quads[static_cast<size_t>(emitter_quads_[k])];
    EmitterSample s;
    s.position = q.point_at(a, u1);
    s.normal = q.normal();
    s.emission = q.emission;
    s.quad = emitter_quads_[k];
    s.pdf_area = 1.0 / total_emitter_area_;
    return s;
}

void Scene::invert_emitter_point(int quad_index, const Vec3 &point, double &u0, double &u1) const {
    size_t k = 0;
    while (k < emitter_quads_.size() && emitter_quads_[k] != quad_index)
        ++k;
    if (k == emitter_quads_.size())
        throw std::runtime_error("invert_emitter_point: quad is not an emitter");
    const Quad &q = quads[static_cast<size_t>(quad_index)];
    Vec3 p = point - q.corner;
    double uu = dot(q.edge_u, q.edge_u), vv = dot(q.edge_v, q.edge_v), uv = dot(q.edge_u, q.edge_v);
    double det = uu * vv - uv * uv;
    double pu = dot(p, q.edge_u), pv = dot(p, q.edge_v);
    double a = (pu * vv - pv * uv) / det;
    double b = (pv * uu - pu * uv) / det;
    double c_lo = k == 0 ? 0.0 : emitter_cdf_[k - 1];
    double c_hi = emitter_cdf_[k];
    u0 = std::fmin(std::fmax(c_lo + a * (c_hi - c_lo), 0.0), 1.0 - 1e-16);
    u1 = std::fmin(std::fmax(b, 0.0), 1.0 - 1e-16);
}

Ray Scene::camera_ray(int px, int py, int width, int height) const {
    Vec3 forward = normalize(camera.look_at - camera.position);
    Vec3 right = normalize(cross(forward, camera.up));
    Vec3 up = cross(right, forward);
    double tan_half = std::tan(0.5 * camera.fov_deg * M_PI / 180.0);
    double aspect = static_cast<double>(width) / height;
    // Pixel centers; primary visibility is deterministic so per-pixel
    // integrands are fixed across frames.
    double sx = (2.0 * (px + 0.5) / width - 1.0) * tan_half * aspect;
    double sy = (1.0 - 2.0 * (py + 0.5) / height) * tan_half;
    return {camera.position, normalize(forward + right * sx + up * sy)};
}

Scene Scene::parse_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Scene scene;

    std::vector<std::string> names;
    for (const auto &jm : j.value("materials", nlohmann::json::array())) {
        Material m;
        std::string type = jm.value("type", "lambertian");
        if (type == "lambertian") {
            m.type = MaterialType::Lambertian;
        } else if (type == "glossy") {
            m.type = MaterialType::Glossy;
            m.exponent = jm.value("exponent", 32.0);
            if (!(m.exponent > 0) || !std::isfinite(m.exponent))
                throw std::runtime_error("scene: glossy exponent must be positive");
        } else {
            throw std::runtime_error("scene: unknown material type '" + type + "'");
        }
        if (jm.contains("albedo"))
            m.albedo = parse_vec3(jm["albedo"], "albedo");
        names.push_back(jm.value("name", "material_" + std::to_string(names.size())));
        scene.materials.push_back(m);
    }
    if (scene.materials.empty()) {
        scene.materials.push_back(Material{});
        names.push_back("default");
    }

    auto material_index = [&](const nlohmann::json &jp) -> int {
        if (!jp.contains("material"))
            return 0;
        std::string want = jp["material"].get<std::string>();
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == want)
                return static_cast<int>(i);
        throw std::runtime_error("scene: unknown material '" + want + "'");
    };

    for (const auto &jq : j.value("quads", nlohmann::json::array())) {
        Quad q;
        q.corner = parse_vec3(jq.at("corner"), "quad corner");
        q.edge_u = parse_vec3(jq.at("edge_u"), "quad edge_u");
        q.edge_v = parse_vec3(jq.at("edge_v"), "quad edge_v");
        q.material = material_index(jq);
        if (jq.contains("emission"))
            q.emission = parse_vec3(jq["emission"], "quad emission");
        scene.quads.push_back(q);
    }
    for (const auto &js : j.value("spheres", nlohmann::json::array())) {
        Sphere s;
        s.center = parse_vec3(js.at("center"), "sphere center");
        s.radius = js.at("radius").get<double>();
        s.material = material_index(js);
        scene.spheres.push_back(s);
    }

    if (j.contains("camera")) {
        const auto &jc = j["camera"];
        scene.camera.position = parse_vec3(jc.at("position"), "camera position");
        scene.camera.look_at = parse_vec3(jc.at("look_at"), "camera look_at");
        if (jc.contains("up"))
            scene.camera.up = parse_vec3(jc["up"], "camera up");
        scene.camera.fov_deg = jc.value("fov_deg", 60.0);
    }

    scene.finalize();
    return scene;
}

Scene Scene::load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("scene: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

} // namespace restir
