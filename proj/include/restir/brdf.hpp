// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "restir/mcmc.hpp"
#include "restir/vec.hpp"

namespace restir {

enum class MaterialType { Lambertian, Glossy };

/// Surface reflectance. Glossy surfaces use a normalized Phong lobe; its
/// sampling map is analytically invertible, which the primary-sample-space
/// mutations rely on.
struct Material {
    MaterialType type = MaterialType::Lambertian;
    Vec3 albedo{0.5, 0.5, 0.5};
    double exponent = 32; // Phong lobe exponent (glossy only)
};

inline Vec3 reflect_dir(const Vec3 &wo, const Vec3 &n) {
    return normalize(2.0 * dot(wo, n) * n - wo);
}

/// BRDF value for directions in world space; n is the shading normal, wo
/// points away from the surface toward the viewer, wi toward the light.
/// One-sided: zero below the hemisphere.
inline Vec3 brdf_eval(const Material &m, const Vec3 &n, const Vec3 &wo, const Vec3 &wi) {
    if (dot(wi, n) <= 0 || dot(wo, n) <= 0)
        return Vec3(0.0);
    if (m.type == MaterialType::Lambertian)
        return m.albedo * (1.0 / M_PI);
    double cos_alpha = dot(wi, reflect_dir(wo, n));
    if (cos_alpha <= 0)
        return Vec3(0.0);
    return m.albedo * ((m.exponent + 2.0) / (2.0 * M_PI) * std::pow(cos_alpha, m.exponent));
}

/// Solid-angle PDF of brdf_sample for the given outgoing direction.
inline double brdf_pdf(const Material &m, const Vec3 &n, const Vec3 &wo, const Vec3 &wi) {
    if (m.type == MaterialType::Lambertian) {
        double c = dot(wi, n);
        return c > 0 ? c / M_PI : 0;
    }
    double cos_alpha = dot(wi, reflect_dir(wo, n));
    if (cos_alpha <= 0)
        return 0;
    return (m.exponent + 1.0) / (2.0 * M_PI) * std::pow(cos_alpha, m.exponent);
}

/// Maps primary-sample-space coordinates (2 components) to a direction.
/// Lambertian: cosine hemisphere around n via the polar parameterization
///   wi = (sin_t cos_phi, sin_t sin_phi, cos_t), cos_t = sqrt(1-u0).
/// Glossy: Phong lobe around the reflection direction, cos_a = u0^(1/(e+1)).
/// Both maps are bijections between [0,1)^2 and their lobes, inverted exactly
/// by brdf_invert. Glossy samples may fall below the surface; callers treat
/// those as zero-target.
inline Vec3 brdf_sample(const Material &m, const Vec3 &n, const Vec3 &wo, const PssVector &u) {
    if (m.type == MaterialType::Lambertian) {
        double cos_t = std::sqrt(std::fmax(0.0, 1.0 - u[0]));
        double sin_t = std::sqrt(std::fmax(0.0, u[0]));
        double phi = 2.0 * M_PI * u[1];
        Frame f(n);
        return f.to_world({sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t});
    }
    double cos_a = std::pow(u[0], 1.0 / (m.exponent + 1.0));
    double sin_a = std::sqrt(std::fmax(0.0, 1.0 - cos_a * cos_a));
    double phi = 2.0 * M_PI * u[1];
    Frame f(reflect_dir(wo, n));
    return f.to_world({sin_a * std::cos(phi), sin_a * std::sin(phi), cos_a});
}

/// Exact inverse of brdf_sample. Defined whenever the direction lies inside
/// the sampling lobe (cosine weight or Phong cone), which holds for every
/// direction with nonzero BRDF value.
inline bool brdf_invert(const Material &m, const Vec3 &n, const Vec3 &wo, const Vec3 &wi,
                        PssVector &u_out) {
    u_out.dim = 2;
    if (m.type == MaterialType::Lambertian) {
        Frame f(n);
        Vec3 l = f.to_local(wi);
        if (l.z <= 0)
            return false;
        u_out[0] = std::fmin(1.0 - 1e-16, std::fmax(0.0, l.x * l.x + l.y * l.y));
        u_out[1] = wrap01(std::atan2(l.y, l.x) / (2.0 * M_PI));
        return true;
    }
    Frame f(reflect_dir(wo, n));
    Vec3 l = f.to_local(wi);
    if (l.z <= 0)
        return false;
    u_out[0] = std::fmin(1.0 - 1e-16, std::pow(l.z, m.exponent + 1.0));
    u_out[1] = wrap01(std::atan2(l.y, l.x) / (2.0 * M_PI));
    return true;
}

} // namespace restir
