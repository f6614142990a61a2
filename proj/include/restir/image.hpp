// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "restir/vec.hpp"

namespace restir {

/// Linear RGB image, row-major, origin at the top-left pixel.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<Vec3> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<size_t>(w) * h) {}

    Vec3 &at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    const Vec3 &at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    size_t count() const { return pixels.size(); }
};

/// 8-bit binary PPM (P6). Values are clamped to [0,1] and gamma-2.2 encoded.
void write_ppm(const Image &img, const std::string &path);

/// 32-bit float PFM, little-endian ("PF", scale -1.0), rows bottom-to-top.
void write_pfm(const Image &img, const std::string &path);
Image read_pfm(const std::string &path);

} // namespace restir
