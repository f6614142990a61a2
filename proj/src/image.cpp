// SPDX-License-Identifier: Apache-2.0
#include "restir/image.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace restir {

namespace {

uint8_t encode_gamma(double v) {
    v = std::fmin(std::fmax(v, 0.0), 1.0);
    double g = std::pow(v, 1.0 / 2.2);
    return static_cast<uint8_t>(std::lround(g * 255.0));
}

} // namespace

void write_ppm(const Image &img, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    std::vector<uint8_t> row(static_cast<size_t>(img.width) * 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Vec3 &c = img.at(x, y);
            row[static_cast<size_t>(x) * 3 + 0] = encode_gamma(c.x);
            row[static_cast<size_t>(x) * 3 + 1] = encode_gamma(c.y);
            row[static_cast<size_t>(x) * 3 + 2] = encode_gamma(c.z);
        }
        out.write(reinterpret_cast<const char *>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out)
        throw std::runtime_error("error writing '" + path + "'");
}

void write_pfm(const Image &img, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "PF\n" << img.width << " " << img.height << "\n-1.0\n";
    std::vector<float> row(static_cast<size_t>(img.width) * 3);
    // PFM stores rows bottom-to-top.
    for (int y = img.height - 1; y >= 0; --y) {
        for (int x = 0; x < img.width; ++x) {
            const Vec3 &c = img.at(x, y);
            row[static_cast<size_t>(x) * 3 + 0] = static_cast<float>(c.x);
            row[static_cast<size_t>(x) * 3 + 1] = static_cast<float>(c.y);
            row[static_cast<size_t>(x) * 3 + 2] = static_cast<float>(c.z);
        }
        out.write(reinterpret_cast<const char *>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out)
        throw std::runtime_error("error writing '" + path + "'");
}

Image read_pfm(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::string magic;
    int w = 0, h = 0;
    double scale = 0;
    in >> magic >> w >> h >> scale;
    if (magic != "PF" || w <= 0 || h <= 0)
        throw std::runtime_error("'" + path + "' is not a color PFM file");
    if (scale >= 0)
        throw std::runtime_error("'" + path + "': big-endian PFM is not supported");
    in.get(); // single whitespace after the header

    Image img(w, h);
    std::vector<float> row(static_cast<size_t>(w) * 3);
    for (int y = h - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char *>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!in)
            throw std::runtime_error("'" + path + "': truncated PFM data");
        for (int x = 0; x < w; ++x)
            img.at(x, y) = Vec3(row[static_cast<size_t>(x) * 3 + 0],
                                row[static_cast<size_t>(x) * 3 + 1],
                                row[static_cast<size_t>(x) * 3 + 2]);
    }
    return img;
}

} // namespace restir
