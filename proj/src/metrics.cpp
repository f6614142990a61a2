// SPDX-License-Identifier: Apache-2.0
#include "restir/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "restir/parallel.hpp"

namespace restir {

ImageEnsemble::ImageEnsemble(std::vector<Image> images) : images_(std::move(images)) {
    if (images_.size() < 2)
        throw std::invalid_argument("image ensemble needs K >= 2 images");
    width_ = images_[0].width;
    height_ = images_[0].height;
    k_ = static_cast<int>(images_.size());
    for (const Image &img : images_) {
        if (img.width != width_ || img.height != height_)
            throw std::invalid_argument("image ensemble: mismatched dimensions");
        for (const Vec3 &p : img.pixels)
            if (!is_finite(p))
                throw std::invalid_argument("image ensemble: non-finite pixel value");
    }

    size_t n = pixel_count();
    lum_.resize(static_cast<size_t>(k_) * n);
    mean_.assign(n, 0.0);
    for (int k = 0; k < k_; ++k)
        for (size_t i = 0; i < n; ++i) {
            double l = luminance(images_[static_cast<size_t>(k)].pixels[i]);
            lum_[static_cast<size_t>(k) * n + i] = l;
            mean_[i] += l;
        }
    for (size_t i = 0; i < n; ++i)
        mean_[i] /= k_;
}

double sample_covariance(const ImageEnsemble &ens, int pixel_i, int pixel_j) {
    double mi = ens.mean_at(pixel_i), mj = ens.mean_at(pixel_j);
    double acc = 0;
    for (int k = 0; k < ens.count(); ++k)
        acc += (ens.luminance_at(k, pixel_i) - mi) * (ens.luminance_at(k, pixel_j) - mj);
    return acc / (ens.count() - 1);
}

CovarianceReport box_avg_covariance(const ImageEnsemble &ens, int radius, bool include_self,
                                    int threads) {
    if (radius < 0)
        throw std::invalid_argument("box_avg_covariance: radius must be >= 0");
    const int w = ens.width(), h = ens.height();
    CovarianceReport rep;
    rep.radius = radius;
    rep.include_self = include_self;
    rep.per_pixel.assign(ens.pixel_count(), 0.0);

    parallel_for(w * h, threads, [&](int64_t idx) {
        int x = static_cast<int>(idx) % w, y = static_cast<int>(idx) / w;
        double acc = 0;
        long count = 0;
        for (int ny = std::max(0, y - radius); ny <= std::min(h - 1, y + radius); ++ny) {
            for (int nx = std::max(0, x - radius); nx <= std::min(w - 1, x + radius); ++nx) {
                int j = ny * w + nx;
                if (!include_self && j == idx)
                    continue;
                acc += sample_covariance(ens, static_cast<int>(idx), j);
                ++count;
            }
        }
        rep.per_pixel[static_cast<size_t>(idx)] = count > 0 ? acc / count : 0.0;
    });

    double total = 0;
    for (double v : rep.per_pixel)
        total += v;
    rep.image_average = total / static_cast<double>(rep.per_pixel.size());
    return rep;
}

std::vector<int> duplicate_heatmap(const std::vector<uint64_t> &sample_ids, int width, int height,
                                   int window) {
    if (static_cast<size_t>(width) * height != sample_ids.size())
        throw std::invalid_argument("duplicate_heatmap: id map size mismatch");
    int half_lo = window / 2, half_hi = (window - 1) / 2;
    std::vector<int> counts(sample_ids.size(), 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            uint64_t id = sample_ids[static_cast<size_t>(y) * width + x];
            if (id == 0)
                continue;
            int c = 0;
            for (int ny = std::max(0, y - half_lo); ny <= std::min(height - 1, y + half_hi); ++ny)
                for (int nx = std::max(0, x - half_lo); nx <= std::min(width - 1, x + half_hi); ++nx) {
                    if (nx == x && ny == y)
                        continue;
                    if (sample_ids[static_cast<size_t>(ny) * width + nx] == id)
                        ++c;
                }
            counts[static_cast<size_t>(y) * width + x] = c;
        }
    }
    return counts;
}

double mean_duplicates(const std::vector<int> &heatmap) {
    double acc = 0;
    for (int c : heatmap)
        acc += c;
    return heatmap.empty() ? 0.0 : acc / static_cast<double>(heatmap.size());
}

double mse(const Image &img, const Image &reference) {
    if (img.width != reference.width || img.height != reference.height)
        throw std::invalid_argument("mse: image dimensions differ");
    double acc = 0;
    for (size_t i = 0; i < img.count(); ++i) {
        Vec3 d = img.pixels[i] - reference.pixels[i];
        acc += dot(d, d);
    }
    return acc / (3.0 * static_cast<double>(img.count()));
}

} // namespace restir
