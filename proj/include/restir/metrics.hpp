// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "restir/image.hpp"

namespace restir {

/// K same-size images plus their per-pixel mean, reduced to Rec. 709
/// luminance for scalar covariance estimates.
class ImageEnsemble {
public:
    explicit ImageEnsemble(std::vector<Image> images);

    int width() const { return width_; }
    int height() const { return height_; }
    int count() const { return k_; }

    double luminance_at(int k, int pixel) const {
        return lum_[static_cast<size_t>(k) * pixel_count() + static_cast<size_t>(pixel)];
    }
    double mean_at(int pixel) const { return mean_[static_cast<size_t>(pixel)]; }
    size_t pixel_count() const { return static_cast<size_t>(width_) * height_; }

    const std::vector<Image> &images() const { return images_; }

private:
    std::vector<Image> images_;
    std::vector<double> lum_;  // k-major luminance planes
    std::vector<double> mean_; // per-pixel luminance mean
    int width_ = 0, height_ = 0, k_ = 0;
};

/// Unbiased sample covariance between two pixels' luminances:
/// c_ij = 1/(K-1) sum_k (I_ki - mean_i)(I_kj - mean_j).
double sample_covariance(const ImageEnsemble &ens, int pixel_i, int pixel_j);

struct CovarianceReport {
    int radius = 0;
    bool include_self = false;
    std::vector<double> per_pixel; // box-averaged covariance map
    double image_average = 0;
};

/// For each pixel, the mean covariance with every pixel of its L-inf box of
/// the given radius (boxes clipped at the image border), then the image-wide
/// mean. include_self adds the variance diagonal; the default leaves it out
/// so the number reads cross-pixel correlation.
CovarianceReport box_avg_covariance(const ImageEnsemble &ens, int radius,
                                    bool include_self = false, int threads = 1);

/// Per pixel, how many other pixels inside the window x window neighborhood
/// hold an identical sample id (id 0 = no sample, never counted).
std::vector<int> duplicate_heatmap(const std::vector<uint64_t> &sample_ids, int width, int height,
                                   int window = 20);

double mean_duplicates(const std::vector<int> &heatmap);

/// Mean squared error over pixels and channels. Throws on size mismatch.
double mse(const Image &img, const Image &reference);

} // namespace restir
