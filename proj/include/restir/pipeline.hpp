// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "restir/image.hpp"
#include "restir/mutations.hpp"
#include "restir/reservoir.hpp"
#include "restir/shift.hpp"

namespace restir {

enum class RenderMode { DirectLighting, OneBounce };
enum class MutationStrategy { DiDirection, ReconnectionVertex };

struct RenderSettings {
    RenderMode mode = RenderMode::DirectLighting;
    int width = 64;
    int height = 64;
    int initial_candidates = 32; // M
    double m_cap = 50;
    int mutation_iters = 1;
    MutationStrategy strategy = MutationStrategy::DiDirection;
    double s1 = 1.0 / 1024.0;
    double s2 = 1.0 / 64.0;
    int spatial_k = 5;
    double spatial_radius = 10; // pixels
    int spatial_rounds = 1;
    uint64_t seed = 0;
    int threads = 1;
    ShiftLimits limits;
};

struct FrameOutput {
    Image image;                     // linear RGB
    std::vector<uint64_t> sample_ids; // post-spatial reservoir identities, 0 = none
    MutationStats mutation_stats;
};

/// Per-frame spatiotemporal resampling over a pixel grid: initial candidates,
/// temporal combination against the previous frame (confidence capped),
/// per-pixel Metropolis-Hastings mutation, spatial merging rounds, shading.
/// Stages run as image-wide barriers; every pixel derives its own random
/// streams from (seed, frame, pixel, stage), so results are identical for any
/// thread count.
class Renderer {
public:
    Renderer(const Scene &scene, const RenderSettings &settings);

    FrameOutput render_frame();

    /// Drops temporal history and rewinds the frame counter.
    void reset();

    int frame_index() const { return frame_; }
    const std::vector<ShadingContext> &contexts() const { return contexts_; }

    /// Post-spatial reservoirs of the last rendered frame (the stored
    /// temporal history).
    const std::vector<Reservoir<PathSample>> &history() const { return prev_; }

    /// Independent per-pixel RIS estimate with a large candidate pool and no
    /// reuse, averaged over `independent_runs` runs; serves as the reference
    /// image for error metrics.
    Image render_reference(int candidates_per_pixel, int independent_runs, uint64_t seed) const;

private:
    using Grid = std::vector<Reservoir<PathSample>>;

    double target(const ShadingContext &ctx, const PathSample &s) const;
    Vec3 integrand(const ShadingContext &ctx, const PathSample &s) const;
    Reservoir<PathSample> initial_candidates(int pixel, int frame, uint64_t seed_base, int m) const;

    const Scene &scene_;
    RenderSettings settings_;
    std::vector<ShadingContext> contexts_;
    std::vector<Vec3> direct_emission_; // primary-hit emitters / background
    Grid prev_;
    int frame_ = 0;
};

} // namespace restir
