// SPDX-License-Identifier: Apache-2.0
#include "restir/pipeline.hpp"

#include "restir/combine.hpp"
#include "restir/parallel.hpp"

namespace restir {

namespace {

// Random-stream identifiers per pixel and frame.
enum Stream : uint64_t {
    kStreamInitial = 1,
    kStreamTemporal = 2,
    kStreamMutate = 3,
    kStreamSpatialBase = 16, // + round index
};

uint64_t sample_identity(uint64_t seed, int frame, int pixel, uint64_t salt) {
    uint64_t h = splitmix64(seed ^ 0x5ca1ab1eULL);
    h = hash_combine(h, static_cast<uint64_t>(frame));
    h = hash_combine(h, static_cast<uint64_t>(pixel));
    h = hash_combine(h, salt);
    return h | 1ull; // 0 is reserved for "no sample"
}

/// Temporal context: static camera, identity pixel correspondence, so both
/// frames share the shading context and the shift is the identity.
struct TemporalCtx {
    const Renderer *renderer = nullptr;
    const Scene *scene;
    const ShadingContext *ctx;
    RenderMode mode;

    double target_cur(const PathSample &s) const {
        return mode == RenderMode::DirectLighting ? p_hat_di(*scene, *ctx, s)
                                                  : p_hat_path(*scene, *ctx, s);
    }
    double target_prev(const PathSample &s) const { return target_cur(s); }
    ShiftResult<PathSample> shift_to_cur(const PathSample &s) const {
        return ShiftResult<PathSample>::identity(s);
    }
    ShiftResult<PathSample> shift_to_prev(const PathSample &s) const {
        return ShiftResult<PathSample>::identity(s);
    }
};

struct SpatialCtx {
    const Scene *scene;
    RenderMode mode;
    const ShadingContext *center;
    std::vector<const ShadingContext *> nbr_ctx;
    ShiftLimits limits;

    double eval(const ShadingContext &c, const PathSample &s) const {
        return mode == RenderMode::DirectLighting ? p_hat_di(*scene, c, s)
                                                  : p_hat_path(*scene, c, s);
    }
    double target_canonical(const PathSample &s) const { return eval(*center, s); }
    double target_neighbor(int k, const PathSample &s) const {
        return eval(*nbr_ctx[static_cast<size_t>(k)], s);
    }
    ShiftResult<PathSample> shift_to_canonical(int k, const PathSample &s) const {
        ShiftMode m = mode == RenderMode::DirectLighting ? ShiftMode::Identity : ShiftMode::Reconnection;
        return shift_map(*scene, s, *nbr_ctx[static_cast<size_t>(k)], *center, m, limits);
    }
    ShiftResult<PathSample> shift_to_neighbor(int k, const PathSample &s) const {
        ShiftMode m = mode == RenderMode::DirectLighting ? ShiftMode::Identity : ShiftMode::Reconnection;
        return shift_map(*scene, s, *center, *nbr_ctx[static_cast<size_t>(k)], m, limits);
    }
};

} // namespace

Renderer::Renderer(const Scene &scene, const RenderSettings &settings)
    : scene_(scene), settings_(settings) {
    int n = settings_.width * settings_.height;
    contexts_.resize(static_cast<size_t>(n));
    direct_emission_.assign(static_cast<size_t>(n), Vec3(0.0));
    prev_.assign(static_cast<size_t>(n), Reservoir<PathSample>{});

    parallel_for(n, settings_.threads, [&](int64_t i) {
        int x = static_cast<int>(i) % settings_.width;
        int y = static_cast<int>(i) / settings_.width;
        Ray ray = scene_.camera_ray(x, y, settings_.width, settings_.height);
        auto hit = scene_.intersect(ray);
        if (!hit)
            return;
        if (hit->is_emitter()) {
            direct_emission_[static_cast<size_t>(i)] = hit->emission;
            return;
        }
        contexts_[static_cast<size_t>(i)] = make_shading_context(scene_, *hit, ray);
    });
}

void Renderer::reset() {
    prev_.assign(prev_.size(), Reservoir<PathSample>{});
    frame_ = 0;
}

double Renderer::target(const ShadingContext &ctx, const PathSample &s) const {
    return settings_.mode == RenderMode::DirectLighting ? p_hat_di(scene_, ctx, s)
                                                        : p_hat_path(scene_, ctx, s);
}

Vec3 Renderer::integrand(const ShadingContext &ctx, const PathSample &s) const {
    return settings_.mode == RenderMode::DirectLighting ? f_di(scene_, ctx, s)
                                                        : f_path(scene_, ctx, s);
}

Reservoir<PathSample> Renderer::initial_candidates(int pixel, int frame, uint64_t seed_base,
                                                   int m) const {
    Reservoir<PathSample> r;
    const ShadingContext &ctx = contexts_[static_cast<size_t>(pixel)];
    if (!ctx.valid)
        return r;

    Pcg32 rng = make_stream(seed_base, static_cast<uint64_t>(frame),
                            static_cast<uint64_t>(pixel), kStreamInitial);
    double inv_m = 1.0 / m;

    for (int j = 0; j < m; ++j) {
        PathSample s;
        double q;
        if (settings_.mode == RenderMode::DirectLighting) {
            double u0 = rng.next_double(), u1 = rng.next_double();
            s = sample_light_candidate(scene_, u0, u1);
            q = source_pdf_di(scene_);
        } else {
            s = trace_one_bounce(scene_, ctx, rng);
            q = source_pdf_path(scene_, ctx, s);
        }
        double p = q > 0 ? target(ctx, s) : 0;
        double w = p > 0 ? inv_m * p / q : 0;
        s.id = sample_identity(seed_base, frame, pixel, static_cast<uint64_t>(j));
        r.update(s, w, rng);
    }
    r.finalize(r.empty() ? 0 : target(ctx, *r.sample));
    return r;
}

FrameOutput Renderer::render_frame() {
    const int w = settings_.width, h = settings_.height;
    const int n = w * h;
    const int frame = frame_;
    const uint64_t seed = settings_.seed;

    FrameOutput out;
    out.image = Image(w, h);
    out.sample_ids.assign(static_cast<size_t>(n), 0);

    // Initial resampling + temporal combination + mutation, all per pixel.
    Grid cur(static_cast<size_t>(n));
    std::vector<MutationStats> stats(static_cast<size_t>(n));

    parallel_for(n, settings_.threads, [&](int64_t i) {
        const ShadingContext &ctx = contexts_[static_cast<size_t>(i)];
        if (!ctx.valid)
            return;

        Reservoir<PathSample> r =
            initial_candidates(static_cast<int>(i), frame, seed, settings_.initial_candidates);

        TemporalCtx tctx{nullptr, &scene_, &ctx, settings_.mode};
        Pcg32 trng = make_stream(seed, static_cast<uint64_t>(frame),
                                 static_cast<uint64_t>(i), kStreamTemporal);
        r = combine_temporal(r, prev_[static_cast<size_t>(i)], settings_.m_cap, tctx, trng);

        if (settings_.mutation_iters > 0 && !r.empty() && r.W > 0) {
            double p_cur = target(ctx, *r.sample);
            if (p_cur > 0) {
                Pcg32 mrng = make_stream(seed, static_cast<uint64_t>(frame),
                                         static_cast<uint64_t>(i), kStreamMutate);
                MutationConfig mcfg{settings_.mutation_iters, settings_.s1, settings_.s2};
                auto propose = [&](const PathSample &x, Pcg32 &rng) {
                    if (settings_.strategy == MutationStrategy::DiDirection)
                        return di_direction_mutation(scene_, ctx, x, mcfg, rng);
                    return reconnection_mutation(scene_, ctx, x, mcfg, rng, settings_.limits);
                };
                MutationStats st = mutate_sample(r, p_cur, propose, mcfg.iters, mrng);
                stats[static_cast<size_t>(i)] = st;
                if (st.accepted > 0 && r.sample)
                    r.sample->id = sample_identity(seed, frame, static_cast<int>(i), 0xabcdefULL);
            }
        }
        cur[static_cast<size_t>(i)] = std::move(r);
    });

    for (const MutationStats &s : stats)
        out.mutation_stats += s;

    // Spatial rounds: gather from the previous round's grid into a fresh one.
    for (int round = 0; round < settings_.spatial_rounds; ++round) {
        Grid next(static_cast<size_t>(n));
        parallel_for(n, settings_.threads, [&](int64_t i) {
            const ShadingContext &ctx = contexts_[static_cast<size_t>(i)];
            if (!ctx.valid)
                return;
            Pcg32 rng = make_stream(seed, static_cast<uint64_t>(frame),
                                    static_cast<uint64_t>(i),
                                    kStreamSpatialBase + static_cast<uint64_t>(round));
            int px = static_cast<int>(i) % w, py = static_cast<int>(i) / w;

            SpatialCtx sctx{&scene_, settings_.mode, &ctx, {}, settings_.limits};
            std::vector<const Reservoir<PathSample> *> nbrs;
            for (int k = 0; k < settings_.spatial_k; ++k) {
                double rr = settings_.spatial_radius * std::sqrt(rng.next_double());
                double th = 2.0 * M_PI * rng.next_double();
                int dx = static_cast<int>(std::lround(rr * std::cos(th)));
                int dy = static_cast<int>(std::lround(rr * std::sin(th)));
                int nx = px + dx, ny = py + dy;
                if ((dx == 0 && dy == 0) || nx < 0 || nx >= w || ny < 0 || ny >= h)
                    continue;
                int ni = ny * w + nx;
                if (!contexts_[static_cast<size_t>(ni)].valid)
                    continue;
                nbrs.push_back(&cur[static_cast<size_t>(ni)]);
                sctx.nbr_ctx.push_back(&contexts_[static_cast<size_t>(ni)]);
            }
            next[static_cast<size_t>(i)] =
                combine_spatial<PathSample>(cur[static_cast<size_t>(i)],
                                            std::span<const Reservoir<PathSample> *const>(nbrs),
                                            sctx, rng);
        });
        cur = std::move(next);
    }

    // Shading.
    parallel_for(n, settings_.threads, [&](int64_t i) {
        const ShadingContext &ctx = contexts_[static_cast<size_t>(i)];
        Vec3 c = direct_emission_[static_cast<size_t>(i)];
        const Reservoir<PathSample> &r = cur[static_cast<size_t>(i)];
        if (ctx.valid && !r.empty() && r.W > 0) {
            Vec3 shade = integrand(ctx, *r.sample) * r.W;
            if (is_finite(shade))
                c += shade;
            out.sample_ids[static_cast<size_t>(i)] = r.sample->id;
        }
        out.image.pixels[static_cast<size_t>(i)] = c;
    });

    prev_ = std::move(cur);
    ++frame_;
    return out;
}

Image Renderer::render_reference(int candidates_per_pixel, int independent_runs,
                                 uint64_t seed) const {
    const int n = settings_.width * settings_.height;
    Image ref(settings_.width, settings_.height);

    parallel_for(n, settings_.threads, [&](int64_t i) {
        const ShadingContext &ctx = contexts_[static_cast<size_t>(i)];
        Vec3 acc(0.0);
        if (ctx.valid) {
            for (int run = 0; run < independent_runs; ++run) {
                Reservoir<PathSample> r =
                    initial_candidates(static_cast<int>(i), run, hash_combine(seed, 0x9e37u),
                                       candidates_per_pixel);
                if (!r.empty() && r.W > 0) {
                    Vec3 shade = integrand(ctx, *r.sample) * r.W;
                    if (is_finite(shade))
                        acc += shade;
                }
            }
        }
        ref.pixels[static_cast<size_t>(i)] =
            direct_emission_[static_cast<size_t>(i)] + acc / static_cast<double>(independent_runs);
    });
    return ref;
}

} // namespace restir
