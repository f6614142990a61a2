// SPDX-License-Identifier: Apache-2.0
// Compares the serial reference paths against the OpenMP kernels: frame
// rendering, box covariance, and testbed trials. Reports wall time and
// whether the outputs match bitwise.
#include <chrono>
#include <cstdio>
#include <string>

#include "restir/metrics.hpp"
#include "restir/parallel.hpp"
#include "restir/pipeline.hpp"
#include "restir/scene_library.hpp"
#include "restir/testbed.hpp"

using namespace restir;

namespace {

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

template <typename F>
double time_ms(F &&fn) {
    double t0 = now_ms();
    fn();
    return now_ms() - t0;
}

bool images_equal(const Image &a, const Image &b) {
    if (a.width != b.width || a.height != b.height)
        return false;
    for (size_t i = 0; i < a.count(); ++i)
        if (!(a.pixels[i] == b.pixels[i]))
            return false;
    return true;
}

} // namespace

int main(int argc, char **argv) {
    int threads = argc > 1 ? std::stoi(argv[1]) : hardware_threads();
    std::printf("threads: serial=1 parallel=%d\n", threads);

    Scene scene = scene_library::glossy_box();

    RenderSettings settings;
    settings.width = 64;
    settings.height = 64;
    settings.mutation_iters = 1;
    settings.seed = 7;

    settings.threads = 1;
    Renderer serial(scene, settings);
    settings.threads = threads;
    Renderer parallel(scene, settings);

    FrameOutput f_serial, f_parallel;
    double t_serial = time_ms([&] { f_serial = serial.render_frame(); });
    double t_parallel = time_ms([&] { f_parallel = parallel.render_frame(); });
    std::printf("render_frame 64x64      serial %8.1f ms   omp %8.1f ms   speedup %.2fx   match=%s\n",
                t_serial, t_parallel, t_serial / t_parallel,
                images_equal(f_serial.image, f_parallel.image) ? "yes" : "NO");

    // Box covariance over a small synthetic ensemble.
    {
        std::vector<Image> imgs;
        Pcg32 rng(123);
        for (int k = 0; k < 50; ++k) {
            Image img(64, 64);
            for (auto &p : img.pixels)
                p = Vec3(rng.next_double());
            imgs.push_back(img);
        }
        ImageEnsemble ens(std::move(imgs));
        CovarianceReport r1, r2;
        double c_serial = time_ms([&] { r1 = box_avg_covariance(ens, 8, false, 1); });
        double c_parallel = time_ms([&] { r2 = box_avg_covariance(ens, 8, false, threads); });
        std::printf("box_covariance r=8      serial %8.1f ms   omp %8.1f ms   speedup %.2fx   match=%s\n",
                    c_serial, c_parallel, c_serial / c_parallel,
                    r1.image_average == r2.image_average ? "yes" : "NO");
    }

    // Testbed trials.
    {
        using namespace testbed;
        AnalyticTarget target = AnalyticTarget::defaults();
        UnbiasednessConfig cfg;
        cfg.M = 8;
        cfg.k_mutations = 4;
        cfg.trials = 200000;
        cfg.seed = 5;
        UnbiasednessResult u1, u2;
        cfg.threads = 1;
        double u_serial = time_ms([&] { u1 = run_unbiasedness_trial(target, cfg); });
        cfg.threads = threads;
        double u_parallel = time_ms([&] { u2 = run_unbiasedness_trial(target, cfg); });
        std::printf("unbiasedness 2e5 trials serial %8.1f ms   omp %8.1f ms   speedup %.2fx   match=%s\n",
                    u_serial, u_parallel, u_serial / u_parallel, u1.mean == u2.mean ? "yes" : "NO");
    }
    return 0;
}
