// SPDX-License-Identifier: Apache-2.0
#include "restir/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "restir/metrics.hpp"
#include "restir/parallel.hpp"
#include "restir/testbed.hpp"

namespace restir {

namespace fs = std::filesystem;

namespace {

std::string frame_name(const char *stem, int index, const char *ext) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%04d.%s", stem, index, ext);
    return buf;
}

void write_id_map(const std::vector<uint64_t> &ids, int w, int h, const std::string &path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "'");
    out << "pixel_x,pixel_y,sample_id\n";
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            out << x << "," << y << "," << ids[static_cast<size_t>(y) * w + x] << "\n";
}

std::vector<uint64_t> read_id_map(const std::string &path, int w, int h) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    std::getline(in, line); // header
    std::vector<uint64_t> ids(static_cast<size_t>(w) * h, 0);
    int x, y;
    char c1, c2;
    uint64_t id;
    while (in >> x >> c1 >> y >> c2 >> id)
        if (x >= 0 && x < w && y >= 0 && y < h)
            ids[static_cast<size_t>(y) * w + x] = id;
    return ids;
}

/// Grayscale PPM of a scalar map, normalized to its maximum (black = 0).
void write_heatmap_ppm(const std::vector<double> &values, int w, int h, const std::string &path) {
    double mx = 0;
    for (double v : values)
        mx = std::fmax(mx, v);
    Image img(w, h);
    for (int i = 0; i < w * h; ++i) {
        double v = mx > 0 ? std::fmax(0.0, values[static_cast<size_t>(i)]) / mx : 0.0;
        img.pixels[static_cast<size_t>(i)] = Vec3(v);
    }
    write_ppm(img, path);
}

int run_render(const RunConfig &cfg) {
    Scene scene = Scene::load_json_file(cfg.scene_path);
    Renderer renderer(scene, cfg.to_render_settings());
    fs::path out(cfg.out_dir);

    std::ofstream acceptance(out / "acceptance.csv");
    acceptance << "frame,pixel_count,proposed,accepted\n";

    int total = cfg.warmup_frames + cfg.frames;
    for (int f = 0; f < total; ++f) {
        FrameOutput frame = renderer.render_frame();
        acceptance << f << "," << cfg.width * cfg.height << "," << frame.mutation_stats.proposed
                   << "," << frame.mutation_stats.accepted << "\n";
        if (f < cfg.warmup_frames)
            continue;
        int idx = f - cfg.warmup_frames;
        write_ppm(frame.image, (out / frame_name("frame", idx, "ppm")).string());
        write_pfm(frame.image, (out / frame_name("frame", idx, "pfm")).string());
        write_id_map(frame.sample_ids, cfg.width, cfg.height,
                     (out / frame_name("ids", idx, "csv")).string());
        std::cout << "frame " << f << " done\n";
    }
    return kExitOk;
}

int run_metrics(const RunConfig &cfg) {
    fs::path dir(cfg.ensemble_dir);
    std::vector<fs::path> pfms, idmaps;
    for (const auto &e : fs::directory_iterator(dir)) {
        std::string name = e.path().filename().string();
        if (name.rfind("frame_", 0) == 0 && e.path().extension() == ".pfm")
            pfms.push_back(e.path());
        if (name.rfind("ids_", 0) == 0 && e.path().extension() == ".csv")
            idmaps.push_back(e.path());
    }
    std::sort(pfms.begin(), pfms.end());
    std::sort(idmaps.begin(), idmaps.end());
    if (pfms.size() < 2)
        throw std::runtime_error("metrics: need at least 2 frame_*.pfm in '" + cfg.ensemble_dir + "'");
    if (static_cast<int>(pfms.size()) > cfg.ensemble_k)
        pfms.resize(static_cast<size_t>(cfg.ensemble_k));

    std::vector<Image> images;
    images.reserve(pfms.size());
    for (const auto &p : pfms)
        images.push_back(read_pfm(p.string()));
    int w = images[0].width, h = images[0].height;
    ImageEnsemble ens(std::move(images));

    fs::path out(cfg.out_dir);
    int threads = cfg.threads > 0 ? cfg.threads : hardware_threads();

    std::ofstream cov_csv(out / "covariance.csv");
    cov_csv << "radius,image_avg_covariance,include_self\n";
    for (int r : cfg.covariance_radii) {
        CovarianceReport rep = box_avg_covariance(ens, r, false, threads);
        cov_csv << r << "," << rep.image_average << ",0\n";
        if (r == cfg.covariance_radius)
            write_heatmap_ppm(rep.per_pixel, w, h, (out / "covariance_heatmap.ppm").string());
        CovarianceReport rep_self = box_avg_covariance(ens, r, true, threads);
        cov_csv << r << "," << rep_self.image_average << ",1\n";
    }

    if (!idmaps.empty()) {
        std::vector<uint64_t> ids = read_id_map(idmaps.back().string(), w, h);
        std::vector<int> dup = duplicate_heatmap(ids, w, h, cfg.duplicate_window);
        std::ofstream dup_csv(out / "duplicates.csv");
        dup_csv << "pixel_x,pixel_y,duplicates\n";
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                dup_csv << x << "," << y << "," << dup[static_cast<size_t>(y) * w + x] << "\n";
        std::vector<double> dupd(dup.begin(), dup.end());
        write_heatmap_ppm(dupd, w, h, (out / "duplicates_heatmap.ppm").string());
    }

    std::ofstream summary(out / "metrics.csv");
    summary << "metric,value\n";
    fs::path ref_path = dir / "reference.pfm";
    if (fs::exists(ref_path)) {
        Image ref = read_pfm(ref_path.string());
        double acc = 0;
        for (const Image &img : ens.images())
            acc += mse(img, ref);
        summary << "mean_mse," << acc / static_cast<double>(ens.count()) << "\n";
    }
    CovarianceReport rep = box_avg_covariance(ens, cfg.covariance_radius, false, threads);
    summary << "box_covariance_r" << cfg.covariance_radius << "," << rep.image_average << "\n";
    return kExitOk;
}

int run_testbed_unbiasedness(const RunConfig &cfg) {
    using namespace testbed;
    AnalyticTarget target = AnalyticTarget::defaults();
    std::ofstream csv(fs::path(cfg.out_dir) / "unbiasedness.csv");
    csv << "M,k_mutations,trials,mean,std_error,oracle,z,acceptance_rate,max_conservation_drift\n";

    bool ok = true;
    for (int k : {0, cfg.testbed_mutations}) {
        UnbiasednessConfig ucfg;
        ucfg.M = cfg.testbed_M;
        ucfg.k_mutations = k;
        ucfg.trials = cfg.trials;
        ucfg.seed = cfg.seed;
        ucfg.source = k > 0 ? Source::SkewDown : Source::Uniform;
        ucfg.proposal_scale = cfg.proposal_scale;
        ucfg.threads = cfg.threads > 0 ? cfg.threads : hardware_threads();
        UnbiasednessResult r = run_unbiasedness_trial(target, ucfg);
        csv << ucfg.M << "," << k << "," << ucfg.trials << "," << r.mean << "," << r.std_error
            << "," << r.oracle << "," << r.z << "," << r.acceptance_rate << ","
            << r.max_conservation_drift << "\n";
        std::cout << "unbiasedness M=" << ucfg.M << " k=" << k << " z=" << r.z << "\n";
        ok = ok && std::fabs(r.z) < 3.0;
    }
    return ok ? kExitOk : kExitUnbiasednessGate;
}

int run_testbed_two_pixel(const RunConfig &cfg) {
    using namespace testbed;
    TwoPixelConfig tp = TwoPixelConfig::dissimilar(cfg.testbed_M);
    tp.mutations = cfg.testbed_mutations > 0 ? cfg.testbed_mutations : 64;
    tp.trials = cfg.trials;
    tp.seed = cfg.seed;
    tp.proposal_scale = cfg.proposal_scale;
    tp.threads = cfg.threads > 0 ? cfg.threads : hardware_threads();
    TwoPixelResult r = run_two_pixel_covariance(tp);

    std::ofstream csv(fs::path(cfg.out_dir) / "two_pixel.csv");
    csv << "cov_without,se_without,cov_with,se_with,ratio\n";
    csv << r.cov_without << "," << r.se_without << "," << r.cov_with << "," << r.se_with << ","
        << r.ratio << "\n";
    std::cout << "two-pixel covariance without=" << r.cov_without << " with=" << r.cov_with
              << " ratio=" << r.ratio << "\n";
    bool ok = r.cov_without > 3.0 * r.se_without && r.ratio <= 0.7;
    return ok ? kExitOk : kExitTwoPixelGate;
}

int run_testbed_chain(const RunConfig &cfg) {
    using namespace testbed;
    AnalyticTarget target = AnalyticTarget::defaults();
    ChainConfig ccfg;
    ccfg.steps = cfg.chain_steps;
    ccfg.bins = cfg.chain_bins;
    ccfg.seed = cfg.seed;
    ccfg.proposal_scale = cfg.proposal_scale;

    ChainResult good = chain_distribution_test(target, ccfg);
    ccfg.always_accept = true;
    ChainResult control = chain_distribution_test(target, ccfg);

    std::ofstream csv(fs::path(cfg.out_dir) / "chain.csv");
    csv << "variant,tv_distance,acceptance_rate\n";
    csv << "metropolis," << good.tv_distance << "," << good.acceptance_rate << "\n";
    csv << "always_accept," << control.tv_distance << "," << control.acceptance_rate << "\n";
    std::cout << "chain tv=" << good.tv_distance << " control_tv=" << control.tv_distance << "\n";
    bool ok = good.tv_distance < 0.02 && control.tv_distance > 0.2;
    return ok ? kExitOk : kExitChainGate;
}

} // namespace

int run(const RunConfig &cfg) {
    fs::create_directories(cfg.out_dir);
    {
        std::ofstream echo(fs::path(cfg.out_dir) / "config.json");
        if (!echo)
            return kExitIoError;
        echo << cfg.to_json();
    }

    switch (cfg.mode) {
    case RunMode::RenderDi:
    case RunMode::RenderPath:
        return run_render(cfg);
    case RunMode::Metrics:
        return run_metrics(cfg);
    case RunMode::TestbedUnbiasedness:
        return run_testbed_unbiasedness(cfg);
    case RunMode::TestbedTwoPixel:
        return run_testbed_two_pixel(cfg);
    case RunMode::TestbedChain:
        return run_testbed_chain(cfg);
    }
    return kExitConfigError;
}

} // namespace restir
