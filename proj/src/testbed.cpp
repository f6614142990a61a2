// SPDX-License-Identifier: Apache-2.0
#include "restir/testbed.hpp"

#include <cmath>
#include <stdexcept>

#include "restir/mcmc.hpp"
#include "restir/parallel.hpp"
#include "restir/reservoir.hpp"
#include "restir/rng.hpp"

namespace restir {
namespace testbed {

namespace {

double simpson(const Fn1D &g, int n) {
    // n intervals (even), n+1 nodes.
    double h = 1.0 / n;
    double acc = g(0.0) + g(1.0);
    for (int i = 1; i < n; ++i)
        acc += g(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double gauss(double x, double mu, double sigma) {
    double d = (x - mu) / sigma;
    return std::exp(-0.5 * d * d);
}

/// Wrap-around Gaussian proposal in [0,1): symmetric, fixed draw count.
double propose_1d(double x, double scale, Pcg32 &rng) {
    double g0, g1;
    gaussian_pair(rng, g0, g1);
    (void)g1;
    return wrap01(x + scale * g0);
}

struct MeanAcc {
    double sum = 0, sum_sq = 0;
    double max_drift = 0;
    long long accepted = 0, proposed = 0;

    MeanAcc &operator+=(const MeanAcc &o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        max_drift = std::fmax(max_drift, o.max_drift);
        accepted += o.accepted;
        proposed += o.proposed;
        return *this;
    }
};

} // namespace

double quad_oracle(const Fn1D &g, int n) {
    if (n < 2)
        throw std::invalid_argument("quad_oracle: need at least 2 intervals");
    if (n % 2)
        ++n;
    double prev = simpson(g, n);
    for (int m = 2 * n; m <= (1 << 20); m *= 2) {
        double cur = simpson(g, m);
        double denom = std::fmax(std::fabs(cur), 1e-300);
        if (std::fabs(cur - prev) / denom < 1e-10)
            return cur;
        prev = cur;
    }
    throw std::runtime_error("quad_oracle: no convergence after 2^20 intervals");
}

double gamma_q(double a, double x) {
    // Regularized upper incomplete gamma via series / continued fraction
    // (Numerical Recipes style).
    if (x < 0 || a <= 0)
        throw std::invalid_argument("gamma_q: invalid arguments");
    if (x == 0)
        return 1.0;
    double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // Lower series, then complement.
        double ap = a, del = 1.0 / a, sum = del;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15)
                break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - gln);
        return 1.0 - p;
    }
    // Continued fraction (modified Lentz).
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300)
            d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300)
            c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15)
            break;
    }
    return std::exp(-x + a * std::log(x) - gln) * h;
}

double chi_square_p_value(double stat, int dof) {
    return gamma_q(0.5 * dof, 0.5 * stat);
}

double AnalyticTarget::p_hat_norm() const {
    if (p_norm_ < 0)
        p_norm_ = quad_oracle(p_hat);
    return p_norm_;
}

double AnalyticTarget::f_integral() const {
    if (f_int_ < 0)
        f_int_ = quad_oracle(f);
    return f_int_;
}

AnalyticTarget AnalyticTarget::defaults() {
    AnalyticTarget t;
    t.p_hat = [](double x) {
        return 0.2 + 4.0 * gauss(x, 0.3, 0.06) + 2.5 * gauss(x, 0.75, 0.1);
    };
    t.f = [](double x) {
        return 0.3 + x * x + 2.0 * gauss(x, 0.6, 0.05);
    };
    return t;
}

AnalyticTarget AnalyticTarget::uniform() {
    AnalyticTarget t;
    t.p_hat = [](double) { return 1.0; };
    t.f = [](double x) { return 0.5 + x; };
    return t;
}

double source_pdf(Source s, int candidate_index, double x) {
    switch (s) {
    case Source::Uniform:
        return 1.0;
    case Source::SkewDown:
        return 1.9 - 1.8 * x;
    case Source::SkewUp:
        return 0.1 + 1.8 * x;
    case Source::Alternating:
        return candidate_index % 2 ? source_pdf(Source::SkewUp, 0, x)
                                   : source_pdf(Source::SkewDown, 0, x);
    }
    return 1.0;
}

double source_sample(Source s, int candidate_index, double u) {
    // Linear density a + b x: CDF a x + b x^2 / 2, inverted analytically.
    auto invert_linear = [](double a, double b, double u_) {
        double x = (-a + std::sqrt(a * a + 2.0 * b * u_)) / b;
        return std::fmin(std::fmax(x, 0.0), 1.0 - 1e-16);
    };
    switch (s) {
    case Source::Uniform:
        return u;
    case Source::SkewDown:
        return invert_linear(1.9, -1.8, u);
    case Source::SkewUp:
        return invert_linear(0.1, 1.8, u);
    case Source::Alternating:
        return candidate_index % 2 ? source_sample(Source::SkewUp, 0, u)
                                   : source_sample(Source::SkewDown, 0, u);
    }
    return u;
}

UnbiasednessResult run_unbiasedness_trial(const AnalyticTarget &target,
                                          const UnbiasednessConfig &cfg) {
    if (cfg.M < 1 || cfg.trials < 1)
        throw std::invalid_argument("run_unbiasedness_trial: M and trials must be >= 1");

    const double oracle = target.f_integral();

    MeanAcc acc = parallel_block_sum<MeanAcc>(cfg.trials, cfg.threads, [&](int64_t trial) {
        Pcg32 rng = make_stream(cfg.seed, static_cast<uint64_t>(trial));
        MeanAcc a;

        // RIS initialization (resampling weights w = m * p_hat / q).
        Reservoir<double> r;
        for (int j = 0; j < cfg.M; ++j) {
            double x = source_sample(cfg.source, j, rng.next_double());
            double p = target.p_hat(x);
            double m;
            if (cfg.mis == MisMode::ConstantInvM) {
                m = 1.0 / cfg.M;
            } else {
                double denom = 0;
                for (int k = 0; k < cfg.M; ++k)
                    denom += source_pdf(cfg.source, k, x);
                m = source_pdf(cfg.source, j, x) / denom;
            }
            r.update(x, m * p / source_pdf(cfg.source, j, x), rng);
        }
        double p0 = r.empty() ? 0 : target.p_hat(*r.sample);
        r.finalize(p0);

        if (cfg.k_mutations > 0 && !r.empty() && p0 > 0) {
            double conserved = p0 * r.W;
            auto propose = [&](double x, Pcg32 &prng) {
                MutationProposal<double> prop;
                prop.candidate = propose_1d(x, cfg.proposal_scale, prng);
                prop.p_hat = target.p_hat(prop.candidate);
                prop.kernel_ratio = 1;
                double px = target.p_hat(x);
                prop.contribution_ratio = px > 0 ? prop.p_hat / px : 0;
                return prop;
            };
            MutationStats st = mutate_sample(r, p0, propose, cfg.k_mutations, rng);
            a.accepted = st.accepted;
            a.proposed = st.proposed;
            double p_k = target.p_hat(*r.sample);
            if (p_k > 0 && r.W > 0)
                a.max_drift = std::fabs(p_k * r.W - conserved) / conserved;
        }

        double v = 0;
        if (!r.empty() && r.W > 0)
            v = target.f(*r.sample) * r.W;
        a.sum = v;
        a.sum_sq = v * v;
        return a;
    });

    UnbiasednessResult res;
    double n = static_cast<double>(cfg.trials);
    res.mean = acc.sum / n;
    res.variance = std::fmax(0.0, acc.sum_sq / n - res.mean * res.mean) * n / (n - 1);
    res.std_error = std::sqrt(res.variance / n);
    res.oracle = oracle;
    res.z = res.std_error > 0 ? (res.mean - oracle) / res.std_error : 0;
    res.max_conservation_drift = acc.max_drift;
    res.acceptance_rate = acc.proposed > 0 ? static_cast<double>(acc.accepted) / acc.proposed : 0;
    return res;
}

TwoPixelConfig TwoPixelConfig::dissimilar(int M) {
    TwoPixelConfig cfg;
    // Both pixel targets are narrow and close to each other, while the shared
    // inputs are broad: the per-input mismatch ratios correlate strongly.
    cfg.p_hat_1 = [](double x) { return 0.05 + gauss(x, 0.32, 0.07); };
    cfg.p_hat_2 = [](double x) { return 0.05 + gauss(x, 0.40, 0.08); };
    for (int j = 0; j < M; ++j)
        cfg.p_hat_inputs.push_back([](double x) { return 0.4 + gauss(x, 0.6, 0.25); });
    return cfg;
}

TwoPixelConfig TwoPixelConfig::identical(int M) {
    TwoPixelConfig cfg;
    auto t = [](double x) { return 0.2 + gauss(x, 0.5, 0.15); };
    cfg.p_hat_1 = t;
    cfg.p_hat_2 = t;
    for (int j = 0; j < M; ++j)
        cfg.p_hat_inputs.push_back(t);
    return cfg;
}

TwoPixelResult run_two_pixel_covariance(const TwoPixelConfig &cfg) {
    const int M = static_cast<int>(cfg.p_hat_inputs.size());
    if (M < 1 || cfg.trials < 2)
        throw std::invalid_argument("run_two_pixel_covariance: need inputs and trials >= 2");

    // Normalizations and rejection-sampling envelopes for the input targets.
    std::vector<double> norms(static_cast<size_t>(M)), maxima(static_cast<size_t>(M));
    for (int j = 0; j < M; ++j) {
        norms[static_cast<size_t>(j)] = quad_oracle(cfg.p_hat_inputs[static_cast<size_t>(j)]);
        double mx = 0;
        for (int i = 0; i <= 4096; ++i)
            mx = std::fmax(mx, cfg.p_hat_inputs[static_cast<size_t>(j)](i / 4096.0));
        maxima[static_cast<size_t>(j)] = mx * 1.05;
    }

    struct PairRow {
        double a_plain, b_plain, a_mut, b_mut;
    };
    std::vector<PairRow> rows(static_cast<size_t>(cfg.trials));

    parallel_for(cfg.trials, cfg.threads, [&](int64_t trial) {
        Pcg32 rng = make_stream(cfg.seed, static_cast<uint64_t>(trial), 0xfeedULL);
        PairRow row{0, 0, 0, 0};

        for (int j = 0; j < M; ++j) {
            const Fn1D &pj = cfg.p_hat_inputs[static_cast<size_t>(j)];
            double norm = norms[static_cast<size_t>(j)];
            // Draw X_j exactly from its normalized target (rejection).
            auto draw_input = [&](Pcg32 &g) {
                for (int it = 0; it < 10000; ++it) {
                    double cand = g.next_double();
                    if (g.next_double() * maxima[static_cast<size_t>(j)] <= pj(cand))
                        return cand;
                }
                return 0.5;
            };
            double x_shared = draw_input(rng);
            double x_b = cfg.shared_inputs ? x_shared : draw_input(rng);

            auto weight_of = [&](double x) { return norm / pj(x); };

            // Direct resampling of the inputs, constant 1/M MIS.
            row.a_plain += cfg.p_hat_1(x_shared) * weight_of(x_shared) / M;
            row.b_plain += cfg.p_hat_2(x_b) * weight_of(x_b) / M;

            // Per-pixel independent mutations of the input with the input's
            // own target.
            for (int pixel = 0; pixel < 2; ++pixel) {
                double x = pixel == 0 ? x_shared : x_b;
                double w = weight_of(x);
                Pcg32 mrng = make_stream(cfg.seed, static_cast<uint64_t>(trial),
                                         static_cast<uint64_t>(j), 0x100u + static_cast<uint64_t>(pixel));
                Reservoir<double> r;
                r.sample = x;
                r.w_sum = pj(x) * w; // consistent with W = w_sum / p_hat
                r.M = 1;
                r.W = w;
                auto propose = [&](double xx, Pcg32 &prng) {
                    MutationProposal<double> prop;
                    prop.candidate = propose_1d(xx, cfg.proposal_scale, prng);
                    prop.p_hat = pj(prop.candidate);
                    prop.kernel_ratio = 1;
                    double px = pj(xx);
                    prop.contribution_ratio = px > 0 ? prop.p_hat / px : 0;
                    return prop;
                };
                mutate_sample(r, pj(x), propose, cfg.mutations, mrng);
                double y = *r.sample;
                double wy = r.W;
                double est = (pixel == 0 ? cfg.p_hat_1(y) : cfg.p_hat_2(y)) * wy / M;
                (pixel == 0 ? row.a_mut : row.b_mut) += est;
            }
        }
        rows[static_cast<size_t>(trial)] = row;
    });

    auto covariance_with_se = [&](auto geta, auto getb, double &cov, double &se) {
        double ma = 0, mb = 0;
        for (const PairRow &r : rows) {
            ma += geta(r);
            mb += getb(r);
        }
        ma /= static_cast<double>(rows.size());
        mb /= static_cast<double>(rows.size());
        double c = 0, c2 = 0;
        for (const PairRow &r : rows) {
            double prod = (geta(r) - ma) * (getb(r) - mb);
            c += prod;
            c2 += prod * prod;
        }
        double n = static_cast<double>(rows.size());
        cov = c / (n - 1);
        double var_prod = std::fmax(0.0, c2 / n - (c / n) * (c / n));
        se = std::sqrt(var_prod / n);
    };

    TwoPixelResult res;
    covariance_with_se([](const PairRow &r) { return r.a_plain; },
                       [](const PairRow &r) { return r.b_plain; }, res.cov_without, res.se_without);
    covariance_with_se([](const PairRow &r) { return r.a_mut; },
                       [](const PairRow &r) { return r.b_mut; }, res.cov_with, res.se_with);
    res.ratio = res.cov_without != 0 ? res.cov_with / res.cov_without : 0;
    return res;
}

ChainResult chain_distribution_test(const AnalyticTarget &target, const ChainConfig &cfg) {
    if (cfg.steps < 1 || cfg.bins < 2)
        throw std::invalid_argument("chain_distribution_test: invalid steps/bins");

    ChainResult res;
    res.expected.resize(static_cast<size_t>(cfg.bins));
    double norm = target.p_hat_norm();
    for (int b = 0; b < cfg.bins; ++b) {
        double lo = static_cast<double>(b) / cfg.bins, hi = static_cast<double>(b + 1) / cfg.bins;
        res.expected[static_cast<size_t>(b)] =
            quad_oracle([&](double t) { return target.p_hat(lo + (hi - lo) * t); }) * (hi - lo) / norm;
    }

    Pcg32 rng = make_stream(cfg.seed, 0xc4a1ULL);
    // On-support start via a small RIS selection from uniform candidates.
    Reservoir<double> r0;
    for (int j = 0; j < 32; ++j) {
        double x = rng.next_double();
        r0.update(x, target.p_hat(x) / 32.0, rng);
    }
    double x = r0.empty() ? 0.5 : *r0.sample;

    std::vector<long long> counts(static_cast<size_t>(cfg.bins), 0);
    long long accepted = 0;
    for (long long k = 0; k < cfg.steps; ++k) {
        double z = propose_1d(x, cfg.proposal_scale, rng);
        double a = cfg.always_accept
                       ? (target.p_hat(z) > 0 ? 1.0 : 0.0)
                       : mh_acceptance(target.p_hat(x), target.p_hat(z), 1.0);
        if (rng.next_double() < a) {
            x = z;
            ++accepted;
        }
        int b = std::min(cfg.bins - 1, static_cast<int>(x * cfg.bins));
        ++counts[static_cast<size_t>(b)];
    }

    res.histogram.resize(static_cast<size_t>(cfg.bins));
    double tv = 0;
    for (int b = 0; b < cfg.bins; ++b) {
        res.histogram[static_cast<size_t>(b)] =
            static_cast<double>(counts[static_cast<size_t>(b)]) / static_cast<double>(cfg.steps);
        tv += std::fabs(res.histogram[static_cast<size_t>(b)] - res.expected[static_cast<size_t>(b)]);
    }
    res.tv_distance = 0.5 * tv;
    res.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(cfg.steps);
    return res;
}

} // namespace testbed
} // namespace restir
