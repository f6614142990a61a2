// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "restir/mcmc.hpp"

using namespace restir;

TEST_CASE("acceptance probability: clamping and ratios") {
    CHECK(mh_acceptance(1.0, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(mh_acceptance(4.0, 1.0, 1.0) == doctest::Approx(0.25));
    CHECK(mh_acceptance(2.0, 1.0, 4.0) == doctest::Approx(1.0));
    CHECK(mh_acceptance(1.0, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(mh_acceptance(0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("degenerate bounds give a constant step scale") {
    // With s1 == s2 == s the log-uniform scale law collapses to s; the
    // perturbation is then plain Gaussian with that sigma.
    Pcg32 rng(9);
    const double s = 0.05;
    double acc = 0, acc_sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        PssVector u;
        u.dim = 1;
        u[0] = 0.5;
        PssVector v = pss_perturb(u, s, s, rng);
        double step = v[0] - 0.5; // interior start, wrap effectively never fires
        acc += step;
        acc_sq += step * step;
    }
    double sd = std::sqrt(acc_sq / n);
    CHECK(std::fabs(acc / n) < 3 * s / std::sqrt(static_cast<double>(n)));
    CHECK(sd == doctest::Approx(s).epsilon(0.02));
}

TEST_CASE("unwrapped step distribution is symmetric (skew within 3 sigma)") {
    Pcg32 rng(10);
    const long n = 1000000;
    double m2 = 0, m3 = 0, m6 = 0;
    for (long i = 0; i < n; ++i) {
        PssVector u;
        u.dim = 1;
        u[0] = 0.5;
        PssVector v = pss_perturb(u, 1.0 / 1024.0, 1.0 / 64.0, rng);
        double d = v[0] - 0.5;
        if (d > 0.5)
            d -= 1.0;
        if (d < -0.5)
            d += 1.0;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m6 += d2 * d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m6 /= n;
    double sd = std::sqrt(m2);
    double skew = m3 / (sd * sd * sd);
    // For a symmetric heavy-tailed distribution the skewness estimator has
    // variance ~ E[d^6] / (sd^6 n); use the sample's own sixth moment.
    double se = std::sqrt(m6 / (m2 * m2 * m2) / static_cast<double>(n));
    CHECK(std::fabs(skew) < 3 * se);
}

TEST_CASE("mean |step| lies between the perturbation bounds at the defaults") {
    Pcg32 rng(11);
    const double s1 = 1.0 / 1024.0, s2 = 1.0 / 64.0;
    const long n = 400000;
    double acc = 0;
    for (long i = 0; i < n; ++i) {
        PssVector u;
        u.dim = 1;
        u[0] = 0.5;
        PssVector v = pss_perturb(u, s1, s2, rng);
        double d = v[0] - 0.5;
        if (d > 0.5)
            d -= 1.0;
        if (d < -0.5)
            d += 1.0;
        acc += std::fabs(d);
    }
    double mean_step = acc / n;
    // Analytic value: E[s] * sqrt(2/pi) with E[s] = s2 (1 - s1/s2) / log(s2/s1).
    double expected = s2 * (1.0 - s1 / s2) / std::log(s2 / s1) * std::sqrt(2.0 / M_PI);
    CHECK(mean_step > s1);
    CHECK(mean_step < s2);
    CHECK(mean_step == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("perturbed components stay in [0,1)") {
    Pcg32 rng(12);
    for (int i = 0; i < 20000; ++i) {
        PssVector u;
        u.dim = 2;
        u[0] = rng.next_double();
        u[1] = rng.next_double();
        PssVector v = pss_perturb(u, 0.1, 0.4, rng);
        for (int d = 0; d < 2; ++d) {
            CHECK(v[d] >= 0.0);
            CHECK(v[d] < 1.0);
        }
    }
}

TEST_CASE("forward and reverse transition counts agree on a grid") {
    // Symmetric-kernel check: start uniformly, propose once, and compare the
    // cell-pair transition counts N(i->j) against N(j->i).
    Pcg32 rng(13);
    const int cells = 8;
    const long n = 2000000;
    std::vector<long> counts(cells * cells, 0);
    for (long t = 0; t < n; ++t) {
        PssVector u;
        u.dim = 1;
        u[0] = rng.next_double();
        PssVector v = pss_perturb(u, 0.02, 0.3, rng);
        int a = std::min(cells - 1, static_cast<int>(u[0] * cells));
        int b = std::min(cells - 1, static_cast<int>(v[0] * cells));
        ++counts[a * cells + b];
    }
    for (int a = 0; a < cells; ++a)
        for (int b = a + 1; b < cells; ++b) {
            double nab = static_cast<double>(counts[a * cells + b]);
            double nba = static_cast<double>(counts[b * cells + a]);
            if (nab + nba < 100)
                continue;
            double z = (nab - nba) / std::sqrt(nab + nba);
            CHECK(std::fabs(z) < 4.0);
        }
}

namespace {

struct FakeTarget {
    double operator()(double x) const { return 0.5 + x * x; }
};

MutationProposal<double> propose_step(double x, Pcg32 &rng, double p_hat_of_candidate_scale = 1.0) {
    PssVector u;
    u.dim = 1;
    u[0] = x;
    PssVector v = pss_perturb(u, 0.05, 0.05, rng);
    MutationProposal<double> prop;
    prop.candidate = v[0];
    FakeTarget t;
    prop.p_hat = t(prop.candidate) * p_hat_of_candidate_scale;
    prop.kernel_ratio = 1;
    prop.contribution_ratio = prop.p_hat / t(x);
    return prop;
}

} // namespace

TEST_CASE("iters = 0 leaves the reservoir bitwise unchanged") {
    Pcg32 rng(14);
    Reservoir<double> r;
    r.sample = 0.25;
    r.w_sum = 1.5;
    r.M = 3;
    r.W = 2.0;
    Reservoir<double> before = r;
    auto st = mutate_sample(r, 0.5625, [](double x, Pcg32 &g) { return propose_step(x, g); }, 0, rng);
    CHECK(st.proposed == 0);
    CHECK(r.sample == before.sample);
    CHECK(r.w_sum == before.w_sum);
    CHECK(r.M == before.M);
    CHECK(r.W == before.W);
}

TEST_CASE("all-rejected chain keeps sample, W, w_sum and M") {
    Pcg32 rng(15);
    Reservoir<double> r;
    r.sample = 0.25;
    r.w_sum = 1.5;
    r.M = 3;
    r.W = 2.0;
    auto reject_all = [](double x, Pcg32 &g) {
        MutationProposal<double> p = propose_step(x, g);
        p.contribution_ratio = 0; // infeasible candidates
        return p;
    };
    auto st = mutate_sample(r, 0.5625, reject_all, 16, rng);
    CHECK(st.proposed == 16);
    CHECK(st.accepted == 0);
    CHECK(*r.sample == 0.25);
    CHECK(r.W == 2.0);
    CHECK(r.w_sum == 1.5);
    CHECK(r.M == 3.0);
}

TEST_CASE("contribution-weight update follows p_hat(x0)/p_hat(xk)") {
    // Force acceptance of one candidate with known targets: starting at
    // p_hat = 2 with W = 0.5, landing at p_hat = 4 must give W = 0.25.
    Pcg32 rng(16);
    Reservoir<double> r;
    r.sample = 0.1;
    r.w_sum = 1.0;
    r.M = 1;
    r.W = 0.5;
    auto force = [](double, Pcg32 &g) {
        PssVector dummy;
        dummy.dim = 1;
        dummy[0] = 0.5;
        pss_perturb(dummy, 0.05, 0.05, g);
        MutationProposal<double> p;
        p.candidate = 0.9;
        p.p_hat = 4.0;
        p.kernel_ratio = 1;
        p.contribution_ratio = 1e9; // always accepted
        return p;
    };
    auto st = mutate_sample(r, 2.0, force, 1, rng);
    CHECK(st.accepted == 1);
    CHECK(r.W == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.w_sum == 1.0); // normalization estimate unchanged
    CHECK(r.M == 1.0);
}

TEST_CASE("W * p_hat is conserved along random chains to 1e-12 relative") {
    Pcg32 seed_rng(17);
    FakeTarget target;
    for (int chain = 0; chain < 2000; ++chain) {
        Pcg32 rng = make_stream(99, static_cast<uint64_t>(chain));
        Reservoir<double> r;
        r.sample = rng.next_double();
        r.w_sum = 0.5 + rng.next_double();
        r.M = 1;
        double p0 = target(*r.sample);
        r.W = r.w_sum / p0;
        double conserved = p0 * r.W;
        mutate_sample(r, p0, [](double x, Pcg32 &g) { return propose_step(x, g); }, 8, rng);
        double now = target(*r.sample) * r.W;
        CHECK(std::fabs(now - conserved) / conserved < 1e-12);
    }
}
