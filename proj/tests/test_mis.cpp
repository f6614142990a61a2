// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <array>
#include <vector>

#include "restir/mis.hpp"
#include "restir/rng.hpp"

using namespace restir;

TEST_CASE("balance heuristic basics") {
    std::vector<double> q{2.0, 2.0};
    CHECK(mis_balance(q, 0) == doctest::Approx(0.5));
    std::vector<double> q2{1.0, 0.0, 0.0};
    CHECK(mis_balance(q2, 0) == doctest::Approx(1.0));
    std::vector<double> q3{1.0, 3.0};
    CHECK(mis_balance(q3, 1) == doctest::Approx(0.75));
    std::vector<double> zeros{0.0, 0.0};
    CHECK(mis_balance(zeros, 0) == 0.0);
}

TEST_CASE("balance weights form a partition of unity") {
    Pcg32 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(5));
        std::vector<double> q(static_cast<size_t>(n));
        for (double &v : q)
            v = rng.next_double() * 3.0;
        double sum = 0;
        for (int j = 0; j < n; ++j)
            sum += mis_balance(q, j);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("temporal MIS weight: symmetry and confidence weighting") {
    MisContext ctx;
    ctx.p_hat_self = 1.0;
    ctx.p_hat_other = 1.0;
    ctx.M_self = 1;
    ctx.M_other = 1;
    CHECK(mis_temporal(ctx, MisRole::Current) == doctest::Approx(0.5));
    CHECK(mis_temporal(ctx, MisRole::Previous) == doctest::Approx(0.5));

    ctx.M_other = 20;
    CHECK(mis_temporal(ctx, MisRole::Current) == doctest::Approx(1.0 / 21.0));
}

TEST_CASE("temporal MIS weight: invalid cross shift") {
    MisContext ctx;
    ctx.p_hat_self = 0.7;
    ctx.p_hat_other = 0.4;
    ctx.M_self = 3;
    ctx.M_other = 5;
    CHECK(mis_temporal(ctx, MisRole::Current, false) == 1.0);
    CHECK(mis_temporal(ctx, MisRole::Previous, false) == 0.0);
}

TEST_CASE("temporal MIS pair sums to one for a shared candidate") {
    // For the same candidate y, the current-technique weight uses
    // (p_self = p_i(y), p_other = p_j(y)J) while the previous-technique
    // weight uses the mirrored context; together they partition unity.
    Pcg32 rng(33);
    for (int t = 0; t < 100; ++t) {
        double pi = rng.next_double() + 1e-3;
        double pj = rng.next_double() + 1e-3;
        double mi = 1 + rng.next_below(40);
        double mj = 1 + rng.next_below(40);
        MisContext a{pi, pj, mi, mj};
        MisContext b{pj, pi, mj, mi};
        double sum = mis_temporal(a, MisRole::Current) + mis_temporal(b, MisRole::Previous);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pairwise MIS: canonical and neighbors partition unity") {
    Pcg32 rng(55);
    for (int trial = 0; trial < 300; ++trial) {
        int k = 1 + static_cast<int>(rng.next_below(6));
        double m_c = 1 + rng.next_below(50);
        std::vector<double> m_i(static_cast<size_t>(k));
        double m_n = 0;
        for (double &m : m_i) {
            m = 1 + rng.next_below(50);
            m_n += m;
        }
        // Densities of one shared candidate under every technique; the
        // canonical one is kept positive (a zero canonical target makes the
        // candidate worthless anyway).
        double q_c = 0.05 + rng.next_double() * 2.0;
        std::vector<double> q_i(static_cast<size_t>(k));
        for (double &q : q_i)
            q = rng.next_below(4) == 0 ? 0.0 : rng.next_double() * 3.0;

        PairwiseMis mis(m_c, m_n);
        double sum = 0;
        for (int i = 0; i < k; ++i) {
            mis.add_canonical_duel(m_i[static_cast<size_t>(i)], q_i[static_cast<size_t>(i)], q_c);
            sum += mis.neighbor_weight(m_i[static_cast<size_t>(i)], q_i[static_cast<size_t>(i)], q_c);
        }
        sum += mis.canonical_weight();
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("pairwise MIS: equal targets and confidences, one neighbor") {
    PairwiseMis mis(1.0, 1.0);
    mis.add_canonical_duel(1.0, 1.0, 1.0);
    double canonical = mis.canonical_weight();
    double neighbor = mis.neighbor_weight(1.0, 1.0, 1.0);
    CHECK(canonical + neighbor == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(canonical == doctest::Approx(0.75)); // defensive floor 1/2 plus half the duel
    CHECK(neighbor == doctest::Approx(0.25));
}

TEST_CASE("pairwise MIS: zero-support neighbor gets zero weight") {
    PairwiseMis mis(4.0, 8.0);
    CHECK(mis.neighbor_weight(8.0, 0.0, 1.5) == 0.0);
}
