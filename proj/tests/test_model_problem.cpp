#include <gtest/gtest.h>

#include <cmath>

#include "landau/model_problem.hpp"
#include "support/oracles.hpp"

using namespace landau;

namespace {

/// g(x) e^{nu^2/4 - nu t} (sqrt(pi)/2)(1 + erf(t - nu/2)) for v = e^{-t^2} g(x)
long double closed_form(double nu, double t, double x) {
    const long double g = std::exp(-(long double)x * x);
    return g * std::exp((long double)nu * nu / 4.0L - (long double)nu * t) * std::sqrt(oracle::pi_l) / 2.0L
           * oracle::one_plus_erf(t - nu / 2.0L);
}

} // namespace

TEST(CausalU, ZeroSource) {
    const ScalarSource zero{0.0};
    EXPECT_EQ(causal_u(zero, 0.5, 1.0, 0.0), 0.0);
    EXPECT_EQ(causal_u(zero, 0.0, -3.0, 2.0), 0.0);
}

TEST(CausalU, MatchesIndependentErfExpression) {
    const ScalarSource src{};
    for (double nu : {0.1, 0.5, 1.0, 2.0})
        for (double t = -6.0; t <= 6.0; t += 0.5)
            for (double x : {0.0, 0.7, -1.3}) {
                const double want = double(closed_form(nu, t, x));
                EXPECT_NEAR(causal_u(src, nu, t, x), want, 1e-10 * std::max(want, 1e-300) + 1e-300)
                    << nu << " " << t << " " << x;
            }
}

TEST(CausalU, TotalMassAtLateTime) {
    const ScalarSource src{1.0, 0.0, 0.0, 1.3, 1.0};
    for (double x : {0.0, 0.5})
        EXPECT_NEAR(causal_u(src, 0.0, 10.0 * src.tau, x), src.space_factor(x) * src.time_mass(), 1e-14);
}

TEST(CausalU, ClosedFormMatchesQuadrature) {
    oracle::Sampler rng(71);
    for (int i = 0; i < 30; ++i) {
        const ScalarSource src{rng.uniform(-2, 2), rng.uniform(-3, 3), rng.uniform(-1, 1), rng.uniform(0.3, 2.0),
                               rng.uniform(0.5, 2.0)};
        const double nu = rng.uniform(0.0, 3.0), t = rng.uniform(-5, 8), x = rng.uniform(-2, 2);
        const double a = causal_u(src, nu, t, x);
        const double b = causal_u_quadrature(src, nu, t, x);
        EXPECT_NEAR(a, b, 1e-10 * std::max(1e-3, std::abs(b)));
    }
}

TEST(CausalU, CausalityBeforeSource) {
    const ScalarSource src{1.0, 2.0, 0.0, 0.5, 1.0};
    for (double nu : {0.0, 0.3, 3.0}) EXPECT_LT(causal_u(src, nu, 2.0 - 8.0 * src.tau, 0.0), 1e-25);
}

TEST(CausalU, ConvergesMonotonicallyAsNuDecreases) {
    const ScalarSource src{};
    for (double t : {-1.0, 0.0, 1.5, 4.0})
        for (double x : {0.0, 1.0}) {
            const double limit = causal_u(src, 0.0, t, x);
            double prev = INFINITY;
            for (double nu : {1.0, 0.3, 0.1, 0.03, 0.01, 0.001}) {
                const double d = std::abs(causal_u(src, nu, t, x) - limit);
                EXPECT_LE(d, prev);
                prev = d;
            }
            EXPECT_LT(prev, 1e-2 * std::max(limit, 1e-3));
        }
}

TEST(CausalU, BoundedByTimeMass) {
    const ScalarSource src{-1.5, 0.4, 0.0, 0.8, 1.0};
    oracle::Sampler rng(73);
    for (int i = 0; i < 100; ++i) {
        const double t = rng.uniform(-5, 10), x = rng.uniform(-3, 3), nu = rng.uniform(0, 2);
        EXPECT_LE(std::abs(causal_u(src, nu, t, x)), std::abs(src.amplitude) * src.tau * std::sqrt(pi) * src.space_factor(x) + 1e-15);
    }
}

TEST(CausalU, Preconditions) {
    EXPECT_THROW(causal_u(ScalarSource{}, -1.0, 0.0, 0.0), InvalidParameter);
    EXPECT_THROW(causal_u(ScalarSource{1.0, 0.0, 0.0, 0.0, 1.0}, 0.5, 0.0, 0.0), InvalidParameter);
}

TEST(FourierIdentity, ZeroSource) {
    SpaceTimeGrid g;
    g.n_t = g.n_x = 64;
    EXPECT_EQ(fourier_identity_check(ScalarSource{0.0}, 0.5, g).deviation, 0.0);
}

TEST(FourierIdentity, ReferenceGrid) {
    SpaceTimeGrid g;
    g.t_min = g.x_min = -20.0;
    g.t_max = g.x_max = 20.0;
    g.n_t = g.n_x = 512;
    // the source sits early in the window so u^nu = O(e^{-nu (t - t0)}) has
    // decayed before the right edge
    const ScalarSource src{1.0, -12.0, 0.0, 1.0, 1.0};
    const auto r = fourier_identity_check(src, 0.5, g);
    EXPECT_LT(r.deviation, 1e-6);
    EXPECT_GT(r.modes_compared, 1000);
    // amplitude scaling leaves the deviation unchanged
    const ScalarSource scaled{-3.5, -12.0, 0.0, 1.0, 1.0};
    EXPECT_NEAR(fourier_identity_check(scaled, 0.5, g).deviation, r.deviation, 1e-12);
}

TEST(FourierIdentity, CentredSourceIsFlagged) {
    SpaceTimeGrid g;
    g.t_min = g.x_min = -20.0;
    g.t_max = g.x_max = 20.0;
    g.n_t = g.n_x = 256;
    const auto r = fourier_identity_check(ScalarSource{}, 0.5, g);
    EXPECT_TRUE(r.truncation_warning);
    EXPECT_GT(r.deviation, 1e-6);
}

TEST(Uniqueness, ZeroDelta) {
    const auto r = uniqueness_probe(ScalarSource{}, 0.5, 0.0, 10.0);
    EXPECT_EQ(r.difference_at_minus_T, 0.0);
    EXPECT_EQ(r.difference_at_zero, 0.0);
}

TEST(Uniqueness, GrowthFactor) {
    const auto r = uniqueness_probe(ScalarSource{}, 0.5, 1.0, 10.0);
    EXPECT_NEAR(r.growth_factor, std::exp(5.0), 1e-10 * std::exp(5.0));
    EXPECT_NEAR(r.growth_factor, 148.413, 1e-3);
    EXPECT_LT(r.relative_error, 1e-10);
    EXPECT_LT(r.evolved_relative_error, 1e-8);
}

TEST(Uniqueness, TinyDatumBlowsUp) {
    const auto r = uniqueness_probe(ScalarSource{}, 1.0, 1e-8, 30.0);
    EXPECT_NEAR(r.difference_at_minus_T, 1e-8 * std::exp(30.0), 1e-6);
    EXPECT_NEAR(r.difference_at_minus_T, 1.07e5, 0.01e5);
    EXPECT_LT(r.evolved_relative_error, 1e-3);
}

TEST(Uniqueness, Preconditions) {
    EXPECT_THROW(uniqueness_probe(ScalarSource{}, 0.0, 1.0, 1.0), InvalidParameter);
    EXPECT_THROW(uniqueness_probe(ScalarSource{}, 0.5, 1.0, -1.0), InvalidParameter);
}
