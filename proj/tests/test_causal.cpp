#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "landau/causal.hpp"
#include "support/oracles.hpp"

using namespace landau;

namespace {

const EquilibriumDistribution kMaxwell = make_maxwellian(PlasmaSpecies{});
const FieldPerturbation kGauss = FieldPerturbation::gaussian_packet(1.0, 0.0, 0.0, 1.0, 1.0);

/// -(q/m) F'(v) int_{-inf}^t exp(-nu (t-s)) E(s, x - v(t-s)) ds by fixed-step Simpson.
long double brute_f(const FieldPerturbation& E, double nu, double t, double x, double v, double step) {
    const double lo = -12.0;
    const long n = static_cast<long>(std::ceil((t - lo) / step));
    auto g = [&](long double s) {
        return std::exp(-nu * (t - s)) * E(double(s), double(x - v * (t - s)));
    };
    return -oracle::maxwell_dF(v) * oracle::simpson(g, lo, t, n);
}

} // namespace

TEST(CausalF, ZeroField) {
    const auto zero = FieldPerturbation::gaussian_packet(0.0, 0.0, 0.0, 1.0, 1.0);
    oracle::Sampler rng(1);
    for (double nu : {0.0, 0.1, 2.0}) {
        const CausalSolution sol(nu, kMaxwell, zero);
        for (int i = 0; i < 20; ++i)
            EXPECT_EQ(causal_f(sol, rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)), 0.0);
        EXPECT_EQ(current_j(sol, 0.5, 0.5), 0.0);
        EXPECT_EQ(residual_Lnu(sol, 0.1, 0.2, 0.3, 1e-3, 1e-3), 0.0);
    }
}

TEST(CausalF, ZeroVelocityVanishesForMaxwellian) {
    const CausalSolution sol(0.3, kMaxwell, kGauss);
    EXPECT_EQ(causal_f(sol, 0.4, -0.2, 0.0), 0.0);
}

TEST(CausalF, MatchesBruteForceSimpson) {
    const CausalSolution sol(0.1, kMaxwell, kGauss);
    const double got = causal_f(sol, 1.0, 0.5, 1.0);
    const double want = double(brute_f(kGauss, 0.1, 1.0, 0.5, 1.0, 1e-4));
    EXPECT_NEAR(got, want, 1e-8);
}

TEST(CausalF, PropertyAgainstBruteForce) {
    oracle::Sampler rng(1234);
    const auto E = FieldPerturbation::modulated_packet(0.8, 0.3, -0.2, 1.3, 0.9, 1.5, 2.0);
    for (int i = 0; i < 12; ++i) {
        const double nu = rng.uniform(0.0, 1.0), t = rng.uniform(-2, 3), x = rng.uniform(-2, 2),
                     v = rng.uniform(-3, 3);
        const CausalSolution sol(nu, kMaxwell, E);
        EXPECT_NEAR(causal_f(sol, t, x, v), double(brute_f(E, nu, t, x, v, 2e-4)), 1e-9)
            << nu << " " << t << " " << x << " " << v;
    }
}

TEST(CausalF, RejectsNegativeDampingAndBadSpec) {
    EXPECT_THROW(CausalSolution(-0.1, kMaxwell, kGauss), InvalidParameter);
    QuadratureSpec q;
    q.tail_cut = 1e-6;
    EXPECT_THROW(CausalSolution(0.1, kMaxwell, kGauss, q), InvalidParameter);
}

TEST(CausalF, QuadratureFailureReported) {
    QuadratureSpec q;
    q.max_subdivisions = 1;
    q.abs_tol = q.tail_cut = 1e-16;
    q.rel_tol = 1e-16;
    const auto E = FieldPerturbation::modulated_packet(1.0, 0.0, 0.0, 3.0, 3.0, 40.0, 0.0);
    const CausalSolution sol(0.0, kMaxwell, E, q);
    EXPECT_THROW(causal_f(sol, 8.0, 0.0, 1.0), QuadratureFailure);
}

TEST(CausalF, VanishesBeforeThePerturbation) {
    const auto E = FieldPerturbation::gaussian_packet(1.0, 5.0, 0.0, 1.0, 1.0);
    for (double nu : {0.0, 0.5}) {
        const CausalSolution sol(nu, kMaxwell, E);
        for (double v : {-2.0, 0.5, 1.5}) EXPECT_LT(std::abs(causal_f(sol, -6.0, 0.0, v)), 1e-13);
    }
}

TEST(InitialCondition, SameAsCausalFAtZero) {
    const CausalSolution sol(0.5, kMaxwell, kGauss);
    EXPECT_EQ(initial_condition_f0(sol, 0.3, 1.1), causal_f(sol, 0.0, 0.3, 1.1));
    const CausalSolution limit(0.0, kMaxwell, kGauss);
    EXPECT_THROW(initial_condition_f0(limit, 0.0, 1.0), InvalidParameter);
}

TEST(InitialCondition, LateSourceLeavesTinyDatum) {
    const auto E = FieldPerturbation::gaussian_packet(1.0, 5.0, 0.0, 1.0, 1.0);
    const CausalSolution sol(0.5, kMaxwell, E);
    const double bound = 1e-6 * kMaxwell.max_abs_dF();
    for (double x = -4.0; x <= 4.0; x += 1.0)
        for (double v = -3.0; v <= 3.0; v += 0.5) {
            const double f0 = initial_condition_f0(sol, x, v);
            EXPECT_LT(std::abs(f0), bound);
            EXPECT_NEAR(f0, double(brute_f(E, 0.5, 0.0, x, v, 1e-3)), 1e-14);
        }
}

TEST(Residual, NullSpaceOfFreeTransport) {
    // h(x - v t) g(v) solves the free equation; centered differences leave O(h^2)
    auto f = [](double t, double x, double v) {
        const double y = x - v * t;
        return std::sin(y) * std::exp(-y * y / 4.0) * std::exp(-v * v);
    };
    const double r1 = transport_residual(f, 0.0, 0.3, 0.2, 1.1, 1e-2, 1e-2, 0.0);
    const double r2 = transport_residual(f, 0.0, 0.3, 0.2, 1.1, 5e-3, 5e-3, 0.0);
    EXPECT_LT(std::abs(r1), 1e-3);
    EXPECT_NEAR(std::abs(r1 / r2), 4.0, 0.1);
    EXPECT_THROW(transport_residual(f, 0.0, 0.0, 0.0, 0.0, 0.0, 1e-3, 0.0), InvalidParameter);
}

TEST(Residual, GaussianPacketSecondOrder) {
    const CausalSolution sol(0.1, kMaxwell, kGauss);
    const double scale = kMaxwell.max_abs_dF(); // sup |(q/m) E F'| with A = 1
    for (auto p : {ProbePoint{0.3, -0.4, 1.2}, ProbePoint{-0.5, 0.5, -0.8}, ProbePoint{1.0, 0.0, 0.6}}) {
        const double r1 = residual_Lnu(sol, p.t, p.x, p.v, 1e-3, 1e-3);
        const double r2 = residual_Lnu(sol, p.t, p.x, p.v, 5e-4, 5e-4);
        EXPECT_LT(std::abs(r1), 1e-5 * scale);
        EXPECT_GT(std::log2(std::abs(r1 / r2)), 1.9);
    }
}

TEST(Current, ZeroProfileAndConstantProfile) {
    const CausalSolution sol(0.1, kMaxwell, kGauss);
    EXPECT_EQ(current_j_profile(sol, [](double) { return 0.0; }, 1.0, 0.0), 0.0);
    const double j = current_j(sol, 1.0, 0.2);
    EXPECT_NEAR(current_j_profile(sol, [](double) { return 1.0; }, 1.0, 0.2), j, 1e-12 * std::abs(j));
}

TEST(Current, ReflectionSymmetry) {
    // For even F, substituting v -> -v gives j[E(t, -.)](t, x) = j[E](t, -x):
    // the current of the mirrored field is the mirrored current. With the
    // field also flipped in sign, as a polar vector is under parity, the
    // current changes sign.
    const auto E = FieldPerturbation::modulated_packet(1.0, 0.2, 0.7, 1.0, 1.3, 0.5, 1.5);
    const auto R = FieldPerturbation::modulated_packet(1.0, 0.2, -0.7, 1.0, 1.3, 0.5, -1.5);
    const auto P = FieldPerturbation::superposition({{-1.0, R}});
    const CausalSolution a(0.0, kMaxwell, E), b(0.0, kMaxwell, R), c(0.0, kMaxwell, P);
    for (double x : {0.0, 0.5, -1.2}) {
        const double ja = current_j(a, 1.5, x);
        EXPECT_NEAR(current_j(b, 1.5, -x), ja, 1e-10 * std::abs(ja));
        EXPECT_NEAR(current_j(c, 1.5, -x), -ja, 1e-10 * std::abs(ja));
    }
}

TEST(Current, MatchesBruteForce2DSimpson) {
    const CausalSolution sol(0.0, kMaxwell, kGauss);
    const double t = 2.0, x = 0.0;
    auto g = [&](long double s, long double v) {
        return v * oracle::maxwell_dF(v) * kGauss(double(s), double(x - v * (t - s)));
    };
    const double want = -double(oracle::simpson_2d(g, -9.0L, t, 3000, -8.0L, 8.0L, 3000));
    EXPECT_NEAR(current_j(sol, t, x), want, 1e-6 * std::abs(want));
}

TEST(Current, NonUniformProfileMatchesBruteForce) {
    const CausalSolution sol(0.1, kMaxwell, kGauss);
    auto n0 = [](double y) { return 1.0 + 0.5 * std::exp(-y * y); };
    const double t = 1.0, x = 0.0;
    auto g = [&](long double s, long double v) {
        const double X = double(x - v * (t - s));
        return std::exp(-0.1L * (t - s)) * v * oracle::maxwell_dF(v) * n0(X) * kGauss(double(s), X);
    };
    const double want = -double(oracle::simpson_2d(g, -9.0L, t, 3000, -8.0L, 8.0L, 3000));
    EXPECT_NEAR(current_j_profile(sol, n0, t, x), want, 1e-6 * std::abs(want));
}

TEST(Linearity, FieldSuperposition) {
    const auto a = FieldPerturbation::gaussian_packet(1.0, 0.0, 0.0, 1.0, 1.0);
    const auto b = FieldPerturbation::modulated_packet(1.0, 0.5, -0.5, 0.8, 1.2, 2.0, 3.0);
    const double alpha = -1.7;
    const auto s = FieldPerturbation::superposition({{1.0, a}, {alpha, b}});
    QuadratureSpec q;
    q.velocity_rel_tol = 1e-12;
    const CausalSolution sa(0.2, kMaxwell, a, q), sb(0.2, kMaxwell, b, q), ss(0.2, kMaxwell, s, q);
    oracle::Sampler rng(99);
    for (int i = 0; i < 10; ++i) {
        const double t = rng.uniform(-1, 2), x = rng.uniform(-1, 1), v = rng.uniform(-2, 2);
        const double lhs = causal_f(ss, t, x, v);
        const double rhs = causal_f(sa, t, x, v) + alpha * causal_f(sb, t, x, v);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1e-3, std::abs(rhs)));
    }
    const double lhs = current_j(ss, 0.7, 0.1);
    const double rhs = current_j(sa, 0.7, 0.1) + alpha * current_j(sb, 0.7, 0.1);
    EXPECT_NEAR(lhs, rhs, 1e-11 * std::abs(rhs));
}

TEST(NuSweep, ZeroFieldAllZero) {
    const auto zero = FieldPerturbation::gaussian_packet(0.0, 0.0, 0.0, 1.0, 1.0);
    const std::vector<double> sweep{0.5, 0.1, 0.0};
    const std::vector<ProbePoint> probes{{0.0, 0.0, 1.0}, {1.0, -1.0, 0.5}};
    const auto r = nu_sweep_f(kMaxwell, zero, sweep, probes, {}, 1e-3);
    for (double e : r.max_error) EXPECT_EQ(e, 0.0);
    EXPECT_TRUE(r.monotone);
}

TEST(NuSweep, TwoStepMonotone) {
    const std::vector<double> sweep{0.5, 0.25};
    const std::vector<ProbePoint> probes{{0.5, 0.0, 1.0}, {1.0, -1.0, 0.5}, {-0.5, 0.5, -1.5}};
    const auto r = nu_sweep_f(kMaxwell, kGauss, sweep, probes, {}, 1.0);
    ASSERT_EQ(r.max_error.size(), 2u);
    EXPECT_LE(r.max_error[1], r.max_error[0] + 1e-9);
    // pointwise as well
    for (std::size_t i = 0; i < probes.size(); ++i) EXPECT_LE(r.rows[probes.size() + i].abs_err, r.rows[i].abs_err + 1e-12);
}

TEST(NuSweep, RejectsBadSweeps) {
    const std::vector<ProbePoint> probes{{0.0, 0.0, 1.0}};
    EXPECT_THROW(nu_sweep_f(kMaxwell, kGauss, std::vector<double>{0.1, 0.2}, probes, {}, 1e-3), InvalidParameter);
    EXPECT_THROW(nu_sweep_f(kMaxwell, kGauss, std::vector<double>{-0.1}, probes, {}, 1e-3), InvalidParameter);
    EXPECT_THROW(nu_sweep_f(kMaxwell, kGauss, std::vector<double>{0.0}, probes, {}, 1e-3), InvalidParameter);
}

TEST(NuSweep, FinalErrorWithinDerivedBound) {
    // |f_nu - f| <= |F'(v)| int (1 - exp(-nu (t-s))) |E| ds
    std::vector<ProbePoint> probes;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) probes.push_back({-1.0 + a, -1.0 + b, -2.0 + 2.0 * c});
    const std::vector<double> sweep{1e-1, 1e-2, 1e-3, 1e-4};
    const auto r = nu_sweep_f(kMaxwell, kGauss, sweep, probes, {}, 1e-3, 1e-9, 2);
    EXPECT_TRUE(r.monotone);
    EXPECT_TRUE(r.final_below_threshold);
    const std::size_t last = (sweep.size() - 1) * probes.size();
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto& row = r.rows[last + i];
        const auto& p = probes[i];
        auto g = [&](long double s) {
            return (1.0L - std::exp(-1e-4L * (p.t - s))) * std::fabs(kGauss(double(s), double(p.x - p.v * (p.t - s))));
        };
        const double bound = std::fabs(double(oracle::maxwell_dF(p.v) * oracle::simpson(g, -12.0L, p.t, 40000)));
        EXPECT_LE(row.abs_err, bound * (1.0 + 1e-6) + 1e-13);
    }
}
