#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "vkin/diagnostics.hpp"

using namespace vkin;
using cplx = std::complex<double>;

namespace {

std::vector<double> uniform_times(double T, int n)
{
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = T * i / n;
    return t;
}

} // namespace

TEST(BProfile, ValuesAndCancellation)
{
    EXPECT_EQ(b_profile(0.0, 2.0), 0.0);
    const double r = 1.7;
    for (double t : {1e-9, 1e-6, 1e-4, 1e-2, 0.3, 2.0, 20.0}) {
        const double x = t * r;
        // series for small x, where expm1(-x) + x itself cancels
        double ref = (std::expm1(-x) + x) / (r * r);
        if (x < 0.1) {
            double term = x * x / 2, sum = 0.0;
            for (int k = 3; std::abs(term) > 1e-20 * x * x; ++k) {
                sum += term;
                term *= -x / k;
            }
            ref = sum / (r * r);
        }
        EXPECT_NEAR(b_profile(t, r) / ref, 1.0, 1e-13) << t;
    }
    // d_t b(0) = 0
    const double h = 1e-6;
    EXPECT_LT(b_profile(h, r) / h, 1e-5);
    // large t: t/r - 1/r^2 up to e^{-tr}
    const double t = 30.0;
    EXPECT_LE(std::abs(b_profile(t, r) - (t / r - 1 / (r * r))), std::exp(-t * r));
    EXPECT_THROW(b_profile(1.0, 0.0), DomainError);
    EXPECT_THROW(b_profile(-1.0, 1.0), DomainError);
}

TEST(BoundaryLayer, VanishesAtMaxwellian)
{
    const VelocityGrid g(16, 8.0);
    const SpectralEngine e(g);
    const CutoffSpec spec;
    const double eps = 0.1;
    const auto m = maxwellian_state(e, Maxwellian{});
    for (double t : {0.0, 0.1 * eps, eps, 10 * eps}) {
        const auto bl = boundary_layer(e, t, m, eps, spec);
        EXPECT_LT(bl.B.max_abs(), 1e-10) << t;
        for (int a = 0; a < 3; ++a) EXPECT_LT(bl.B_F[a].max_abs(), 1e-10) << t;
    }
}

TEST(BoundaryLayer, ZeroAtInitialTime)
{
    const VelocityGrid g(8, 6.0);
    const SpectralEngine e(g);
    auto u = sample(g, [](const Vec3& v) { return std::exp(-dot(v, v) / 1.5) * (1 + 0.3 * v[0]); });
    const auto bl = boundary_layer(e, 0.0, make_state(e, u), 0.1, CutoffSpec{});
    EXPECT_EQ(bl.B.max_abs(), 0.0);
}

TEST(BoundaryLayer, SecondDerivativeIdentity)
{
    // B(0) = 0 and d_t B(0) = 0, so d_tt B(h) ~ (B(2h) - 2 B(h)) / h^2 against the identity's
    // right-hand side at t = h
    const VelocityGrid g(16, 8.0);
    const SpectralEngine e(g);
    const CutoffSpec spec;
    const double eps = 0.1;
    auto u = sample(g, [](const Vec3& v) {
        const Vec3 d{v[0] - 1.0, v[1], v[2]};
        return Maxwellian{}(v) + 0.05 * std::exp(-dot(d, d));
    });
    const auto s = make_state(e, u);
    const double h = 1e-3 * eps;
    const auto b1 = boundary_layer(e, h, s, eps, spec).B;
    const auto b2 = boundary_layer(e, 2 * h, s, eps, spec).B;
    const auto fd = (1.0 / (h * h)) * (b2 - 2.0 * b1);
    const auto rhs = boundary_layer_second_derivative(e, h, s, eps, spec);
    EXPECT_LT((fd - rhs).max_abs() / rhs.max_abs(), 1e-4);
}

TEST(LaplaceProbe, ConstantAndZeroTraces)
{
    const auto t = uniform_times(4.0, 4000);
    const std::vector<double> c(t.size(), 2.0), z(t.size(), 0.0);
    for (const cplx s : {cplx(1.0, 0.0), cplx(0.5, 3.0)}) {
        const cplx exact = 2.0 * (1.0 - std::exp(-s * 4.0)) / s;
        EXPECT_LT(std::abs(laplace_probe(t, c, s) - exact), 1e-5 * std::abs(exact));
        EXPECT_EQ(laplace_probe(t, z, s), cplx(0.0, 0.0));
    }
    EXPECT_THROW(laplace_probe(t, c, cplx(0.0, 1.0)), DomainError);
    EXPECT_NEAR(laplace_truncation_bound(2.0, 4.0, 1.0), 2.0 * std::exp(-4.0), 1e-15);
}

TEST(LaplaceProbe, StationaryLandauRun)
{
    LandauConfig c;
    c.n = 8;
    c.L = 6.0;
    c.t_end = 0.5;
    c.dt = 0.01;
    const auto m = sample(c.grid(), Maxwellian{});
    const auto tr = run_landau(c, m);
    const cplx z(2.0, 1.0);
    const std::vector<std::size_t> nodes{c.grid().flat(4, 4, 4), c.grid().flat(3, 5, 4)};
    const auto lp = laplace_probe(tr, z, nodes);
    ASSERT_EQ(lp.size(), 2u);
    const double T = tr.times.back();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        // m/z up to the e^{-zT} truncation, which is bounded by laplace_truncation_bound
        const cplx full = m[nodes[i]] / z;
        const double tail = laplace_truncation_bound(m.max_abs(), T, z);
        EXPECT_LT(std::abs(lp[i] - full), tail + 1e-4 * std::abs(full));
    }
}

TEST(Plancherel, SmoothTrace)
{
    const auto t = uniform_times(10.0, 4000);
    std::vector<double> u(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) u[i] = 0.5 + std::exp(-t[i]) * std::cos(3 * t[i]);
    const auto r = plancherel_check(t, u, 1.0, 200.0, 40001);
    EXPECT_LT(r.relative_gap, 0.02);
    EXPECT_GT(r.time_side, 0.0);
}

TEST(KernelIntegral, MarkovianLimit)
{
    const CutoffSpec spec;
    const auto samples = default_kernel_samples();
    ASSERT_GE(samples.size(), 11u);
    const auto r = kernel_time_integral_check(spec, 40.0, samples);
    EXPECT_LE(r.max_error, 1e-8);
    EXPECT_LT(r.max_refinement_change, 1e-9);
    // dead-zone sample: both sides vanish
    EXPECT_EQ(r.errors.back(), 0.0);
    EXPECT_THROW(kernel_time_integral_check(spec, 10.0, samples), ConfigError);
}

TEST(VNorm, ConstantTrajectoryAndMonotonicity)
{
    const VelocityGrid g(8, 6.0);
    const SpectralEngine e(g);
    Trajectory tr;
    const auto f = sample(g, Maxwellian{});
    const int n = 2000;
    const double T = 1.0;
    for (int i = 0; i <= n; ++i) tr.record(T * i / n, f);
    const double h1 = weighted_sobolev_norm(e, f, 1, Weight::lambda);
    const double A = 2.0;
    const double v = time_averaged_V_norm(e, tr, A, 1, Weight::lambda);
    EXPECT_NEAR(v * v, h1 * h1 * (1 - std::exp(-A * T)) / A, 1e-6 * h1 * h1);
    EXPECT_GE(time_averaged_V_norm(e, tr, 1.0, 1, Weight::lambda), v);
    EXPECT_THROW(time_averaged_V_norm(e, tr, 0.5, 1, Weight::lambda), ConfigError);

    Trajectory zero;
    for (int i = 0; i <= 3; ++i) zero.record(0.1 * i, ScalarField(g));
    EXPECT_EQ(time_averaged_V_norm(e, zero, 1.0, 2, Weight::lambda_tilde), 0.0);
}

TEST(FittedOrder, ExactPowerLaw)
{
    const std::vector<double> x{0.2, 0.1, 0.05}, y{0.4, 0.1, 0.025};
    EXPECT_NEAR(fitted_order(x, y), 2.0, 1e-12);
    EXPECT_THROW(fitted_order(std::vector<double>{1.0}, std::vector<double>{1.0}), ConfigError);
}

TEST(Convergence, SmallStudy)
{
    MemoryConfig c;
    c.n = 8;
    c.L = 6.0;
    c.t_end = 0.1;
    const std::vector<double> eps{0.2, 0.1};
    auto init = [](const VelocityGrid& g) {
        auto u = sample(g, Maxwellian{});
        u.axpy(0.05, sample(g, [](const Vec3& v) {
                   const Vec3 d{v[0] - 1.0, v[1], v[2]};
                   return std::exp(-dot(d, d));
               }));
        return u;
    };
    const auto r = convergence_study(eps, c, init);
    ASSERT_EQ(r.errors.size(), 2u);
    for (double x : r.errors) EXPECT_TRUE(std::isfinite(x));
    EXPECT_FALSE(r.aborted);
    EXPECT_LT(r.l_doubling_change, 0.0);
    EXPECT_THROW(convergence_study(std::vector<double>{0.1, 0.2}, c, init), ConfigError);
}
