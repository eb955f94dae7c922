#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "vkin/kernels.hpp"

using namespace vkin;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 random_w(std::mt19937_64& rng, double rmin, double rmax)
{
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> r(rmin, rmax);
    Vec3 d{g(rng), g(rng), g(rng)};
    const double s = r(rng) / norm(d);
    return {d[0] * s, d[1] * s, d[2] * s};
}

} // namespace

TEST(Bessel, K0AgainstTable)
{
    // Abramowitz & Stegun table 9.8 / DLMF values
    EXPECT_NEAR(bessel_k0(0.1), 2.4270690247020166, 1e-14);
    EXPECT_NEAR(bessel_k0(1.0), 0.42102443824070834, 1e-15);
    EXPECT_NEAR(bessel_k0(2.0), 0.11389387274953344, 1e-15);
    EXPECT_NEAR(bessel_k0(5.0) / 3.6910983340425942e-3, 1.0, 1e-12);
    EXPECT_NEAR(bessel_k0(20.0) / 5.741237815336524e-10, 1.0, 1e-12);
}

TEST(Potential, FrozenValueAndMonotone)
{
    EXPECT_NEAR(potential(1.0), 0.335928898993, 1e-11);
    EXPECT_LT(potential(10.0), potential(5.0));
    EXPECT_LT(potential(5.0), potential(1.0));
    EXPECT_GT(potential(1e-6), potential(1e-3));
    EXPECT_THROW(potential(0.0), DomainError);
    EXPECT_THROW(potential(-1.0), DomainError);
}

TEST(Potential, FourierTransform)
{
    EXPECT_DOUBLE_EQ(potential_ft(0.0), 1.0);
    EXPECT_NEAR(potential_ft(1.0), std::pow(2.0, -1.5), 1e-15);
    EXPECT_NEAR(potential_ft(3.0), std::pow(10.0, -1.5), 1e-15);
}

TEST(Cutoff, SupportAndSmoothness)
{
    const CutoffSpec s(0.25);
    EXPECT_EQ(cutoff(s.kappa() / 4, s), 0.0);
    EXPECT_EQ(cutoff(s.kappa() / 2, s), 0.0);
    EXPECT_EQ(cutoff(2 * s.kappa(), s), 1.0);
    EXPECT_EQ(cutoff(s.kappa(), s), 1.0);
    const double mid = cutoff(0.75 * s.kappa(), s);
    EXPECT_GT(mid, 0.0);
    EXPECT_LT(mid, 1.0);
    // flat junctions
    const double h = 1e-4 * s.kappa();
    for (double r0 : {s.kappa() / 2, s.kappa()}) {
        const double d = (cutoff(r0 + h, s) - cutoff(r0 - h, s)) / (2 * h);
        EXPECT_LT(std::abs(d), 1e-8) << r0;
    }
    // monotone on the transition
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double v = cutoff(s.kappa() * (0.5 + 0.5 * i / 200.0), s);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Cutoff, RejectsBadKappa)
{
    EXPECT_THROW(CutoffSpec(0.0), DomainError);
    EXPECT_THROW(CutoffSpec(0.5), DomainError);
    EXPECT_THROW(CutoffSpec(-0.1), DomainError);
}

TEST(MemoryKernel, ClosedFormValues)
{
    const CutoffSpec s;
    const auto g0 = memory_kernel(0.0, {1.0, 0.0, 0.0}, s);
    EXPECT_LT(relative_error(g0, RealSymMat3::identity(kKernelScale)), 1e-15);
    EXPECT_NEAR(kKernelScale, 2.46740110027234, 1e-13);

    const auto g1 = memory_kernel(1.0, {1.0, 0.0, 0.0}, s);
    EXPECT_NEAR(g1(0, 0), 0.0, 1e-16);
    EXPECT_NEAR(g1(1, 1), 0.9077061379139902, 1e-15);
    EXPECT_NEAR(g1(2, 2), kKernelScale * std::exp(-1.0), 1e-15);

    const Vec3 w{0.3, -1.2, 0.5};
    EXPECT_LT(memory_kernel(50.0 / norm(w), w, s).frobenius(), 1e-18);
    EXPECT_THROW(memory_kernel(-1e-3, w, s), DomainError);
}

TEST(MemoryKernel, IndefiniteBeyondUnitLag)
{
    const Vec3 w{2.0, 0.0, 0.0};
    const auto ev = eigenvalues(memory_kernel(1.0, w, CutoffSpec{}));
    EXPECT_LT(ev[0], 0.0);
    EXPECT_GT(ev[2], 0.0);
}

TEST(MemoryKernel, Parity)
{
    std::mt19937_64 rng(11);
    const CutoffSpec s;
    for (int i = 0; i < 20; ++i) {
        const Vec3 w = random_w(rng, 0.1, 6.0);
        const Vec3 mw{-w[0], -w[1], -w[2]};
        const double tau = std::uniform_real_distribution<double>(0, 5)(rng);
        EXPECT_EQ(relative_error(memory_kernel(tau, mw, s), memory_kernel(tau, w, s)), 0.0);
        const cplx z(0.7, 1.3);
        EXPECT_LT(relative_error(laplace_kernel(z, mw, s), laplace_kernel(z, w, s)), 1e-15);
    }
}

TEST(LaplaceKernel, AtZeroEqualsLandau)
{
    const CutoffSpec s;
    const auto m = laplace_kernel(0.0, {1.0, 0.0, 0.0}, s);
    EXPECT_NEAR(m(0, 0).real(), 0.0, 1e-16);
    EXPECT_NEAR(m(1, 1).real(), kKernelScale, 1e-15);
    EXPECT_NEAR(m(2, 2).real(), kKernelScale, 1e-15);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
        const Vec3 w = random_w(rng, 0.2, 5.0);
        const auto lz = laplace_kernel(0.0, w, s);
        const auto a = landau_kernel(w, s);
        for (int k = 0; k < 6; ++k) EXPECT_NEAR(lz.c[k].real(), a.c[k], 1e-14);
    }
}

TEST(LaplaceKernel, DeadZoneAndPsd)
{
    const CutoffSpec s;
    const Vec3 tiny{0.1, 0.1, 0.0};
    EXPECT_EQ(laplace_kernel(cplx(1, 2), tiny, s).frobenius(), 0.0);
    EXPECT_THROW(laplace_kernel(0.0, {0.0, 0.0, 0.0}, s), DomainError);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const Vec3 w = random_w(rng, 0.3, 6.0);
        const double z = std::uniform_real_distribution<double>(0, 10)(rng);
        const auto m = laplace_kernel(z, w, s);
        RealSymMat3 re;
        for (int k = 0; k < 6; ++k) {
            re.c[k] = m.c[k].real();
            EXPECT_EQ(m.c[k].imag(), 0.0);
        }
        EXPECT_GE(eigenvalues(re)[0], -1e-14);
    }
}

TEST(LandauKernel, StructureAndValues)
{
    const CutoffSpec s;
    const auto a = landau_kernel({2.0, 0.0, 0.0}, s);
    EXPECT_NEAR(a(1, 1), kPi * kPi / 8, 1e-15);
    EXPECT_NEAR(a(2, 2), 1.2337005501361697, 1e-15);
    EXPECT_EQ(a(0, 0), 0.0);
    EXPECT_EQ(landau_kernel({0.0, 0.0, 0.0}, s).frobenius(), 0.0);
    EXPECT_EQ(landau_kernel({0.2, 0.0, 0.0}, s).frobenius(), 0.0);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        const Vec3 w = random_w(rng, 0.2, 6.0);
        const auto m = landau_kernel(w, s);
        const auto aw = m.apply(w);
        for (double x : aw) EXPECT_LE(std::abs(x), 1e-15 * m.frobenius() * norm(w));
        EXPECT_NEAR(m.trace(), kPi * kPi / (2 * norm(w)) * cutoff(dot(w, w), s), 1e-14);
        EXPECT_GE(eigenvalues(m)[0], -1e-14 * m.frobenius());
    }
}

TEST(TailBound, DominatesKernelTail)
{
    // int_T^inf |G| <= bound; check with a crude Riemann sum of the Frobenius norm
    // divided by sqrt(2) (two transverse eigenvalues) against the axial one.
    const double a = 0.5;
    const double T = 10.0;
    double tail = 0.0;
    const double h = 1e-3;
    for (double t = T; t < T + 200.0; t += h)
        tail += h * kKernelScale * std::exp(-t * a) * std::abs(1.0 - t * a);
    EXPECT_LE(tail, memory_tail_bound(T, a));
    EXPECT_NEAR(memory_tail_bound(0.0, 1.0), kKernelScale, 1e-15);
}

TEST(SymMat3, Eigenvalues)
{
    RealSymMat3 m;
    m(0, 0) = 2;
    m(1, 1) = 3;
    m(2, 2) = 2;
    m(0, 2) = 1;
    const auto ev = eigenvalues(m);
    EXPECT_NEAR(ev[0], 1.0, 1e-14);
    EXPECT_NEAR(ev[1], 3.0, 1e-14);
    EXPECT_NEAR(ev[2], 3.0, 1e-14);
}
