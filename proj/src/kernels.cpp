#include "vkin/kernels.hpp"

#include <Eigen/Dense>

namespace vkin {

namespace {

// e^{-1/s} for s > 0, else 0.
double flat_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Smooth step: 0 for s <= 0, 1 for s >= 1, all derivatives vanish at both ends.
double smooth_step(double s)
{
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = flat_exp(s);
    const double b = flat_exp(1.0 - s);
    return a / (a + b);
}

} // namespace

CutoffSpec::CutoffSpec(double kappa) : kappa_(kappa)
{
    if (!(kappa > 0.0 && kappa < 0.5))
        throw DomainError("cutoff kappa must lie in (0, 1/2), got " + std::to_string(kappa));
}

std::array<double, 3> eigenvalues(const RealSymMat3& m)
{
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver;
    solver.compute(a, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev(0), ev(1), ev(2)};
}

double potential(double r)
{
    if (!(r > 0.0)) throw DomainError("potential: distance must be positive");
    return std::sqrt(2.0 / std::numbers::pi) * bessel_k0(r);
}

double potential_ft(double k)
{
    if (!(k >= 0.0)) throw DomainError("potential_ft: wavevector magnitude must be >= 0");
    const double s = 1.0 + k * k;
    return 1.0 / (s * std::sqrt(s));
}

double cutoff(double r, const CutoffSpec& spec)
{
    const double half = 0.5 * spec.kappa();
    return smooth_step((std::abs(r) - half) / half);
}

ComplexSymMat3 laplace_kernel(std::complex<double> z, const Vec3& w, const CutoffSpec& spec)
{
    if (z.real() < 0.0) throw DomainError("laplace_kernel: requires Re z >= 0");
    const double w2 = dot(w, w);
    if (w2 == 0.0) throw DomainError("laplace_kernel: |w| must be positive");
    if (w2 <= spec.dead_zone_sq()) return {};

    const double a = std::sqrt(w2);
    const double eta = cutoff(w2, spec);
    const Vec3 u{w[0] / a, w[1] / a, w[2] / a};
    const std::complex<double> perp = kKernelScale * eta / (z + a);
    const std::complex<double> par = kKernelScale * eta * z / ((z + a) * (z + a));

    ComplexSymMat3 m = ComplexSymMat3::identity(perp);
    m += ComplexSymMat3::outer(u, par - perp);
    return m;
}

RealSymMat3 memory_kernel(double tau, const Vec3& w, const CutoffSpec& spec)
{
    if (!(tau >= 0.0)) throw DomainError("memory_kernel: lag must be >= 0");
    const double w2 = dot(w, w);
    if (w2 <= spec.dead_zone_sq()) return {};

    const double a = std::sqrt(w2);
    const double amp = kKernelScale * cutoff(w2, spec) * std::exp(-tau * a);
    // amp * (I - tau |w| w_hat w_hat) = amp * I - amp * tau / |w| * w w
    RealSymMat3 m = RealSymMat3::identity(amp);
    m += RealSymMat3::outer(w, -amp * tau / a);
    return m;
}

RealSymMat3 landau_kernel(const Vec3& w, const CutoffSpec& spec)
{
    const double w2 = dot(w, w);
    if (w2 <= spec.dead_zone_sq()) return {};

    const double a = std::sqrt(w2);
    const double s = kKernelScale * cutoff(w2, spec) / a;
    RealSymMat3 m = RealSymMat3::identity(s);
    m += RealSymMat3::outer(w, -s / w2);
    return m;
}

double memory_tail_bound(double T, double rate)
{
    if (!(rate > 0.0) || !(T >= 0.0)) throw DomainError("memory_tail_bound: needs rate > 0, T >= 0");
    return kKernelScale * (1.0 + T * rate) * std::exp(-T * rate) / rate;
}

} // namespace vkin
