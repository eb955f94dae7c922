#pragma once

// Brute-force quadrature references for the closed-form kernels. Slow; meant for
// tests and the kernel-check scenario only.

#include <complex>
#include <stdexcept>
#include <vector>

#include "vkin/kernels.hpp"

namespace vkin {

/// Quadrature failed to reach its tolerance.
class OracleError : public std::runtime_error {
public:
    OracleError(const std::string& what, double achieved) : std::runtime_error(what), achieved(achieved) {}
    double achieved;
};

/// Wynn epsilon extrapolation of a sequence of partial sums: (estimate, error estimate).
template <class Real>
std::pair<Real, Real> wynn_epsilon(const std::vector<Real>& partial_sums);

/// int k (x) k (1 + |k|^2)^-3 cos(tau k.w) dk, without eta. The transverse integral is
/// done in closed form; the axial one by zero-split Gauss-Kronrod plus Wynn
/// extrapolation in 50-digit arithmetic.
RealSymMat3 oracle_memory_kernel(double tau, const Vec3& w);

/// int_0^inf e^{-z tau} memory_kernel(tau, w) dtau by piecewise adaptive quadrature,
/// cut where the exponential tail bound is negligible. Re z > 0.
ComplexSymMat3 oracle_laplace(std::complex<double> z, const Vec3& w, const CutoffSpec& spec);

/// pi int k (x) k delta(k.w) |phi_hat(k)|^2 dk as a polar quadrature on the plane k _|_ w.
RealSymMat3 oracle_landau_kernel(const Vec3& w);

/// Radial 3D Fourier transform (2pi)^{-3/2} (4pi/k) int r sin(kr) phi(r) dr of the potential.
double oracle_potential_ft(double k);

} // namespace vkin
