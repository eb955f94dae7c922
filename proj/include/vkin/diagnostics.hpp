#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "vkin/landau_solver.hpp"
#include "vkin/memory_solver.hpp"

namespace vkin {

/// b(t, r) = e^{-tr}/r^2 + t/r - 1/r^2, evaluated without cancellation for small tr.
double b_profile(double t, double r);

/// Flux F[Gamma; state] for the kernel Gamma(w) = (pi^2/4) eta(|w|^2) g(|w|) P_w^perp.
VectorField perp_kernel_flux(const SpectralEngine& engine, const CutoffSpec& spec,
                             const std::function<double(double)>& g, const FieldState& state);

struct BoundaryLayer {
    ScalarField B;
    VectorField B_F;
};

/// B_F(t) = F[(pi^2/4) eta (b(t, |w|/eps)/eps) P^perp; u0] and B = div B_F.
BoundaryLayer boundary_layer(const SpectralEngine& engine, double t, const FieldState& u0, double eps,
                             const CutoffSpec& spec);

/// Right-hand side of the second-derivative identity: div F[(pi^2/4) eta e^{-t|w|/eps}/eps P^perp; u0].
ScalarField boundary_layer_second_derivative(const SpectralEngine& engine, double t, const FieldState& u0,
                                             double eps, const CutoffSpec& spec);

/// State for a Maxwellian with the analytic gradient -v m / sigma^2.
FieldState maxwellian_state(const SpectralEngine& engine, const Maxwellian& m);

/// Trapezoid Laplace transform int_0^T e^{-zt} u(t) dt of a sampled trace. Re z > 0.
std::complex<double> laplace_probe(std::span<const double> times, std::span<const double> values,
                                   std::complex<double> z);
/// Same, per node of the recorded fields (optionally only the listed nodes).
std::vector<std::complex<double>> laplace_probe(const Trajectory& traj, std::complex<double> z,
                                                std::span<const std::size_t> nodes = {});
/// Bound sup|u| e^{-Re z T} / Re z on the part of the transform beyond the recorded horizon.
double laplace_truncation_bound(double sup_abs, double T, std::complex<double> z);

struct PlancherelReport {
    /// int_0^T e^{-At} |u|^2 dt
    double time_side = 0.0;
    /// (1/2pi) int |L u(A/2 + i omega)|^2 d omega, with the large-omega tail added analytically
    double laplace_side = 0.0;
    double relative_gap = 0.0;
};

/// Both sides of int |L u(A/2 + i w)|^2 dw = 2 pi int e^{-At} |u|^2 dt for the trace
/// truncated at its last time. omega is sampled on [-omega_max, omega_max].
PlancherelReport plancherel_check(std::span<const double> times, std::span<const double> values, double A,
                                  double omega_max, int n_omega);

struct KernelIntegralReport {
    std::vector<Vec3> samples;
    std::vector<double> errors;
    double max_error = 0.0;
    /// Largest change of the quadrature when the tau step is halved.
    double max_refinement_change = 0.0;
};

/// Deterministic w samples spread over directions and |w| in [0.5, 6], plus one dead-zone point.
std::vector<Vec3> default_kernel_samples();

/// Composite Simpson in tau of memory_kernel up to T_factor/|w| (step step_factor/|w|)
/// against landau_kernel.
KernelIntegralReport kernel_time_integral_check(const CutoffSpec& spec, double T_factor,
                                                std::span<const Vec3> samples, double step_factor = 0.01);

/// ( int e^{-At} ||f(t)||^2_{H^order_nu} dt )^{1/2}, trapezoid over the recorded times. A >= 1.
double time_averaged_V_norm(const SpectralEngine& engine, const Trajectory& traj, double A, int order, Weight weight);

struct ConvergenceReport {
    std::vector<double> eps_list;
    /// sup over shared recorded times of ||u_eps - u||_{L^2_lambda}
    std::vector<double> errors;
    std::vector<double> memory_wall_seconds;
    /// least-squares slope of log(error) against log(eps)
    double fitted_order = 0.0;
    bool monotone = false;
    double min_ratio = 0.0;
    /// Relative change of the first error when L (and n) are doubled; negative if not run.
    double l_doubling_change = -1.0;
    bool aborted = false;
    std::string abort_reason;
};

/// Least-squares slope of log(y) against log(x).
double fitted_order(std::span<const double> x, std::span<const double> y);

/// Runs the memory solver for each eps and the Landau solver once from u0, comparing
/// at the memory record times. With l_doubling the first eps is rerun on [-2L, 2L]^3
/// at the same spacing.
ConvergenceReport convergence_study(std::span<const double> eps_list, const MemoryConfig& shared,
                                    const std::function<ScalarField(const VelocityGrid&)>& initial,
                                    bool l_doubling = false);

} // namespace vkin
