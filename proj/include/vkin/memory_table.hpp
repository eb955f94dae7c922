#pragma once

#include <vector>

#include "vkin/spectral.hpp"

namespace vkin {

/// How the history integral int_0^{t/eps} F[G(tau)] dtau is discretized on the lags.
///  trapezoid: h G(tau_k) with half weights at both ends.
///  product:   the state is interpolated linearly between lags and G is integrated
///             exactly against the hat functions, so the weights sum to int G.
enum class LagQuadrature { trapezoid, product };

/// Spectral images of the lag kernels at tau_k = k dt / eps, truncated at a
/// certified window W.
struct MemoryMultiplierTable {
    double eps = 0.0;
    double dt = 0.0;
    double tail_tol = 0.0;
    LagQuadrature quadrature = LagQuadrature::product;
    /// Certified window: int_{tau_W}^inf |G| <= tail_bound <= tail_tol for every lattice w.
    int window = 0;
    /// Slowest decay rate |w| of the sampled kernel (the certificate's worst case).
    double tail_rate = 0.0;
    double tail_bound = 0.0;
    /// tau_k for k = 0..W.
    std::vector<double> lags;
    /// Materialized lag multipliers for k = 0..multipliers.size()-1.
    ///  trapezoid: G(tau_k).
    ///  product:   (1/h) int G(tau) hat_k(tau) dtau over both neighbouring
    ///             intervals (only [tau_0, tau_1] for k = 0).
    std::vector<SpectralMultiplier> multipliers;

    double step() const { return dt / eps; }
    double lag(int k) const { return k * dt / eps; }
    int materialized() const { return static_cast<int>(multipliers.size()); }
};

inline constexpr int kDefaultMaxWindow = 100000;

/// Smallest |w| over the velocity difference lattice with eta(|w|^2) > 0; never below
/// the continuum dead-zone radius sqrt(kappa/2).
double certified_tail_rate(const VelocityGrid& grid, const CutoffSpec& spec);

/// Minimal W with memory_tail_bound(W dt/eps, rate) <= tail_tol, by bisection on the
/// monotone bound. Throws ConfigError when W would exceed max_window.
int certified_window(double eps, double dt, double tail_tol, double rate, int max_window = kDefaultMaxWindow);

/// int_0^1 t^m e^{-x t} dt for m = 0, 1, 2 and x >= 0.
double exp_moment(int m, double x);

/// (1/h) int G(tau, w) l(tau) dtau for the hat of node k on a lattice of spacing h.
/// left: the interval [tau_k, tau_k + h]; right: [tau_k - h, tau_k] (k >= 1).
RealSymMat3 hat_weight_kernel(int k, double h, const Vec3& w, const CutoffSpec& spec, bool left, bool right);

/// Builds the table. Multipliers are materialized for lags 0..lag_count-1; a negative
/// lag_count materializes the full window 0..W.
MemoryMultiplierTable build_memory_table(const SpectralEngine& engine, const CutoffSpec& spec, double eps,
                                         double dt, double tail_tol, int lag_count = -1,
                                         int max_window = kDefaultMaxWindow,
                                         LagQuadrature quadrature = LagQuadrature::product);

/// Multiplier used for the oldest lag k of the history at time index k: the
/// trapezoid sample G(tau_k) or the one-sided product weight.
SpectralMultiplier endpoint_multiplier(const SpectralEngine& engine, const CutoffSpec& spec,
                                       const MemoryMultiplierTable& table, int k);

} // namespace vkin
