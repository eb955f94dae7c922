#pragma once

// Cutoff Landau equation  d_t u = div( K[u] grad u - P[u] u ),
// K[u] = a_eta * u, P[u] = a_eta * grad u.

#include <vector>

#include "vkin/collision.hpp"
#include "vkin/trajectory.hpp"

namespace vkin {

struct LandauConfig {
    /// Fixed step; 0 selects cfl_factor dv^2 / k_max, re-estimated every step.
    double dt = 0.0;
    double cfl_factor = 0.2;
    double t_end = 0.5;
    /// Record every `record_stride` steps (fixed dt) ...
    int record_stride = 1;
    /// ... or, when non-empty, exactly at these times (steps are clipped to hit them).
    std::vector<double> record_times;
    int n = 32;
    double L = 8.0;
    CutoffSpec cutoff{};
    double blowup_factor = 1e3;

    VelocityGrid grid() const { return VelocityGrid(n, L); }
};

void validate(const LandauConfig& cfg);

/// Landau operator on one grid; holds the a_eta multiplier.
class LandauOperator {
public:
    LandauOperator(const SpectralEngine& engine, const CutoffSpec& spec);

    const SpectralMultiplier& multiplier() const { return mult_; }
    /// K via six convolutions, P_i = sum_j a_ij * d_j u via the padded contraction.
    TensorConvolution coefficients(const ScalarField& u);
    ScalarField rhs(const ScalarField& u);
    /// Largest eigenvalue of K[u] over the grid.
    double k_max(const ScalarField& u);

private:
    const SpectralEngine& engine_;
    SpectralMultiplier mult_;
    FluxWorkspace ws_;
};

TensorConvolution landau_coefficients(LandauOperator& op, const ScalarField& u);
ScalarField landau_rhs(LandauOperator& op, const ScalarField& u);

Trajectory run_landau(const LandauConfig& cfg, const ScalarField& u0);

/// sup-norm distance from m after running the Landau solver started at m.
double landau_stationarity_residual(const LandauConfig& cfg, const Maxwellian& m = {});

} // namespace vkin
