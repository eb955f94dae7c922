#pragma once

// Bilinear collision flux shared by the memory equation, the Landau equation and
// the boundary layer:
//
//   F_i = sum_j (G * u)_ij d_j u  -  sum_j (G_ij * d_j u) u
//
// for a symmetric tensor kernel G given by its spectral multiplier.

#include <optional>

#include "vkin/spectral.hpp"

namespace vkin {

/// A density together with the transforms the flux needs.
struct FieldState {
    ScalarField u;
    /// Gradient multiplied pointwise against (G * u); unpadded spectral by default.
    VectorField grad;
    PaddedSpectrum spectrum;
    /// Padded spectra of the gradient fed into the convolution. When empty the
    /// padded-lattice derivative i xi u_hat is used instead.
    std::optional<std::array<PaddedSpectrum, 3>> grad_spectra;
};

FieldState make_state(const SpectralEngine& engine, ScalarField u);
/// State with an externally supplied (e.g. analytic) gradient, used both pointwise
/// and inside the convolution.
FieldState make_state(const SpectralEngine& engine, ScalarField u, VectorField exact_grad);

/// Per-thread scratch for the flux kernels.
struct FluxWorkspace {
    explicit FluxWorkspace(const SpectralEngine& engine);
    ComplexBuffer prod;
    RealBuffer work;
    std::vector<double> conv;
    /// i xi on each padded axis, indexed by the padded index.
    std::array<std::vector<double>, 3> xi;
};

/// (G * u) as six components and (G * grad u) contracted to a vector.
struct TensorConvolution {
    SymTensorField K;
    VectorField P;
};

TensorConvolution tensor_convolution(const SpectralEngine& engine, const SpectralMultiplier& mult,
                                     const FieldState& state, FluxWorkspace& ws);

/// flux += weight * F[G; state] without materializing K and P.
void accumulate_flux(const SpectralEngine& engine, const SpectralMultiplier& mult, const FieldState& state,
                     double weight, VectorField& flux, FluxWorkspace& ws);

/// F from precomputed K and P: F_i = sum_j K_ij d_j u - P_i u.
VectorField flux_from_coefficients(const TensorConvolution& kp, const FieldState& state);

/// out += s * x, componentwise.
void add_scaled(VectorField& out, double s, const VectorField& x);

} // namespace vkin
