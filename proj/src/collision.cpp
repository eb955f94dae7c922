#include "vkin/collision.hpp"

#include <algorithm>

namespace vkin {

namespace {

using cplx = std::complex<double>;

constexpr std::array<int, 6> kRow{0, 0, 0, 1, 1, 2};
constexpr std::array<int, 6> kCol{0, 1, 2, 1, 2, 2};

// Padded spectrum of (G_ij * d_j u) summed over j, written to ws.prod.
void contract_gradient(const SpectralEngine& engine, const SpectralMultiplier& mult, const FieldState& s, int i,
                       FluxWorkspace& ws)
{
    const int N = engine.grid().n_pad();
    const int Nh = N / 2 + 1;
    const std::array<int, 3> comp{RealSymMat3::index(i, 0), RealSymMat3::index(i, 1), RealSymMat3::index(i, 2)};
    if (s.grad_spectra) {
        const auto& g = *s.grad_spectra;
        const std::size_t M = engine.padded_spectrum_size();
        for (std::size_t q = 0; q < M; ++q) {
            cplx acc(0.0, 0.0);
            for (int j = 0; j < 3; ++j)
                if (mult.nonzero[comp[j]]) acc += mult.c[comp[j]][q] * g[j].data[q];
            ws.prod[q] = acc;
        }
        return;
    }
    const auto& u = s.spectrum.data;
    std::size_t q = 0;
    for (int a = 0; a < N; ++a) {
        const double xa = ws.xi[0][a];
        for (int b = 0; b < N; ++b) {
            const double xb = ws.xi[1][b];
            for (int c = 0; c < Nh; ++c, ++q) {
                const double xc = ws.xi[2][c];
                double m = 0.0;
                if (mult.nonzero[comp[0]]) m += mult.c[comp[0]][q] * xa;
                if (mult.nonzero[comp[1]]) m += mult.c[comp[1]][q] * xb;
                if (mult.nonzero[comp[2]]) m += mult.c[comp[2]][q] * xc;
                // i m u_hat
                ws.prod[q] = cplx(-m * u[q].imag(), m * u[q].real());
            }
        }
    }
}

void multiply(const std::vector<double>& m, const PaddedSpectrum& s, FluxWorkspace& ws)
{
    const std::size_t M = m.size();
    for (std::size_t q = 0; q < M; ++q) ws.prod[q] = m[q] * s.data[q];
}

} // namespace

FieldState make_state(const SpectralEngine& engine, ScalarField u)
{
    VectorField grad = engine.gradient(u);
    PaddedSpectrum spectrum = engine.forward_padded(u);
    return FieldState{std::move(u), std::move(grad), std::move(spectrum), std::nullopt};
}

FieldState make_state(const SpectralEngine& engine, ScalarField u, VectorField exact_grad)
{
    PaddedSpectrum spectrum = engine.forward_padded(u);
    std::array<PaddedSpectrum, 3> gs{engine.forward_padded(exact_grad[0]), engine.forward_padded(exact_grad[1]),
                                     engine.forward_padded(exact_grad[2])};
    return FieldState{std::move(u), std::move(exact_grad), std::move(spectrum), std::move(gs)};
}

FluxWorkspace::FluxWorkspace(const SpectralEngine& engine)
    : prod(engine.padded_spectrum_size()), work(engine.padded_real_size()), conv(engine.grid().size())
{
    const int N = engine.grid().n_pad();
    for (int d = 0; d < 3; ++d) {
        xi[d].resize(N);
        for (int p = 0; p < N; ++p) xi[d][p] = engine.padded_wavenumber(p);
    }
}

TensorConvolution tensor_convolution(const SpectralEngine& engine, const SpectralMultiplier& mult,
                                     const FieldState& state, FluxWorkspace& ws)
{
    const auto& g = engine.grid();
    TensorConvolution out{SymTensorField(g), VectorField(g)};
    for (int c = 0; c < 6; ++c) {
        if (!mult.nonzero[c]) continue;
        multiply(mult.c[c], state.spectrum, ws);
        engine.inverse_padded_into(ws.prod, ws.work, out.K.c[c].values());
    }
    for (int i = 0; i < 3; ++i) {
        contract_gradient(engine, mult, state, i, ws);
        engine.inverse_padded_into(ws.prod, ws.work, out.P[i].values());
    }
    return out;
}

void accumulate_flux(const SpectralEngine& engine, const SpectralMultiplier& mult, const FieldState& state,
                     double weight, VectorField& flux, FluxWorkspace& ws)
{
    const std::size_t n3 = engine.grid().size();
    const auto& u = state.u.values();
    for (int c = 0; c < 6; ++c) {
        if (!mult.nonzero[c]) continue;
        multiply(mult.c[c], state.spectrum, ws);
        engine.inverse_padded_into(ws.prod, ws.work, ws.conv);
        const int i = kRow[c];
        const int j = kCol[c];
        const double* gj = state.grad[j].values().data();
        double* fi = flux[i].values().data();
        for (std::size_t p = 0; p < n3; ++p) fi[p] += weight * ws.conv[p] * gj[p];
        if (i != j) {
            const double* gi = state.grad[i].values().data();
            double* fj = flux[j].values().data();
            for (std::size_t p = 0; p < n3; ++p) fj[p] += weight * ws.conv[p] * gi[p];
        }
    }
    for (int i = 0; i < 3; ++i) {
        contract_gradient(engine, mult, state, i, ws);
        engine.inverse_padded_into(ws.prod, ws.work, ws.conv);
        double* fi = flux[i].values().data();
        for (std::size_t p = 0; p < n3; ++p) fi[p] -= weight * ws.conv[p] * u[p];
    }
}

VectorField flux_from_coefficients(const TensorConvolution& kp, const FieldState& state)
{
    const auto& g = state.u.grid();
    VectorField F(g);
    for (std::size_t p = 0; p < g.size(); ++p)
        for (int i = 0; i < 3; ++i) {
            double s = -kp.P[i][p] * state.u[p];
            for (int j = 0; j < 3; ++j) s += kp.K.c[RealSymMat3::index(i, j)][p] * state.grad[j][p];
            F[i][p] = s;
        }
    return F;
}

void add_scaled(VectorField& out, double s, const VectorField& x)
{
    for (int i = 0; i < 3; ++i) out[i].axpy(s, x[i]);
}

} // namespace vkin
