#include "vkin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vkin {

namespace {

using cplx = std::complex<double>;

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

} // namespace

struct SpectralEngine::Plans {
    fftw_plan r2c_pad = nullptr;
    fftw_plan c2r_pad = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    ~Plans()
    {
        for (auto p : {r2c_pad, c2r_pad, r2c, c2r})
            if (p) fftw_destroy_plan(p);
    }
};

double SpectralMultiplier::max_frobenius() const
{
    double best = 0.0;
    for (std::size_t q = 0; q < size(); ++q) {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) {
            const double w = RealSymMat3::pairs[k][0] == RealSymMat3::pairs[k][1] ? 1.0 : 2.0;
            s += w * c[k][q] * c[k][q];
        }
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

SpectralEngine::SpectralEngine(const VelocityGrid& grid)
    : grid_(grid), padded_real_(0), padded_half_(0), half_(0), plans_(std::make_unique<Plans>())
{
    const int n = grid_.n();
    const int N = grid_.n_pad();
    padded_real_ = static_cast<std::size_t>(N) * N * N;
    padded_half_ = static_cast<std::size_t>(N) * N * (N / 2 + 1);
    half_ = static_cast<std::size_t>(n) * n * (n / 2 + 1);

    RealBuffer rp(padded_real_);
    ComplexBuffer cp(padded_half_);
    RealBuffer r(grid_.size());
    ComplexBuffer c(half_);
    plans_->r2c_pad = fftw_plan_dft_r2c_3d(N, N, N, rp.data(), as_fftw(cp.data()), FFTW_ESTIMATE);
    plans_->c2r_pad = fftw_plan_dft_c2r_3d(N, N, N, as_fftw(cp.data()), rp.data(), FFTW_ESTIMATE);
    plans_->r2c = fftw_plan_dft_r2c_3d(n, n, n, r.data(), as_fftw(c.data()), FFTW_ESTIMATE);
    plans_->c2r = fftw_plan_dft_c2r_3d(n, n, n, as_fftw(c.data()), r.data(), FFTW_ESTIMATE);
}

SpectralEngine::~SpectralEngine() = default;

double SpectralEngine::wavenumber(int p) const
{
    const int n = grid_.n();
    if (p == n / 2) return 0.0;
    const int k = p < n / 2 ? p : p - n;
    return 2.0 * std::numbers::pi * k / (n * grid_.dv());
}

double SpectralEngine::padded_wavenumber(int p) const
{
    const int N = grid_.n_pad();
    if (p == N / 2) return 0.0;
    const int k = p < N / 2 ? p : p - N;
    return 2.0 * std::numbers::pi * k / (N * grid_.dv());
}

ComplexBuffer SpectralEngine::forward(const ScalarField& f) const
{
    if (!(f.grid() == grid_)) throw ConfigError("spectral: field grid does not match engine grid");
    RealBuffer in(f.values().begin(), f.values().end());
    ComplexBuffer out(half_);
    fftw_execute_dft_r2c(plans_->r2c, in.data(), as_fftw(out.data()));
    return out;
}

ScalarField SpectralEngine::inverse(const ComplexBuffer& spectrum) const
{
    ComplexBuffer scratch(spectrum);
    RealBuffer out(grid_.size());
    fftw_execute_dft_c2r(plans_->c2r, as_fftw(scratch.data()), out.data());
    const double scale = 1.0 / static_cast<double>(grid_.size());
    ScalarField f(grid_);
    for (std::size_t i = 0; i < out.size(); ++i) f[i] = out[i] * scale;
    return f;
}

ScalarField SpectralEngine::derivative(const ScalarField& f, const std::array<int, 3>& alpha) const
{
    if (alpha[0] == 0 && alpha[1] == 0 && alpha[2] == 0) return f;
    auto s = forward(f);
    const int n = grid_.n();
    const int nh = n / 2 + 1;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < nh; ++k) {
                cplx factor(1.0, 0.0);
                const double xi[3] = {wavenumber(i), wavenumber(j), wavenumber(k)};
                for (int d = 0; d < 3; ++d)
                    for (int a = 0; a < alpha[d]; ++a) factor *= cplx(0.0, xi[d]);
                s[(static_cast<std::size_t>(i) * n + j) * nh + k] *= factor;
            }
        }
    }
    return inverse(s);
}

VectorField SpectralEngine::gradient(const ScalarField& f) const
{
    const auto s = forward(f);
    const int n = grid_.n();
    const int nh = n / 2 + 1;
    VectorField g(grid_);
    ComplexBuffer d(half_);
    for (int axis = 0; axis < 3; ++axis) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < nh; ++k) {
                    const int idx[3] = {i, j, k};
                    const std::size_t q = (static_cast<std::size_t>(i) * n + j) * nh + k;
                    d[q] = cplx(0.0, wavenumber(idx[axis])) * s[q];
                }
        g[axis] = inverse(d);
    }
    return g;
}

ScalarField SpectralEngine::divergence(const VectorField& flux) const
{
    const int n = grid_.n();
    const int nh = n / 2 + 1;
    ComplexBuffer acc(half_, cplx(0.0, 0.0));
    for (int axis = 0; axis < 3; ++axis) {
        const auto s = forward(flux[axis]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < nh; ++k) {
                    const int idx[3] = {i, j, k};
                    const std::size_t q = (static_cast<std::size_t>(i) * n + j) * nh + k;
                    acc[q] += cplx(0.0, wavenumber(idx[axis])) * s[q];
                }
    }
    return inverse(acc);
}

PaddedSpectrum SpectralEngine::forward_padded(const ScalarField& f) const
{
    if (!(f.grid() == grid_)) throw ConfigError("spectral: field grid does not match engine grid");
    const int n = grid_.n();
    const std::size_t N = static_cast<std::size_t>(grid_.n_pad());
    RealBuffer in(padded_real_, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double* src = f.values().data() + grid_.flat(i, j, 0);
            std::copy(src, src + n, in.data() + (i * N + j) * N);
        }
    PaddedSpectrum out{ComplexBuffer(padded_half_)};
    fftw_execute_dft_r2c(plans_->r2c_pad, in.data(), as_fftw(out.data.data()));
    return out;
}

ScalarField SpectralEngine::inverse_padded(const ComplexBuffer& spectrum) const
{
    ComplexBuffer scratch(spectrum);
    RealBuffer work(padded_real_);
    ScalarField f(grid_);
    inverse_padded_into(scratch, work, f.values());
    return f;
}

void SpectralEngine::inverse_padded_into(ComplexBuffer& spectrum, RealBuffer& work, std::span<double> out) const
{
    if (spectrum.size() != padded_half_ || work.size() != padded_real_ || out.size() != grid_.size())
        throw ConfigError("inverse_padded_into: buffer sizes do not match the engine grid");
    fftw_execute_dft_c2r(plans_->c2r_pad, as_fftw(spectrum.data()), work.data());
    const int n = grid_.n();
    const std::size_t N = static_cast<std::size_t>(grid_.n_pad());
    const double scale = 1.0 / static_cast<double>(padded_real_);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double* src = work.data() + (i * N + j) * N;
            double* dst = out.data() + grid_.flat(i, j, 0);
            for (int k = 0; k < n; ++k) dst[k] = src[k] * scale;
        }
}

ScalarField SpectralEngine::inverse_padded_derivative(const ComplexBuffer& spectrum, int axis) const
{
    return inverse_padded(padded_derivative(PaddedSpectrum{spectrum}, axis).data);
}

PaddedSpectrum SpectralEngine::padded_derivative(const PaddedSpectrum& s, int axis) const
{
    const int N = grid_.n_pad();
    const int Nh = N / 2 + 1;
    PaddedSpectrum out{ComplexBuffer(padded_half_)};
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < Nh; ++k) {
                const int idx[3] = {i, j, k};
                const std::size_t q = (static_cast<std::size_t>(i) * N + j) * Nh + k;
                out.data[q] = cplx(0.0, padded_wavenumber(idx[axis])) * s.data[q];
            }
    return out;
}

ScalarField SpectralEngine::convolve(std::span<const double> multiplier, const PaddedSpectrum& f) const
{
    if (multiplier.size() != padded_half_ || f.data.size() != padded_half_)
        throw ConfigError("convolve: multiplier or spectrum does not match the engine grid");
    ComplexBuffer prod(padded_half_);
    for (std::size_t q = 0; q < padded_half_; ++q) prod[q] = multiplier[q] * f.data[q];
    return inverse_padded(prod);
}

ScalarField SpectralEngine::convolve(std::span<const double> multiplier, const ScalarField& f) const
{
    return convolve(multiplier, forward_padded(f));
}

SpectralMultiplier SpectralEngine::build_multiplier(const TensorKernel& kernel) const
{
    const int n = grid_.n();
    const int N = grid_.n_pad();
    const double dv = grid_.dv();
    std::array<RealBuffer, 6> samples;
    for (auto& s : samples) s.assign(padded_real_, 0.0);

    for (int i = 0; i < N; ++i) {
        if (i == n) continue;
        for (int j = 0; j < N; ++j) {
            if (j == n) continue;
            for (int k = 0; k < N; ++k) {
                if (k == n) continue;
                const Vec3 w{padded_offset(i) * dv, padded_offset(j) * dv, padded_offset(k) * dv};
                const RealSymMat3 m = kernel(w);
                const std::size_t q = (static_cast<std::size_t>(i) * N + j) * N + k;
                for (int c = 0; c < 6; ++c) samples[c][q] = m.c[c];
            }
        }
    }

    SpectralMultiplier out;
    const double dv3 = grid_.cell_volume();
    ComplexBuffer spec(padded_half_);
    double max_re = 0.0;
    double max_im = 0.0;
    for (int c = 0; c < 6; ++c) {
        fftw_execute_dft_r2c(plans_->r2c_pad, samples[c].data(), as_fftw(spec.data()));
        out.c[c].resize(padded_half_);
        for (std::size_t q = 0; q < padded_half_; ++q) {
            out.c[c][q] = dv3 * spec[q].real();
            max_re = std::max(max_re, std::abs(spec[q].real()));
            max_im = std::max(max_im, std::abs(spec[q].imag()));
        }
    }
    out.discarded_imag_ratio = max_re > 0.0 ? max_im / max_re : max_im;
    for (int c = 0; c < 6; ++c)
        out.nonzero[c] = std::any_of(out.c[c].begin(), out.c[c].end(), [](double x) { return x != 0.0; });
    return out;
}

SpectralMultiplier build_landau_multiplier(const SpectralEngine& engine, const CutoffSpec& spec)
{
    return engine.build_multiplier([&spec](const Vec3& w) { return landau_kernel(w, spec); });
}

double weighted_sobolev_norm(const SpectralEngine& engine, const ScalarField& f, int order, Weight weight)
{
    if (order < 0 || order > kMaxSobolevOrder)
        throw ConfigError("weighted_sobolev_norm: order must lie in [0, " + std::to_string(kMaxSobolevOrder) + "]");
    const auto& g = f.grid();
    std::vector<double> nu(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) nu[i] = weight_value(weight, g.point(i));

    double total = 0.0;
    for (int a = 0; a <= order; ++a)
        for (int b = 0; a + b <= order; ++b)
            for (int c = 0; a + b + c <= order; ++c) {
                const ScalarField d = engine.derivative(f, {a, b, c});
                for (std::size_t i = 0; i < g.size(); ++i) total += nu[i] * d[i] * d[i];
            }
    return std::sqrt(total * g.cell_volume());
}

} // namespace vkin
