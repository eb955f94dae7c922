#pragma once

// FFT machinery on a VelocityGrid: periodic spectral derivatives on the n^3
// grid and linear (zero-padded to (2n)^3) convolution against kernels sampled
// on the padded difference lattice.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <new>
#include <span>
#include <vector>

#include <fftw3.h>

#include "vkin/grid.hpp"

namespace vkin {

template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) noexcept
    {
    }
    T* allocate(std::size_t n)
    {
        void* p = fftw_malloc(n * sizeof(T));
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
    template <class U>
    bool operator==(const FftwAllocator<U>&) const noexcept
    {
        return true;
    }
};

using RealBuffer = std::vector<double, FftwAllocator<double>>;
using ComplexBuffer = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

/// r2c half spectrum of a field zero-padded to (2n)^3.
struct PaddedSpectrum {
    ComplexBuffer data;
};

/// dv^3 times the DFT of a real, even, symmetric-tensor kernel sampled on the
/// padded difference lattice. Even kernels have real transforms, so only the
/// real half spectrum is kept (components in SymMat3 order).
struct SpectralMultiplier {
    std::array<std::vector<double>, 6> c;
    /// Components that are identically zero (e.g. off-diagonals of an isotropic kernel).
    std::array<bool, 6> nonzero{true, true, true, true, true, true};
    /// Largest |Im| / max|Re| seen when the imaginary part was discarded.
    double discarded_imag_ratio = 0.0;

    std::size_t size() const { return c[0].size(); }
    /// Largest Frobenius norm over frequencies.
    double max_frobenius() const;
};

using TensorKernel = std::function<RealSymMat3(const Vec3&)>;

class SpectralEngine {
public:
    explicit SpectralEngine(const VelocityGrid& grid);
    ~SpectralEngine();
    SpectralEngine(const SpectralEngine&) = delete;
    SpectralEngine& operator=(const SpectralEngine&) = delete;

    const VelocityGrid& grid() const { return grid_; }
    std::size_t padded_spectrum_size() const { return padded_half_; }
    std::size_t spectrum_size() const { return half_; }

    // Unpadded periodic transforms (unnormalized forward, normalized inverse).
    ComplexBuffer forward(const ScalarField& f) const;
    ScalarField inverse(const ComplexBuffer& spectrum) const;

    /// Periodic spectral derivative D^alpha on the unpadded grid (Nyquist modes dropped).
    ScalarField derivative(const ScalarField& f, const std::array<int, 3>& alpha) const;
    VectorField gradient(const ScalarField& f) const;
    ScalarField divergence(const VectorField& flux) const;

    PaddedSpectrum forward_padded(const ScalarField& f) const;
    /// Inverse padded transform, normalized and cropped back to the n^3 grid.
    ScalarField inverse_padded(const ComplexBuffer& spectrum) const;
    /// Same, but consumes `spectrum` (overwritten) and uses caller-owned scratch of
    /// (2n)^3 doubles; writes n^3 values to `out`.
    void inverse_padded_into(ComplexBuffer& spectrum, RealBuffer& work, std::span<double> out) const;
    /// Padded-grid derivative of a padded spectrum, inverted and cropped.
    ScalarField inverse_padded_derivative(const ComplexBuffer& spectrum, int axis) const;
    std::size_t padded_real_size() const { return padded_real_; }
    /// i xi_axis times the padded spectrum (padded-lattice derivative, Nyquist dropped).
    PaddedSpectrum padded_derivative(const PaddedSpectrum& s, int axis) const;

    /// Linear convolution: sum_j K(v_i - v_j) f(v_j) dv^3 for one multiplier component.
    ScalarField convolve(std::span<const double> multiplier, const PaddedSpectrum& f) const;
    ScalarField convolve(std::span<const double> multiplier, const ScalarField& f) const;

    /// Multiplier of an even tensor kernel; lattice offsets equal to -n on any axis are
    /// zeroed (they never reach the cropped output).
    SpectralMultiplier build_multiplier(const TensorKernel& kernel) const;

    /// Lattice offset of padded index p on one axis; p = n maps to -n.
    int padded_offset(int p) const { return p < grid_.n() ? p : p - grid_.n_pad(); }

    /// Angular wavenumber for index p on the padded / unpadded axis; zero at Nyquist.
    double padded_wavenumber(int p) const;
    double wavenumber(int p) const;

private:
    struct Plans;

    VelocityGrid grid_;
    std::size_t padded_real_;
    std::size_t padded_half_;
    std::size_t half_;
    std::unique_ptr<Plans> plans_;
};

/// The Landau multiplier: transform of a_eta sampled on the padded lattice.
SpectralMultiplier build_landau_multiplier(const SpectralEngine& engine, const CutoffSpec& spec);

/// Highest derivative order accepted by weighted_sobolev_norm.
inline constexpr int kMaxSobolevOrder = 4;

/// sqrt( sum_{|alpha| <= order} sum_grid nu(v) |D^alpha f|^2 dv^3 ) with spectral D^alpha.
double weighted_sobolev_norm(const SpectralEngine& engine, const ScalarField& f, int order, Weight weight);

} // namespace vkin
