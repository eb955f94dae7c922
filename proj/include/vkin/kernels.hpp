#pragma once

// Closed-form kernels of the cutoff memory/Landau model with the Bessel
// potential phi(x) = sqrt(2/pi) K0(|x|), whose Fourier transform is
// (1 + |k|^2)^(-3/2).

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vkin {

using Vec3 = std::array<double, 3>;

/// Thrown when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Overall scale pi^2/4 shared by the memory kernel, its Laplace transform and a_eta.
inline constexpr double kKernelScale = std::numbers::pi * std::numbers::pi / 4.0;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Smooth cutoff eta with eta(r) = 0 for r <= kappa/2 and eta(r) = 1 for r >= kappa.
/// The argument of eta is a squared relative speed |w|^2.
class CutoffSpec {
public:
    explicit CutoffSpec(double kappa = 0.25);

    double kappa() const { return kappa_; }
    /// |w|^2 at or below which eta vanishes.
    double dead_zone_sq() const { return 0.5 * kappa_; }
    /// Smallest |w| with eta(|w|^2) > 0.
    double min_active_speed() const { return std::sqrt(0.5 * kappa_); }

private:
    double kappa_;
};

/// Real or complex symmetric 3x3 matrix; only the upper triangle is stored.
template <class T>
struct SymMat3 {
    // xx, xy, xz, yy, yz, zz
    std::array<T, 6> c{};

    static constexpr int index(int i, int j)
    {
        if (i > j) std::swap(i, j);
        constexpr int row_start[3] = {0, 3, 5};
        return row_start[i] + (j - i);
    }
    /// Component pairs (i, j) in storage order.
    static constexpr std::array<std::array<int, 2>, 6> pairs{{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

    T operator()(int i, int j) const { return c[index(i, j)]; }
    T& operator()(int i, int j) { return c[index(i, j)]; }

    static SymMat3 identity(T scale = T(1))
    {
        SymMat3 m;
        m.c[0] = m.c[3] = m.c[5] = scale;
        return m;
    }
    /// s * w (x) w for a unit or non-unit vector w.
    static SymMat3 outer(const Vec3& w, T s = T(1))
    {
        SymMat3 m;
        for (int k = 0; k < 6; ++k) m.c[k] = s * w[pairs[k][0]] * w[pairs[k][1]];
        return m;
    }

    T trace() const { return c[0] + c[3] + c[5]; }

    std::array<T, 3> apply(const Vec3& v) const
    {
        std::array<T, 3> r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    /// Frobenius norm, counting off-diagonal entries twice.
    double frobenius() const
    {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) {
            const double a = std::abs(c[k]);
            s += (pairs[k][0] == pairs[k][1] ? 1.0 : 2.0) * a * a;
        }
        return std::sqrt(s);
    }

    SymMat3& operator+=(const SymMat3& o)
    {
        for (int k = 0; k < 6; ++k) c[k] += o.c[k];
        return *this;
    }
    SymMat3& operator-=(const SymMat3& o)
    {
        for (int k = 0; k < 6; ++k) c[k] -= o.c[k];
        return *this;
    }
    SymMat3& operator*=(T s)
    {
        for (auto& x : c) x *= s;
        return *this;
    }
    friend SymMat3 operator+(SymMat3 a, const SymMat3& b) { return a += b; }
    friend SymMat3 operator-(SymMat3 a, const SymMat3& b) { return a -= b; }
    friend SymMat3 operator*(SymMat3 a, T s) { return a *= s; }
    friend SymMat3 operator*(T s, SymMat3 a) { return a *= s; }
};

using RealSymMat3 = SymMat3<double>;
using ComplexSymMat3 = SymMat3<std::complex<double>>;

/// Relative Frobenius distance |a - b| / |b| (absolute when |b| == 0).
template <class T>
double relative_error(const SymMat3<T>& a, const SymMat3<T>& b)
{
    const double diff = (a - b).frobenius();
    const double ref = b.frobenius();
    return ref > 0.0 ? diff / ref : diff;
}

/// Eigenvalues in ascending order.
std::array<double, 3> eigenvalues(const RealSymMat3& m);

/// Modified Bessel function of the second kind, order zero. x > 0.
double bessel_k0(double x);

/// phi(r) = sqrt(2/pi) K0(r).
double potential(double r);

/// (1 + k^2)^(-3/2).
double potential_ft(double k);

/// eta(r) for the given cutoff; r is a squared speed.
double cutoff(double r, const CutoffSpec& spec);

/// (M1 + M2)(z, w) * eta(|w|^2):
///   (pi^2/4) [ (z + |w|)^-1 P_w^perp + z (z + |w|)^-2 P_w ].
ComplexSymMat3 laplace_kernel(std::complex<double> z, const Vec3& w, const CutoffSpec& spec);

/// Time-domain memory kernel
///   G(tau, w) = (pi^2/4) eta(|w|^2) e^{-tau |w|} [ I - tau |w| P_w ].
/// Not positive semidefinite once tau |w| > 1.
RealSymMat3 memory_kernel(double tau, const Vec3& w, const CutoffSpec& spec);

/// Landau diffusion matrix a(w) = (pi^2 / (4|w|)) eta(|w|^2) P_w^perp; zero in the dead zone.
RealSymMat3 landau_kernel(const Vec3& w, const CutoffSpec& spec);

/// Bound on int_T^inf |G(tau, w)| dtau for |w| >= rate:
///   (pi^2/4) (1 + T rate) e^{-T rate} / rate.
double memory_tail_bound(double T, double rate);

} // namespace vkin
