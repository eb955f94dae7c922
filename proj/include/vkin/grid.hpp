#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "vkin/kernels.hpp"

namespace vkin {

/// Invalid run or grid parameters.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform lattice on [-L, L)^3 with n points per axis, plus its 2n zero-padded companion.
class VelocityGrid {
public:
    VelocityGrid(int n, double half_width);

    int n() const { return n_; }
    int n_pad() const { return 2 * n_; }
    double half_width() const { return half_width_; }
    double dv() const { return dv_; }
    double cell_volume() const { return dv_ * dv_ * dv_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

    double coord(int i) const { return -half_width_ + i * dv_; }
    std::size_t flat(int i, int j, int k) const { return (static_cast<std::size_t>(i) * n_ + j) * n_ + k; }
    Vec3 point(std::size_t idx) const
    {
        const int k = static_cast<int>(idx % n_);
        const int j = static_cast<int>((idx / n_) % n_);
        const int i = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
        return {coord(i), coord(j), coord(k)};
    }

    friend bool operator==(const VelocityGrid&, const VelocityGrid&) = default;

private:
    int n_;
    double half_width_;
    double dv_;
};

VelocityGrid build_grid(int n, double half_width);

/// Real samples on a velocity grid, row-major with the third axis fastest.
class ScalarField {
public:
    explicit ScalarField(const VelocityGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}
    ScalarField(const VelocityGrid& grid, std::vector<double> values);

    const VelocityGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double max_abs() const;
    bool all_finite() const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);
    /// this += s * o
    ScalarField& axpy(double s, const ScalarField& o);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

private:
    VelocityGrid grid_;
    std::vector<double> values_;
};

struct VectorField {
    std::array<ScalarField, 3> c;
    explicit VectorField(const VelocityGrid& g) : c{ScalarField(g), ScalarField(g), ScalarField(g)} {}
    const VelocityGrid& grid() const { return c[0].grid(); }
    ScalarField& operator[](int i) { return c[i]; }
    const ScalarField& operator[](int i) const { return c[i]; }
};

/// Components in the SymMat3 storage order xx, xy, xz, yy, yz, zz.
struct SymTensorField {
    std::array<ScalarField, 6> c;
    explicit SymTensorField(const VelocityGrid& g)
        : c{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)}
    {
    }
    const VelocityGrid& grid() const { return c[0].grid(); }
    RealSymMat3 at(std::size_t idx) const
    {
        RealSymMat3 m;
        for (int k = 0; k < 6; ++k) m.c[k] = c[k][idx];
        return m;
    }
};

/// values[i] = f(v_i); throws ConfigError naming the first non-finite sample.
ScalarField sample(const VelocityGrid& grid, const std::function<double(const Vec3&)>& f);

/// Maxwellian m(sigma^2, mass)(v) = mass exp(-|v|^2 / (2 sigma^2)) / (sigma sqrt(2 pi))^3.
struct Maxwellian {
    double sigma2 = 1.0;
    double mass = 1.0;

    double operator()(const Vec3& v) const;
    /// Exact gradient -v m(v) / sigma^2.
    Vec3 gradient(const Vec3& v) const;
};

enum class Weight { lambda, lambda_tilde };

/// lambda(v) = e^{|v|}, lambda_tilde(v) = e^{|v|} / (1 + |v|).
double weight_value(Weight w, const Vec3& v);

struct MomentsRecord {
    double mass = 0.0;
    Vec3 momentum{};
    double energy = 0.0;
    double entropy = 0.0;
    double l2_lambda_norm = 0.0;
};

inline constexpr double kEntropyFloor = 1e-300;

/// Riemann-sum moments: mass, momentum, |v|^2 energy, u log u entropy and the L^2_lambda norm.
MomentsRecord moments(const ScalarField& u);

/// sqrt( sum nu(v) u^2 dv^3 ), the order-0 weighted norm (no derivatives needed).
double weighted_l2_norm(const ScalarField& u, Weight w);

} // namespace vkin
