#include "vkin/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vkin {

VelocityGrid::VelocityGrid(int n, double half_width) : n_(n), half_width_(half_width), dv_(0.0)
{
    if (n < 8 || n % 2 != 0)
        throw ConfigError("grid: points per axis must be even and >= 8, got " + std::to_string(n));
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw ConfigError("grid: half-width L must be positive and finite");
    dv_ = 2.0 * half_width / n;
}

VelocityGrid build_grid(int n, double half_width) { return VelocityGrid(n, half_width); }

ScalarField::ScalarField(const VelocityGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.size()) throw ConfigError("field: value count does not match grid size");
}

double ScalarField::max_abs() const
{
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
}

bool ScalarField::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

namespace {
void require_same_grid(const ScalarField& a, const ScalarField& b)
{
    if (!(a.grid() == b.grid())) throw ConfigError("field arithmetic on mismatched grids");
}
} // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o)
{
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o)
{
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s)
{
    for (double& x : values_) x *= s;
    return *this;
}

ScalarField& ScalarField::axpy(double s, const ScalarField& o)
{
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * o.values_[i];
    return *this;
}

ScalarField sample(const VelocityGrid& grid, const std::function<double(const Vec3&)>& f)
{
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3 v = grid.point(i);
        const double x = f(v);
        if (!std::isfinite(x)) {
            std::ostringstream msg;
            msg << "sample: non-finite value " << x << " at v = (" << v[0] << ", " << v[1] << ", " << v[2] << ")";
            throw ConfigError(msg.str());
        }
        out[i] = x;
    }
    return out;
}

double Maxwellian::operator()(const Vec3& v) const
{
    const double norm = std::pow(2.0 * std::numbers::pi * sigma2, 1.5);
    return mass * std::exp(-0.5 * dot(v, v) / sigma2) / norm;
}

Vec3 Maxwellian::gradient(const Vec3& v) const
{
    const double m = (*this)(v);
    return {-v[0] * m / sigma2, -v[1] * m / sigma2, -v[2] * m / sigma2};
}

double weight_value(Weight w, const Vec3& v)
{
    const double r = norm(v);
    return w == Weight::lambda ? std::exp(r) : std::exp(r) / (1.0 + r);
}

MomentsRecord moments(const ScalarField& u)
{
    const auto& g = u.grid();
    const double dv3 = g.cell_volume();
    MomentsRecord rec;
    double l2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Vec3 v = g.point(i);
        const double x = u[i];
        rec.mass += x;
        for (int d = 0; d < 3; ++d) rec.momentum[d] += v[d] * x;
        rec.energy += dot(v, v) * x;
        rec.entropy += x * std::log(std::max(x, kEntropyFloor));
        l2 += weight_value(Weight::lambda, v) * x * x;
    }
    rec.mass *= dv3;
    for (double& p : rec.momentum) p *= dv3;
    rec.energy *= dv3;
    rec.entropy *= dv3;
    rec.l2_lambda_norm = std::sqrt(l2 * dv3);
    return rec;
}

double weighted_l2_norm(const ScalarField& u, Weight w)
{
    const auto& g = u.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += weight_value(w, g.point(i)) * u[i] * u[i];
    return std::sqrt(s * g.cell_volume());
}

} // namespace vkin
