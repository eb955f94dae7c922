#include "vkin/memory_table.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vkin {

double certified_tail_rate(const VelocityGrid& grid, const CutoffSpec& spec)
{
    const double dv = grid.dv();
    const int reach = static_cast<int>(std::ceil(std::sqrt(spec.kappa()) / dv)) + 1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = -reach; i <= reach; ++i)
        for (int j = -reach; j <= reach; ++j)
            for (int k = -reach; k <= reach; ++k) {
                const double w2 = dv * dv * (i * i + j * j + k * k);
                if (w2 > spec.dead_zone_sq()) best = std::min(best, std::sqrt(w2));
            }
    return std::max(best, spec.min_active_speed());
}

int certified_window(double eps, double dt, double tail_tol, double rate, int max_window)
{
    if (!(eps > 0.0) || !(dt > 0.0) || !(tail_tol > 0.0))
        throw ConfigError("memory table: eps, dt and tail_tol must be positive");
    const double h = dt / eps;
    auto ok = [&](long k) { return memory_tail_bound(k * h, rate) <= tail_tol; };
    if (ok(0)) return 0;
    long hi = 1;
    while (!ok(hi)) {
        if (hi > max_window) {
            std::ostringstream msg;
            msg << "memory table: certified window exceeds the cap of " << max_window
                << " lags; increase dt (dt/eps = " << h << ") or loosen tail_tol (" << tail_tol << ")";
            throw ConfigError(msg.str());
        }
        hi *= 2;
    }
    long lo = hi / 2; // !ok(lo) unless lo == 0
    while (hi - lo > 1) {
        const long mid = (lo + hi) / 2;
        (ok(mid) ? hi : lo) = mid;
    }
    if (hi > max_window) {
        std::ostringstream msg;
        msg << "memory table: certified window W = " << hi << " exceeds the cap of " << max_window
            << " lags; increase dt or loosen tail_tol";
        throw ConfigError(msg.str());
    }
    return static_cast<int>(hi);
}

double exp_moment(int m, double x)
{
    if (m < 0 || m > 2) throw DomainError("exp_moment: m must be 0, 1 or 2");
    if (x < 1.0) {
        // sum_j (-x)^j / (j! (m + j + 1))
        double term = 1.0;
        double sum = 0.0;
        for (int j = 0; j < 30; ++j) {
            sum += term / (m + j + 1);
            term *= -x / (j + 1);
        }
        return sum;
    }
    const double e = std::exp(-x);
    switch (m) {
    case 0: return -std::expm1(-x) / x;
    case 1: return (1.0 - e * (1.0 + x)) / (x * x);
    default: return (2.0 - e * (x * x + 2.0 * x + 2.0)) / (x * x * x);
    }
}

RealSymMat3 hat_weight_kernel(int k, double h, const Vec3& w, const CutoffSpec& spec, bool left, bool right)
{
    const double r2 = dot(w, w);
    const double eta = cutoff(r2, spec);
    if (eta == 0.0) return {};
    const double a = std::sqrt(r2);
    const double x = a * h;
    const double e0 = exp_moment(0, x);
    const double e1 = exp_moment(1, x);
    const double e2 = exp_moment(2, x);
    // J0 = (1/h) int l e^{-a tau}, J1 = (1/h) int l a tau e^{-a tau}
    double J0 = 0.0;
    double J1 = 0.0;
    if (left) {
        const double tk = k * h;
        const double d = std::exp(-a * tk);
        J0 += d * (e0 - e1);
        J1 += d * (a * tk * (e0 - e1) + x * (e1 - e2));
    }
    if (right && k >= 1) {
        const double tk = (k - 1) * h;
        const double d = std::exp(-a * tk);
        J0 += d * e1;
        J1 += d * (a * tk * e1 + x * e2);
    }
    const double amp = kKernelScale * eta;
    return RealSymMat3::identity(amp * J0) - RealSymMat3::outer(w, amp * J1 / r2);
}

MemoryMultiplierTable build_memory_table(const SpectralEngine& engine, const CutoffSpec& spec, double eps,
                                         double dt, double tail_tol, int lag_count, int max_window,
                                         LagQuadrature quadrature)
{
    if (!(dt <= 0.25 * eps))
        throw ConfigError("memory table: dt must not exceed eps/4 so the kernel decay is resolved");

    MemoryMultiplierTable t;
    t.eps = eps;
    t.dt = dt;
    t.tail_tol = tail_tol;
    t.quadrature = quadrature;
    t.tail_rate = certified_tail_rate(engine.grid(), spec);
    t.window = certified_window(eps, dt, tail_tol, t.tail_rate, max_window);
    t.tail_bound = memory_tail_bound(t.lag(t.window), t.tail_rate);
    t.lags.resize(static_cast<std::size_t>(t.window) + 1);
    for (int k = 0; k <= t.window; ++k) t.lags[k] = t.lag(k);

    const int count = lag_count < 0 ? t.window + 1 : lag_count;
    t.multipliers.reserve(count);
    const double h = t.step();
    for (int k = 0; k < count; ++k) {
        const double tau = t.lag(k);
        if (quadrature == LagQuadrature::trapezoid)
            t.multipliers.push_back(
                engine.build_multiplier([&](const Vec3& w) { return memory_kernel(tau, w, spec); }));
        else
            t.multipliers.push_back(engine.build_multiplier(
                [&](const Vec3& w) { return hat_weight_kernel(k, h, w, spec, true, k > 0); }));
    }
    return t;
}

SpectralMultiplier endpoint_multiplier(const SpectralEngine& engine, const CutoffSpec& spec,
                                       const MemoryMultiplierTable& table, int k)
{
    if (k < 1) throw std::logic_error("endpoint_multiplier: k must be positive");
    if (table.quadrature == LagQuadrature::trapezoid) {
        if (k < table.materialized()) return table.multipliers[k];
        const double tau = table.lag(k);
        return engine.build_multiplier([&](const Vec3& w) { return memory_kernel(tau, w, spec); });
    }
    const double h = table.step();
    return engine.build_multiplier([&](const Vec3& w) { return hat_weight_kernel(k, h, w, spec, false, true); });
}

} // namespace vkin
