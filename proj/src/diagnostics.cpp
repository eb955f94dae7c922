#include "vkin/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace vkin {

namespace {

using cplx = std::complex<double>;

// (e^{-x} - 1 + x) / x^2
double phi2(double x)
{
    if (x < 0.5) {
        double term = 0.5;
        double sum = 0.0;
        for (int j = 0; j < 20; ++j) {
            sum += term;
            term *= -x / (j + 3);
        }
        return sum;
    }
    return (std::expm1(-x) + x) / (x * x);
}

void require_increasing(std::span<const double> times)
{
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw ConfigError("trace times must be strictly increasing");
}

} // namespace

double b_profile(double t, double r)
{
    if (!(r > 0.0)) throw DomainError("b_profile: rate must be positive");
    if (t < 0.0) throw DomainError("b_profile: t must be non-negative");
    return t * t * phi2(t * r);
}

VectorField perp_kernel_flux(const SpectralEngine& engine, const CutoffSpec& spec,
                             const std::function<double(double)>& g, const FieldState& state)
{
    const auto mult = engine.build_multiplier([&](const Vec3& w) -> RealSymMat3 {
        const double r2 = dot(w, w);
        const double eta = cutoff(r2, spec);
        if (eta == 0.0) return {};
        const double s = kKernelScale * eta * g(std::sqrt(r2));
        return RealSymMat3::identity(s) - RealSymMat3::outer(w, s / r2);
    });
    FluxWorkspace ws(engine);
    VectorField flux(engine.grid());
    accumulate_flux(engine, mult, state, 1.0, flux, ws);
    return flux;
}

BoundaryLayer boundary_layer(const SpectralEngine& engine, double t, const FieldState& u0, double eps,
                             const CutoffSpec& spec)
{
    if (!(eps > 0.0)) throw DomainError("boundary_layer: eps must be positive");
    if (t < 0.0) throw DomainError("boundary_layer: t must be non-negative");
    VectorField BF = perp_kernel_flux(
        engine, spec, [&](double a) { return b_profile(t, a / eps) / eps; }, u0);
    ScalarField B = engine.divergence(BF);
    return {std::move(B), std::move(BF)};
}

ScalarField boundary_layer_second_derivative(const SpectralEngine& engine, double t, const FieldState& u0,
                                             double eps, const CutoffSpec& spec)
{
    return engine.divergence(
        perp_kernel_flux(engine, spec, [&](double a) { return std::exp(-t * a / eps) / eps; }, u0));
}

FieldState maxwellian_state(const SpectralEngine& engine, const Maxwellian& m)
{
    const auto& g = engine.grid();
    ScalarField u = sample(g, m);
    VectorField grad(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Vec3 d = m.gradient(g.point(p));
        for (int i = 0; i < 3; ++i) grad[i][p] = d[i];
    }
    return make_state(engine, std::move(u), std::move(grad));
}

std::complex<double> laplace_probe(std::span<const double> times, std::span<const double> values, cplx z)
{
    if (!(z.real() > 0.0)) throw DomainError("laplace_probe: Re z must be positive");
    if (times.size() != values.size()) throw ConfigError("laplace_probe: times and values differ in length");
    require_increasing(times);
    cplx sum(0.0, 0.0);
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double h = times[i] - times[i - 1];
        sum += 0.5 * h * (std::exp(-z * times[i - 1]) * values[i - 1] + std::exp(-z * times[i]) * values[i]);
    }
    return sum;
}

std::vector<std::complex<double>> laplace_probe(const Trajectory& traj, cplx z, std::span<const std::size_t> nodes)
{
    if (!(z.real() > 0.0)) throw DomainError("laplace_probe: Re z must be positive");
    require_increasing(traj.times);
    if (traj.states.empty()) return {};
    std::vector<std::size_t> all;
    if (nodes.empty()) {
        all.resize(traj.states.front().size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        nodes = all;
    }
    std::vector<cplx> out(nodes.size(), cplx(0.0, 0.0));
    for (std::size_t s = 1; s < traj.times.size(); ++s) {
        const double h = traj.times[s] - traj.times[s - 1];
        const cplx e0 = 0.5 * h * std::exp(-z * traj.times[s - 1]);
        const cplx e1 = 0.5 * h * std::exp(-z * traj.times[s]);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            out[i] += e0 * traj.states[s - 1][nodes[i]] + e1 * traj.states[s][nodes[i]];
    }
    return out;
}

double laplace_truncation_bound(double sup_abs, double T, cplx z)
{
    if (!(z.real() > 0.0)) throw DomainError("laplace_truncation_bound: Re z must be positive");
    return sup_abs * std::exp(-z.real() * T) / z.real();
}

PlancherelReport plancherel_check(std::span<const double> times, std::span<const double> values, double A,
                                  double omega_max, int n_omega)
{
    if (!(A > 0.0)) throw ConfigError("plancherel_check: A must be positive");
    if (n_omega < 2 || !(omega_max > 0.0)) throw ConfigError("plancherel_check: need a positive omega range");
    if (times.size() != values.size() || times.size() < 2) throw ConfigError("plancherel_check: bad trace");
    require_increasing(times);

    PlancherelReport r;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double h = times[i] - times[i - 1];
        r.time_side += 0.5 * h *
                       (std::exp(-A * times[i - 1]) * values[i - 1] * values[i - 1] +
                        std::exp(-A * times[i]) * values[i] * values[i]);
    }

    // trapezoid in omega on [-omega_max, omega_max]
    const double dw = 2.0 * omega_max / (n_omega - 1);
    double integral = 0.0;
    for (int k = 0; k < n_omega; ++k) {
        const double w = -omega_max + k * dw;
        const double wt = (k == 0 || k == n_omega - 1) ? 0.5 * dw : dw;
        integral += wt * std::norm(laplace_probe(times, values, cplx(0.5 * A, w)));
    }
    // |L u|^2 ~ (u(0)^2 + u(T)^2 e^{-AT}) / omega^2 beyond omega_max, on both sides
    const double T = times.back();
    const double c = values.front() * values.front() + values.back() * values.back() * std::exp(-A * T);
    integral += 2.0 * c / omega_max;

    r.laplace_side = integral / (2.0 * std::numbers::pi);
    r.relative_gap = std::abs(r.laplace_side - r.time_side) / std::max(std::abs(r.time_side), 1e-300);
    return r;
}

std::vector<Vec3> default_kernel_samples()
{
    std::vector<Vec3> out;
    const double radii[] = {0.5, 0.8, 1.0, 1.5, 2.0, 2.7, 3.3, 4.0, 5.0, 6.0};
    for (int i = 0; i < 10; ++i) {
        // directions on a golden-angle spiral
        const double zc = 1.0 - (2.0 * i + 1.0) / 10.0;
        const double rho = std::sqrt(1.0 - zc * zc);
        const double phi = i * std::numbers::pi * (3.0 - std::sqrt(5.0));
        out.push_back({radii[i] * rho * std::cos(phi), radii[i] * rho * std::sin(phi), radii[i] * zc});
    }
    out.push_back({0.1, 0.2, 0.0});
    return out;
}

namespace {

RealSymMat3 simpson_kernel_integral(const CutoffSpec& spec, const Vec3& w, double T, int intervals)
{
    const double h = T / intervals;
    RealSymMat3 sum = memory_kernel(0.0, w, spec) + memory_kernel(T, w, spec);
    for (int i = 1; i < intervals; ++i) sum += memory_kernel(i * h, w, spec) * (i % 2 ? 4.0 : 2.0);
    return sum * (h / 3.0);
}

} // namespace

KernelIntegralReport kernel_time_integral_check(const CutoffSpec& spec, double T_factor,
                                                std::span<const Vec3> samples, double step_factor)
{
    if (T_factor < 20.0) throw ConfigError("kernel_time_integral_check: T_factor must be at least 20");
    if (!(step_factor > 0.0)) throw ConfigError("kernel_time_integral_check: step_factor must be positive");
    KernelIntegralReport rep;
    rep.samples.assign(samples.begin(), samples.end());
    int intervals = static_cast<int>(std::ceil(T_factor / step_factor));
    intervals += intervals % 2;
    for (const Vec3& w : samples) {
        const double a = norm(w);
        const RealSymMat3 ref = landau_kernel(w, spec);
        if (a == 0.0 || ref.frobenius() == 0.0) {
            const double e = a == 0.0 ? 0.0 : simpson_kernel_integral(spec, w, T_factor, intervals).frobenius();
            rep.errors.push_back(e);
            rep.max_error = std::max(rep.max_error, e);
            continue;
        }
        const double T = T_factor / a;
        const RealSymMat3 coarse = simpson_kernel_integral(spec, w, T, intervals);
        const RealSymMat3 fine = simpson_kernel_integral(spec, w, T, 2 * intervals);
        const double e = relative_error(coarse, ref);
        rep.errors.push_back(e);
        rep.max_error = std::max(rep.max_error, e);
        rep.max_refinement_change = std::max(rep.max_refinement_change, relative_error(fine, coarse));
    }
    return rep;
}

double time_averaged_V_norm(const SpectralEngine& engine, const Trajectory& traj, double A, int order, Weight weight)
{
    if (!(A >= 1.0)) throw ConfigError("time_averaged_V_norm: A must be at least 1");
    require_increasing(traj.times);
    std::vector<double> sq(traj.states.size());
    for (std::size_t s = 0; s < sq.size(); ++s) {
        const double v = weighted_sobolev_norm(engine, traj.states[s], order, weight);
        sq[s] = std::exp(-A * traj.times[s]) * v * v;
    }
    double sum = 0.0;
    for (std::size_t s = 1; s < sq.size(); ++s) sum += 0.5 * (traj.times[s] - traj.times[s - 1]) * (sq[s] + sq[s - 1]);
    return std::sqrt(sum);
}

double fitted_order(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("fitted_order: need at least two points");
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

namespace {

LandauConfig landau_from(const MemoryConfig& m)
{
    LandauConfig l;
    l.cfl_factor = m.cfl_factor;
    l.t_end = m.t_end;
    l.n = m.n;
    l.L = m.L;
    l.cutoff = m.cutoff;
    l.blowup_factor = m.blowup_factor;
    return l;
}

// sup over a's record times of the L^2_lambda distance to the matching record of b
double sup_error(const Trajectory& a, const Trajectory& b)
{
    double sup = 0.0;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const auto it = std::find_if(b.times.begin(), b.times.end(),
                                     [&](double t) { return std::abs(t - a.times[i]) <= 1e-9 * (1.0 + t); });
        if (it == b.times.end()) {
            std::ostringstream msg;
            msg << "convergence: reference has no record at t = " << a.times[i];
            throw std::logic_error(msg.str());
        }
        const auto& ub = b.states[static_cast<std::size_t>(it - b.times.begin())];
        sup = std::max(sup, weighted_l2_norm(a.states[i] - ub, Weight::lambda));
    }
    return sup;
}

std::vector<double> positive_times(const std::vector<Trajectory>& runs)
{
    std::vector<double> t;
    for (const auto& r : runs)
        for (double x : r.times)
            if (x > 0.0) t.push_back(x);
    std::sort(t.begin(), t.end());
    std::vector<double> out;
    for (double x : t)
        if (out.empty() || x - out.back() > 1e-9 * (1.0 + x)) out.push_back(x);
    return out;
}

} // namespace

ConvergenceReport convergence_study(std::span<const double> eps_list, const MemoryConfig& shared,
                                    const std::function<ScalarField(const VelocityGrid&)>& initial,
                                    bool l_doubling)
{
    if (eps_list.empty()) throw ConfigError("convergence: eps_list is empty");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1])) throw ConfigError("convergence: eps_list must be strictly decreasing");

    ConvergenceReport rep;
    rep.eps_list.assign(eps_list.begin(), eps_list.end());

    auto run_pair = [&](const MemoryConfig& base, std::span<const double> eps) {
        const ScalarField u0 = initial(base.grid());
        std::vector<Trajectory> runs;
        for (double e : eps) {
            MemoryConfig c = base;
            c.eps = e;
            runs.push_back(run_memory(c, u0));
            if (runs.back().info.aborted) return std::pair{runs, Trajectory{}};
        }
        LandauConfig lc = landau_from(base);
        lc.record_times = positive_times(runs);
        return std::pair{runs, run_landau(lc, u0)};
    };

    auto [runs, ref] = run_pair(shared, eps_list);
    for (const auto& r : runs) {
        rep.memory_wall_seconds.push_back(r.info.wall_seconds);
        if (r.info.aborted) {
            rep.aborted = true;
            rep.abort_reason = r.info.abort_reason;
            return rep;
        }
    }
    if (ref.info.aborted) {
        rep.aborted = true;
        rep.abort_reason = "landau reference: " + ref.info.abort_reason;
        return rep;
    }
    for (const auto& r : runs) rep.errors.push_back(sup_error(r, ref));

    rep.monotone = true;
    rep.min_ratio = INFINITY;
    for (std::size_t i = 1; i < rep.errors.size(); ++i) {
        rep.monotone = rep.monotone && rep.errors[i] < rep.errors[i - 1];
        rep.min_ratio = std::min(rep.min_ratio, rep.errors[i - 1] / rep.errors[i]);
    }
    if (rep.errors.size() >= 2) rep.fitted_order = fitted_order(rep.eps_list, rep.errors);

    if (l_doubling) {
        MemoryConfig wide = shared;
        wide.n = 2 * shared.n;
        wide.L = 2.0 * shared.L;
        auto [wruns, wref] = run_pair(wide, eps_list.first(1));
        if (wruns.front().info.aborted || wref.info.aborted) {
            rep.aborted = true;
            rep.abort_reason = "L-doubling run aborted";
            return rep;
        }
        const double e = sup_error(wruns.front(), wref);
        rep.l_doubling_change = std::abs(e - rep.errors.front()) / rep.errors.front();
    }
    return rep;
}

} // namespace vkin
