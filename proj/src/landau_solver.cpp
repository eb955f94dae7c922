#include "vkin/landau_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace vkin {

void validate(const LandauConfig& cfg)
{
    if (!(cfg.t_end > 0.0)) throw ConfigError("landau: t_end must be positive");
    if (cfg.dt < 0.0) throw ConfigError("landau: dt must be positive (or 0 for adaptive)");
    if (!(cfg.cfl_factor > 0.0)) throw ConfigError("landau: cfl_factor must be positive");
    if (cfg.record_stride < 1) throw ConfigError("landau: record_stride must be at least 1");
    if (!std::is_sorted(cfg.record_times.begin(), cfg.record_times.end()))
        throw ConfigError("landau: record_times must be increasing");
    for (double t : cfg.record_times)
        if (!(t > 0.0 && t <= cfg.t_end * (1.0 + 1e-12)))
            throw ConfigError("landau: record_times must lie in (0, t_end]");
    if (!(cfg.blowup_factor > 1.0)) throw ConfigError("landau: blowup_factor must exceed 1");
    (void)cfg.grid();
}

LandauOperator::LandauOperator(const SpectralEngine& engine, const CutoffSpec& spec)
    : engine_(engine), mult_(build_landau_multiplier(engine, spec)), ws_(engine)
{
}

TensorConvolution LandauOperator::coefficients(const ScalarField& u)
{
    return tensor_convolution(engine_, mult_, make_state(engine_, u), ws_);
}

ScalarField LandauOperator::rhs(const ScalarField& u)
{
    VectorField flux(engine_.grid());
    accumulate_flux(engine_, mult_, make_state(engine_, u), 1.0, flux, ws_);
    return engine_.divergence(flux);
}

double LandauOperator::k_max(const ScalarField& u)
{
    const auto kp = coefficients(u);
    double best = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) best = std::max(best, eigenvalues(kp.K.at(p))[2]);
    return best;
}

TensorConvolution landau_coefficients(LandauOperator& op, const ScalarField& u) { return op.coefficients(u); }

ScalarField landau_rhs(LandauOperator& op, const ScalarField& u) { return op.rhs(u); }

Trajectory run_landau(const LandauConfig& cfg, const ScalarField& u0)
{
    const auto t0 = std::chrono::steady_clock::now();
    validate(cfg);
    const VelocityGrid grid = cfg.grid();
    if (!(u0.grid() == grid)) throw ConfigError("landau: initial datum lives on a different grid");
    if (!u0.all_finite()) throw ConfigError("landau: initial datum has non-finite values");

    SpectralEngine engine(grid);
    LandauOperator op(engine, cfg.cutoff);
    const double dv2 = grid.dv() * grid.dv();
    const double limit = cfg.blowup_factor * std::max(u0.max_abs(), 1e-300);

    Trajectory traj;
    traj.info.solver = "landau";
    traj.info.k_max = op.k_max(u0);
    if (cfg.dt > 0.0 && cfg.dt > cfg.cfl_factor * dv2 / traj.info.k_max * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "landau: dt = " << cfg.dt << " violates the diffusion CFL bound " << cfg.cfl_factor * dv2 / traj.info.k_max;
        throw ConfigError(msg.str());
    }
    traj.info.setup_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    traj.record(0.0, u0);

    ScalarField u = u0;
    double t = 0.0;
    double k_max = traj.info.k_max;
    std::size_t next_record = 0;
    int step = 0;
    try {
        while (t < cfg.t_end * (1.0 - 1e-14)) {
            double dt = cfg.dt > 0.0 ? cfg.dt : cfg.cfl_factor * dv2 / std::max(k_max, 1e-300);
            double target = cfg.t_end;
            if (next_record < cfg.record_times.size()) target = std::min(target, cfg.record_times[next_record]);
            bool hit = false;
            if (t + dt >= target * (1.0 - 1e-12)) {
                dt = target - t;
                hit = true;
            }

            const ScalarField k1 = op.rhs(u);
            const ScalarField k2 = op.rhs(u + (0.5 * dt) * k1);
            const ScalarField k3 = op.rhs(u + (0.5 * dt) * k2);
            const ScalarField k4 = op.rhs(u + dt * k3);
            u.axpy(dt / 6.0, k1);
            u.axpy(dt / 3.0, k2);
            u.axpy(dt / 3.0, k3);
            u.axpy(dt / 6.0, k4);
            t = hit ? target : t + dt;
            ++step;
            traj.info.steps = step;
            traj.info.dt = std::max(traj.info.dt, dt);
            guard_state(u, t, limit);

            // CFL re-check for the next step
            k_max = op.k_max(u);
            bool record = false;
            if (cfg.record_times.empty()) {
                record = step % cfg.record_stride == 0 || t >= cfg.t_end * (1.0 - 1e-14);
            } else {
                while (next_record < cfg.record_times.size() && cfg.record_times[next_record] <= t * (1.0 + 1e-12)) {
                    record = true;
                    ++next_record;
                }
            }
            if (record) traj.record(t, u);
        }
    } catch (const SolverAbort& e) {
        traj.info.aborted = true;
        traj.info.abort_reason = e.what();
        traj.info.abort_snapshot = e.snapshot;
    }
    traj.info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return traj;
}

double landau_stationarity_residual(const LandauConfig& cfg, const Maxwellian& m)
{
    const ScalarField mf = sample(cfg.grid(), m);
    const Trajectory traj = run_landau(cfg, mf);
    if (traj.info.aborted) throw SolverAbort(traj.info.abort_reason, traj.times.back(), *traj.info.abort_snapshot);
    double sup = 0.0;
    for (const auto& u : traj.states) sup = std::max(sup, (u - mf).max_abs());
    return sup;
}

} // namespace vkin
