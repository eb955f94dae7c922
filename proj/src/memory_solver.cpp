#include "vkin/memory_solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vkin {

namespace {

int resolve_threads(int requested)
{
#ifdef _OPENMP
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

void HistoryBuffer::push(FieldState s)
{
    states_.push_back(std::move(s));
    ++next_;
    if (capacity_ > 0 && states_.size() > capacity_) states_.pop_front();
}

const FieldState& HistoryBuffer::at(int step) const
{
    if (step < first_step() || step > last_step()) {
        std::ostringstream msg;
        msg << "history: step " << step << " is not held (have " << first_step() << ".." << last_step() << ")";
        throw std::logic_error(msg.str());
    }
    return states_[static_cast<std::size_t>(step - first_step())];
}

int lag_count(int n, const MemoryMultiplierTable& table, HistoryMode mode)
{
    return mode == HistoryMode::naive ? n : std::min(n, table.window);
}

MemoryOperator::MemoryOperator(const SpectralEngine& engine, const CutoffSpec& spec, MemoryMultiplierTable table,
                               HistoryMode mode, int threads)
    : engine_(engine), spec_(spec), table_(std::move(table)), mode_(mode), threads_(resolve_threads(threads))
{
    for (int t = 0; t < threads_; ++t) workspaces_.emplace_back(engine_);
}

double MemoryOperator::weight(int k, int t_index) const
{
    const double h = table_.step();
    if (table_.quadrature == LagQuadrature::product) return h;
    return (k == 0 || k == t_index) ? 0.5 * h : h;
}

const SpectralMultiplier& MemoryOperator::multiplier(int k, int t_index)
{
    if (k == t_index && k > 0) {
        if (endpoint_k_ != k) {
            endpoint_ = endpoint_multiplier(engine_, spec_, table_, k);
            endpoint_k_ = k;
        }
        return endpoint_;
    }
    if (k >= table_.materialized()) {
        std::ostringstream msg;
        msg << "memory operator: lag " << k << " is beyond the " << table_.materialized()
            << " materialized multipliers";
        throw std::logic_error(msg.str());
    }
    return table_.multipliers[k];
}

VectorField MemoryOperator::history_sum(const HistoryBuffer& history, int t_index)
{
    const auto& g = engine_.grid();
    const int K = lag_count(t_index, table_, mode_);
    struct Term {
        const SpectralMultiplier* mult;
        const FieldState* state;
        double weight;
    };
    std::vector<Term> terms;
    terms.reserve(K);
    for (int k = 1; k <= K; ++k) terms.push_back({&multiplier(k, t_index), &history.at(t_index - k), weight(k, t_index)});

    const int T = std::min<int>(threads_, std::max<int>(1, static_cast<int>(terms.size())));
    std::vector<VectorField> partial(T, VectorField(g));
    const int count = static_cast<int>(terms.size());
#pragma omp parallel for num_threads(T) schedule(static, 1) if (T > 1)
    for (int t = 0; t < T; ++t) {
        // contiguous chunk per thread, summed in thread order below
        const int lo = count * t / T;
        const int hi = count * (t + 1) / T;
        for (int i = lo; i < hi; ++i)
            accumulate_flux(engine_, *terms[i].mult, *terms[i].state, terms[i].weight, partial[t], workspaces_[t]);
    }
    for (int t = 1; t < T; ++t) add_scaled(partial[0], 1.0, partial[t]);
    return std::move(partial[0]);
}

void MemoryOperator::add_current(const FieldState& current, int t_index, VectorField& flux)
{
    if (t_index == 0) return;
    accumulate_flux(engine_, multiplier(0, t_index), current, weight(0, t_index), flux, workspaces_[0]);
}

VectorField memory_flux(MemoryOperator& op, const HistoryBuffer& history, const FieldState& current, int t_index)
{
    VectorField flux = op.history_sum(history, t_index);
    op.add_current(current, t_index, flux);
    return flux;
}

MemoryStepper::MemoryStepper(const SpectralEngine& engine, MemoryOperator& op, const ScalarField& u0, double dt)
    : engine_(engine), op_(op), dt_(dt), u_(u0),
      history_(op.mode() == HistoryMode::windowed ? static_cast<std::size_t>(std::max(op.table().window, 1)) : 0)
{
}

void MemoryStepper::step()
{
    FieldState cur = make_state(engine_, u_);

    // stage 1 at t_n
    ScalarField rhs_n(engine_.grid());
    if (n_ > 0) {
        VectorField flux = cached_history_ ? std::move(*cached_history_) : op_.history_sum(history_, n_);
        op_.add_current(cur, n_, flux);
        rhs_n = engine_.divergence(flux);
    }
    ScalarField u_star = u_;
    u_star.axpy(dt_, rhs_n);

    // stage 2 at t_{n+1}
    history_.push(std::move(cur));
    VectorField hist_next = op_.history_sum(history_, n_ + 1);
    VectorField flux_star = hist_next;
    op_.add_current(make_state(engine_, std::move(u_star)), n_ + 1, flux_star);
    const ScalarField rhs_star = engine_.divergence(flux_star);

    u_.axpy(0.5 * dt_, rhs_n);
    u_.axpy(0.5 * dt_, rhs_star);
    cached_history_ = std::move(hist_next);
    ++n_;
}

double landau_k_max(const SpectralEngine& engine, const SpectralMultiplier& landau, const ScalarField& u)
{
    FluxWorkspace ws(engine);
    const auto kp = tensor_convolution(engine, landau, make_state(engine, u), ws);
    double best = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) best = std::max(best, eigenvalues(kp.K.at(p))[2]);
    return best;
}

void validate(const MemoryConfig& cfg)
{
    if (!(cfg.eps > 0.0)) throw ConfigError("memory: eps must be positive");
    if (!(cfg.t_end > 0.0)) throw ConfigError("memory: t_end must be positive");
    if (cfg.t_end > cfg.max_horizon)
        throw ConfigError("memory: t_end exceeds the admissible horizon (solutions are only guaranteed for t_end <= 1)");
    if (cfg.record_stride < 1) throw ConfigError("memory: record_stride must be at least 1");
    if (!(cfg.tail_tol > 0.0)) throw ConfigError("memory: tail_tol must be positive");
    if (!(cfg.cfl_factor > 0.0)) throw ConfigError("memory: cfl_factor must be positive");
    if (cfg.dt < 0.0) throw ConfigError("memory: dt must be positive (or 0 for automatic)");
    if (cfg.dt > 0.25 * cfg.eps * (1.0 + 1e-12))
        throw ConfigError("memory: dt must not exceed eps/4, otherwise the kernel decay on the eps scale is not resolved");
    if (!(cfg.blowup_factor > 1.0)) throw ConfigError("memory: blowup_factor must exceed 1");
    (void)cfg.grid();
}

double choose_memory_dt(const MemoryConfig& cfg, double k_max)
{
    validate(cfg);
    const double dv = cfg.grid().dv();
    const double cfl = k_max > 0.0 ? cfg.cfl_factor * dv * dv / k_max : INFINITY;
    if (cfg.dt > 0.0) {
        if (cfg.dt > cfl * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "memory: dt = " << cfg.dt << " violates the diffusion CFL bound " << cfl;
            throw ConfigError(msg.str());
        }
        const double steps = cfg.t_end / cfg.dt;
        if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
            throw ConfigError("memory: t_end must be an integer multiple of dt");
        return cfg.dt;
    }
    const double dt_max = std::min(0.25 * cfg.eps, cfl);
    const double steps = std::ceil(cfg.t_end / dt_max - 1e-9);
    return cfg.t_end / steps;
}

Trajectory run_memory(const MemoryConfig& cfg, const ScalarField& u0)
{
    const auto t0 = std::chrono::steady_clock::now();
    validate(cfg);
    const VelocityGrid grid = cfg.grid();
    if (!(u0.grid() == grid)) throw ConfigError("memory: initial datum lives on a different grid");
    if (!u0.all_finite()) throw ConfigError("memory: initial datum has non-finite values");

    SpectralEngine engine(grid);
    const auto landau = build_landau_multiplier(engine, cfg.cutoff);

    Trajectory traj;
    traj.info.solver = "memory";
    traj.info.mode = cfg.mode == HistoryMode::naive ? "naive" : "windowed";
    traj.info.k_max = landau_k_max(engine, landau, u0);
    const double dt = choose_memory_dt(cfg, traj.info.k_max);
    const int steps = static_cast<int>(std::lround(cfg.t_end / dt));
    traj.info.dt = dt;

    // the window is certified first so the materialized prefix can be sized
    const double rate = certified_tail_rate(grid, cfg.cutoff);
    const int W = certified_window(cfg.eps, dt, cfg.tail_tol, rate, cfg.max_window);
    const int lags = cfg.mode == HistoryMode::naive ? steps : std::min(W, steps);
    auto table = build_memory_table(engine, cfg.cutoff, cfg.eps, dt, cfg.tail_tol, lags + 1, cfg.max_window,
                                    cfg.quadrature);
    traj.info.window = table.window;
    traj.info.tail_bound = table.tail_bound;

    MemoryOperator op(engine, cfg.cutoff, std::move(table), cfg.mode, cfg.threads);
    MemoryStepper stepper(engine, op, u0, dt);
    const double limit = cfg.blowup_factor * std::max(u0.max_abs(), 1e-300);
    traj.info.setup_seconds = seconds_since(t0);

    traj.record(0.0, u0);
    try {
        for (int s = 1; s <= steps; ++s) {
            stepper.step();
            const double t = s * dt;
            guard_state(stepper.state(), t, limit);
            if (s % cfg.record_stride == 0 || s == steps) traj.record(t, stepper.state());
            traj.info.steps = s;
        }
    } catch (const SolverAbort& e) {
        traj.info.aborted = true;
        traj.info.abort_reason = e.what();
        traj.info.abort_snapshot = e.snapshot;
    }
    traj.info.wall_seconds = seconds_since(t0);
    return traj;
}

double stationarity_residual(const MemoryConfig& cfg, const Maxwellian& m)
{
    const VelocityGrid grid = cfg.grid();
    const ScalarField mf = sample(grid, m);
    const Trajectory traj = run_memory(cfg, mf);
    if (traj.info.aborted) throw SolverAbort(traj.info.abort_reason, traj.times.back(), *traj.info.abort_snapshot);
    double sup = 0.0;
    for (const auto& u : traj.states) sup = std::max(sup, weighted_l2_norm(u - mf, Weight::lambda));
    return sup;
}

} // namespace vkin
