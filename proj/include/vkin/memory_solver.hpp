#pragma once

// Non-Markovian evolution
//   d_t u = div (1/eps) int_0^t F[G((t-s)/eps); u(s)] ds
// with the bilinear flux F of collision.hpp and Heun steps. The lag quadrature in s is
// selectable: product integration against hat functions (default) or composite trapezoid.

#include <deque>
#include <optional>

#include "vkin/collision.hpp"
#include "vkin/memory_table.hpp"
#include "vkin/trajectory.hpp"

namespace vkin {

enum class HistoryMode { windowed, naive };

struct MemoryConfig {
    double eps = 0.1;
    /// 0 selects min(eps/4, cfl_factor dv^2 / k_max), shrunk so t_end is hit exactly.
    double dt = 0.0;
    double t_end = 0.25;
    int record_stride = 1;
    HistoryMode mode = HistoryMode::windowed;
    double tail_tol = 1e-10;
    LagQuadrature quadrature = LagQuadrature::product;
    int n = 32;
    double L = 8.0;
    CutoffSpec cutoff{};
    double cfl_factor = 0.2;
    /// Longest admissible t_end. The theory covers t_end <= 1; benchmarks may raise it.
    double max_horizon = 1.0;
    int max_window = kDefaultMaxWindow;
    double blowup_factor = 1e3;
    /// 0 leaves the OpenMP default.
    int threads = 0;

    VelocityGrid grid() const { return VelocityGrid(n, L); }
};

/// Past states, newest last. Windowed buffers keep at most `capacity` entries.
class HistoryBuffer {
public:
    /// capacity 0 means unbounded.
    explicit HistoryBuffer(std::size_t capacity = 0) : capacity_(capacity) {}

    void push(FieldState s);
    /// State at absolute step index `step`; throws std::logic_error if it was evicted.
    const FieldState& at(int step) const;
    int first_step() const { return next_ - static_cast<int>(states_.size()); }
    int last_step() const { return next_ - 1; }
    std::size_t size() const { return states_.size(); }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::deque<FieldState> states_;
    int next_ = 0;
};

/// Number of history lags (k >= 1) summed at time index n.
int lag_count(int n, const MemoryMultiplierTable& table, HistoryMode mode);

/// The discretized history integral int_0^{t_n/eps} F[G(tau); u(t_n - eps tau)] dtau.
/// Owns the lag table, the endpoint multiplier cache and per-thread scratch.
class MemoryOperator {
public:
    MemoryOperator(const SpectralEngine& engine, const CutoffSpec& spec, MemoryMultiplierTable table,
                   HistoryMode mode, int threads = 0);

    const MemoryMultiplierTable& table() const { return table_; }
    HistoryMode mode() const { return mode_; }

    /// Lags k = 1..lag_count(n): the part that does not involve the state at t_n.
    VectorField history_sum(const HistoryBuffer& history, int t_index);
    /// Lag-0 contribution of `current` at time index t_index (zero when t_index == 0).
    void add_current(const FieldState& current, int t_index, VectorField& flux);

private:
    const SpectralMultiplier& multiplier(int k, int t_index);
    double weight(int k, int t_index) const;

    const SpectralEngine& engine_;
    CutoffSpec spec_;
    MemoryMultiplierTable table_;
    HistoryMode mode_;
    int threads_;
    std::vector<FluxWorkspace> workspaces_;
    int endpoint_k_ = -1;
    SpectralMultiplier endpoint_;
};

/// Full memory flux at time index t_index with `current` the state at t_n.
VectorField memory_flux(MemoryOperator& op, const HistoryBuffer& history, const FieldState& current, int t_index);

/// Heun integrator for the memory equation.
class MemoryStepper {
public:
    MemoryStepper(const SpectralEngine& engine, MemoryOperator& op, const ScalarField& u0, double dt);

    /// One Heun step; the history sum at t_{n+1} is shared by both stages around it.
    void step();
    const ScalarField& state() const { return u_; }
    int step_index() const { return n_; }
    double time() const { return n_ * dt_; }

private:
    const SpectralEngine& engine_;
    MemoryOperator& op_;
    double dt_;
    int n_ = 0;
    ScalarField u_;
    HistoryBuffer history_;
    std::optional<VectorField> cached_history_;
};

/// Largest eigenvalue over the grid of K[u] = a_eta * u.
double landau_k_max(const SpectralEngine& engine, const SpectralMultiplier& landau, const ScalarField& u);

/// Step size used by run_memory; validates dt against eps/4 and the diffusion CFL bound.
double choose_memory_dt(const MemoryConfig& cfg, double k_max);

/// Validates everything that does not need the initial datum.
void validate(const MemoryConfig& cfg);

/// Integrates to t_end; an abort is reported in info with the partial trajectory.
Trajectory run_memory(const MemoryConfig& cfg, const ScalarField& u0);

/// sup over recorded t of ||u(t) - m||_{L^2_lambda} for the run started at m.
double stationarity_residual(const MemoryConfig& cfg, const Maxwellian& m = {});

} // namespace vkin
