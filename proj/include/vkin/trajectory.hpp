#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vkin/grid.hpp"

namespace vkin {

/// A time integration that had to stop (non-finite state or runaway growth).
class SolverAbort : public std::runtime_error {
public:
    SolverAbort(const std::string& reason, double t, ScalarField snapshot)
        : std::runtime_error(reason), time(t), snapshot(std::move(snapshot))
    {
    }
    double time;
    ScalarField snapshot;
};

/// What a run did, for the manifest.
struct RunInfo {
    std::string solver;
    double dt = 0.0;
    int steps = 0;
    double k_max = 0.0;
    /// Memory solver only: certified window, tail bound and history mode.
    int window = -1;
    double tail_bound = 0.0;
    std::string mode;
    double setup_seconds = 0.0;
    double wall_seconds = 0.0;
    bool aborted = false;
    std::string abort_reason;
    std::optional<ScalarField> abort_snapshot;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<ScalarField> states;
    std::vector<MomentsRecord> moments;
    RunInfo info;

    void record(double t, const ScalarField& u)
    {
        times.push_back(t);
        states.push_back(u);
        moments.push_back(vkin::moments(u));
    }
};

/// Throws SolverAbort when u has a non-finite value or sup|u| exceeds limit.
void guard_state(const ScalarField& u, double t, double limit);

} // namespace vkin
