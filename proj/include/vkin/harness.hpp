#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vkin/memory_solver.hpp"

namespace vkin {

enum class Scenario { memory, landau, converge, kernel_check, stationarity };

std::string to_string(Scenario s);

/// Gaussian bump amplitude * exp(-|v - center|^2 / width^2) used as v0.
struct PerturbationSpec {
    std::string kind = "shifted";
    Vec3 center{1.0, 0.0, 0.0};
    double width = 1.0;
    double amplitude = 1.0;
};

struct VNormRequest {
    double A = 1.0;
    int order = 0;
    Weight weight = Weight::lambda;
};

struct SimulationConfig {
    Scenario scenario = Scenario::memory;
    int n = 32;
    double L = 8.0;
    double kappa = 0.25;
    double eps = 0.1;
    std::vector<double> eps_list{0.2, 0.1, 0.05};
    double dt = 0.0;
    double cfl_factor = 0.2;
    double t_end = 0.25;
    double max_horizon = 1.0;
    double delta2 = 0.05;
    PerturbationSpec perturbation{};
    int record_stride = 1;
    HistoryMode mode = HistoryMode::windowed;
    LagQuadrature quadrature = LagQuadrature::product;
    double tail_tol = 1e-10;
    bool cross_check = false;
    bool l_doubling = false;
    std::optional<VNormRequest> v_norm;
    double check_tolerance = 1e-6;
    double min_order = 0.8;
    bool write_fields = true;
    std::filesystem::path output_dir = "out";
    int threads = 0;

    MemoryConfig memory_config(double eps) const;
};

/// Strict JSON parsing: unknown keys and violated invariants throw ConfigError.
SimulationConfig parse_config(const std::string& text);
SimulationConfig parse_config_file(const std::filesystem::path& path);
/// Canonical JSON echo of a config (all defaults filled).
std::string config_to_json(const SimulationConfig& cfg);

/// v0 on the grid; rejects specs that are negative anywhere.
ScalarField default_perturbation(const PerturbationSpec& spec, const VelocityGrid& grid);
/// m + delta2 v0 with m the unit Maxwellian.
ScalarField initial_datum(const SimulationConfig& cfg, const VelocityGrid& grid);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAbort = 3;
inline constexpr int kExitCheckFailed = 4;

/// Runs the scenario, writing artifacts and manifest.json to cfg.output_dir.
/// Returns the process exit code (config errors are thrown as ConfigError).
int run(const SimulationConfig& cfg);

/// CSV writers shared by the scenarios; doubles use %.17g so they round-trip.
std::string format_double(double x);
std::string moments_csv(const Trajectory& traj);

std::uint32_t crc32_of(const std::vector<unsigned char>& bytes);

inline constexpr const char* kVersion = "0.3.0";

} // namespace vkin
