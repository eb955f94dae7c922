// vkin: command-line front end for the kinetic solvers.

#include <iostream>

#include <CLI11.hpp>

#include "vkin/harness.hpp"

namespace {

vkin::Scenario scenario_of(const std::string& sub)
{
    if (sub == "simulate-memory") return vkin::Scenario::memory;
    if (sub == "simulate-landau") return vkin::Scenario::landau;
    if (sub == "converge") return vkin::Scenario::converge;
    if (sub == "kernel-check") return vkin::Scenario::kernel_check;
    return vkin::Scenario::stationarity;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Non-Markovian and Landau kinetic solvers"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir;
    int threads = -1;
    bool seedless = false;
    for (const char* name : {"simulate-memory", "simulate-landau", "converge", "kernel-check", "stationarity"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);
        // reserved: there is no RNG anywhere; the flag takes no value
        sub->add_flag("--seedless", seedless, "assert that the run uses no random numbers")
            ->disable_flag_override();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : vkin::kExitConfig;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        vkin::SimulationConfig cfg;
        const vkin::Scenario wanted = scenario_of(sub);
        if (config_path.empty()) {
            cfg = vkin::parse_config("{\"scenario\": \"" + vkin::to_string(wanted) + "\"}");
        } else {
            cfg = vkin::parse_config_file(config_path);
            if (cfg.scenario != wanted)
                throw vkin::ConfigError("config scenario '" + vkin::to_string(cfg.scenario) +
                                        "' does not match subcommand " + sub);
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (threads >= 0) cfg.threads = threads;
        const int code = vkin::run(cfg);
        if (code == vkin::kExitAbort) std::cerr << "vkin: solver aborted; see manifest.json\n";
        if (code == vkin::kExitCheckFailed) std::cerr << "vkin: check failed; see manifest.json\n";
        return code;
    } catch (const vkin::ConfigError& e) {
        std::cerr << "vkin: config error: " << e.what() << "\n";
        return vkin::kExitConfig;
    } catch (const vkin::SolverAbort& e) {
        std::cerr << "vkin: solver aborted: " << e.what() << "\n";
        return vkin::kExitAbort;
    } catch (const std::exception& e) {
        std::cerr << "vkin: " << e.what() << "\n";
        return 1;
    }
}
