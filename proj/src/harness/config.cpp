#include "vkin/harness.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vkin {

using json = nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out)
{
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

Scenario scenario_from(const std::string& s)
{
    if (s == "memory") return Scenario::memory;
    if (s == "landau") return Scenario::landau;
    if (s == "converge") return Scenario::converge;
    if (s == "kernel-check") return Scenario::kernel_check;
    if (s == "stationarity") return Scenario::stationarity;
    throw ConfigError("unknown scenario '" + s + "'");
}

void validate(const SimulationConfig& c)
{
    (void)VelocityGrid(c.n, c.L);
    try {
        (void)CutoffSpec(c.kappa);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!(c.t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (c.t_end > c.max_horizon * (1.0 + 1e-12))
        throw ConfigError("t_end must not exceed max_horizon (default 1): the existence results only cover "
                          "short horizons t_end <= 1");
    if (!(c.delta2 >= 0.0)) throw ConfigError("delta2 must be non-negative");
    if (c.record_stride < 1) throw ConfigError("record_stride must be at least 1");
    if (!(c.tail_tol > 0.0)) throw ConfigError("tail_tol must be positive");
    if (!(c.cfl_factor > 0.0)) throw ConfigError("cfl_factor must be positive");
    if (c.dt < 0.0) throw ConfigError("dt must be positive (0 selects it automatically)");
    if (c.threads < 0) throw ConfigError("threads must be non-negative");
    if (!(c.check_tolerance > 0.0)) throw ConfigError("check_tolerance must be positive");
    if (c.v_norm) {
        if (!(c.v_norm->A >= 1.0))
            throw ConfigError("v_norm.A must be at least 1: the time-weighted norms are only defined for A >= 1");
        if (c.v_norm->order < 0 || c.v_norm->order > kMaxSobolevOrder)
            throw ConfigError("v_norm.order must lie in [0, " + std::to_string(kMaxSobolevOrder) + "]");
    }

    auto check_dt = [&](double eps) {
        if (!(eps > 0.0)) throw ConfigError("eps must be positive");
        if (c.dt > 0.25 * eps * (1.0 + 1e-12)) {
            std::ostringstream msg;
            msg << "dt = " << c.dt << " exceeds eps/4 = " << 0.25 * eps
                << ": the memory kernel decays on the time scale eps and must be resolved";
            throw ConfigError(msg.str());
        }
    };
    switch (c.scenario) {
    case Scenario::memory: check_dt(c.eps); break;
    case Scenario::converge:
    case Scenario::stationarity:
        if (c.eps_list.size() < 2) throw ConfigError("eps_list needs at least two values");
        for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
            check_dt(c.eps_list[i]);
            if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))
                throw ConfigError("eps_list must be strictly decreasing");
        }
        break;
    default: break;
    }

    const PerturbationSpec& p = c.perturbation;
    if (p.kind != "shifted" && p.kind != "isotropic")
        throw ConfigError("perturbation.kind must be 'shifted' or 'isotropic'");
    if (!(p.width > 0.0)) throw ConfigError("perturbation.width must be positive");
    if (!(p.amplitude >= 0.0))
        throw ConfigError("perturbation.amplitude must be non-negative: v0 has to satisfy 0 <= v0 <= C e^{-|v|/2}");
}

} // namespace

std::string to_string(Scenario s)
{
    switch (s) {
    case Scenario::memory: return "memory";
    case Scenario::landau: return "landau";
    case Scenario::converge: return "converge";
    case Scenario::kernel_check: return "kernel-check";
    case Scenario::stationarity: return "stationarity";
    }
    return "?";
}

MemoryConfig SimulationConfig::memory_config(double e) const
{
    MemoryConfig m;
    m.eps = e;
    m.dt = dt;
    m.t_end = t_end;
    m.record_stride = record_stride;
    m.mode = mode;
    m.tail_tol = tail_tol;
    m.quadrature = quadrature;
    m.n = n;
    m.L = L;
    m.cutoff = CutoffSpec(kappa);
    m.cfl_factor = cfl_factor;
    m.max_horizon = max_horizon;
    m.threads = threads;
    return m;
}

SimulationConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc,
               {"scenario", "grid", "cutoff", "eps", "eps_list", "dt", "cfl_factor", "t_end", "max_horizon", "delta2",
                "perturbation", "record_stride", "mode", "quadrature", "tail_tol", "cross_check", "l_doubling",
                "v_norm", "check_tolerance", "min_order", "write_fields", "output_dir", "threads"},
               "config");
    if (!doc.contains("scenario")) throw ConfigError("config must name a scenario");

    SimulationConfig c;
    std::string s;
    read(doc, "scenario", s);
    c.scenario = scenario_from(s);
    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        check_keys(g, {"n", "L"}, "grid");
        read(g, "n", c.n);
        read(g, "L", c.L);
    }
    if (doc.contains("cutoff")) {
        check_keys(doc["cutoff"], {"kappa"}, "cutoff");
        read(doc["cutoff"], "kappa", c.kappa);
    }
    read(doc, "eps", c.eps);
    read(doc, "eps_list", c.eps_list);
    read(doc, "dt", c.dt);
    read(doc, "cfl_factor", c.cfl_factor);
    read(doc, "t_end", c.t_end);
    read(doc, "max_horizon", c.max_horizon);
    read(doc, "delta2", c.delta2);
    if (doc.contains("perturbation")) {
        const auto& p = doc["perturbation"];
        check_keys(p, {"kind", "center", "width", "amplitude"}, "perturbation");
        read(p, "kind", c.perturbation.kind);
        read(p, "center", c.perturbation.center);
        read(p, "width", c.perturbation.width);
        read(p, "amplitude", c.perturbation.amplitude);
    }
    read(doc, "record_stride", c.record_stride);
    if (doc.contains("mode")) {
        read(doc, "mode", s);
        if (s == "windowed") c.mode = HistoryMode::windowed;
        else if (s == "naive") c.mode = HistoryMode::naive;
        else throw ConfigError("mode must be 'windowed' or 'naive'");
    }
    if (doc.contains("quadrature")) {
        read(doc, "quadrature", s);
        if (s == "product") c.quadrature = LagQuadrature::product;
        else if (s == "trapezoid") c.quadrature = LagQuadrature::trapezoid;
        else throw ConfigError("quadrature must be 'product' or 'trapezoid'");
    }
    read(doc, "tail_tol", c.tail_tol);
    read(doc, "cross_check", c.cross_check);
    read(doc, "l_doubling", c.l_doubling);
    if (doc.contains("v_norm")) {
        const auto& v = doc["v_norm"];
        check_keys(v, {"A", "order", "weight"}, "v_norm");
        VNormRequest r;
        read(v, "A", r.A);
        read(v, "order", r.order);
        if (v.contains("weight")) {
            read(v, "weight", s);
            if (s == "lambda") r.weight = Weight::lambda;
            else if (s == "lambda_tilde") r.weight = Weight::lambda_tilde;
            else throw ConfigError("v_norm.weight must be 'lambda' or 'lambda_tilde'");
        }
        c.v_norm = r;
    }
    read(doc, "check_tolerance", c.check_tolerance);
    read(doc, "min_order", c.min_order);
    read(doc, "write_fields", c.write_fields);
    if (doc.contains("output_dir")) {
        read(doc, "output_dir", s);
        c.output_dir = s;
    }
    read(doc, "threads", c.threads);
    validate(c);
    return c;
}

SimulationConfig parse_config_file(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const SimulationConfig& c)
{
    json j;
    j["scenario"] = to_string(c.scenario);
    j["grid"] = {{"n", c.n}, {"L", c.L}};
    j["cutoff"] = {{"kappa", c.kappa}};
    j["eps"] = c.eps;
    j["eps_list"] = c.eps_list;
    j["dt"] = c.dt;
    j["cfl_factor"] = c.cfl_factor;
    j["t_end"] = c.t_end;
    j["max_horizon"] = c.max_horizon;
    j["delta2"] = c.delta2;
    j["perturbation"] = {{"kind", c.perturbation.kind},
                         {"center", c.perturbation.center},
                         {"width", c.perturbation.width},
                         {"amplitude", c.perturbation.amplitude}};
    j["record_stride"] = c.record_stride;
    j["mode"] = c.mode == HistoryMode::naive ? "naive" : "windowed";
    j["quadrature"] = c.quadrature == LagQuadrature::product ? "product" : "trapezoid";
    j["tail_tol"] = c.tail_tol;
    j["cross_check"] = c.cross_check;
    j["l_doubling"] = c.l_doubling;
    if (c.v_norm)
        j["v_norm"] = {{"A", c.v_norm->A},
                       {"order", c.v_norm->order},
                       {"weight", c.v_norm->weight == Weight::lambda ? "lambda" : "lambda_tilde"}};
    j["check_tolerance"] = c.check_tolerance;
    j["min_order"] = c.min_order;
    j["write_fields"] = c.write_fields;
    j["output_dir"] = c.output_dir.string();
    j["threads"] = c.threads;
    return j.dump(2);
}

ScalarField default_perturbation(const PerturbationSpec& spec, const VelocityGrid& grid)
{
    if (!(spec.amplitude >= 0.0))
        throw ConfigError("perturbation: v0 must be non-negative (0 <= v0 <= C e^{-|v|/2})");
    const Vec3 c = spec.kind == "isotropic" ? Vec3{0.0, 0.0, 0.0} : spec.center;
    const double s2 = spec.width * spec.width;
    ScalarField v0 = sample(grid, [&](const Vec3& v) {
        const Vec3 d{v[0] - c[0], v[1] - c[1], v[2] - c[2]};
        return spec.amplitude * std::exp(-dot(d, d) / s2);
    });
    for (std::size_t i = 0; i < v0.size(); ++i)
        if (v0[i] < 0.0) throw ConfigError("perturbation: v0 is negative on the grid");
    return v0;
}

ScalarField initial_datum(const SimulationConfig& cfg, const VelocityGrid& grid)
{
    ScalarField u = sample(grid, Maxwellian{});
    if (cfg.delta2 > 0.0) u.axpy(cfg.delta2, default_perturbation(cfg.perturbation, grid));
    return u;
}

} // namespace vkin
