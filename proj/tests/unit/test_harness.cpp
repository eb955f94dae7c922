#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "vkin/field_io.hpp"
#include "vkin/harness.hpp"

using namespace vkin;
using json = nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("vkin_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::vector<std::vector<double>> parse_csv(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line); // header
    while (std::getline(is, line)) {
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST(Config, MinimalLandauGetsDefaults)
{
    const auto c = parse_config(R"({"scenario": "landau"})");
    EXPECT_EQ(c.scenario, Scenario::landau);
    EXPECT_EQ(c.n, 32);
    EXPECT_EQ(c.L, 8.0);
    EXPECT_EQ(c.kappa, 0.25);
    EXPECT_EQ(c.t_end, 0.25);
    EXPECT_EQ(c.delta2, 0.05);
    EXPECT_EQ(c.cfl_factor, 0.2);
    EXPECT_EQ(c.tail_tol, 1e-10);
    EXPECT_EQ(c.mode, HistoryMode::windowed);
}

TEST(Config, Rejections)
{
    EXPECT_THROW(parse_config(R"({"scenario": "memory", "eps": 0.1, "dt": 0.03})"), ConfigError);
    EXPECT_NO_THROW(parse_config(R"({"scenario": "memory", "eps": 0.1, "dt": 0.025})"));
    EXPECT_THROW(parse_config(R"({"scenario": "converge", "eps_list": [0.05, 0.1, 0.2]})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "tend": 0.3})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "grid": {"n": 32, "h": 1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "grid": {"n": 31}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "t_end": 1.5})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "v_norm": {"A": 0.5}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "cutoff": {"kappa": 0.6}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "perturbation": {"amplitude": -1}})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "nope"})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"grid": {}})"), ConfigError);
    EXPECT_THROW(parse_config("{not json"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "n": "x"})"), ConfigError);
    EXPECT_THROW(parse_config(R"({"scenario": "landau", "record_stride": "x"})"), ConfigError);
}

TEST(Config, EchoRoundTrips)
{
    const auto c = parse_config(
        R"({"scenario": "converge", "grid": {"n": 24, "L": 8}, "eps_list": [0.2, 0.1, 0.05], "l_doubling": true,
            "v_norm": {"A": 2, "order": 1, "weight": "lambda_tilde"}, "mode": "naive"})");
    const auto echo = config_to_json(c);
    const auto back = parse_config(echo);
    EXPECT_EQ(config_to_json(back), echo);
    EXPECT_EQ(back.n, 24);
    EXPECT_TRUE(back.l_doubling);
    ASSERT_TRUE(back.v_norm.has_value());
    EXPECT_EQ(back.v_norm->weight, Weight::lambda_tilde);
}

TEST(Perturbation, DefaultBoundAndRejection)
{
    const VelocityGrid g(32, 8.0);
    const auto v0 = default_perturbation(PerturbationSpec{}, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, v0[i] * std::exp(0.5 * norm(g.point(i))));
    EXPECT_LE(worst, 25.0);
    EXPECT_GT(worst, 1.0);

    PerturbationSpec bad;
    bad.amplitude = -0.5;
    EXPECT_THROW(default_perturbation(bad, g), ConfigError);

    SimulationConfig c;
    c.delta2 = 0.0;
    EXPECT_EQ(initial_datum(c, g).values(), sample(g, Maxwellian{}).values());
}

TEST(Format, DoublesRoundTrip)
{
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0})
        EXPECT_EQ(std::stod(format_double(x)), x);
    const std::vector<unsigned char> abc{'1', '2', '3', '4', '5', '6', '7', '8', '9'};
    EXPECT_EQ(crc32_of(abc), 0xCBF43926u);
}

TEST(Run, LandauScenarioArtifacts)
{
    const auto dir = scratch("landau");
    auto c = parse_config(R"({"scenario": "landau", "grid": {"n": 8, "L": 6}, "t_end": 0.05})");
    c.output_dir = dir;
    ASSERT_EQ(run(c), kExitOk);

    const auto manifest = json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["version"], kVersion);
    EXPECT_EQ(manifest["exit_code"], 0);
    EXPECT_EQ(manifest["config"]["grid"]["n"], 8);
    ASSERT_FALSE(manifest["artifacts"].empty());
    for (const auto& a : manifest["artifacts"]) {
        const auto bytes = slurp(dir / a["path"].get<std::string>());
        EXPECT_EQ(bytes.size(), a["bytes"].get<std::size_t>());
        std::ostringstream crc;
        crc << std::hex;
        crc.width(8);
        crc.fill('0');
        crc << crc32_of(std::vector<unsigned char>(bytes.begin(), bytes.end()));
        EXPECT_EQ(crc.str(), a["crc32"].get<std::string>());
    }

    // moments table is re-parseable and matches the stored fields exactly
    const auto rows = parse_csv(slurp(dir / "landau_moments.csv"));
    ASSERT_GE(rows.size(), 2u);
    const auto f0 = read_vkf1(dir / "landau_fields" / "state_00000.vkf1");
    const auto m0 = moments(f0);
    EXPECT_EQ(rows[0][0], 0.0);
    EXPECT_EQ(rows[0][1], m0.mass);
    EXPECT_EQ(rows[0][5], m0.energy);
    EXPECT_EQ(rows[0][6], m0.entropy);
    EXPECT_EQ(rows[0][7], m0.l2_lambda_norm);
    std::filesystem::remove_all(dir);
}

TEST(Run, ByteIdenticalArtifacts)
{
    const auto a = scratch("det_a"), b = scratch("det_b");
    auto c = parse_config(R"({"scenario": "memory", "grid": {"n": 8, "L": 6}, "t_end": 0.05, "threads": 1})");
    c.output_dir = a;
    ASSERT_EQ(run(c), kExitOk);
    c.output_dir = b;
    ASSERT_EQ(run(c), kExitOk);
    const auto ma = json::parse(slurp(a / "manifest.json"));
    const auto mb = json::parse(slurp(b / "manifest.json"));
    EXPECT_EQ(ma["artifacts"], mb["artifacts"]);
    for (const auto& art : ma["artifacts"]) {
        const auto p = art["path"].get<std::string>();
        EXPECT_EQ(slurp(a / p), slurp(b / p)) << p;
    }
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST(Run, MemoryCrossCheck)
{
    const auto dir = scratch("cross");
    auto c = parse_config(
        R"({"scenario": "memory", "grid": {"n": 8, "L": 6}, "t_end": 0.1, "cross_check": true, "write_fields": false})");
    c.output_dir = dir;
    EXPECT_EQ(run(c), kExitOk);
    const auto rows = parse_csv(slurp(dir / "cross_check.csv"));
    ASSERT_FALSE(rows.empty());
    EXPECT_FALSE(std::filesystem::exists(dir / "memory_fields"));
    std::filesystem::remove_all(dir);
}
