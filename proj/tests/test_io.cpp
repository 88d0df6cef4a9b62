#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "humsim/config_io.hpp"
#include "humsim/csv.hpp"
#include "humsim/errors.hpp"
#include "humsim/path_spec.hpp"
#include "humsim/svg.hpp"

using namespace humsim;
using doctest::Approx;
using nlohmann::json;

namespace {

std::string expect_data_error(const std::string& text) {
    std::istringstream is(text);
    try {
        read_measurement_csv(is);
    } catch (const DataError& e) {
        return e.what();
    }
    FAIL("no DataError for: " << text);
    return {};
}

}  // namespace

TEST_CASE("path specs") {
    CHECK(parse_path_spec("0:10:5") == std::vector<double>{0, 5, 10});
    CHECK(parse_path_spec("0:10:5,10:0:5") == std::vector<double>{0, 5, 10, 5, 0});
    CHECK(parse_path_spec("0:10:4") == std::vector<double>{0, 4, 8, 10});
    CHECK(parse_path_spec("7:7:1") == std::vector<double>{7});
    CHECK(parse_path_spec(" 0 : 2 : 1 ") == std::vector<double>{0, 1, 2});
    const auto fine = parse_path_spec("0:1:0.1");
    REQUIRE(fine.size() == 11);
    CHECK(fine.back() == 1.0);
    CHECK(parse_path_spec("0:95:1,95:0:1").size() == 191);
    for (const char* bad : {"", "0:10", "0:10:0", "0:10:-1", "a:b:c", "0:10:1,", "0:1:2:3"}) {
        INFO(bad);
        CHECK_THROWS_AS(parse_path_spec(bad), UsageError);
    }
}

TEST_CASE("number formatting") {
    CHECK(format_number(0) == "0");
    CHECK(format_number(86.2737966123) == "86.2737966");
    CHECK(format_number(1.5e-10) == "1.5e-10");
    CHECK(format_number(25) == "25");
}

TEST_CASE("sweep CSV round trip is byte identical") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 25; ++trial) {
        SweepResult r;
        const int n = 1 + static_cast<int>(u(rng) * 40);
        for (int i = 0; i < n; ++i)
            r.rows.push_back({100 * u(rng), 100 * u(rng) - 20, u(rng) < 0.5 ? Direction::up : Direction::down, u(rng),
                              1 + 30 * u(rng), 1e-10 * (0.5 + u(rng))});
        std::ostringstream first;
        write_sweep_csv(first, r, {"note,1"});
        std::istringstream in(first.str());
        const auto back = read_sweep_csv(in);
        REQUIRE(back.rows.size() == r.rows.size());
        std::ostringstream second;
        write_sweep_csv(second, back, {"note,1"});
        CHECK(first.str() == second.str());
    }
}

TEST_CASE("sweep CSV layout") {
    SweepResult r;
    r.rows.push_back({0, 25, Direction::up, 0, 5.19615242, 86.2737966e-12});
    std::ostringstream os;
    write_sweep_csv(os, r, {"dry_capacitance_pf,86.2737966"});
    CHECK(os.str() ==
          "rh_percent,temp_c,branch,water_fill,eps_eff,capacitance_pf\n"
          "0,25,up,0,5.19615242,86.2737966\n"
          "# dry_capacitance_pf,86.2737966\n");
}

TEST_CASE("measurement CSV") {
    std::istringstream is(
        "rh_percent,capacitance_pf,branch,weight\n"
        "10,90.5,up,1\n"
        "\n"
        "# comment\n"
        "50,100,down,2\n");
    const auto m = read_measurement_csv(is);
    REQUIRE(m.rows.size() == 2);
    CHECK(m.rows[0].capacitance == Approx(90.5e-12));
    CHECK(m.rows[1].branch == Direction::down);
    CHECK(m.rows[1].weight == 2);
    CHECK(m.rows[1].temp_c == 25);

    std::ostringstream os;
    write_measurement_csv(os, m);
    std::istringstream again(os.str());
    const auto m2 = read_measurement_csv(again);
    REQUIRE(m2.rows.size() == 2);
    CHECK(m2.rows[1].capacitance == m.rows[1].capacitance);
}

TEST_CASE("measurement CSV errors name the line") {
    CHECK(expect_data_error("").find("no header") != std::string::npos);
    CHECK(expect_data_error("rh_percent,capacitance_pf\n").find("no data rows") != std::string::npos);
    CHECK(expect_data_error("rh_percent\n1\n").find("capacitance_pf") != std::string::npos);
    CHECK(expect_data_error("rh_percent,capacitance_pf\n10,90\n20,abc\n").find("line 3") != std::string::npos);
    CHECK(expect_data_error("rh_percent,capacitance_pf\n10,90,7\n").find("line 2") != std::string::npos);
    CHECK(expect_data_error("rh_percent,capacitance_pf,colour\n10,90,red\n").find("colour") != std::string::npos);
    CHECK(expect_data_error("rh_percent,capacitance_pf,branch\n10,90,sideways\n").find("line 2") != std::string::npos);
}

TEST_CASE("config round trip") {
    RunConfig rc;
    rc.sensor.stack.porosity = 0.31;
    rc.sensor.mixing = MixingRule::series;
    rc.sensor.bet.max_layers = 6.0;
    rc.sweep.rh_path = "0:50:5";
    FitSpec fs;
    fs.free_parameters = {{"area", 0.5e-6, 2e-6, 1e-6}};
    fs.restarts = 2;
    rc.fit = fs;
    const json j = to_json(rc);
    const auto back = run_config_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.sensor.stack.porosity == 0.31);
    CHECK(back.sensor.mixing == MixingRule::series);
    REQUIRE(back.fit);
    CHECK(back.fit->free_parameters[0].name == "area");
}

TEST_CASE("partial config keeps defaults") {
    const auto cfg = sensor_config_from_json(json::parse(R"({"stack": {"porosity": 0.4}})"));
    CHECK(cfg.stack.porosity == 0.4);
    CHECK(cfg.stack.area == SensorConfig{}.stack.area);
    CHECK(!cfg.bet.max_layers);
}

TEST_CASE("config rejects unknown keys and bad values") {
    auto expect = [](const char* text, const char* needle) {
        INFO(text);
        try {
            run_config_from_json(json::parse(text));
            FAIL("accepted");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect(R"({"stack": {"porosty": 0.3}})", "stack.porosty");
    expect(R"({"colour": 1})", "colour");
    expect(R"({"permittivity": {"mixing": "geometric"}})", "geometric");
    expect(R"({"stack": {"porosity": "high"}})", "stack.porosity");
}

TEST_CASE("shipped default config matches built-in defaults") {
    const auto path = std::filesystem::path(HUMSIM_SOURCE_DIR) / "configs" / "default.json";
    std::ifstream in(path);
    REQUIRE(in.good());
    const json shipped = json::parse(in);
    CHECK(shipped == to_json(RunConfig{}));
}

TEST_CASE("config files on disk") {
    const auto dir = std::filesystem::temp_directory_path() / "humsim_io_test";
    std::filesystem::create_directories(dir);
    RunConfig rc;
    rc.sensor.kelvin.theta_adv_deg = 35;
    save_run_config(rc, dir / "a.json");
    CHECK(load_run_config(dir / "a.json").sensor.kelvin.theta_adv_deg == 35);
    CHECK_THROWS_AS(load_run_config(dir / "missing.json"), ConfigError);
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK_THROWS_AS(load_run_config(dir / "broken.json"), ConfigError);

    std::ofstream(dir / "spec.json") << R"({"free_parameters": [{"name": "porosity", "lower": 0.1, "upper": 0.5, "initial": 0.2}]})";
    CHECK(load_fit_spec(dir / "spec.json").free_parameters.size() == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("svg chart") {
    std::ostringstream os;
    write_svg_chart(os, {{"up", "#1f77b4", {{0, 80}, {50, 100}, {95, 180}}}}, "C vs RH", "RH (%)", "C (pF)");
    const auto s = os.str();
    CHECK(s.find("viewBox=\"0 0 800 600\"") != std::string::npos);
    CHECK(s.find("<polyline") != std::string::npos);
    CHECK(s.find("C (pF)") != std::string::npos);
    CHECK(s.rfind("</svg>") != std::string::npos);
}
