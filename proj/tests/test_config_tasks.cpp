#include "omring/config.hpp"
#include "omring/errors.hpp"
#include "omring/sweep_table.hpp"
#include "omring/tasks.hpp"

#include <doctest.h>

#include <json.hpp>

#include <numbers>
#include <sstream>

using namespace omring;

namespace
{

RunConfig parse(const std::string &text, Task task = Task::spectrum)
{
    std::istringstream in(text);
    return parse_config(in, task);
}

const std::string diode = R"(
[units]
mode = kappa
[device]
omega_m = 20
kappa = 1
kappa_in = 1   # critically coupled
[coupling]
g_r = 5
[grid]
start = -2
stop = 2
points = 5
[spectrum]
solver = toy
)";

std::string metadata_value(const SweepTable &t, const std::string &key)
{
    for (const auto &[k, v] : t.metadata)
        if (k == key)
            return v;
    return {};
}

} // namespace

TEST_CASE("quantities and suffixes")
{
    CHECK(parse_quantity("2.5", UnitMode::kappa) == 2.5);
    CHECK(parse_quantity(" -3e2 ", UnitMode::kappa) == -300.0);
    CHECK(parse_quantity("78 MHz", UnitMode::hz) == 78e6);
    CHECK(parse_quantity("3.4kHz", UnitMode::hz) == doctest::Approx(3400.0));
    CHECK(parse_quantity("1 GHz", UnitMode::hz) == 1e9);
    CHECK_THROWS_AS(parse_quantity("78 MHz", UnitMode::kappa), ConfigError);
    CHECK_THROWS_AS(parse_quantity("78 furlongs", UnitMode::hz), ConfigError);
    CHECK_THROWS_AS(parse_quantity("abc", UnitMode::kappa), ConfigError);
    CHECK_THROWS_AS(parse_quantity("1.5.2", UnitMode::kappa), ConfigError);
}

TEST_CASE("grid values")
{
    const std::vector<double> v = Grid{-1.0, 1.0, 5}.values();
    REQUIRE(v.size() == 5);
    CHECK(v.front() == -1.0);
    CHECK(v[2] == 0.0);
    CHECK(v.back() == 1.0);
    CHECK(Grid{3.0, 7.0, 1}.values() == std::vector<double>{3.0});
}

TEST_CASE("kappa-mode configuration")
{
    const RunConfig c = parse(diode);
    CHECK(c.units == UnitMode::kappa);
    CHECK(c.device.omega_m == 20.0);
    CHECK(c.device.delta0 == -20.0);
    REQUIRE(c.coupling);
    CHECK(c.coupling->g_r == cplx{5.0, 0.0});
    CHECK(c.coupling->delta == -20.0);
    CHECK_FALSE(c.pump);
    CHECK(c.solver == SolverKind::toy);
    CHECK(c.grid.points == 5);
}

TEST_CASE("hz-mode configuration is normalized by kappa")
{
    const RunConfig c = parse(R"(
[units]
mode = hz
[device]
omega_m = 78 MHz
kappa = 7.1 MHz
kappa_in = 0
g0 = 3.4 kHz
carrier = 193 THz
[coupling]
g_r = 11.4 MHz
)",
                              Task::classify);
    CHECK(c.device.kappa == 1.0);
    CHECK(c.device.omega_m == doctest::Approx(78.0 / 7.1));
    CHECK(c.coupling->g_r.real() == doctest::Approx(11.4 / 7.1));
    CHECK(c.coupling->delta == doctest::Approx(-78.0 / 7.1));
    CHECK(*c.device.rate_unit == doctest::Approx(2.0 * std::numbers::pi * 7.1e6));
    CHECK(*c.device.omega_c == doctest::Approx(2.0 * std::numbers::pi * 193e12));
}

TEST_CASE("configuration errors")
{
    CHECK_THROWS_AS(parse("[device]\nkappa = 1\n"), ConfigError);                       // no unit mode
    CHECK_THROWS_AS(parse("[units]\nmode = furlongs\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[device]\nkappa = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[device]\nkapa = 1\n"), ConfigError); // typo
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[devise]\nkappa = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[pump]\ndrive = 1\n[coupling]\ng_r = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[device]\nomega_m = 20 MHz\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = hz\n[device]\nomega_m = 20 MHz\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[grid]\npoints = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[spectrum]\nsolver = magic\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[spectrum]\nin = wg1_R\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[pump]\ncancel_left = true\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[noise]\nhalf_width = 1\nband_lo = 0\n", Task::noise),
                    ConfigError);
    CHECK_THROWS_AS(parse("[units]\nmode = kappa\n[output]\nformat = xml\n"), ConfigError);
    CHECK_THROWS_AS(parse("[units\nmode = kappa\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/omring.ini", Task::spectrum), ConfigError);
    CHECK_THROWS_AS(parse_task("fly"), ConfigError);
}

TEST_CASE("number formatting")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-HUGE_VAL) == "-inf");
    for (double v : {1.0 / 3.0, 2.0 / 7.0 * 1e17, -4.2e-9})
        CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("csv and json writers")
{
    SweepTable t;
    t.add_metadata("note", "plain");
    t.columns = {"x", "label"};
    t.rows.push_back({1.5, std::string("a,b")});
    t.rows.push_back({std::nan(""), std::string("say \"hi\"")});
    std::ostringstream csv;
    write_csv(csv, t);
    CHECK(csv.str() == "# note = plain\nx,label\n1.5,\"a,b\"\nnan,\"say \"\"hi\"\"\"\n");

    std::ostringstream js;
    write_json(js, t);
    const nlohmann::json doc = nlohmann::json::parse(js.str());
    CHECK(doc["metadata"]["note"] == "plain");
    CHECK(doc["rows"][0][0] == 1.5);
    CHECK(doc["rows"][1][0].is_null());
    CHECK(doc["columns"][1] == "label");
}

TEST_CASE("spectrum task reproduces the diode row")
{
    const TaskResult r = execute(parse(diode));
    CHECK_FALSE(r.failure);
    const SweepTable &t = r.table;
    CHECK(t.columns[0] == "delta");
    CHECK(t.columns[1] == "abs_tR2");
    CHECK(t.columns[2] == "abs_tL2");
    CHECK(t.number(2, "delta") == 0.0);
    CHECK(std::abs(t.number(2, "abs_tR2") - 1.0) < 1e-10);
    CHECK(std::abs(t.number(2, "abs_tL2")) < 1e-10);
    CHECK_FALSE(metadata_value(t, "convention.fourier").empty());
    CHECK(metadata_value(t, "bandwidth.threshold") == "0.5");
    CHECK(metadata_value(t, "version") == version_string);
}

TEST_CASE("every task runs on a small stable configuration")
{
    const std::string base = R"(
[units]
mode = kappa
[device]
omega_m = 20
kappa_in = 1
gamma_m = 0.001
[coupling]
g_r = 3
[grid]
start = -1
stop = 1
points = 3
[contour]
beta_points = 2
beta_stop = 1
g_start = 3
g_stop = 4
g_points = 2
[noise]
n_th = 100
half_width = 1
)";
    for (Task task : {Task::spectrum, Task::phase, Task::bandwidth, Task::contour, Task::noise, Task::squeezing,
                      Task::classify})
    {
        const TaskResult r = execute(parse(base, task));
        CHECK_FALSE(r.table.rows.empty());
        CHECK_FALSE(r.failure);
        CHECK(metadata_value(r.table, "task") == std::string(task_name(task)));
    }
    const TaskResult v = execute(parse(base + "[verify]\ninputs = wg1_L\n", Task::verify));
    CHECK_FALSE(v.failure);
    CHECK(v.table.rows.size() == 3 * 4);
    CHECK(metadata_value(v.table, "verify.result") == "pass");
}

TEST_CASE("pump task with left cancellation")
{
    const TaskResult r = execute(parse(R"(
[units]
mode = kappa
[device]
omega_m = 20
kappa_in = 1
g0 = 0.001
beta = 4
[pump]
drive = 100
delta = -20
cancel_left = yes
)",
                                       Task::pump));
    const SweepTable &t = r.table;
    CHECK(t.number(0, "abs_alpha_l2") < 1e-24 * t.number(0, "abs_alpha_r2"));
    CHECK(t.number(0, "delta") == -20.0);
    CHECK_THROWS_AS(execute(parse(diode, Task::pump)), ConfigError);
}

TEST_CASE("exit codes and error lines")
{
    CHECK(exit_code_for(ConfigError("x")) == 2);
    CHECK(exit_code_for(InvalidParameters("x")) == 2);
    CHECK(exit_code_for(UnstableModel("x", -1.0)) == 3);
    CHECK(exit_code_for(SingularSystem("x", 1e13)) == 4);
    CHECK(exit_code_for(QuadratureError("x", 1e-3)) == 4);
    CHECK(exit_code_for(PumpSolveError("x")) == 4);
    const std::string line = error_line(UnstableModel("two\nlines", -0.5));
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("kind=unstable_model exit=3") != std::string::npos);
    CHECK(line.find("margin=-0.5") != std::string::npos);

    const std::string unstable = "[units]\nmode = kappa\n[coupling]\ng_r = 12\n";
    CHECK_THROWS_AS(execute(parse(unstable)), UnstableModel);
}
