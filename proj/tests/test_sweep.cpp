#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "dce/errors.hpp"
#include "dce/sweep.hpp"

using namespace dce;

namespace {
const char* kMech = R"(# mirror only
condition = mechanical
mode_k = 2,1,2
omega_c_min = 2
omega_c_max = 8
omega_c_count = 4
omega_g = 0
epsilon = 1e-3
chi_T = 0.5
samples = 16
)";

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }
}  // namespace

TEST_CASE("parse and canonical round trip") {
    auto c = SweepConfig::parse(kMech);
    CHECK(c.condition == Resonance::Mechanical);
    CHECK(c.mode_k == ModeIndex{2, 1, 2});
    CHECK(c.omega_c_count == 4);
    CHECK(c.chi_T == 0.5);
    auto again = SweepConfig::parse(c.serialize());
    CHECK(again.serialize() == c.serialize());

    auto log = SweepConfig::parse(
        "condition = sum_g_plus_c\nmode_k = 2-1-2\nmode_j = 2,1,1\nomega_c_min = 0.1\nomega_c_max = 10\n"
        "omega_c_count = 5\nomega_c_scale = log\nomega_g = 0.3, 0.7\nkappa = 0.125\nepsilon = 1e-3\n");
    CHECK(log.omega_g == std::vector<double>{0.3, 0.7});
    CHECK(SweepConfig::parse(log.serialize()).serialize() == log.serialize());
    auto grid = log.omega_c_grid();
    CHECK(grid.front() == doctest::Approx(0.1));
    CHECK(grid[2] == doctest::Approx(1.0));
    CHECK(grid.back() == doctest::Approx(10.0));
    CHECK(log.strain(2.0) == doctest::Approx(0.5));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(SweepConfig::parse("condition = mechanical\ncondition = gw\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("epsilon = 1e-3x\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("epsilon\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("condition = sum_g_plus_c\n"), ConfigError);  // no partner mode
    CHECK_THROWS_AS(SweepConfig::parse("kappa = 1\nh_plus = 1e-3\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("omega_c_count = 1\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("omega_c_scale = log\nomega_c_min = 0\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::parse("tol_rel = 0\n"), ConfigError);
    CHECK_THROWS_AS(SweepConfig::load("/nonexistent/file.cfg"), ConfigError);
    CHECK_THROWS_AS(parse_mode("1,2"), ConfigError);
    CHECK(format_mode(parse_mode("3, 1, 4")) == "3-1-4");
}

TEST_CASE("rates table") {
    auto c = SweepConfig::parse(kMech);
    auto rows = cmd_rates(c, 2);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.status == "ok");
        CHECK(r.chi > 0);
        CHECK(r.T * r.chi == doctest::Approx(0.5));
        CHECK(r.N_analytic == doctest::Approx(std::pow(std::sinh(0.5), 2)));
        CHECK(2 * r.omega_k0 == doctest::Approx(r.Omega_c).epsilon(1e-12));
    }
    const auto csv = rates_csv(rows);
    CHECK(first_line(csv) ==
          "condition,mode_k,mode_j,Omega_c,Omega_g,epsilon,h_plus,L,omega_k0,omega_j0,chi,T,N_analytic,"
          "degenerate,long_wavelength_ok,weak_drive_ok,status");
    // deterministic regardless of thread count
    CHECK(rates_csv(cmd_rates(c, 1)) == csv);
}

TEST_CASE("unsolvable rows are kept with a status") {
    auto c = SweepConfig::parse(
        "condition = sum_c_minus_g\nmode_k = 2,1,2\nmode_j = 2,1,1\nomega_c_min = 0.1\nomega_c_max = 2\n"
        "omega_c_count = 3\nomega_g = 0.5\nh_plus = 1e-3\nepsilon = 1e-3\n");
    auto rows = cmd_rates(c);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].status == "no_solution");
    CHECK(rows[2].status == "ok");
}

TEST_CASE("validate rows") {
    auto c = SweepConfig::parse(kMech);
    auto rows = cmd_validate(c, 1);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.status == "ok");
        CHECK(r.numeric);
        CHECK(r.rel_dev < 0.05);
        CHECK(r.unitarity_defect < 1e-6);
    }
    const auto csv = validate_csv(rows);
    CHECK(first_line(csv).find("N_numeric,N_numeric_j,rel_dev,numeric_rate,rate_ratio,unitarity_defect") !=
          std::string::npos);
    CHECK(validate_csv(cmd_validate(c, 2)) == csv);

    auto json = nlohmann::json::parse(records_json("validate", c, rows));
    CHECK(json["schema"] == 1);
    CHECK(json["records"].size() == 4);
    CHECK(json["config"]["condition"] == "mechanical");
    CHECK(json["records"][0].contains("N_numeric"));
}

TEST_CASE("detuned validation loses the resonant growth") {
    auto c = SweepConfig::parse(std::string(kMech) + "detune = 0.02\n");
    for (const auto& r : cmd_validate(c)) {
        CHECK(r.status == "detuned");
        CHECK(r.N_numeric < 0.2 * r.N_analytic);
    }
}

TEST_CASE("figure data") {
    auto c = SweepConfig::parse(
        "condition = sideband_plus\nmode_k = 2,1,2\nomega_c_min = 1e-2\nomega_c_max = 1e2\nomega_c_count = 9\n"
        "omega_c_scale = log\nomega_g = 1e-4, 1e-3, 1e-2\nkappa = 1\nepsilon = 1e-3\n");
    auto d = cmd_figure(c);
    REQUIRE(d.curves.size() == 3);
    REQUIRE(d.summary.size() == 2);
    for (const auto& cv : d.curves)
        for (std::size_t i = 0; i < cv.L.size(); ++i) CHECK(cv.valid[i] == (cv.L[i] * cv.Omega_g < 1e-3));
    for (const auto& s : d.summary) CHECK(s.violations == 0);
    CHECK(first_line(curve_csv(d.curves[0])) == "Omega_c,L,chi_over_eps_kappa,valid");
    CHECK(first_line(summary_csv(d)) == "Omega_g_low,Omega_g_high,compared,violations,higher_dominates");

    auto mech = SweepConfig::parse(kMech);
    CHECK_THROWS_AS(cmd_figure(mech), ConfigError);
}

TEST_CASE("tune") {
    TuneArgs a;
    a.condition = Resonance::SidebandPlus;
    a.Omega_c = 10;
    a.Omega_g = 2;
    a.epsilon = 1e-3;
    a.h_plus = 1e-3;
    auto j = nlohmann::json::parse(cmd_tune(a));
    CHECK(j["L"].get<double>() == doctest::Approx(1.5707963267948966).epsilon(1e-14));
    CHECK(j["Q_min"].get<double>() == 10.0);
    CHECK(j["status"] == "ok");

    a.condition = Resonance::SumCMinusG;
    a.mode_j = ModeIndex{2, 1, 1};
    a.Omega_c = 1;
    CHECK_THROWS_AS(cmd_tune(a), NoSolution);
    a.kappa = 1.0;
    CHECK_THROWS_AS(cmd_tune(a), ConfigError);
}
