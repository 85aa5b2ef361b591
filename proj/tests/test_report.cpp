#include <doctest.h>

#include "qhj/report.hpp"
#include "qhj/scenario.hpp"

using namespace qhj;

TEST_CASE("report rows carry value, tolerance and verdict") {
    Report r;
    r.suite = "check";
    r.scenario_echo = "scenario = harmonic\nomega = 1\n";
    r.hbar = 1.0;
    r.add("ode_residual", 1e-12, 1e-9);
    r.add("oracle_phase", 0.02, 1e-4, /*gating=*/false);
    CHECK(r.checks[0].pass);
    CHECK(!r.checks[1].pass);
    CHECK(r.all_gating_pass());

    const std::string csv = to_csv(r);
    CHECK(csv.find("name,value,tolerance,pass,gating") != std::string::npos);
    CHECK(csv.find("ode_residual,") != std::string::npos);
    CHECK(csv.find("# schema = qhj-report/1") != std::string::npos);

    const std::string js = to_json(r);
    CHECK(js.find("\"qhj-report/1\"") != std::string::npos);
    CHECK(js.find("\"gating\": false") != std::string::npos);
}

TEST_CASE("gating failures flip the verdict") {
    Report r;
    r.add("hard", 2.0, 1.0);
    CHECK(!r.all_gating_pass());
}

TEST_CASE("numbers render with 17 significant digits, byte stable") {
    CHECK(format_number(M_PI) == format_number(M_PI));
    CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("data tables carry the fixed column order") {
    WaveFunction psi;
    psi.x_min = -1.0;
    psi.dx = 0.5;
    psi.psi = {Complex(1.0, 0.0), Complex(0.0, -1.0), Complex(0.5, 0.5)};
    const DataTable table = wavefunction_table(psi, 0.25);
    CHECK(table.columns == std::vector<std::string>{"t", "x", "re", "im"});
    CHECK(table.rows.size() == 3);
    CHECK(table.rows[1][0] == 0.25);
    CHECK(table.rows[1][1] == -0.5);
    CHECK(table.rows[1][3] == -1.0);

    const std::string csv = to_csv(table);
    CHECK(csv.rfind("t,x,re,im\n", 0) == 0);
    CHECK(to_csv(table) == to_csv(table));
    CHECK(to_json(table) == to_json(table));
}

TEST_CASE("kernel table flattening") {
    KernelTable kt;
    kt.x = {0.0, 1.0};
    kt.xt = {2.0};
    kt.values = {Complex(1.0, 2.0), Complex(3.0, 4.0)};
    const DataTable table = kernel_table(kt, 0.5);
    CHECK(table.columns == std::vector<std::string>{"t", "x", "xt", "re", "im"});
    CHECK(table.rows.size() == 2);
    CHECK(table.rows[1] == std::vector<double>{0.5, 1.0, 2.0, 3.0, 4.0});
}
