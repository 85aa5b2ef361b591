#include "qhj/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qhj {

bool Report::all_gating_pass() const {
    for (const auto& c : checks)
        if (c.gating && !c.pass) return false;
    return true;
}

void Report::add(const std::string& name, double value, double tolerance, bool gating) {
    checks.push_back({name, value, tolerance, std::abs(value) <= tolerance, gating});
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Report& r) {
    std::string out;
    out += "# schema = " + std::string(kReportSchema) + "\n";
    out += "# suite = " + r.suite + "\n";
    out += "# hbar = " + format_number(r.hbar) + "\n";
    if (!r.environment.empty()) out += "# environment = " + r.environment + "\n";
    for (std::istringstream echo(r.scenario_echo); !echo.eof();) {
        std::string line;
        if (!std::getline(echo, line)) break;
        if (!line.empty()) out += "# scenario: " + line + "\n";
    }
    out += "name,value,tolerance,pass,gating\n";
    for (const auto& c : r.checks) {
        out += c.name + "," + format_number(c.value) + "," + format_number(c.tolerance) +
               "," + (c.pass ? "1" : "0") + "," + (c.gating ? "1" : "0") + "\n";
    }
    return out;
}

std::string to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["suite"] = r.suite;
    j["hbar"] = r.hbar;
    j["environment"] = r.environment;
    j["scenario"] = r.scenario_echo;
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json row;
        row["name"] = c.name;
        row["value"] = format_number(c.value);
        row["tolerance"] = format_number(c.tolerance);
        row["pass"] = c.pass;
        row["gating"] = c.gating;
        checks.push_back(row);
    }
    return j.dump(2) + "\n";
}

DataTable kernel_table(const KernelTable& table, double t) {
    DataTable out;
    out.columns = {"t", "x", "xt", "re", "im"};
    out.rows.reserve(table.x.size() * table.xt.size());
    for (std::size_t i = 0; i < table.x.size(); ++i)
        for (std::size_t j = 0; j < table.xt.size(); ++j) {
            const Complex v = table.at(i, j);
            out.rows.push_back({t, table.x[i], table.xt[j], v.real(), v.imag()});
        }
    return out;
}

DataTable wavefunction_table(const WaveFunction& psi, double t) {
    DataTable out;
    out.columns = {"t", "x", "re", "im"};
    out.rows.reserve(psi.n());
    for (std::size_t i = 0; i < psi.n(); ++i)
        out.rows.push_back({t, psi.x(i), psi.psi[i].real(), psi.psi[i].imag()});
    return out;
}

DataTable trajectory_table(const std::vector<double>& grid, const std::vector<double>& x) {
    DataTable out;
    out.columns = {"t", "x"};
    out.rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.rows.push_back({grid[i], x[i]});
    return out;
}

std::string to_csv(const DataTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out += table.columns[c] + (c + 1 < table.columns.size() ? "," : "\n");
    for (const auto& row : table.rows)
        for (std::size_t c = 0; c < row.size(); ++c)
            out += format_number(row[c]) + (c + 1 < row.size() ? "," : "\n");
    return out;
}

std::string to_json(const DataTable& table) {
    nlohmann::ordered_json j;
    j["schema"] = kTableSchema;
    j["columns"] = table.columns;
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double v : row) r.push_back(format_number(v));
        rows.push_back(r);
    }
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::invalid_value, "cannot open " + path);
    out << contents;
}

} // namespace qhj
