#pragma once

#include <string>
#include <vector>

#include "qhj/propagator.hpp"

namespace qhj {

inline constexpr const char* kReportSchema = "qhj-report/1";
inline constexpr const char* kTableSchema = "qhj-table/1";

enum class ReportFormat { csv, json };

struct CheckRecord {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool gating = true; // reported-only findings do not gate the exit code
};

struct Report {
    std::string suite;
    std::string scenario_echo; // serialized scenario
    std::vector<CheckRecord> checks;
    double hbar = 1.0;
    std::string environment; // grid / tolerance summary

    bool all_gating_pass() const;
    void add(const std::string& name, double value, double tolerance, bool gating = true);
};

// 17-significant-digit decimal rendering used by every emitter; reports are
// byte-identical across runs for fixed inputs.
std::string format_number(double v);

std::string to_csv(const Report& r);
std::string to_json(const Report& r);

// Data tables: fixed column order t, x, (xt), re, im.
struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

DataTable kernel_table(const KernelTable& table, double t);
DataTable wavefunction_table(const WaveFunction& psi, double t);
DataTable trajectory_table(const std::vector<double>& grid, const std::vector<double>& x);

std::string to_csv(const DataTable& table);
std::string to_json(const DataTable& table);

void write_file(const std::string& path, const std::string& contents);

} // namespace qhj
