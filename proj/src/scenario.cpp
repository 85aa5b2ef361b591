#include "qhj/scenario.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

namespace qhj {

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::harmonic: return "harmonic";
        case ScenarioKind::driven: return "driven";
        case ScenarioKind::resonance: return "resonance";
        case ScenarioKind::magnetic: return "magnetic";
    }
    return "?";
}

void MagneticParams::validate() const {
    if (gamma == 0.0) throw Error(ErrorCode::invalid_value, "gamma must be nonzero");
    if (!(light_c > 0.0)) throw Error(ErrorCode::invalid_value, "c must be positive");
    if (!(mass > 0.0)) throw Error(ErrorCode::invalid_value, "mass must be positive");
}

void Scenario::validate() const {
    if (!(omega > 0.0)) throw Error(ErrorCode::invalid_value, "omega must be positive");
    if (!(hbar > 0.0)) throw Error(ErrorCode::invalid_value, "hbar must be positive");
    if (one_dimensional() && mass != 1.0)
        throw Error(ErrorCode::invalid_value,
                    "mass is fixed to 1 for harmonic/driven/resonance");
    if (kind == ScenarioKind::driven && omega * omega - big_omega * big_omega == 0.0)
        throw Error(ErrorCode::resonant_denominator,
                    "driven scenario requires omega^2 != Omega^2");
    if (kind == ScenarioKind::magnetic) {
        if (!magnetic)
            throw Error(ErrorCode::invalid_value, "magnetic scenario lacks field params");
        magnetic->validate();
    }
}

Shift shift_eval(const Scenario& s, double t) {
    switch (s.kind) {
        case ScenarioKind::harmonic:
            return {0.0, 0.0};
        case ScenarioKind::driven: {
            const double den = s.omega * s.omega - s.big_omega * s.big_omega;
            return {s.h * std::cos(s.big_omega * t) / den,
                    -s.h * s.big_omega * std::sin(s.big_omega * t) / den};
        }
        case ScenarioKind::resonance: {
            const double w = s.omega;
            return {s.h * t / (2.0 * w) * std::sin(w * t),
                    s.h / (2.0 * w) * std::sin(w * t) + s.h * t / 2.0 * std::cos(w * t)};
        }
        case ScenarioKind::magnetic:
            break;
    }
    throw Error(ErrorCode::unsupported_kind, "no drive shift for magnetic scenarios");
}

double shift_velocity_alt(const Scenario& s, double t) {
    if (s.kind != ScenarioKind::resonance)
        return shift_eval(s, t).fdot;
    const double w = s.omega;
    return s.h * t / 2.0 * std::cos(w * t) + s.h * t / (2.0 * w) * std::sin(w * t);
}

namespace {

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos])))
            ++pos;
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::non_numeric_value, key + " = '" + value + "'");
    }
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::non_numeric_value, "malformed line: '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (kv.count(key))
            throw Error(ErrorCode::invalid_value, "duplicate key: " + key);
        kv[key] = value;
    }

    static const std::vector<std::string> known = {
        "scenario", "omega", "h", "Omega", "hbar", "mass",
        "B0", "B1", "gamma", "c", "kx", "ky", "kz"};
    for (const auto& [key, value] : kv) {
        (void)value;
        bool ok = false;
        for (const auto& k : known) ok = ok || (k == key);
        if (!ok) throw Error(ErrorCode::unknown_key, key);
    }

    auto require = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw Error(ErrorCode::missing_required_key, key);
        return it->second;
    };
    auto number = [&](const std::string& key) { return parse_number(key, require(key)); };
    auto number_or = [&](const std::string& key, double dflt) {
        auto it = kv.find(key);
        return (it == kv.end()) ? dflt : parse_number(key, it->second);
    };

    Scenario s;
    const std::string kind = require("scenario");
    if (kind == "harmonic") s.kind = ScenarioKind::harmonic;
    else if (kind == "driven") s.kind = ScenarioKind::driven;
    else if (kind == "resonance") s.kind = ScenarioKind::resonance;
    else if (kind == "magnetic") s.kind = ScenarioKind::magnetic;
    else throw Error(ErrorCode::invalid_value, "scenario = '" + kind + "'");

    s.omega = number("omega");
    s.hbar = number_or("hbar", 1.0);
    s.mass = number_or("mass", 1.0);
    s.kx = number_or("kx", 1.0);
    s.ky = number_or("ky", 1.0);
    s.kz = number_or("kz", 1.0);

    switch (s.kind) {
        case ScenarioKind::harmonic:
            break;
        case ScenarioKind::driven:
            s.h = number("h");
            s.big_omega = number("Omega");
            break;
        case ScenarioKind::resonance:
            s.h = number("h");
            // drive frequency equals omega by definition; Omega is ignored
            break;
        case ScenarioKind::magnetic: {
            MagneticParams mp;
            mp.b0 = number("B0");
            mp.b1 = number("B1");
            mp.gamma = number("gamma");
            mp.light_c = number("c");
            mp.omega_field = s.omega;
            mp.mass = s.mass;
            s.magnetic = mp;
            break;
        }
    }
    s.validate();
    return s;
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out.precision(17);
    out << "scenario = " << to_string(s.kind) << "\n";
    out << "omega = " << s.omega << "\n";
    if (s.kind == ScenarioKind::driven || s.kind == ScenarioKind::resonance)
        out << "h = " << s.h << "\n";
    if (s.kind == ScenarioKind::driven) out << "Omega = " << s.big_omega << "\n";
    out << "hbar = " << s.hbar << "\n";
    out << "mass = " << s.mass << "\n";
    if (s.kind == ScenarioKind::magnetic && s.magnetic) {
        out << "B0 = " << s.magnetic->b0 << "\n";
        out << "B1 = " << s.magnetic->b1 << "\n";
        out << "gamma = " << s.magnetic->gamma << "\n";
        out << "c = " << s.magnetic->light_c << "\n";
    }
    out << "kx = " << s.kx << "\n";
    out << "ky = " << s.ky << "\n";
    out << "kz = " << s.kz << "\n";
    return out.str();
}

} // namespace qhj
