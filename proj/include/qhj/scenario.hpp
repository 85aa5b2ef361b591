#pragma once

#include <complex>
#include <optional>
#include <string>

#include "qhj/error.hpp"

namespace qhj {

enum class ScenarioKind { harmonic, driven, resonance, magnetic };

const char* to_string(ScenarioKind kind);

// Charge in a pulsed magnetic field: static component b0 along z, amplitude
// b1 of the oscillating part, field frequency omega_field, charge-to-mass
// ratio gamma = e/m. The scalar potential is fixed to zero.
struct MagneticParams {
    double b0 = 0.0;
    double b1 = 0.0;
    double omega_field = 0.0;
    double gamma = 1.0;
    double light_c = 1.0;
    double mass = 1.0;
    static constexpr double scalar_potential = 0.0;

    // Precession frequency of the z-field sector, gamma*b0/(2c). This is the
    // frequency entering the closed-form action and kernel for b1 = 0.
    double larmor() const { return gamma * b0 / (2.0 * light_c); }

    void validate() const;
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::harmonic;
    double omega = 1.0;     // oscillator frequency (field frequency for magnetic)
    double h = 0.0;         // drive amplitude
    double big_omega = 0.0; // drive frequency (driven only)
    double hbar = 1.0;
    double mass = 1.0;      // fixed to 1 for the one-dimensional kinds
    std::optional<MagneticParams> magnetic;
    // Boundary wavenumbers consumed by the propagator constructions.
    double kx = 1.0;
    double ky = 1.0;
    double kz = 1.0;

    bool one_dimensional() const { return kind != ScenarioKind::magnetic; }
    void validate() const;
};

// Integration constants of the quadratic-action family. b_const is the
// trajectory constant B from the d/dc1 constraint; k and (kx, ky, kz, sigma)
// are the boundary-condition wavenumbers of the two kernel constructions.
struct ConstantSet {
    double c1 = 0.0;
    double c2 = 0.0;
    std::complex<double> c3 = 0.0;
    double b_const = 0.0;
    double k = 0.0;
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;
    double sigma = 0.0;
};

struct Shift {
    double f = 0.0;    // equilibrium displacement f(t)
    double fdot = 0.0; // analytic derivative df/dt
};

// Closed-form drive shift per scenario kind:
//   harmonic   f = 0
//   driven     f = h cos(Wt) / (w^2 - W^2)
//   resonance  f = (h t / 2w) sin(wt)
// Throws UnsupportedKind for magnetic scenarios.
Shift shift_eval(const Scenario& s, double t);

// Alternative resonance momentum-coupling profile in which both terms carry
// the secular factor t. Kept for comparison runs only; shift_eval returns
// the analytic derivative.
double shift_velocity_alt(const Scenario& s, double t);

// Parses the line-based `key = value` config format. Unknown keys are hard
// errors. Defaults: hbar = 1, mass = 1, kx = ky = kz = 1.
Scenario parse_scenario(const std::string& text);

std::string serialize_scenario(const Scenario& s);

} // namespace qhj
