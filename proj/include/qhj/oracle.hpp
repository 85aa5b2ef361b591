#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qhj/propagator.hpp"
#include "qhj/scenario.hpp"

namespace qhj {

// One-dimensional quadratic Hamiltonian p^2/2m + fdot(t) p + (m w^2/2)(x - f(t))^2.
// omega = 0 disables the potential (free case).
struct HamiltonianSpec {
    double mass = 1.0;
    double omega = 0.0;
    std::function<Shift(double)> shift = [](double) { return Shift{}; };
};

// Unitary grid solver configuration. The Cayley (Crank-Nicolson) step is
// norm-preserving for Hermitian discretizations regardless of dt; the
// stability invariant below still bounds dt against the local energy scale
// so the second-order accuracy contract holds.
struct GridEvolution {
    double x_min = -10.0;
    double dx = 0.01;
    std::size_t n = 2001;
    double dt = 2.5e-4;
    double hbar = 1.0;
    HamiltonianSpec hamiltonian;
    std::string method = "crank-nicolson";
};

// GridEvolution matching a 1d scenario's Hamiltonian. `alt_momentum_coupling`
// switches the resonance momentum profile to the t-scaled variant for
// comparison runs.
GridEvolution grid_evolution_for(const Scenario& s, double x_min, double dx, std::size_t n,
                                 double dt, bool alt_momentum_coupling = false);

// Evolves psi0 to t_final in uniform Cayley steps. Throws UnstableStep when
// dt times the local energy scale exceeds 0.1 hbar and BoundaryLeak when
// edge amplitude grows past 1e-8 of the norm.
WaveFunction evolve_grid(const GridEvolution& ge, const WaveFunction& psi0, double t_final);

double expectation_x(const WaveFunction& psi);
double expectation_x2(const WaveFunction& psi);

struct KernelOracleResult {
    double mod_err = 0.0;   // || |psi_K| - |psi_grid| ||_2 / ||psi0||
    double phase_err = 0.0; // L2 distance minimized over a global phase
};

// Propagates psi0 with the kernel quadrature and with the grid solver on the
// same grid and compares the results.
KernelOracleResult kernel_vs_oracle(const Scenario& s, const GaussianKernel& K,
                                    const WaveFunction& psi0, double t,
                                    double dt = 2.5e-4);

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    double norm() const;
};

// Effective static field in the rotating frame: (B0 + w/gamma) z + B1 x.
Vec3 rotating_frame_field(const MagneticParams& mp);

struct Spinor {
    Complex up = 1.0;
    Complex down = 0.0;
    double norm() const;
};

// Exact 2x2 evolution under H = -gamma [ (B0 + w/gamma) L_z + B1 L_x ] with
// L = (hbar/2) sigma. hbar cancels from the rotation angle.
Spinor spin_half_evolution(const MagneticParams& mp, const Spinor& s0, double t);

// Probability of leaving the spin-up state after time t (Rabi formula).
double spin_flip_probability(const MagneticParams& mp, double t);

// A scale/time-rescaling pair (s(T), mu(T)) together with the frame angle
// rate it is meant to absorb, all as functions of the rescaled time.
struct ScaleFamily {
    std::function<double(double)> s;
    std::function<double(double)> sdot;
    std::function<double(double)> mu;
    std::function<double(double)> alphadot;
};

// Particular closed-form family: v = A cos(eta T + delta), s = 1/v,
// mu = alphadot / sqrt(w0^2 - eta^2) with the self-consistent pulse profile
// alphadot = sqrt(w0^2 - eta^2) A^2 cos^2(eta T + delta) (so mu = v^2 and
// m s^2 mu stays constant).
struct PinneyFamily {
    double amplitude = 1.0;
    double eta = 1.0;
    double delta = 0.0;
    double omega0 = 1.0;

    double v(double T) const;
    double vdot(double T) const;
    double s(double T) const; // throws Pole at cos = 0
    double sdot(double T) const;
    double mu(double T) const;
    double alphadot(double T) const;
    // Effective frequency squared of the reduced oscillator equation,
    // w0^2 - alphadot^2/mu^2 = eta^2.
    double effective_freq_sq() const { return eta * eta; }
};

// Throws DomainError when w0^2 <= eta^2 and InvalidValue when A = 0.
PinneyFamily pinney_particular(double amplitude, double eta, double delta, double omega0);

ScaleFamily as_scale_family(const PinneyFamily& family, double mass = 1.0);

struct PinneySolution {
    std::vector<double> v;
    std::vector<double> vdot;
};

// Integrates v'' + w0^2 v = alphadot(t)^2 / v^3 on the grid. Throws Collapse
// when |v| < 1e-8.
PinneySolution pinney_solve(double omega0, const std::function<double(double)>& alphadot,
                            double v0, double vdot0, const std::vector<double>& grid,
                            double local_tol = 1e-10);

// Energy-like first integral (v'^2 + w0^2 v^2 + kappa^2 / v^2)/2, conserved
// for constant alphadot = kappa.
double pinney_invariant(double omega0, double kappa, double v, double vdot);

// Rotating-frame reduction machinery for the x-oscillating field.
class FrameReduction {
  public:
    explicit FrameReduction(MagneticParams mp);

    // Frame angle rate in original time, -gamma B1 cos(w tau) / (2c).
    double alphadot(double tau) const;

    // Quadratic-in-z phase of the rescaling transformation,
    // f(z, T) = m mu s sdot z^2 / 2 + f_T(T) with f_T = i log sqrt(s).
    Complex phase(double z_tilde, double T, const ScaleFamily& family) const;
    Complex phase_offset(double T, const ScaleFamily& family) const;

    // Frame frequency squared (mu / m s^2) d/dT(m mu s sdot) - mu^2 (sdot/s)^2.
    double big_omega_sq(double T, const ScaleFamily& family) const;

    struct Identification {
        double mass_residual = 0.0; // |m s^2 mu - m| / m
        double freq_residual = 0.0; // |(m s^2/mu)(alphadot^2 + Omega^2) - m w0^2| / (m w0^2)
    };
    Identification identification_residual(double T, const ScaleFamily& family,
                                           double omega0) const;

    // Throws IdentificationViolated when either residual exceeds tol at any
    // of the sample times.
    void verify_identification(const ScaleFamily& family, double omega0,
                               const std::vector<double>& T_samples,
                               double tol = 1e-8) const;

    const MagneticParams& params() const { return params_; }

    // Separation constants of the product ansatz; bookkeeping only.
    double q1 = 0.0, q2 = 0.0, q3 = 0.0;

  private:
    MagneticParams params_;
};

FrameReduction frame_reduce(const MagneticParams& mp);

} // namespace qhj
