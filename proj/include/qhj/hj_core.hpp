#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qhj/scenario.hpp"

namespace qhj {

using Complex = std::complex<double>;

// Coefficients of the quadratic complex action S = alpha x^2/2 + xi x + zeta
// (in the drive-shifted variable for driven/resonance scenarios).
struct HJCoefficients {
    Complex alpha = 0.0;
    Complex xi = 0.0;
    Complex zeta = 0.0;
};

struct CoefficientTrajectory {
    std::vector<double> grid;
    std::vector<HJCoefficients> samples;
    std::vector<bool> caustic_flags; // set where the sample sits on a pole of alpha
};

// Branch handling for log(cos(theta)). `principal` is the std::log branch;
// `continued` accumulates +i*pi per caustic so trajectories and kernel
// prefactors stay continuous in t.
enum class LogBranch { principal, continued };

// Number of zeros of cos between 0 and theta, signed.
int caustic_winding(double theta);

// log(cos(theta)) on the chosen branch (theta real).
Complex log_cos(double theta, LogBranch branch);

// Right-hand side of the coefficient system:
//   alpha' = -alpha^2 - w^2,  xi' = -alpha xi,  zeta' = -xi^2/2 + i hbar alpha / 2.
// The same system governs all one-dimensional kinds; the drive is absorbed
// by the shifted variable. Throws UnsupportedKind for magnetic.
HJCoefficients coefficient_odes(const Scenario& s, const HJCoefficients& c);

// Numerical companion to the closed forms. alpha is propagated through its
// poles via the linearization alpha = u'/u with u'' + w^2 u = 0; xi and zeta
// follow from the first integrals of the linear system (u xi = const and
// d/dt(w/u) = Wr/u^2), which is what makes caustic crossings stable.
CoefficientTrajectory integrate_coefficients(const Scenario& s, const HJCoefficients& init,
                                             const std::vector<double>& grid,
                                             double local_tol = 1e-10);

// Closed forms:
//   alpha = -w tan(wt + c1)
//   xi    = c2 sec(wt + c1)
//   zeta  = -(c2^2/2w) tan(wt + c1) + (i hbar/2) log cos(wt + c1) + c3
// Throws CausticError when |cos(wt + c1)| <= 1e-12.
HJCoefficients closed_form_coefficients(const Scenario& s, const ConstantSet& c, double t,
                                        LogBranch branch = LogBranch::principal);

enum class PrincipalForm {
    full,           // quadratic + linear + additive coefficients
    quadratic_only, // alpha x^2/2 truncation; fails the quantum equation
};

// Evaluable principal function S(x, t) for the one-dimensional scenarios.
// Uses the continued log branch so exp(iS/hbar) stays consistent across
// caustics.
class PrincipalFunction {
  public:
    PrincipalFunction(Scenario s, ConstantSet c, double hbar,
                      PrincipalForm form = PrincipalForm::full);

    Complex operator()(double x, double t) const;

    const Scenario& scenario() const { return scenario_; }
    const ConstantSet& constants() const { return constants_; }
    double hbar() const { return hbar_; }
    PrincipalForm form() const { return form_; }

  private:
    Scenario scenario_;
    ConstantSet constants_;
    double hbar_;
    PrincipalForm form_;
};

PrincipalFunction principal_function(const Scenario& s, const ConstantSet& c, double hbar,
                                     PrincipalForm form = PrincipalForm::full);

// Residual of the scenario's quantum Hamilton-Jacobi equation at (x, t):
//   S_t + S_x^2/2 + fdot S_x + w^2 (x - f)^2 / 2 - (i hbar / 2) S_xx.
// Derivatives are central differences with one Richardson step. Accepts any
// evaluator so truncated or perturbed actions can be probed.
Complex qhje_residual(const std::function<Complex(double, double)>& S, const Scenario& s,
                      double x, double t);
Complex qhje_residual(const PrincipalFunction& S, double x, double t);

// Constants of the three-dimensional magnetic action. The constraint
// c4 + c5 + c6 = 0 holds when built from the plane-wave boundary condition.
struct MagneticConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double c5 = 0.0;
    double c6 = 0.0;
    double sigma = 0.0;
    double kx = 0.0;
    double ky = 0.0;
    double kz = 0.0;

    // Plane-wave boundary values: c1 = 0, c2 = hbar ky, c3 = hbar kz,
    // sigma = larmor * hbar kx, c4 + c5 + c6 = 0.
    static MagneticConstants from_boundary(const MagneticParams& mp, double hbar, double kx,
                                           double ky, double kz);
};

// The sigma part of the additive bracket appears in the source with a
// 1/omega^2 scale; the dimensionally consistent variant uses 1/mass^2. The
// two coincide when larmor == mass, and the residual probe reports which one
// solves the equation elsewhere.
enum class MagneticBracket { as_printed, dimensional };

class MagneticPrincipalFunction {
  public:
    MagneticPrincipalFunction(MagneticParams mp, MagneticConstants mc, double hbar,
                              MagneticBracket bracket = MagneticBracket::as_printed);

    Complex operator()(double x, double y, double z, double t) const;

    const MagneticParams& params() const { return params_; }
    const MagneticConstants& constants() const { return constants_; }
    double hbar() const { return hbar_; }

  private:
    MagneticParams params_;
    MagneticConstants constants_;
    double hbar_;
    MagneticBracket bracket_;
};

// Closed-form action of the b1 = 0 regime. Throws UnsupportedRegime when
// b1 != 0 and CausticError at the cos poles.
MagneticPrincipalFunction magnetic_principal_function(
    const MagneticParams& mp, const MagneticConstants& mc, double hbar,
    MagneticBracket bracket = MagneticBracket::as_printed);

// Residual of the three-dimensional quantum Hamilton-Jacobi equation for the
// b1 = 0 magnetic Hamiltonian (isotropic xy oscillator at the precession
// frequency plus angular-momentum coupling plus free z motion).
Complex magnetic_qhje_residual(const MagneticPrincipalFunction& S, double x, double y,
                               double z, double t);

} // namespace qhj
