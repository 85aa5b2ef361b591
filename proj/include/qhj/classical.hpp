#pragma once

#include <vector>

#include "qhj/scenario.hpp"

namespace qhj {

enum class TrajectorySource { from_action, newton };

struct ClassicalTrajectory {
    std::vector<double> grid;
    std::vector<double> x;
    TrajectorySource source = TrajectorySource::from_action;
};

// Position extracted from the action's constancy constraint:
//   x(t) = (c2/w) sin(wt + c1) +- sqrt(-c2^2/w^2 - 2B/w) cos(wt + c1) + f(t).
// Throws NegativeRadicand when the square-root argument is negative.
double classical_trajectory(const Scenario& s, const ConstantSet& c, int sign, double t);

ClassicalTrajectory classical_trajectory(const Scenario& s, const ConstantSet& c, int sign,
                                         const std::vector<double>& grid);

// Direct integration of x'' + w^2 x = drive(t) with the scenario's drive
// (h cos(Wt) driven, h cos(wt) resonance, 0 harmonic).
ClassicalTrajectory newton_oracle(const Scenario& s, double x0, double v0,
                                  const std::vector<double>& grid,
                                  double local_tol = 1e-10);

struct InitialFit {
    ConstantSet constants;
    int sign = +1;
    bool degenerate = false; // rest at the moving equilibrium
};

// Inverts the trajectory formula at t = 0 with the c1 = 0 convention.
// Rest at the equilibrium (x0 = f(0), v0 = fdot(0)) has no unique constants
// and returns the canonical zero set flagged degenerate.
InitialFit constants_from_initial(const Scenario& s, double x0, double v0);

} // namespace qhj
