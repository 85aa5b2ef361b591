#include "qhj/classical.hpp"

#include <cmath>

#include "qhj/ode.hpp"

namespace qhj {

namespace {

double drive(const Scenario& s, double t) {
    switch (s.kind) {
        case ScenarioKind::harmonic: return 0.0;
        case ScenarioKind::driven: return s.h * std::cos(s.big_omega * t);
        case ScenarioKind::resonance: return s.h * std::cos(s.omega * t);
        case ScenarioKind::magnetic: break;
    }
    throw Error(ErrorCode::unsupported_kind, "no classical drive for magnetic scenarios");
}

} // namespace

double classical_trajectory(const Scenario& s, const ConstantSet& c, int sign, double t) {
    const double w = s.omega;
    const double radicand = -c.c2 * c.c2 / (w * w) - 2.0 * c.b_const / w;
    if (radicand < 0.0)
        throw Error(ErrorCode::negative_radicand,
                    "require B <= -c2^2/(2w); radicand = " + std::to_string(radicand));
    const double theta = w * t + c.c1;
    return c.c2 / w * std::sin(theta) +
           (sign >= 0 ? 1.0 : -1.0) * std::sqrt(radicand) * std::cos(theta) +
           shift_eval(s, t).f;
}

ClassicalTrajectory classical_trajectory(const Scenario& s, const ConstantSet& c, int sign,
                                         const std::vector<double>& grid) {
    ClassicalTrajectory out;
    out.grid = grid;
    out.source = TrajectorySource::from_action;
    out.x.reserve(grid.size());
    for (double t : grid) out.x.push_back(classical_trajectory(s, c, sign, t));
    return out;
}

ClassicalTrajectory newton_oracle(const Scenario& s, double x0, double v0,
                                  const std::vector<double>& grid, double local_tol) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw Error(ErrorCode::invalid_value, "time grid must be strictly increasing");

    const double w2 = s.omega * s.omega;
    auto rhs = [&](double t, const State<2>& y) -> State<2> {
        return {y[1], -w2 * y[0] + drive(s, t)};
    };
    OdeOptions opt;
    opt.rtol = local_tol;
    opt.atol = local_tol * 1e-2;

    ClassicalTrajectory out;
    out.grid = grid;
    out.source = TrajectorySource::newton;
    out.x.reserve(grid.size());
    if (grid.empty()) return out;

    State<2> y = {x0, v0};
    double t = grid.front();
    out.x.push_back(x0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        y = integrate_adaptive<2>(rhs, y, t, grid[i], opt);
        t = grid[i];
        out.x.push_back(y[0].real());
    }
    return out;
}

InitialFit constants_from_initial(const Scenario& s, double x0, double v0) {
    if (!s.one_dimensional())
        throw Error(ErrorCode::unsupported_kind, "constants_from_initial needs a 1d scenario");
    const Shift sh = shift_eval(s, 0.0);
    const double r = x0 - sh.f;       // cos-branch amplitude
    const double c2 = v0 - sh.fdot;   // sin-branch amplitude times w / w

    InitialFit fit;
    if (r == 0.0 && c2 == 0.0) {
        fit.degenerate = true;
        return fit; // canonical zero set: trajectory tracks the equilibrium
    }
    const double w = s.omega;
    fit.constants.c1 = 0.0;
    fit.constants.c2 = c2;
    fit.constants.b_const = -0.5 * w * r * r - c2 * c2 / (2.0 * w);
    fit.sign = (r >= 0.0) ? +1 : -1;
    return fit;
}

} // namespace qhj
