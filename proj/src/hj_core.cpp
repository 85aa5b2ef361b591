#include "qhj/hj_core.hpp"

#include <cmath>

#include "qhj/ode.hpp"

namespace qhj {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_one_dimensional(const Scenario& s, const char* op) {
    if (!s.one_dimensional())
        throw Error(ErrorCode::unsupported_kind, std::string(op) + " needs a 1d scenario");
}

} // namespace

int caustic_winding(double theta) {
    return static_cast<int>(std::floor(theta / kPi + 0.5));
}

Complex log_cos(double theta, LogBranch branch) {
    const double c = std::cos(theta);
    if (branch == LogBranch::principal) return std::log(Complex(c, 0.0));
    return {std::log(std::abs(c)), kPi * caustic_winding(theta)};
}

HJCoefficients coefficient_odes(const Scenario& s, const HJCoefficients& c) {
    require_one_dimensional(s, "coefficient_odes");
    const double w2 = s.omega * s.omega;
    const Complex ih_half(0.0, 0.5 * s.hbar);
    return {-c.alpha * c.alpha - w2,
            -c.alpha * c.xi,
            -0.5 * c.xi * c.xi + ih_half * c.alpha};
}

CoefficientTrajectory integrate_coefficients(const Scenario& s, const HJCoefficients& init,
                                             const std::vector<double>& grid,
                                             double local_tol) {
    require_one_dimensional(s, "integrate_coefficients");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw Error(ErrorCode::invalid_value, "time grid must be strictly increasing");

    const double w2 = s.omega * s.omega;
    // State: (u, u', w, w') with u'' = -w^2 u. u(t0)=1, u'(t0)=alpha0 carries
    // alpha = u'/u; w(t0)=0, w'(t0)=1 gives int dt/u^2 = w/u via the Wronskian.
    auto rhs = [w2](double, const State<4>& y) -> State<4> {
        return {y[1], -w2 * y[0], y[3], -w2 * y[2]};
    };

    OdeOptions opt;
    opt.rtol = local_tol;
    opt.atol = local_tol * 1e-2;

    CoefficientTrajectory traj;
    traj.grid = grid;
    traj.samples.resize(grid.size());
    traj.caustic_flags.assign(grid.size(), false);
    if (grid.empty()) return traj;

    State<4> y = {1.0, init.alpha, 0.0, 1.0};
    double t = grid.front();
    double arg_acc = 0.0; // accumulated argument of u along the path
    Complex u_prev = y[0];

    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0) {
            y = integrate_adaptive<4>(rhs, y, t, grid[i], opt,
                                      [&](double, const State<4>& ys) {
                                          const Complex u = ys[0];
                                          if (std::abs(u) > 0.0) {
                                              arg_acc += std::arg(u / u_prev);
                                              u_prev = u;
                                          }
                                      });
            t = grid[i];
        }
        const Complex u = y[0], up = y[1];
        const double au = std::abs(u);
        // |u| relative to the local oscillation envelope equals |cos| of the
        // underlying phase, so this reproduces the |cos| < 1e-8 flag rule.
        const double envelope =
            std::sqrt(std::norm(u) + std::norm(up) / w2);
        const bool at_pole = envelope > 0.0 && au / envelope < 1e-8;
        traj.caustic_flags[i] = at_pole;

        HJCoefficients out;
        out.alpha = at_pole ? Complex(std::numeric_limits<double>::quiet_NaN(), 0.0)
                            : up / u;
        out.xi = at_pole ? Complex(std::numeric_limits<double>::quiet_NaN(), 0.0)
                         : init.xi / u;
        const Complex log_u(std::log(std::max(au, 1e-300)), arg_acc);
        out.zeta = at_pole ? Complex(std::numeric_limits<double>::quiet_NaN(), 0.0)
                           : init.zeta - 0.5 * init.xi * init.xi * (y[2] / u) +
                                 Complex(0.0, 0.5 * s.hbar) * log_u;
        traj.samples[i] = out;
    }
    return traj;
}

HJCoefficients closed_form_coefficients(const Scenario& s, const ConstantSet& c, double t,
                                        LogBranch branch) {
    require_one_dimensional(s, "closed_form_coefficients");
    const double w = s.omega;
    const double theta = w * t + c.c1;
    const double ct = std::cos(theta);
    if (std::abs(ct) <= 1e-12)
        throw Error(ErrorCode::caustic, "cos(wt + c1) vanishes at t=" + std::to_string(t));
    const double tn = std::tan(theta);
    HJCoefficients out;
    out.alpha = -w * tn;
    out.xi = c.c2 / ct;
    out.zeta = -c.c2 * c.c2 / (2.0 * w) * tn + Complex(0.0, 0.5 * s.hbar) * log_cos(theta, branch) +
               c.c3;
    return out;
}

PrincipalFunction::PrincipalFunction(Scenario s, ConstantSet c, double hbar,
                                     PrincipalForm form)
    : scenario_(std::move(s)), constants_(c), hbar_(hbar), form_(form) {
    require_one_dimensional(scenario_, "principal_function");
}

Complex PrincipalFunction::operator()(double x, double t) const {
    Scenario sc = scenario_;
    sc.hbar = hbar_;
    const HJCoefficients c =
        closed_form_coefficients(sc, constants_, t, LogBranch::continued);
    const double y = x - shift_eval(scenario_, t).f;
    if (form_ == PrincipalForm::quadratic_only) return 0.5 * c.alpha * y * y;
    return 0.5 * c.alpha * y * y + c.xi * y + c.zeta;
}

PrincipalFunction principal_function(const Scenario& s, const ConstantSet& c, double hbar,
                                     PrincipalForm form) {
    return PrincipalFunction(s, c, hbar, form);
}

namespace {

// Central differences with one Richardson step. The second derivative uses a
// wider step: at 1e-5 the cancellation error (~eps |S| / h^2) would exceed
// the 1e-7 residual tolerance; the action is quadratic in x, so widening the
// stencil costs no truncation error.
constexpr double kStepT = 1e-5;
constexpr double kStepX = 1e-4;
constexpr double kStepXX = 5e-3;

template <typename F>
Complex richardson_d1(F&& f, double v, double h) {
    const Complex d_h = (f(v + h) - f(v - h)) / (2.0 * h);
    const Complex d_h2 = (f(v + h / 2) - f(v - h / 2)) / h;
    return (4.0 * d_h2 - d_h) / 3.0;
}

template <typename F>
Complex richardson_d2(F&& f, double v, double h) {
    const Complex f0 = f(v);
    const Complex d_h = (f(v + h) - 2.0 * f0 + f(v - h)) / (h * h);
    const Complex d_h2 = (f(v + h / 2) - 2.0 * f0 + f(v - h / 2)) / (h * h / 4.0);
    return (4.0 * d_h2 - d_h) / 3.0;
}

} // namespace

Complex qhje_residual(const std::function<Complex(double, double)>& S, const Scenario& s,
                      double x, double t) {
    require_one_dimensional(s, "qhje_residual");
    const Complex St = richardson_d1([&](double v) { return S(x, v); }, t, kStepT);
    const Complex Sx = richardson_d1([&](double v) { return S(v, t); }, x, kStepX);
    const Complex Sxx = richardson_d2([&](double v) { return S(v, t); }, x, kStepXX);
    const Shift sh = shift_eval(s, t);
    const double y = x - sh.f;
    return St + 0.5 * Sx * Sx + sh.fdot * Sx + 0.5 * s.omega * s.omega * y * y -
           Complex(0.0, 0.5 * s.hbar) * Sxx;
}

Complex qhje_residual(const PrincipalFunction& S, double x, double t) {
    Scenario sc = S.scenario();
    sc.hbar = S.hbar();
    return qhje_residual([&S](double xx, double tt) { return S(xx, tt); }, sc, x, t);
}

MagneticConstants MagneticConstants::from_boundary(const MagneticParams& mp, double hbar,
                                                   double kx, double ky, double kz) {
    MagneticConstants mc;
    mc.c1 = 0.0;
    mc.c2 = hbar * ky;
    mc.c3 = hbar * kz;
    mc.sigma = mp.larmor() * hbar * kx;
    mc.c4 = mc.c5 = mc.c6 = 0.0;
    mc.kx = kx;
    mc.ky = ky;
    mc.kz = kz;
    return mc;
}

MagneticPrincipalFunction::MagneticPrincipalFunction(MagneticParams mp, MagneticConstants mc,
                                                     double hbar, MagneticBracket bracket)
    : params_(mp), constants_(mc), hbar_(hbar), bracket_(bracket) {
    if (params_.b1 != 0.0)
        throw Error(ErrorCode::unsupported_regime,
                    "closed-form magnetic action requires B1 = 0");
}

Complex MagneticPrincipalFunction::operator()(double x, double y, double z, double t) const {
    const double m = params_.mass;
    const double w = params_.larmor();
    const double theta = w * t + constants_.c1;
    const double ct = std::cos(theta);
    if (std::abs(ct) <= 1e-12)
        throw Error(ErrorCode::caustic, "cos pole at t=" + std::to_string(t));
    const double tn = std::tan(theta);
    const double sg = constants_.sigma, c2 = constants_.c2, c3 = constants_.c3;
    const double bracket =
        (bracket_ == MagneticBracket::as_printed)
            ? c2 * c2 / w + (sg / w) * (sg / w) / w
            : c2 * c2 / w + sg * sg / (m * m * w);
    return -m * w * tn / 2.0 * (x * x + y * y) + (sg / m - c2 * tn) * x +
           (sg / m * tn + c2) * y + Complex(0.0, hbar_) * log_cos(theta, LogBranch::continued) -
           tn / (2.0 * m) * bracket - c3 * c3 * t / (2.0 * m) + c3 * z + constants_.c4 +
           constants_.c5 + constants_.c6;
}

MagneticPrincipalFunction magnetic_principal_function(const MagneticParams& mp,
                                                      const MagneticConstants& mc,
                                                      double hbar, MagneticBracket bracket) {
    return MagneticPrincipalFunction(mp, mc, hbar, bracket);
}

Complex magnetic_qhje_residual(const MagneticPrincipalFunction& S, double x, double y,
                               double z, double t) {
    const MagneticParams& mp = S.params();
    const double m = mp.mass;
    const double w = mp.larmor();
    const double hbar = S.hbar();

    const Complex St = richardson_d1([&](double v) { return S(x, y, z, v); }, t, kStepT);
    const Complex Sx = richardson_d1([&](double v) { return S(v, y, z, t); }, x, kStepX);
    const Complex Sy = richardson_d1([&](double v) { return S(x, v, z, t); }, y, kStepX);
    const Complex Sz = richardson_d1([&](double v) { return S(x, y, v, t); }, z, kStepX);
    const Complex lap = richardson_d2([&](double v) { return S(v, y, z, t); }, x, kStepXX) +
                        richardson_d2([&](double v) { return S(x, v, z, t); }, y, kStepXX) +
                        richardson_d2([&](double v) { return S(x, y, v, t); }, z, kStepXX);

    return St + (Sx * Sx + Sy * Sy + Sz * Sz) / (2.0 * m) +
           0.5 * m * w * w * (x * x + y * y) + w * (x * Sy - y * Sx) -
           Complex(0.0, 0.5 * hbar / m) * lap;
}

} // namespace qhj
