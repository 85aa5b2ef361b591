#include <doctest.h>

#include <cmath>
#include <random>

#include "qhj/hj_core.hpp"

using namespace qhj;

namespace {

Scenario harmonic(double omega = 1.0, double hbar = 1.0) {
    Scenario s;
    s.kind = ScenarioKind::harmonic;
    s.omega = omega;
    s.hbar = hbar;
    return s;
}

Scenario driven(double omega, double h, double big_omega, double hbar = 1.0) {
    Scenario s;
    s.kind = ScenarioKind::driven;
    s.omega = omega;
    s.h = h;
    s.big_omega = big_omega;
    s.hbar = hbar;
    return s;
}

Scenario resonance(double omega, double h, double hbar = 1.0) {
    Scenario s;
    s.kind = ScenarioKind::resonance;
    s.omega = omega;
    s.h = h;
    s.hbar = hbar;
    return s;
}

// Independent oracle: analytic time derivatives of the closed forms.
struct ClosedFormRates {
    Complex alpha_dot, xi_dot, zeta_dot;
};

ClosedFormRates closed_form_rates(double w, double c1, double c2, double hbar, double t) {
    const double theta = w * t + c1;
    const double sec = 1.0 / std::cos(theta);
    const double tan = std::tan(theta);
    ClosedFormRates r;
    r.alpha_dot = -w * w * sec * sec;
    r.xi_dot = c2 * w * sec * tan;
    r.zeta_dot = -0.5 * c2 * c2 * sec * sec + Complex(0.0, -0.5 * hbar * w * tan);
    return r;
}

} // namespace

TEST_CASE("coefficient system at the origin") {
    const HJCoefficients rhs = coefficient_odes(harmonic(1.0), {0.0, 0.0, 0.0});
    CHECK(rhs.alpha == Complex(-1.0, 0.0));
    CHECK(rhs.xi == Complex(0.0, 0.0));
    CHECK(rhs.zeta == Complex(0.0, 0.0));
}

TEST_CASE("coefficient system rejects magnetic scenarios") {
    Scenario s;
    s.kind = ScenarioKind::magnetic;
    s.magnetic = MagneticParams{};
    try {
        (void)coefficient_odes(s, {});
        FAIL("expected UnsupportedKind");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::unsupported_kind);
    }
}

TEST_CASE("step failure surfaces when the controller cannot converge") {
    const Scenario s = harmonic();
    HJCoefficients init;
    std::vector<double> grid = {0.0, 1.0};
    // zero tolerance makes every error estimate infinite
    CHECK_THROWS_AS((void)integrate_coefficients(s, init, grid, 0.0), Error);
    try {
        (void)integrate_coefficients(s, init, grid, 0.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::step_failure);
    }
}

TEST_CASE("closed forms satisfy the coefficient system") {
    const double w = 1.0, c1 = 0.0, c2 = 1.0, hbar = 1.0, t = 0.3;
    ConstantSet c;
    c.c1 = c1;
    c.c2 = c2;
    const HJCoefficients v = closed_form_coefficients(harmonic(w, hbar), c, t);
    const HJCoefficients rhs = coefficient_odes(harmonic(w, hbar), v);
    const ClosedFormRates oracle = closed_form_rates(w, c1, c2, hbar, t);
    CHECK(std::abs(oracle.alpha_dot - rhs.alpha) <= 1e-10);
    CHECK(std::abs(oracle.xi_dot - rhs.xi) <= 1e-10);
    CHECK(std::abs(oracle.zeta_dot - rhs.zeta) <= 1e-10);
}

TEST_CASE("hbar = 0 keeps zeta_dot real for real data") {
    const Scenario s = harmonic(1.0, 0.0);
    for (double t : {0.1, 0.6, 1.2}) {
        ConstantSet c;
        c.c2 = 0.8;
        const HJCoefficients v = closed_form_coefficients(s, c, t);
        const HJCoefficients rhs = coefficient_odes(s, v);
        CHECK(rhs.zeta.imag() == 0.0);
    }
}

TEST_CASE("real constants keep alpha and xi real; Im(zeta) is the half log-cos") {
    const double hbar = 0.8;
    const Scenario s = harmonic(1.0, hbar);
    ConstantSet c;
    c.c1 = 0.25;
    c.c2 = 1.3;
    c.c3 = Complex(0.4, 0.0);
    for (double t : {0.0, 0.3, 0.9, 1.2}) {
        const HJCoefficients v = closed_form_coefficients(s, c, t);
        CHECK(v.alpha.imag() == 0.0);
        CHECK(v.xi.imag() == 0.0);
        const double expect = 0.5 * hbar * std::log(std::abs(std::cos(t + c.c1)));
        CHECK(v.zeta.imag() == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("integration rejects a non-monotone grid") {
    const Scenario s = harmonic();
    HJCoefficients init;
    std::vector<double> grid = {0.0, 0.5, 0.4};
    CHECK_THROWS_AS((void)integrate_coefficients(s, init, grid), Error);
}

TEST_CASE("closed form values") {
    ConstantSet c;
    c.c2 = 1.0;
    const HJCoefficients v0 = closed_form_coefficients(harmonic(), c, 0.0);
    CHECK(v0.alpha == Complex(0.0, 0.0));
    CHECK(v0.xi == Complex(1.0, 0.0));
    CHECK(v0.zeta == Complex(0.0, 0.0));

    const HJCoefficients v = closed_form_coefficients(harmonic(), c, 0.5);
    CHECK(v.alpha.real() == doctest::Approx(-std::tan(0.5)).epsilon(1e-15));
    CHECK(v.alpha.real() == doctest::Approx(-0.5463024898437905).epsilon(1e-14));

    CHECK_THROWS_AS(closed_form_coefficients(harmonic(), c, M_PI / 2.0), Error);
    try {
        closed_form_coefficients(harmonic(), c, M_PI / 2.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::caustic);
    }
}

TEST_CASE("integrated coefficients match the closed forms before the caustic") {
    const Scenario s = harmonic();
    ConstantSet c;
    c.c2 = 1.0;
    HJCoefficients init = closed_form_coefficients(s, c, 0.0);
    std::vector<double> grid;
    for (int i = 0; i <= 56; ++i) grid.push_back(0.025 * i); // up to 1.4
    const CoefficientTrajectory traj = integrate_coefficients(s, init, grid, 1e-12);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const HJCoefficients ref = closed_form_coefficients(s, c, grid[i]);
        CHECK(!traj.caustic_flags[i]);
        CHECK(std::abs(traj.samples[i].alpha - ref.alpha) <=
              1e-8 * std::max(1.0, std::abs(ref.alpha)));
        CHECK(std::abs(traj.samples[i].xi - ref.xi) <=
              1e-8 * std::max(1.0, std::abs(ref.xi)));
        CHECK(std::abs(traj.samples[i].zeta - ref.zeta) <=
              1e-8 * std::max(1.0, std::abs(ref.zeta)));
    }
}

TEST_CASE("caustic crossing: pole flagged, alpha continues as -tan") {
    const Scenario s = harmonic();
    HJCoefficients init;
    init.alpha = 0.0;
    init.xi = 1.0;
    std::vector<double> grid = {0.0, 1.0, M_PI / 2.0, 2.0, 2.5, 3.0};
    const CoefficientTrajectory traj = integrate_coefficients(s, init, grid, 1e-12);
    CHECK(traj.caustic_flags[2]);
    CHECK(!traj.caustic_flags[1]);
    CHECK(!traj.caustic_flags[3]);
    for (std::size_t i : {std::size_t(3), std::size_t(4), std::size_t(5)}) {
        CHECK(std::abs(traj.samples[i].alpha - Complex(-std::tan(grid[i]), 0.0)) <=
              1e-8 * std::max(1.0, std::abs(std::tan(grid[i]))));
    }
    // xi and zeta also continue: compare against the continued closed forms
    ConstantSet c;
    c.c2 = 1.0;
    for (std::size_t i : {std::size_t(3), std::size_t(4)}) {
        const HJCoefficients ref =
            closed_form_coefficients(s, c, grid[i], LogBranch::continued);
        CHECK(std::abs(traj.samples[i].xi - ref.xi) <= 1e-8 * std::abs(ref.xi));
        CHECK(std::abs(traj.samples[i].zeta - ref.zeta) <=
              1e-8 * std::max(1.0, std::abs(ref.zeta)));
    }
}

TEST_CASE("xi stays constant when alpha is forced to zero") {
    // test hook: omega = 0 turns the linearized system into u'' = 0 with
    // u' = alpha = 0, so xi = xi0 / u never moves
    Scenario s;
    s.kind = ScenarioKind::harmonic;
    s.omega = 0.0;
    HJCoefficients init;
    init.alpha = 0.0;
    init.xi = Complex(0.3, -0.2);
    std::vector<double> grid = {0.0, 0.5, 1.0, 2.0};
    const CoefficientTrajectory traj = integrate_coefficients(s, init, grid);
    for (const auto& sample : traj.samples) {
        CHECK(std::abs(sample.xi - init.xi) <= 1e-12);
    }
}

TEST_CASE("principal function boundary value S(x, 0) = hbar k x") {
    const double hbar = 0.7, k = 1.3;
    ConstantSet c;
    c.c1 = 0.0;
    c.c2 = hbar * k;
    c.c3 = 0.0;
    const PrincipalFunction S = principal_function(harmonic(1.0, hbar), c, hbar);
    for (double x : {-2.0, 0.0, 0.5, 3.0}) {
        CHECK(std::abs(S(x, 0.0) - Complex(hbar * k * x, 0.0)) <= 1e-14);
    }
}

TEST_CASE("driven principal function with h = 0 equals the harmonic one") {
    ConstantSet c;
    c.c2 = 0.9;
    c.c3 = Complex(0.1, 0.0);
    const PrincipalFunction Sh = principal_function(harmonic(), c, 1.0);
    const PrincipalFunction Sd = principal_function(driven(1.0, 0.0, 0.5), c, 1.0);
    for (double x : {-1.0, 0.3, 2.0})
        for (double t : {0.2, 0.9, 1.4})
            CHECK(std::abs(Sh(x, t) - Sd(x, t)) <= 1e-14);
}

TEST_CASE("resonance boundary value uses f(0) = 0") {
    const double hbar = 1.0, k = 0.8;
    const Scenario s = resonance(1.0, 2.0);
    ConstantSet c;
    c.c2 = hbar * k;
    c.c3 = 0.0;
    const PrincipalFunction S = principal_function(s, c, hbar);
    for (double x : {-1.5, 0.0, 2.5})
        CHECK(std::abs(S(x, 0.0) - Complex(hbar * k * x, 0.0)) <= 1e-14);
}

TEST_CASE("principal functions solve their quantum equations") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> xd(-2.0, 2.0);
    std::uniform_real_distribution<double> td(0.05, 1.3);
    ConstantSet c;
    c.c1 = 0.2;
    c.c2 = 0.9;
    c.c3 = Complex(0.05, 0.0);

    const std::vector<Scenario> cases = {harmonic(), driven(1.0, 0.3, 0.5),
                                         resonance(1.0, 2.0)};
    for (const auto& s : cases) {
        const PrincipalFunction S = principal_function(s, c, s.hbar);
        for (int i = 0; i < 50; ++i) {
            const double x = xd(rng);
            double t = td(rng);
            if (std::abs(std::cos(s.omega * t + c.c1)) < 0.1) t = 0.5;
            CHECK(std::abs(qhje_residual(S, x, t)) <= 1e-7);
        }
    }
}

TEST_CASE("quadratic-only truncation fails the quantum equation") {
    ConstantSet c;
    c.c2 = 0.0;
    const PrincipalFunction S =
        principal_function(harmonic(), c, 1.0, PrincipalForm::quadratic_only);
    // residual = -(i hbar / 2) alpha, nonzero wherever tan is
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> xd(-2.0, 2.0);
    std::uniform_real_distribution<double> td(0.2, 1.2);
    for (int i = 0; i < 20; ++i) {
        const double x = xd(rng), t = td(rng);
        CHECK(std::abs(qhje_residual(S, x, t)) > 1e-3);
    }
}

TEST_CASE("classical limit: S(hbar) - S(0) = (i hbar / 2) log cos") {
    ConstantSet c;
    c.c1 = 0.3;
    c.c2 = 1.1;
    c.c3 = 0.0;
    const double hbar = 0.6;
    const Scenario s = harmonic(1.0, hbar);
    const PrincipalFunction S_q = principal_function(s, c, hbar);
    const PrincipalFunction S_cl = principal_function(s, c, 0.0);
    for (double t : {0.1, 0.5, 1.0}) {
        const Complex expect =
            Complex(0.0, 0.5 * hbar) * std::log(Complex(std::cos(t + c.c1), 0.0));
        Complex prev{};
        for (double x : {-1.7, 0.0, 0.4, 2.2}) {
            const Complex diff = S_q(x, t) - S_cl(x, t);
            CHECK(std::abs(diff - expect) <= 1e-12);
            if (x > -1.7) CHECK(std::abs(diff - prev) <= 1e-13); // x-independent
            prev = diff;
        }
    }
}

TEST_CASE("hbar = 0 principal function is real on caustic-free intervals") {
    ConstantSet c;
    c.c1 = 0.1;
    c.c2 = 0.7;
    const PrincipalFunction S = principal_function(harmonic(), c, 0.0);
    for (double t : {0.0, 0.4, 1.1})
        for (double x : {-1.0, 0.8}) CHECK(S(x, t).imag() == 0.0);
}

TEST_CASE("principal functions are exactly quadratic in x") {
    ConstantSet c;
    c.c1 = 0.15;
    c.c2 = 1.2;
    c.c3 = Complex(0.0, 0.1);
    const std::vector<Scenario> cases = {harmonic(), driven(1.0, 0.3, 0.5),
                                         resonance(1.0, 1.0)};
    for (const auto& s : cases) {
        const PrincipalFunction S = principal_function(s, c, 1.0);
        for (double t : {0.3, 0.9}) {
            // third divided difference = 6 (cubic coefficient) dx^3 for any
            // cubic fit through four points
            const double x0 = -0.7, dx = 0.5;
            const Complex d3 = S(x0 + 3 * dx, t) - 3.0 * S(x0 + 2 * dx, t) +
                               3.0 * S(x0 + dx, t) - S(x0, t);
            CHECK(std::abs(d3) / (6.0 * dx * dx * dx) <= 1e-10);
        }
    }
}

TEST_CASE("magnetic action reproduces the plane-wave boundary values") {
    MagneticParams mp;
    mp.b0 = 1.0;
    mp.b1 = 0.0;
    mp.gamma = 2.0;
    mp.light_c = 1.0;
    mp.mass = 1.0; // larmor = mass, the regime where the printed constants close
    const double hbar = 0.7, kx = 0.7, ky = -0.4, kz = 1.1;
    const MagneticConstants mc = MagneticConstants::from_boundary(mp, hbar, kx, ky, kz);
    CHECK(mc.c4 + mc.c5 + mc.c6 == 0.0);
    const MagneticPrincipalFunction S = magnetic_principal_function(mp, mc, hbar);
    for (double x : {-1.0, 0.5})
        for (double y : {0.3, -0.8})
            for (double z : {0.0, 1.7}) {
                const Complex expect(hbar * (kx * x + ky * y + kz * z), 0.0);
                CHECK(std::abs(S(x, y, z, 0.0) - expect) <= 1e-12);
            }
}

TEST_CASE("magnetic action with zero constants has no linear terms") {
    MagneticParams mp;
    mp.b0 = 1.0;
    mp.gamma = 2.0;
    MagneticConstants mc; // sigma = c2 = c3 = 0
    const MagneticPrincipalFunction S = magnetic_principal_function(mp, mc, 1.0);
    const double t = 0.4;
    // S(x,y,z,t) - S(-x,-y,z,t) isolates the linear x, y terms
    CHECK(std::abs(S(0.7, -0.3, 0.0, t) - S(-0.7, 0.3, 0.0, t)) <= 1e-14);
    // z enters only through c3 z - c3^2 t / 2m = 0
    CHECK(std::abs(S(0.7, -0.3, 2.0, t) - S(0.7, -0.3, 0.0, t)) <= 1e-14);
}

TEST_CASE("magnetic z sector is a free Hamilton-Jacobi flow") {
    MagneticParams mp;
    mp.b0 = 1.0;
    mp.gamma = 2.0;
    MagneticConstants mc;
    mc.c3 = 0.9;
    const MagneticPrincipalFunction S = magnetic_principal_function(mp, mc, 1.0);
    const double h = 1e-5;
    for (double t : {0.2, 0.8})
        for (double z : {-1.0, 0.6}) {
            const Complex dz = (S(0.1, 0.2, z + h, t) - S(0.1, 0.2, z - h, t)) / (2.0 * h);
            CHECK(std::abs(dz - Complex(mc.c3, 0.0)) <= 1e-9);
            const Complex dt = (S(0.1, 0.2, z, t + h) - S(0.1, 0.2, z, t - h)) / (2.0 * h);
            const Complex dt0 = (S(0.1, 0.2, 0.0, t + h) - S(0.1, 0.2, 0.0, t - h)) / (2.0 * h);
            // the z-sector contribution to -dS/dt is c3^2 / 2m, constant in t
            CHECK(std::abs((dt - dt0) - Complex(0.0, 0.0)) <= 1e-9);
            CHECK(std::abs(dz * dz / (2.0 * mp.mass) -
                           Complex(mc.c3 * mc.c3 / (2.0 * mp.mass), 0.0)) <= 1e-8);
        }
}

TEST_CASE("magnetic quantum equation: printed bracket vs dimensional variant") {
    const double hbar = 1.0;
    MagneticConstants mc;
    mc.c1 = 0.3;
    mc.c2 = 0.7;
    mc.c3 = 0.4;
    mc.sigma = 0.9;

    // larmor == mass: both variants solve the equation
    MagneticParams same;
    same.b0 = 1.0;
    same.gamma = 2.0;
    same.light_c = 1.0;
    same.mass = 1.0;
    for (auto bracket : {MagneticBracket::as_printed, MagneticBracket::dimensional}) {
        const MagneticPrincipalFunction S = magnetic_principal_function(same, mc, hbar, bracket);
        CHECK(std::abs(magnetic_qhje_residual(S, 0.4, -0.7, 1.1, 0.35)) <= 1e-7);
    }

    // larmor != mass: only the dimensional variant survives
    MagneticParams other = same;
    other.b0 = 2.0; // larmor = 2, mass = 1
    const MagneticPrincipalFunction bad =
        magnetic_principal_function(other, mc, hbar, MagneticBracket::as_printed);
    CHECK(std::abs(magnetic_qhje_residual(bad, 0.4, -0.7, 1.1, 0.35)) > 1e-3);
    const MagneticPrincipalFunction good =
        magnetic_principal_function(other, mc, hbar, MagneticBracket::dimensional);
    CHECK(std::abs(magnetic_qhje_residual(good, 0.4, -0.7, 1.1, 0.35)) <= 1e-7);
}

TEST_CASE("magnetic regime guard") {
    MagneticParams mp;
    mp.b0 = 1.0;
    mp.b1 = 0.5;
    mp.gamma = 2.0;
    MagneticConstants mc;
    CHECK_THROWS_AS((void)magnetic_principal_function(mp, mc, 1.0), Error);
}

TEST_CASE("magnetic action caustic guard") {
    MagneticParams mp;
    mp.b0 = 1.0;
    mp.gamma = 2.0; // precession frequency 1
    MagneticConstants mc;
    const MagneticPrincipalFunction S = magnetic_principal_function(mp, mc, 1.0);
    try {
        (void)S(0.1, 0.2, 0.3, M_PI / 2.0);
        FAIL("expected CausticError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::caustic);
    }
}

TEST_CASE("quantum-equation residual propagates the caustic error") {
    ConstantSet c;
    c.c2 = 1.0;
    const PrincipalFunction S = principal_function(harmonic(), c, 1.0);
    // the time stencil straddles the pole of the coefficients
    CHECK_THROWS_AS((void)qhje_residual(S, 0.3, M_PI / 2.0), Error);
}
