#include "qhj/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "qhj/ode.hpp"

namespace qhj {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

GridEvolution grid_evolution_for(const Scenario& s, double x_min, double dx, std::size_t n,
                                 double dt, bool alt_momentum_coupling) {
    if (!s.one_dimensional())
        throw Error(ErrorCode::unsupported_kind, "grid solver is one-dimensional");
    GridEvolution ge;
    ge.x_min = x_min;
    ge.dx = dx;
    ge.n = n;
    ge.dt = dt;
    ge.hbar = s.hbar;
    ge.hamiltonian.mass = s.mass;
    ge.hamiltonian.omega = s.omega;
    Scenario sc = s;
    if (alt_momentum_coupling)
        ge.hamiltonian.shift = [sc](double t) {
            Shift sh = shift_eval(sc, t);
            sh.fdot = shift_velocity_alt(sc, t);
            return sh;
        };
    else
        ge.hamiltonian.shift = [sc](double t) { return shift_eval(sc, t); };
    return ge;
}

WaveFunction evolve_grid(const GridEvolution& ge, const WaveFunction& psi0, double t_final) {
    psi0.validate();
    if (psi0.n() != ge.n || psi0.dx != ge.dx || psi0.x_min != ge.x_min)
        throw Error(ErrorCode::invalid_value, "state grid does not match the solver grid");

    const std::size_t n = ge.n;
    const double hbar = ge.hbar, m = ge.hamiltonian.mass, dx = ge.dx;
    const auto steps = static_cast<std::size_t>(std::ceil(t_final / ge.dt - 1e-12));
    const double dt = t_final / static_cast<double>(std::max<std::size_t>(steps, 1));

    // Stability contract: dt * (local energy scale) / hbar <= 0.1, with the
    // energy scale taken from the initial state's kinetic content plus the
    // largest potential value over the run.
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = psi0.x(i);
    double vmax = 0.0;
    for (double tprobe : {0.0, 0.5 * t_final, t_final}) {
        const Shift sh = ge.hamiltonian.shift(tprobe);
        for (double x : xs) {
            const double u = x - sh.f;
            vmax = std::max(vmax, 0.5 * m * ge.hamiltonian.omega * ge.hamiltonian.omega * u * u);
        }
    }
    double lap2 = 0.0, nrm2 = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Complex d2 = (psi0.psi[i + 1] - 2.0 * psi0.psi[i] + psi0.psi[i - 1]) / (dx * dx);
        lap2 += std::norm(d2);
        nrm2 += std::norm(psi0.psi[i]);
    }
    const double kinetic_scale = (nrm2 > 0.0) ? hbar * hbar / (2.0 * m) * std::sqrt(lap2 / nrm2) : 0.0;
    const double e_scale = vmax + kinetic_scale;
    if (dt * e_scale / hbar > 0.1)
        throw Error(ErrorCode::unstable_step,
                    "dt * E / hbar = " + std::to_string(dt * e_scale / hbar) + " > 0.1");

    std::vector<Complex> psi = psi0.psi;
    const double kin = hbar * hbar / (2.0 * m * dx * dx);

    std::vector<Complex> a_lo(n), a_di(n), a_up(n), rhs(n), scratch(n);
    auto leak_check = [&]() {
        double nrm = 0.0;
        for (const auto& v : psi) nrm += std::norm(v);
        nrm = std::sqrt(dx * nrm);
        const double edge = std::max(std::abs(psi.front()), std::abs(psi.back()));
        if (edge > 1e-8 * nrm)
            throw Error(ErrorCode::boundary_leak,
                        "edge amplitude " + std::to_string(edge) + " exceeds 1e-8 of the norm");
    };

    for (std::size_t step = 0; step < steps; ++step) {
        const double tm = (static_cast<double>(step) + 0.5) * dt;
        const Shift sh = ge.hamiltonian.shift(tm);
        const Complex lam(0.0, dt / (2.0 * hbar));
        // H tridiagonal: diag 2*kin + V, off -kin -+ i hbar fdot / (2 dx)
        const Complex off_up = Complex(-kin, 0.0) + Complex(0.0, -hbar * sh.fdot / (2.0 * dx));
        const Complex off_lo = Complex(-kin, 0.0) + Complex(0.0, +hbar * sh.fdot / (2.0 * dx));
        for (std::size_t i = 0; i < n; ++i) {
            const double u = xs[i] - sh.f;
            const double V = 0.5 * m * ge.hamiltonian.omega * ge.hamiltonian.omega * u * u;
            const Complex hd = 2.0 * kin + V;
            a_di[i] = 1.0 + lam * hd;
            a_up[i] = lam * off_up;
            a_lo[i] = lam * off_lo;
            // rhs = (I - lam H) psi
            Complex acc = (1.0 - lam * hd) * psi[i];
            if (i > 0) acc -= lam * off_lo * psi[i - 1];
            if (i + 1 < n) acc -= lam * off_up * psi[i + 1];
            rhs[i] = acc;
        }
        // Thomas solve (A is diagonally dominant for the dt range admitted)
        scratch[0] = a_up[0] / a_di[0];
        rhs[0] /= a_di[0];
        for (std::size_t i = 1; i < n; ++i) {
            const Complex den = a_di[i] - a_lo[i] * scratch[i - 1];
            scratch[i] = a_up[i] / den;
            rhs[i] = (rhs[i] - a_lo[i] * rhs[i - 1]) / den;
        }
        psi[n - 1] = rhs[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) psi[i] = rhs[i] - scratch[i] * psi[i + 1];

        if ((step & 127u) == 127u) leak_check();
    }
    leak_check();

    WaveFunction out;
    out.x_min = ge.x_min;
    out.dx = ge.dx;
    out.psi = std::move(psi);
    return out;
}

double expectation_x(const WaveFunction& psi) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psi.n(); ++i) {
        const double p = std::norm(psi.psi[i]);
        num += p * psi.x(i);
        den += p;
    }
    return num / den;
}

double expectation_x2(const WaveFunction& psi) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psi.n(); ++i) {
        const double p = std::norm(psi.psi[i]);
        num += p * psi.x(i) * psi.x(i);
        den += p;
    }
    return num / den;
}

KernelOracleResult kernel_vs_oracle(const Scenario& s, const GaussianKernel& K,
                                    const WaveFunction& psi0, double t, double dt) {
    const WaveFunction psi_k = propagate(K, psi0, t);
    const GridEvolution ge = grid_evolution_for(s, psi0.x_min, psi0.dx, psi0.n(), dt);
    const WaveFunction psi_g = evolve_grid(ge, psi0, t);

    const double norm0 = psi0.norm();
    double mod2 = 0.0;
    Complex overlap = 0.0;
    double nk2 = 0.0, ng2 = 0.0;
    for (std::size_t i = 0; i < psi_k.n(); ++i) {
        const double d = std::abs(psi_k.psi[i]) - std::abs(psi_g.psi[i]);
        mod2 += d * d;
        overlap += std::conj(psi_g.psi[i]) * psi_k.psi[i];
        nk2 += std::norm(psi_k.psi[i]);
        ng2 += std::norm(psi_g.psi[i]);
    }
    const double dx = psi0.dx;
    KernelOracleResult out;
    out.mod_err = std::sqrt(dx * mod2) / norm0;
    const double gap = dx * (nk2 + ng2) - 2.0 * dx * std::abs(overlap);
    out.phase_err = std::sqrt(std::max(gap, 0.0)) / norm0;
    return out;
}

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 rotating_frame_field(const MagneticParams& mp) {
    return {mp.b1, 0.0, mp.b0 + mp.omega_field / mp.gamma};
}

double Spinor::norm() const { return std::sqrt(std::norm(up) + std::norm(down)); }

Spinor spin_half_evolution(const MagneticParams& mp, const Spinor& s0, double t) {
    const double bz = mp.b0 + mp.omega_field / mp.gamma;
    const double bx = mp.b1;
    const double b = std::sqrt(bz * bz + bx * bx);
    if (b == 0.0) return s0;
    // U = exp(i (gamma t / 2)(bz sigma_z + bx sigma_x))
    const double ang = 0.5 * mp.gamma * t * b;
    const Complex c = std::cos(ang);
    const Complex is = Complex(0.0, std::sin(ang) / b);
    Spinor out;
    out.up = (c + is * bz) * s0.up + is * bx * s0.down;
    out.down = is * bx * s0.up + (c - is * bz) * s0.down;
    return out;
}

double spin_flip_probability(const MagneticParams& mp, double t) {
    Spinor up;
    const Spinor evolved = spin_half_evolution(mp, up, t);
    return std::norm(evolved.down);
}

double PinneyFamily::v(double T) const { return amplitude * std::cos(eta * T + delta); }

double PinneyFamily::vdot(double T) const {
    return -amplitude * eta * std::sin(eta * T + delta);
}

double PinneyFamily::s(double T) const {
    const double c = std::cos(eta * T + delta);
    if (std::abs(c) <= 1e-12)
        throw Error(ErrorCode::pole, "scale factor pole at T=" + std::to_string(T));
    return 1.0 / (amplitude * c);
}

double PinneyFamily::sdot(double T) const {
    const double c = std::cos(eta * T + delta);
    if (std::abs(c) <= 1e-12)
        throw Error(ErrorCode::pole, "scale factor pole at T=" + std::to_string(T));
    return eta * std::sin(eta * T + delta) / (amplitude * c * c);
}

double PinneyFamily::mu(double T) const {
    const double vv = v(T);
    return vv * vv;
}

double PinneyFamily::alphadot(double T) const {
    return std::sqrt(omega0 * omega0 - eta * eta) * mu(T);
}

PinneyFamily pinney_particular(double amplitude, double eta, double delta, double omega0) {
    if (amplitude == 0.0) throw Error(ErrorCode::invalid_value, "amplitude must be nonzero");
    if (!(omega0 * omega0 > eta * eta))
        throw Error(ErrorCode::domain_error, "omega0^2 > eta^2 required for a real rescaling");
    return {amplitude, eta, delta, omega0};
}

ScaleFamily as_scale_family(const PinneyFamily& family, double) {
    return {[family](double T) { return family.s(T); },
            [family](double T) { return family.sdot(T); },
            [family](double T) { return family.mu(T); },
            [family](double T) { return family.alphadot(T); }};
}

PinneySolution pinney_solve(double omega0, const std::function<double(double)>& alphadot,
                            double v0, double vdot0, const std::vector<double>& grid,
                            double local_tol) {
    if (v0 == 0.0) throw Error(ErrorCode::invalid_value, "v0 must be nonzero");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw Error(ErrorCode::invalid_value, "time grid must be strictly increasing");

    const double w2 = omega0 * omega0;
    auto rhs = [&](double t, const State<2>& y) -> State<2> {
        const double vv = y[0].real();
        const double ad = alphadot(t);
        return {y[1], -w2 * y[0] + ad * ad / (vv * vv * vv)};
    };
    OdeOptions opt;
    opt.rtol = local_tol;
    opt.atol = local_tol * 1e-2;

    PinneySolution out;
    out.v.reserve(grid.size());
    out.vdot.reserve(grid.size());
    if (grid.empty()) return out;
    State<2> y = {v0, vdot0};
    double t = grid.front();
    auto guard = [](double tt, const State<2>& ys) {
        if (std::abs(ys[0]) < 1e-8)
            throw Error(ErrorCode::collapse, "|v| < 1e-8 at t=" + std::to_string(tt));
    };
    guard(t, y);
    out.v.push_back(y[0].real());
    out.vdot.push_back(y[1].real());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        y = integrate_adaptive<2>(rhs, y, t, grid[i], opt, guard);
        t = grid[i];
        out.v.push_back(y[0].real());
        out.vdot.push_back(y[1].real());
    }
    return out;
}

double pinney_invariant(double omega0, double kappa, double v, double vdot) {
    return 0.5 * (vdot * vdot + omega0 * omega0 * v * v + kappa * kappa / (v * v));
}

FrameReduction::FrameReduction(MagneticParams mp) : params_(mp) { params_.validate(); }

double FrameReduction::alphadot(double tau) const {
    return -params_.gamma * params_.b1 * std::cos(params_.omega_field * tau) /
           (2.0 * params_.light_c);
}

Complex FrameReduction::phase_offset(double T, const ScaleFamily& family) const {
    return Complex(0.0, 0.5 * std::log(family.s(T)));
}

Complex FrameReduction::phase(double z_tilde, double T, const ScaleFamily& family) const {
    const double quad = params_.mass * family.mu(T) * family.s(T) * family.sdot(T) *
                        z_tilde * z_tilde / 2.0;
    return quad + phase_offset(T, family);
}

double FrameReduction::big_omega_sq(double T, const ScaleFamily& family) const {
    const double m = params_.mass;
    auto q = [&](double u) { return m * family.mu(u) * family.s(u) * family.sdot(u); };
    const double h = 1e-4;
    const double d_h = (q(T + h) - q(T - h)) / (2.0 * h);
    const double d_h2 = (q(T + h / 2) - q(T - h / 2)) / h;
    const double dq = (4.0 * d_h2 - d_h) / 3.0;
    const double s = family.s(T), mu = family.mu(T), sd = family.sdot(T);
    return mu / (m * s * s) * dq - mu * mu * (sd / s) * (sd / s);
}

FrameReduction::Identification FrameReduction::identification_residual(
    double T, const ScaleFamily& family, double omega0) const {
    const double m = params_.mass;
    const double s = family.s(T), mu = family.mu(T), ad = family.alphadot(T);
    Identification out;
    out.mass_residual = std::abs(m * s * s * mu - m) / m;
    const double target = m * omega0 * omega0;
    out.freq_residual =
        std::abs(m * s * s / mu * (ad * ad + big_omega_sq(T, family)) - target) /
        std::abs(target);
    return out;
}

void FrameReduction::verify_identification(const ScaleFamily& family, double omega0,
                                           const std::vector<double>& T_samples,
                                           double tol) const {
    for (double T : T_samples) {
        const Identification r = identification_residual(T, family, omega0);
        if (r.mass_residual > tol || r.freq_residual > tol)
            throw Error(ErrorCode::identification_violated,
                        "residuals (" + std::to_string(r.mass_residual) + ", " +
                            std::to_string(r.freq_residual) + ") at T=" + std::to_string(T));
    }
}

FrameReduction frame_reduce(const MagneticParams& mp) { return FrameReduction(mp); }

} // namespace qhj
