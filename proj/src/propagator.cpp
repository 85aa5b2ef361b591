#include "qhj/propagator.hpp"

#include <algorithm>
#include <cmath>

namespace qhj {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSingularTol = 1e-12;

KernelStructure scale_phases(KernelStructure ks, double inv_hbar) {
    ks.a *= inv_hbar;
    ks.b *= inv_hbar;
    ks.c *= inv_hbar;
    ks.lx *= inv_hbar;
    ks.lxt *= inv_hbar;
    ks.p0 *= inv_hbar;
    return ks;
}

} // namespace

double WaveFunction::norm_sq() const {
    double acc = 0.0;
    for (const auto& v : psi) acc += std::norm(v);
    return dx * acc;
}

double WaveFunction::norm() const { return std::sqrt(norm_sq()); }

void WaveFunction::validate() const {
    if (n() < 16) throw Error(ErrorCode::invalid_value, "wavefunction needs n >= 16");
    if (!(dx > 0.0)) throw Error(ErrorCode::invalid_value, "wavefunction needs dx > 0");
    if (!std::isfinite(norm_sq()))
        throw Error(ErrorCode::invalid_value, "wavefunction norm is not finite");
}

WaveFunction gaussian_packet(double x_min, double dx, std::size_t n, double x0, double p0,
                             double w, double hbar) {
    WaveFunction out;
    out.x_min = x_min;
    out.dx = dx;
    out.psi.resize(n);
    const double amp = std::pow(kPi * w * w, -0.25);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = out.x(i) - x0;
        out.psi[i] = amp * std::exp(Complex(-u * u / (2.0 * w * w), p0 * u / hbar));
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Oscillator-family kernel

GaussianKernel::GaussianKernel(Scenario s, double hbar, ShiftConvention conv,
                               KernelConstruction how)
    : scenario_(std::move(s)), hbar_(hbar), convention_(conv), construction_(how) {
    if (!scenario_.one_dimensional())
        throw Error(ErrorCode::unsupported_kind,
                    "oscillator kernels need a 1d scenario; see kernel_magnetic");
}

KernelStructure GaussianKernel::structure(double t) const {
    const double w = scenario_.omega;
    const double st = std::sin(w * t), ct = std::cos(w * t);
    if (std::abs(st) <= kSingularTol)
        throw Error(ErrorCode::singular_time, "sin(wt) vanishes at t=" + std::to_string(t));

    const double f_final = shift_eval(scenario_, t).f;
    const double f1 = f_final;
    const double f2 =
        (convention_ == ShiftConvention::as_printed) ? f_final : shift_eval(scenario_, 0.0).f;

    const double a = w * ct / (2.0 * st);
    const double b = -w / st;

    KernelStructure ks;
    ks.a = a;
    ks.b = b;
    ks.c = a;
    ks.lx = -2.0 * a * f1 - b * f2;
    ks.lxt = -2.0 * a * f2 - b * f1;
    ks.p0 = a * (f1 * f1 + f2 * f2) + b * f1 * f2;
    // Continuity in t: each caustic multiplies the prefactor by exp(-i pi/2).
    const int maslov = static_cast<int>(std::floor(w * t / kPi));
    ks.prefactor = std::sqrt(w / (2.0 * kPi * hbar_ * std::abs(st))) *
                   std::exp(Complex(0.0, -kPi / 4.0 - kPi / 2.0 * maslov));
    return ks;
}

Complex GaussianKernel::operator()(double x, double t, double x_tilde) const {
    if (construction_ == KernelConstruction::delta) {
        const ConstantSet c =
            kernel_delta_constants(scenario_, hbar_, x_tilde, t, convention_);
        Scenario sc = scenario_;
        sc.hbar = hbar_;
        try {
            const PrincipalFunction S(sc, c, hbar_);
            return std::exp(Complex(0.0, 1.0) * S(x, t) / hbar_);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::caustic)
                throw Error(ErrorCode::singular_time,
                            "sin(wt) vanishes at t=" + std::to_string(t));
            throw;
        }
    }
    const KernelStructure ks = structure(t);
    const double phase = ks.a * x * x + ks.b * x * x_tilde + ks.c * x_tilde * x_tilde +
                         ks.lx * x + ks.lxt * x_tilde + ks.p0;
    return ks.prefactor * std::exp(Complex(0.0, phase / hbar_));
}

GaussianKernel kernel_fourier(const Scenario& s, double hbar, ShiftConvention conv) {
    return GaussianKernel(s, hbar, conv, KernelConstruction::fourier);
}

ConstantSet kernel_delta_constants(const Scenario& s, double hbar, double x_tilde, double t,
                                   ShiftConvention conv) {
    if (!s.one_dimensional())
        throw Error(ErrorCode::unsupported_kind, "kernel_delta_constants needs a 1d scenario");
    const double shift = (s.kind == ScenarioKind::harmonic) ? 0.0
                         : (conv == ShiftConvention::as_printed)
                             ? shift_eval(s, t).f
                             : shift_eval(s, 0.0).f;
    ConstantSet c;
    c.c1 = kPi / 2.0;
    c.c2 = s.omega * (x_tilde - shift);
    c.c3 = Complex(0.0, -0.5 * hbar) *
           std::log(Complex(0.0, s.omega / (2.0 * kPi * hbar)));
    return c;
}

GaussianKernel kernel_delta(const Scenario& s, double hbar, ShiftConvention conv) {
    return GaussianKernel(s, hbar, conv, KernelConstruction::delta);
}

// ---------------------------------------------------------------------------
// Magnetic kernel

MagneticKernel::MagneticKernel(MagneticParams mp, double hbar) : params_(mp), hbar_(hbar) {
    if (params_.b1 != 0.0)
        throw Error(ErrorCode::unsupported_regime, "closed-form kernel requires B1 = 0");
    params_.validate();
}

Complex MagneticKernel::xy_factor(double x, double y, double t, double xt, double yt) const {
    const double m = params_.mass, w = params_.larmor();
    const double st = std::sin(w * t);
    if (std::abs(st) <= kSingularTol || t <= 0.0)
        throw Error(ErrorCode::singular_time, "planar kernel singular at t=" + std::to_string(t));
    const int maslov = static_cast<int>(std::floor(w * t / kPi));
    const Complex pref = m * w / (2.0 * kPi * hbar_ * std::abs(st)) *
                         std::exp(Complex(0.0, -kPi / 2.0 - kPi * maslov));
    const double dx2 = (x - xt) * (x - xt) + (y - yt) * (y - yt);
    const double phase =
        m / (2.0 * hbar_) * (w * std::cos(w * t) / st * dx2 + cross_phase(x, y, xt, yt));
    return pref * std::exp(Complex(0.0, phase));
}

Complex MagneticKernel::free_z_factor(double z, double t, double zt) const {
    if (t <= 0.0) throw Error(ErrorCode::singular_time, "free kernel needs t > 0");
    const double m = params_.mass;
    const Complex pref =
        std::sqrt(m / (2.0 * kPi * hbar_ * t)) * std::exp(Complex(0.0, -kPi / 4.0));
    return pref * std::exp(Complex(0.0, m * (z - zt) * (z - zt) / (2.0 * hbar_ * t)));
}

double MagneticKernel::cross_phase(double x, double y, double xt, double yt) const {
    return 2.0 * params_.larmor() * (x * yt - xt * y);
}

Complex MagneticKernel::operator()(double x, double y, double z, double t, double xt,
                                   double yt, double zt) const {
    return xy_factor(x, y, t, xt, yt) * free_z_factor(z, t, zt);
}

KernelStructure MagneticKernel::z_structure(double t) const {
    if (t <= 0.0) throw Error(ErrorCode::singular_time, "free kernel needs t > 0");
    const double m = params_.mass;
    KernelStructure ks;
    ks.a = m / (2.0 * t);
    ks.b = -m / t;
    ks.c = m / (2.0 * t);
    ks.prefactor =
        std::sqrt(m / (2.0 * kPi * hbar_ * t)) * std::exp(Complex(0.0, -kPi / 4.0));
    return ks;
}

MagneticKernel kernel_magnetic(const MagneticParams& mp, double hbar) {
    return MagneticKernel(mp, hbar);
}

// The Kernel1D views normalize the structural phases by the kernel's own
// hbar so the quadrature code can treat them as plain radians.
Kernel1D as_kernel1d(const GaussianKernel& k) {
    const double inv = 1.0 / k.hbar();
    return {[k](double x, double t, double xt) { return k(x, t, xt); },
            [k, inv](double t) { return scale_phases(k.structure(t), inv); }};
}

Kernel1D z_sector(const MagneticKernel& k) {
    const double inv = 1.0 / k.hbar();
    return {[k](double z, double t, double zt) { return k.free_z_factor(z, t, zt); },
            [k, inv](double t) { return scale_phases(k.z_structure(t), inv); }};
}

// ---------------------------------------------------------------------------
// Quadrature operations

namespace {

struct Support {
    double lo = 0.0, hi = 0.0;
};

Support packet_support(const WaveFunction& psi) {
    double peak = 0.0;
    for (const auto& v : psi.psi) peak = std::max(peak, std::abs(v));
    const double cutoff = 1e-12 * peak;
    std::size_t lo = 0, hi = psi.n() - 1;
    while (lo < hi && std::abs(psi.psi[lo]) < cutoff) ++lo;
    while (hi > lo && std::abs(psi.psi[hi]) < cutoff) --hi;
    return {psi.x(lo), psi.x(hi)};
}

double supremum_abs_linear(double coef, double lo, double hi) {
    return std::max(std::abs(coef * lo), std::abs(coef * hi));
}

// Sampling guard: require >= 4 quadrature points per local wavelength of the
// kernel phase over the packet support. Chirp quadrature stays accurate past
// that bound as long as the aliasing ghost (displaced by 2 pi / (dx |b|))
// lands outside the occupied span, so that case is admitted too.
void check_resolution(const KernelStructure& ks, const WaveFunction& psi, double out_lo,
                      double out_hi) {
    const Support sup = packet_support(psi);
    const double grad_max = supremum_abs_linear(ks.b, out_lo, out_hi) +
                            supremum_abs_linear(2.0 * ks.c, sup.lo, sup.hi) +
                            std::abs(ks.lxt);
    if (grad_max == 0.0) return;
    const double lambda_min = 2.0 * kPi / grad_max;
    if (lambda_min >= 4.0 * psi.dx) return;
    if (ks.b != 0.0) {
        const double ghost = 2.0 * kPi / (psi.dx * std::abs(ks.b));
        const double span = std::max(out_hi, sup.hi) - std::min(out_lo, sup.lo);
        if (ghost > 1.25 * span) return;
    }
    throw Error(ErrorCode::grid_too_coarse,
                "kernel phase unresolved: min wavelength " + std::to_string(lambda_min) +
                    " < 4 dx = " + std::to_string(4.0 * psi.dx));
}

// dx * sum_j K(x_i) psi_j with trapezoid weights. The x-dependent part of
// the cross phase advances by a unit-modulus recurrence (refreshed every 512
// samples) so the inner loop runs without a complex exp per pair.
void apply_kernel(const KernelStructure& ks, const WaveFunction& psi,
                  const std::vector<double>& xs, std::vector<Complex>& out) {
    const std::size_t n = psi.n();
    std::vector<Complex> column(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xt = psi.x(j);
        const double wt = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        column[j] = wt * psi.psi[j] * std::exp(Complex(0.0, ks.c * xt * xt + ks.lxt * xt));
    }
    out.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const double beta = ks.b * x;
        const Complex step = std::exp(Complex(0.0, beta * psi.dx));
        Complex rot = std::exp(Complex(0.0, beta * psi.x_min));
        Complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if ((j & 511u) == 0u && j > 0)
                rot = std::exp(Complex(0.0, beta * psi.x(j)));
            acc += column[j] * rot;
            rot *= step;
        }
        const double own = ks.a * x * x + ks.lx * x + ks.p0;
        out[i] = ks.prefactor * std::exp(Complex(0.0, own)) * psi.dx * acc;
    }
}

} // namespace

WaveFunction propagate(const Kernel1D& K, const WaveFunction& psi0, double t) {
    psi0.validate();
    const KernelStructure ks = K.structure(t);
    check_resolution(ks, psi0, psi0.x_min, psi0.x_max());

    WaveFunction out;
    out.x_min = psi0.x_min;
    out.dx = psi0.dx;
    std::vector<double> xs(psi0.n());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = psi0.x(i);
    apply_kernel(ks, psi0, xs, out.psi);
    return out;
}

WaveFunction propagate(const GaussianKernel& K, const WaveFunction& psi0, double t) {
    return propagate(as_kernel1d(K), psi0, t);
}

namespace {

double taper_weight(double y, double lo, double hi, double frac) {
    const double w = (hi - lo) * frac;
    if (y < lo + w) {
        const double s = std::sin(0.5 * kPi * (y - lo) / w);
        return s * s;
    }
    if (y > hi - w) {
        const double s = std::sin(0.5 * kPi * (hi - y) / w);
        return s * s;
    }
    return 1.0;
}

void check_compose_resolution(const KernelStructure& k_out, const KernelStructure& k_in,
                              const ComposeGrid& grid) {
    // total phase in y: outer kernel in (x, y) plus inner kernel in (y, xt)
    auto absmax = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    const double grad_max = std::abs(2.0 * (k_out.c + k_in.a)) * grid.y_half_width +
                            std::abs(k_out.b) * absmax(grid.x) +
                            std::abs(k_in.b) * absmax(grid.xt) + std::abs(k_out.lxt) +
                            std::abs(k_in.lx);
    if (grad_max == 0.0) return;
    const double lambda_min = 2.0 * kPi / grad_max;
    if (lambda_min < 4.0 * grid.dy)
        throw Error(ErrorCode::grid_too_coarse,
                    "intermediate grid unresolved: min wavelength " +
                        std::to_string(lambda_min) + " < 4 dy = " +
                        std::to_string(4.0 * grid.dy));
}

} // namespace

KernelTable compose(const Kernel1D& K, double t1, double t2, const ComposeGrid& grid) {
    if (!(0.0 < t1 && t1 < t2))
        throw Error(ErrorCode::invalid_value, "compose needs 0 < t1 < t2");
    check_compose_resolution(K.structure(t2 - t1), K.structure(t1), grid);

    const double Y = grid.y_half_width, dy = grid.dy;
    const auto ny = static_cast<std::size_t>(std::floor(2.0 * Y / dy)) + 1;
    std::vector<double> y(ny), w(ny);
    for (std::size_t k = 0; k < ny; ++k) {
        y[k] = -Y + dy * static_cast<double>(k);
        w[k] = taper_weight(y[k], -Y, Y, grid.taper_fraction);
        if (k == 0 || k == ny - 1) w[k] *= 0.5;
    }

    // cache the inner columns once per xt
    std::vector<std::vector<Complex>> inner(grid.xt.size(), std::vector<Complex>(ny));
    for (std::size_t j = 0; j < grid.xt.size(); ++j)
        for (std::size_t k = 0; k < ny; ++k)
            inner[j][k] = K.eval(y[k], t1, grid.xt[j]) * w[k];

    KernelTable table;
    table.x = grid.x;
    table.xt = grid.xt;
    table.values.resize(grid.x.size() * grid.xt.size());
    std::vector<Complex> outer(ny);
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        for (std::size_t k = 0; k < ny; ++k) outer[k] = K.eval(grid.x[i], t2 - t1, y[k]);
        for (std::size_t j = 0; j < grid.xt.size(); ++j) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < ny; ++k) acc += outer[k] * inner[j][k];
            table.values[i * grid.xt.size() + j] = acc * dy;
        }
    }
    return table;
}

KernelTable compose(const GaussianKernel& K, double t1, double t2, const ComposeGrid& grid) {
    return compose(as_kernel1d(K), t1, t2, grid);
}

KernelTable sample_kernel(const Kernel1D& K, double t, const std::vector<double>& x,
                          const std::vector<double>& xt) {
    KernelTable table;
    table.x = x;
    table.xt = xt;
    table.values.resize(x.size() * xt.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < xt.size(); ++j)
            table.values[i * xt.size() + j] = K.eval(x[i], t, xt[j]);
    return table;
}

double delta_limit_error(const Kernel1D& K, const WaveFunction& g, double t) {
    g.validate();
    const KernelStructure ks = K.structure(t);

    // thin the output grid on very fine quadrature grids; the error
    // integrand is smooth so a uniform subsample estimates the L2 norm
    const std::size_t stride = std::max<std::size_t>(1, g.n() / 4096);
    std::vector<double> xs;
    std::vector<Complex> gref;
    for (std::size_t i = 0; i < g.n(); i += stride) {
        xs.push_back(g.x(i));
        gref.push_back(g.psi[i]);
    }
    std::vector<Complex> kg;
    apply_kernel(ks, g, xs, kg);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += std::norm(kg[i] - gref[i]);
        den += std::norm(gref[i]);
    }
    return std::sqrt(num / den);
}

double delta_limit_error(const GaussianKernel& K, const WaveFunction& g, double t) {
    return delta_limit_error(as_kernel1d(K), g, t);
}

} // namespace qhj
