#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qhj/classical.hpp"
#include "qhj/hj_core.hpp"
#include "qhj/oracle.hpp"
#include "qhj/propagator.hpp"
#include "qhj/scenario.hpp"

namespace py = pybind11;
using namespace qhj;

PYBIND11_MODULE(_core, m) {
    m.doc() = "quantum Hamilton-Jacobi toolkit: coefficient systems, Gaussian "
              "propagators and verification oracles for quadratic Hamiltonians";

    py::register_exception<Error>(m, "QhjError");

    py::enum_<ScenarioKind>(m, "ScenarioKind")
        .value("harmonic", ScenarioKind::harmonic)
        .value("driven", ScenarioKind::driven)
        .value("resonance", ScenarioKind::resonance)
        .value("magnetic", ScenarioKind::magnetic);

    py::enum_<LogBranch>(m, "LogBranch")
        .value("principal", LogBranch::principal)
        .value("continued", LogBranch::continued);

    py::enum_<PrincipalForm>(m, "PrincipalForm")
        .value("full", PrincipalForm::full)
        .value("quadratic_only", PrincipalForm::quadratic_only);

    py::enum_<MagneticBracket>(m, "MagneticBracket")
        .value("as_printed", MagneticBracket::as_printed)
        .value("dimensional", MagneticBracket::dimensional);

    py::enum_<ShiftConvention>(m, "ShiftConvention")
        .value("initial_time", ShiftConvention::initial_time)
        .value("as_printed", ShiftConvention::as_printed);

    py::enum_<TrajectorySource>(m, "TrajectorySource")
        .value("from_action", TrajectorySource::from_action)
        .value("newton", TrajectorySource::newton);

    py::class_<MagneticParams>(m, "MagneticParams")
        .def(py::init<>())
        .def_readwrite("b0", &MagneticParams::b0)
        .def_readwrite("b1", &MagneticParams::b1)
        .def_readwrite("omega_field", &MagneticParams::omega_field)
        .def_readwrite("gamma", &MagneticParams::gamma)
        .def_readwrite("light_c", &MagneticParams::light_c)
        .def_readwrite("mass", &MagneticParams::mass)
        .def("larmor", &MagneticParams::larmor);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("kind", &Scenario::kind)
        .def_readwrite("omega", &Scenario::omega)
        .def_readwrite("h", &Scenario::h)
        .def_readwrite("big_omega", &Scenario::big_omega)
        .def_readwrite("hbar", &Scenario::hbar)
        .def_readwrite("mass", &Scenario::mass)
        .def_readwrite("magnetic", &Scenario::magnetic)
        .def_readwrite("kx", &Scenario::kx)
        .def_readwrite("ky", &Scenario::ky)
        .def_readwrite("kz", &Scenario::kz)
        .def("validate", &Scenario::validate);

    py::class_<ConstantSet>(m, "ConstantSet")
        .def(py::init<>())
        .def_readwrite("c1", &ConstantSet::c1)
        .def_readwrite("c2", &ConstantSet::c2)
        .def_readwrite("c3", &ConstantSet::c3)
        .def_readwrite("b_const", &ConstantSet::b_const)
        .def_readwrite("k", &ConstantSet::k)
        .def_readwrite("kx", &ConstantSet::kx)
        .def_readwrite("ky", &ConstantSet::ky)
        .def_readwrite("kz", &ConstantSet::kz)
        .def_readwrite("sigma", &ConstantSet::sigma);

    py::class_<Shift>(m, "Shift")
        .def_readonly("f", &Shift::f)
        .def_readonly("fdot", &Shift::fdot);

    m.def("parse_scenario", &parse_scenario, py::arg("text"));
    m.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));
    m.def("shift_eval", &shift_eval, py::arg("scenario"), py::arg("t"));

    py::class_<HJCoefficients>(m, "HJCoefficients")
        .def(py::init<>())
        .def_readwrite("alpha", &HJCoefficients::alpha)
        .def_readwrite("xi", &HJCoefficients::xi)
        .def_readwrite("zeta", &HJCoefficients::zeta);

    py::class_<CoefficientTrajectory>(m, "CoefficientTrajectory")
        .def_readonly("grid", &CoefficientTrajectory::grid)
        .def_readonly("samples", &CoefficientTrajectory::samples)
        .def_readonly("caustic_flags", &CoefficientTrajectory::caustic_flags);

    m.def("coefficient_odes", &coefficient_odes, py::arg("scenario"), py::arg("coefficients"));
    m.def("integrate_coefficients", &integrate_coefficients, py::arg("scenario"),
          py::arg("init"), py::arg("grid"), py::arg("local_tol") = 1e-10);
    m.def("closed_form_coefficients", &closed_form_coefficients, py::arg("scenario"),
          py::arg("constants"), py::arg("t"), py::arg("branch") = LogBranch::principal);

    py::class_<PrincipalFunction>(m, "PrincipalFunction")
        .def("__call__", &PrincipalFunction::operator(), py::arg("x"), py::arg("t"))
        .def_property_readonly("hbar", &PrincipalFunction::hbar);

    m.def("principal_function", &principal_function, py::arg("scenario"),
          py::arg("constants"), py::arg("hbar"), py::arg("form") = PrincipalForm::full);
    m.def(
        "qhje_residual",
        [](const PrincipalFunction& S, double x, double t) { return qhje_residual(S, x, t); },
        py::arg("principal_function"), py::arg("x"), py::arg("t"));

    py::class_<MagneticConstants>(m, "MagneticConstants")
        .def(py::init<>())
        .def_readwrite("c1", &MagneticConstants::c1)
        .def_readwrite("c2", &MagneticConstants::c2)
        .def_readwrite("c3", &MagneticConstants::c3)
        .def_readwrite("c4", &MagneticConstants::c4)
        .def_readwrite("c5", &MagneticConstants::c5)
        .def_readwrite("c6", &MagneticConstants::c6)
        .def_readwrite("sigma", &MagneticConstants::sigma)
        .def_static("from_boundary", &MagneticConstants::from_boundary, py::arg("params"),
                    py::arg("hbar"), py::arg("kx"), py::arg("ky"), py::arg("kz"));

    py::class_<MagneticPrincipalFunction>(m, "MagneticPrincipalFunction")
        .def("__call__", &MagneticPrincipalFunction::operator(), py::arg("x"), py::arg("y"),
             py::arg("z"), py::arg("t"));

    m.def("magnetic_principal_function", &magnetic_principal_function, py::arg("params"),
          py::arg("constants"), py::arg("hbar"),
          py::arg("bracket") = MagneticBracket::as_printed);
    m.def("magnetic_qhje_residual", &magnetic_qhje_residual, py::arg("principal_function"),
          py::arg("x"), py::arg("y"), py::arg("z"), py::arg("t"));

    py::class_<WaveFunction>(m, "WaveFunction")
        .def(py::init<>())
        .def_readwrite("x_min", &WaveFunction::x_min)
        .def_readwrite("dx", &WaveFunction::dx)
        .def_readwrite("psi", &WaveFunction::psi)
        .def("x", &WaveFunction::x)
        .def("norm", &WaveFunction::norm)
        .def("norm_sq", &WaveFunction::norm_sq)
        .def("__len__", &WaveFunction::n);

    m.def("gaussian_packet", &gaussian_packet, py::arg("x_min"), py::arg("dx"), py::arg("n"),
          py::arg("x0"), py::arg("p0"), py::arg("w"), py::arg("hbar"));

    py::class_<KernelStructure>(m, "KernelStructure")
        .def_readonly("prefactor", &KernelStructure::prefactor)
        .def_readonly("a", &KernelStructure::a)
        .def_readonly("b", &KernelStructure::b)
        .def_readonly("c", &KernelStructure::c)
        .def_readonly("lx", &KernelStructure::lx)
        .def_readonly("lxt", &KernelStructure::lxt)
        .def_readonly("p0", &KernelStructure::p0);

    py::class_<GaussianKernel>(m, "GaussianKernel")
        .def("__call__", &GaussianKernel::operator(), py::arg("x"), py::arg("t"),
             py::arg("x_tilde"))
        .def("structure", &GaussianKernel::structure, py::arg("t"))
        .def_property_readonly("hbar", &GaussianKernel::hbar)
        .def_property_readonly("convention", &GaussianKernel::convention);

    m.def("kernel_fourier", &kernel_fourier, py::arg("scenario"), py::arg("hbar"),
          py::arg("convention") = ShiftConvention::initial_time);
    m.def("kernel_delta", &kernel_delta, py::arg("scenario"), py::arg("hbar"),
          py::arg("convention") = ShiftConvention::initial_time);
    m.def("kernel_delta_constants", &kernel_delta_constants, py::arg("scenario"),
          py::arg("hbar"), py::arg("x_tilde"), py::arg("t") = 0.0,
          py::arg("convention") = ShiftConvention::initial_time);

    py::class_<MagneticKernel>(m, "MagneticKernel")
        .def("__call__", &MagneticKernel::operator(), py::arg("x"), py::arg("y"),
             py::arg("z"), py::arg("t"), py::arg("xt"), py::arg("yt"), py::arg("zt"))
        .def("xy_factor", &MagneticKernel::xy_factor)
        .def("free_z_factor", &MagneticKernel::free_z_factor)
        .def("cross_phase", &MagneticKernel::cross_phase);

    m.def("kernel_magnetic", &kernel_magnetic, py::arg("params"), py::arg("hbar"));

    m.def(
        "propagate",
        [](const GaussianKernel& K, const WaveFunction& psi0, double t) {
            return propagate(K, psi0, t);
        },
        py::arg("kernel"), py::arg("psi0"), py::arg("t"));
    m.def(
        "delta_limit_error",
        [](const GaussianKernel& K, const WaveFunction& g, double t) {
            return delta_limit_error(K, g, t);
        },
        py::arg("kernel"), py::arg("g"), py::arg("t"));

    py::class_<KernelTable>(m, "KernelTable")
        .def_readonly("x", &KernelTable::x)
        .def_readonly("xt", &KernelTable::xt)
        .def_readonly("values", &KernelTable::values)
        .def("at", &KernelTable::at);

    py::class_<ComposeGrid>(m, "ComposeGrid")
        .def(py::init<>())
        .def_readwrite("x", &ComposeGrid::x)
        .def_readwrite("xt", &ComposeGrid::xt)
        .def_readwrite("y_half_width", &ComposeGrid::y_half_width)
        .def_readwrite("dy", &ComposeGrid::dy)
        .def_readwrite("taper_fraction", &ComposeGrid::taper_fraction);

    m.def(
        "compose",
        [](const GaussianKernel& K, double t1, double t2, const ComposeGrid& grid) {
            return compose(K, t1, t2, grid);
        },
        py::arg("kernel"), py::arg("t1"), py::arg("t2"), py::arg("grid"));

    py::class_<ClassicalTrajectory>(m, "ClassicalTrajectory")
        .def_readonly("grid", &ClassicalTrajectory::grid)
        .def_readonly("x", &ClassicalTrajectory::x)
        .def_readonly("source", &ClassicalTrajectory::source);

    m.def(
        "classical_trajectory",
        [](const Scenario& s, const ConstantSet& c, int sign, double t) {
            return classical_trajectory(s, c, sign, t);
        },
        py::arg("scenario"), py::arg("constants"), py::arg("sign"), py::arg("t"));
    m.def("newton_oracle", &newton_oracle, py::arg("scenario"), py::arg("x0"), py::arg("v0"),
          py::arg("grid"), py::arg("local_tol") = 1e-10);

    py::class_<InitialFit>(m, "InitialFit")
        .def_readonly("constants", &InitialFit::constants)
        .def_readonly("sign", &InitialFit::sign)
        .def_readonly("degenerate", &InitialFit::degenerate);

    m.def("constants_from_initial", &constants_from_initial, py::arg("scenario"),
          py::arg("x0"), py::arg("v0"));

    py::class_<GridEvolution>(m, "GridEvolution")
        .def(py::init<>())
        .def_readwrite("x_min", &GridEvolution::x_min)
        .def_readwrite("dx", &GridEvolution::dx)
        .def_readwrite("n", &GridEvolution::n)
        .def_readwrite("dt", &GridEvolution::dt)
        .def_readwrite("hbar", &GridEvolution::hbar)
        .def_readonly("method", &GridEvolution::method);

    m.def("grid_evolution_for", &grid_evolution_for, py::arg("scenario"), py::arg("x_min"),
          py::arg("dx"), py::arg("n"), py::arg("dt"),
          py::arg("alt_momentum_coupling") = false);
    m.def("evolve_grid", &evolve_grid, py::arg("grid_evolution"), py::arg("psi0"),
          py::arg("t_final"));
    m.def("expectation_x", &expectation_x);
    m.def("expectation_x2", &expectation_x2);

    py::class_<KernelOracleResult>(m, "KernelOracleResult")
        .def_readonly("mod_err", &KernelOracleResult::mod_err)
        .def_readonly("phase_err", &KernelOracleResult::phase_err);

    m.def("kernel_vs_oracle", &kernel_vs_oracle, py::arg("scenario"), py::arg("kernel"),
          py::arg("psi0"), py::arg("t"), py::arg("dt") = 2.5e-4);

    py::class_<Vec3>(m, "Vec3")
        .def_readonly("x", &Vec3::x)
        .def_readonly("y", &Vec3::y)
        .def_readonly("z", &Vec3::z)
        .def("norm", &Vec3::norm);

    m.def("rotating_frame_field", &rotating_frame_field, py::arg("params"));

    py::class_<Spinor>(m, "Spinor")
        .def(py::init<>())
        .def_readwrite("up", &Spinor::up)
        .def_readwrite("down", &Spinor::down)
        .def("norm", &Spinor::norm);

    m.def("spin_half_evolution", &spin_half_evolution, py::arg("params"), py::arg("s0"),
          py::arg("t"));
    m.def("spin_flip_probability", &spin_flip_probability, py::arg("params"), py::arg("t"));

    py::class_<PinneyFamily>(m, "PinneyFamily")
        .def_readonly("amplitude", &PinneyFamily::amplitude)
        .def_readonly("eta", &PinneyFamily::eta)
        .def_readonly("delta", &PinneyFamily::delta)
        .def_readonly("omega0", &PinneyFamily::omega0)
        .def("v", &PinneyFamily::v)
        .def("vdot", &PinneyFamily::vdot)
        .def("s", &PinneyFamily::s)
        .def("sdot", &PinneyFamily::sdot)
        .def("mu", &PinneyFamily::mu)
        .def("alphadot", &PinneyFamily::alphadot)
        .def("effective_freq_sq", &PinneyFamily::effective_freq_sq);

    m.def("pinney_particular", &pinney_particular, py::arg("amplitude"), py::arg("eta"),
          py::arg("delta"), py::arg("omega0"));

    py::class_<PinneySolution>(m, "PinneySolution")
        .def_readonly("v", &PinneySolution::v)
        .def_readonly("vdot", &PinneySolution::vdot);

    m.def("pinney_solve", &pinney_solve, py::arg("omega0"), py::arg("alphadot"),
          py::arg("v0"), py::arg("vdot0"), py::arg("grid"), py::arg("local_tol") = 1e-10);
    m.def("pinney_invariant", &pinney_invariant, py::arg("omega0"), py::arg("kappa"),
          py::arg("v"), py::arg("vdot"));

    py::class_<ScaleFamily>(m, "ScaleFamily");
    m.def("as_scale_family", &as_scale_family, py::arg("family"), py::arg("mass") = 1.0);

    py::class_<FrameReduction::Identification>(m, "FrameIdentification")
        .def_readonly("mass_residual", &FrameReduction::Identification::mass_residual)
        .def_readonly("freq_residual", &FrameReduction::Identification::freq_residual);

    py::class_<FrameReduction>(m, "FrameReduction")
        .def("alphadot", &FrameReduction::alphadot, py::arg("tau"))
        .def("phase", &FrameReduction::phase, py::arg("z_tilde"), py::arg("T"),
             py::arg("family"))
        .def("phase_offset", &FrameReduction::phase_offset, py::arg("T"), py::arg("family"))
        .def("big_omega_sq", &FrameReduction::big_omega_sq, py::arg("T"), py::arg("family"))
        .def("identification_residual", &FrameReduction::identification_residual,
             py::arg("T"), py::arg("family"), py::arg("omega0"))
        .def("verify_identification", &FrameReduction::verify_identification,
             py::arg("family"), py::arg("omega0"), py::arg("T_samples"),
             py::arg("tol") = 1e-8);

    m.def("frame_reduce", &frame_reduce, py::arg("params"));
}
