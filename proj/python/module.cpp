// Python bindings for the core operations: grid construction, the coupled
// quasi-stationary solve, the free-boundary evolution loop, and the
// verification drivers. Fields cross the boundary as numpy copies indexed
// [i, j] like the C++ accessors.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "filmflow/config.hpp"
#include "filmflow/coupled.hpp"
#include "filmflow/height.hpp"
#include "filmflow/mms.hpp"
#include "filmflow/nutrient.hpp"
#include "filmflow/params.hpp"
#include "filmflow/transport.hpp"
#include "filmflow/verify.hpp"

namespace py = pybind11;
using namespace filmflow;

namespace {

py::array_t<double> field_to_numpy(const ScalarField& f) {
    const Grid& g = f.grid();
    py::array_t<double> out({g.nx() + 1, g.nz() + 1});
    auto r = out.mutable_unchecked<2>();
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.nz(); ++j) r(i, j) = f.at(i, j);
    return out;
}

ScalarField numpy_to_field(const Grid& g, const py::array_t<double>& a) {
    auto r = a.unchecked<2>();
    if (r.shape(0) != g.nx() + 1 || r.shape(1) != g.nz() + 1) {
        throw std::invalid_argument("field array must have shape (nx+1, nz+1)");
    }
    ScalarField f(g);
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.nz(); ++j) f.at(i, j) = r(i, j);
    return f;
}

LateralMode lateral_from_string(const std::string& s) {
    if (s == "periodic") return LateralMode::Periodic;
    if (s == "traction") return LateralMode::Traction;
    throw std::invalid_argument("lateral mode must be 'periodic' or 'traction'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-phase thin-film quasi-stationary solver";

    py::class_<Grid>(m, "Grid")
        .def_property_readonly("nx", &Grid::nx)
        .def_property_readonly("nz", &Grid::nz)
        .def_property_readonly("length", &Grid::length)
        .def_property_readonly("n_nodes", &Grid::n_nodes)
        .def("max_height", &Grid::max_height)
        .def("total_area", &Grid::total_area)
        .def("x", [](const Grid& g, int i) { return g.x(i); })
        .def("z", [](const Grid& g, int i, int j) { return g.z(i, j); });

    m.def(
        "build_grid",
        [](double L, const std::vector<double>& h, int nx, int nz,
           const std::string& lateral, double h_min) {
            return Grid::build(L, h, nx, nz, lateral_from_string(lateral), h_min);
        },
        py::arg("L"), py::arg("h_profile"), py::arg("nx"), py::arg("nz"),
        py::arg("lateral") = "periodic", py::arg("h_min") = -1.0);

    py::enum_<TractionKind>(m, "TractionKind")
        .value("constant", TractionKind::ConstantVector)
        .value("equilibrium", TractionKind::EquilibriumNormal);

    py::class_<TractionSpec>(m, "TractionSpec")
        .def(py::init<>())
        .def_readwrite("kind", &TractionSpec::kind)
        .def_property(
            "value",
            [](const TractionSpec& t) { return py::make_tuple(t.value.x, t.value.z); },
            [](TractionSpec& t, py::tuple v) {
                t.value = {v[0].cast<double>(), v[1].cast<double>()};
            })
        .def_readwrite("normal_offset", &TractionSpec::normal_offset);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("k_b", &ModelParams::k_b)
        .def_readwrite("K_b", &ModelParams::K_b)
        .def_readwrite("k_c", &ModelParams::k_c)
        .def_readwrite("K_c", &ModelParams::K_c)
        .def_readwrite("d", &ModelParams::d)
        .def_readwrite("mu_b", &ModelParams::mu_b)
        .def_readwrite("Pi", &ModelParams::Pi)
        .def_readwrite("xi_inf", &ModelParams::xi_inf)
        .def_readwrite("phi_inf", &ModelParams::phi_inf)
        .def_readwrite("g_inf", &ModelParams::g_inf)
        .def_readwrite("c0", &ModelParams::c0)
        .def_readwrite("p_b0", &ModelParams::p_b0)
        .def_readwrite("traction_top", &ModelParams::traction_top)
        .def_readwrite("traction_left", &ModelParams::traction_left)
        .def_readwrite("traction_right", &ModelParams::traction_right)
        .def("validate", &ModelParams::validate);

    py::enum_<GrowthMode>(m, "GrowthMode")
        .value("frozen_g", GrowthMode::FrozenG)
        .value("monod_g", GrowthMode::MonodG);

    py::class_<CoupledConfig>(m, "CoupledConfig")
        .def(py::init<>())
        .def_readwrite("mode", &CoupledConfig::mode)
        .def_readwrite("outer_tol", &CoupledConfig::outer_tol)
        .def_readwrite("outer_max_iter", &CoupledConfig::outer_max_iter)
        .def_readwrite("omega", &CoupledConfig::omega)
        .def_readwrite("initial_phi_inf", &CoupledConfig::initial_phi_inf)
        .def_readwrite("lin_tol", &CoupledConfig::lin_tol)
        .def_readwrite("picard_tol", &CoupledConfig::picard_tol)
        .def_readwrite("picard_max_iter", &CoupledConfig::picard_max_iter)
        .def_readwrite("sign_tol", &CoupledConfig::sign_tol)
        .def_readwrite("sign_abort_factor", &CoupledConfig::sign_abort_factor);

    py::class_<SolutionState>(m, "SolutionState")
        .def_readonly("converged", &SolutionState::converged)
        .def_property_readonly("iterations",
                               [](const SolutionState& s) { return s.history.size(); })
        .def_property_readonly("phi_l",
                               [](const SolutionState& s) { return field_to_numpy(s.phi_l); })
        .def_property_readonly("phi_b",
                               [](const SolutionState& s) { return field_to_numpy(s.phi_b); })
        .def_property_readonly("p", [](const SolutionState& s) { return field_to_numpy(s.p); })
        .def_property_readonly("c", [](const SolutionState& s) { return field_to_numpy(s.c); })
        .def_property_readonly("vbx",
                               [](const SolutionState& s) { return field_to_numpy(s.v_b.x); })
        .def_property_readonly("vbz",
                               [](const SolutionState& s) { return field_to_numpy(s.v_b.z); })
        .def_property_readonly("vlx",
                               [](const SolutionState& s) { return field_to_numpy(s.v_l.x); })
        .def_property_readonly("vlz",
                               [](const SolutionState& s) { return field_to_numpy(s.v_l.z); })
        .def_property_readonly("dv_history",
                               [](const SolutionState& s) {
                                   std::vector<double> out;
                                   for (const auto& r : s.history) out.push_back(r.dv_l);
                                   return out;
                               })
        .def_property_readonly("incompressibility",
                               [](const SolutionState& s) {
                                   return s.history.empty()
                                              ? 0.0
                                              : s.history.back().incompressibility;
                               })
        .def_readonly("error", &SolutionState::error);

    m.def("run_fixed_point", &run_fixed_point, py::arg("grid"), py::arg("params"),
          py::arg("config") = CoupledConfig{},
          py::keep_alive<0, 1>());  // the state references the grid

    m.def("monod", &monod, py::arg("c"), py::arg("K"));

    m.def(
        "lower_bound_certificate",
        [](double d, double k_c, double K_c, double c0, double M, double c_max) {
            LowerBoundCertificate cert = lower_bound_certificate(d, k_c, K_c, c0, M, c_max);
            return py::make_tuple(cert.bound, cert.applicable);
        },
        py::arg("d"), py::arg("k_c"), py::arg("K_c"), py::arg("c0"), py::arg("M"),
        py::arg("c_max"));

    m.def(
        "solve_transport",
        [](const Grid& g, const py::array_t<double>& vx, const py::array_t<double>& vz,
           const py::array_t<double>& a, double epsilon, double tol) {
            TransportProblem p;
            p.grid = &g;
            p.v_l = VectorField(g);
            p.v_l.x = numpy_to_field(g, vx);
            p.v_l.z = numpy_to_field(g, vz);
            p.a = numpy_to_field(g, a);
            p.epsilon = epsilon;
            TransportResult r = solve_phi(p, tol);
            return py::make_tuple(field_to_numpy(r.phi_l), r.bounds_ok);
        },
        py::arg("grid"), py::arg("vx"), py::arg("vz"), py::arg("a"),
        py::arg("epsilon") = 0.0, py::arg("tol") = 1e-12);

    m.def(
        "solve_nutrient",
        [](const Grid& g, const py::array_t<double>& vx, const py::array_t<double>& vz,
           const py::array_t<double>& phi_b, double d, double k_c, double K_c, double c0) {
            NutrientProblem p;
            p.grid = &g;
            p.v_l = VectorField(g);
            p.v_l.x = numpy_to_field(g, vx);
            p.v_l.z = numpy_to_field(g, vz);
            p.phi_b = numpy_to_field(g, phi_b);
            p.d = d;
            p.k_c = k_c;
            p.K_c = K_c;
            p.c0 = c0;
            NutrientResult r = solve_nutrient(p);
            return py::make_tuple(field_to_numpy(r.c), r.picard_iterations);
        },
        py::arg("grid"), py::arg("vx"), py::arg("vz"), py::arg("phi_b"), py::arg("d") = 1.0,
        py::arg("k_c") = 1.0, py::arg("K_c") = 1.0, py::arg("c0") = 1.0);

    m.def(
        "evolve_heights",
        [](const ModelParams& params, const CoupledConfig& ccfg, double dt, double t_final,
           double L, int nx, int nz, const std::string& lateral,
           const std::vector<double>& h0) {
            EvolutionConfig cfg;
            cfg.dt = dt;
            cfg.t_final = t_final;
            EvolveResult res =
                evolve(params, ccfg, cfg, L, nx, nz, lateral_from_string(lateral), h0);
            if (!res.completed) throw std::runtime_error(res.error);
            std::vector<double> times;
            py::array_t<double> heights(
                {static_cast<py::ssize_t>(res.series.size()),
                 static_cast<py::ssize_t>(nx + 1)});
            auto r = heights.mutable_unchecked<2>();
            for (size_t k = 0; k < res.series.size(); ++k) {
                times.push_back(res.series[k].time);
                for (int i = 0; i <= nx; ++i) r(k, i) = res.series[k].h[i];
            }
            return py::make_tuple(times, heights);
        },
        py::arg("params"), py::arg("config"), py::arg("dt"), py::arg("t_final"),
        py::arg("L"), py::arg("nx"), py::arg("nz"), py::arg("lateral"), py::arg("h0"));

    m.def("run_mms", [](int levels) {
        MmsReport rep = run_mms(levels);
        py::dict out;
        for (const MmsStudy& s : rep.studies) {
            out[s.name.c_str()] =
                py::make_tuple(s.observed_order(), s.floor, s.passed);
        }
        return out;
    }, py::arg("levels") = 3);

    m.def("run_verify", [](std::uint64_t seed, int samples) {
        VerifyReport rep = run_verify(seed, samples, false);
        py::dict out;
        for (const PropertyResult& p : rep.properties) out[p.name.c_str()] = p.passed;
        return out;
    }, py::arg("seed") = 42, py::arg("samples") = 10);
}
