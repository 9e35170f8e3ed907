// Python bindings for the core operations: spectral grid utilities, the
// split-step solver, conserved integrals, interaction actions, and the
// config-driven scenario runner.
#include "morawetz/estimate.hpp"
#include "morawetz/evolve.hpp"
#include "morawetz/grid.hpp"
#include "morawetz/harness.hpp"
#include "morawetz/interaction.hpp"
#include "morawetz/local_laws.hpp"
#include "morawetz/morawetz_radial.hpp"
#include "morawetz/vector_field.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <stdexcept>

namespace py = pybind11;
using namespace morawetz;

namespace {

using Array = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexField field_from_array(const Array& a, double length) {
    py::buffer_info info = a.request();
    int dim = static_cast<int>(info.ndim);
    if (dim < 1 || dim > 3) throw std::invalid_argument("array must be 1-, 2- or 3-dimensional");
    int n = static_cast<int>(info.shape[0]);
    for (int d = 1; d < dim; ++d)
        if (info.shape[d] != n) throw std::invalid_argument("array must be square/cubic");
    SpectralGrid g = make_grid(dim, n, length);
    ComplexField f = make_field(g);
    const cplx* src = static_cast<const cplx*>(info.ptr);
    std::copy(src, src + g.size(), f.values.begin());
    return f;
}

Array array_from_field(const ComplexField& f) {
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(f.grid.dim), f.grid.n);
    Array out(shape);
    std::copy(f.values.begin(), f.values.end(), static_cast<cplx*>(out.request().ptr));
    return out;
}

py::dict report_to_dict(const EstimateReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["constant"] = r.constant_used;
    d["ratio"] = r.ratio;
    d["verdict"] = r.verdict == EstimateReport::Verdict::pass   ? "pass"
                   : r.verdict == EstimateReport::Verdict::fail ? "fail"
                                                                : "info";
    d["line"] = format_report_line(r);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "pseudospectral defocusing-NLS simulator with Morawetz-type "
              "monotonicity verification";

    m.def(
        "grid_coordinates",
        [](int n, double length) {
            SpectralGrid g = make_grid(1, n, length);
            py::array_t<double> out(n);
            double* p = static_cast<double*>(out.request().ptr);
            for (int i = 0; i < n; ++i) p[i] = g.coord(i);
            return out;
        },
        py::arg("n"), py::arg("length"), "1D coordinate lattice of the periodic box");

    m.def(
        "spectral_derivative",
        [](const Array& u, double length, int axis, int order) {
            return array_from_field(spectral_derivative(field_from_array(u, length), axis, order));
        },
        py::arg("u"), py::arg("length"), py::arg("axis"), py::arg("order") = 1);

    m.def(
        "l2_norm",
        [](const Array& u, double length) { return l2_norm(field_from_array(u, length)); },
        py::arg("u"), py::arg("length"));

    m.def(
        "sobolev_seminorm",
        [](const Array& u, double length, double s) {
            return sobolev_seminorm(field_from_array(u, length), s);
        },
        py::arg("u"), py::arg("length"), py::arg("s"));

    m.def(
        "strang_step",
        [](const Array& u, double length, double dt, double p, double lambda) {
            return array_from_field(strang_step(field_from_array(u, length), dt, p, lambda));
        },
        py::arg("u"), py::arg("length"), py::arg("dt"), py::arg("p") = 3.0,
        py::arg("lambda_") = 1.0);

    m.def(
        "evolve",
        [](const Array& u, double length, double dt, double t_final, double p, double lambda) {
            SolverConfig cfg;
            cfg.dt = dt;
            cfg.t_final = t_final;
            cfg.p = p;
            cfg.lambda = lambda;
            cfg.observer_stride = 1;
            DiagnosticTrace tr = evolve(field_from_array(u, length), cfg, {});
            if (tr.aborted) throw std::runtime_error("evolution aborted: state not finite");
            return array_from_field(tr.final_state);
        },
        py::arg("u"), py::arg("length"), py::arg("dt"), py::arg("t_final"), py::arg("p") = 3.0,
        py::arg("lambda_") = 1.0);

    m.def(
        "conserved_integrals",
        [](const Array& u, double length, double p, double lambda) {
            ConservedIntegrals ci = conserved_integrals(field_from_array(u, length), p, lambda);
            py::dict d;
            d["mass"] = ci.mass;
            d["energy"] = ci.energy;
            d["momentum"] = py::make_tuple(ci.momentum[0], ci.momentum[1], ci.momentum[2]);
            return d;
        },
        py::arg("u"), py::arg("length"), py::arg("p") = 3.0, py::arg("lambda_") = 1.0);

    m.def(
        "interaction_action_3d",
        [](const Array& u, double length, double epsilon) {
            return interaction_action_3d(field_from_array(u, length), epsilon);
        },
        py::arg("u"), py::arg("length"), py::arg("epsilon"));

    m.def(
        "interaction_action_2d",
        [](const Array& u, double length, double epsilon, double angle, double px, double py_) {
            return interaction_action_2d(field_from_array(u, length),
                                         Line2D{{px, py_}, angle}, epsilon);
        },
        py::arg("u"), py::arg("length"), py::arg("epsilon"), py::arg("line_angle") = 0.0,
        py::arg("line_x") = 0.0, py::arg("line_y") = 0.0);

    m.def(
        "interaction_action_1d",
        [](const Array& u, double length, double epsilon) {
            return interaction_action_1d(field_from_array(u, length), epsilon);
        },
        py::arg("u"), py::arg("length"), py::arg("epsilon"));

    m.def(
        "angular_average_weighted_l4",
        [](const Array& u, double length, double cx, double cy, int n_theta, double epsilon) {
            return angular_average_weighted_l4(field_from_array(u, length), Point{cx, cy, 0.0},
                                               n_theta, epsilon);
        },
        py::arg("u"), py::arg("length"), py::arg("center_x") = 0.0, py::arg("center_y") = 0.0,
        py::arg("n_theta") = 32, py::arg("epsilon") = 0.0);

    m.def(
        "weighted_l4_direct_quadrature",
        [](const Array& u, double length, double cx, double cy) {
            return weighted_l4_direct_quadrature(field_from_array(u, length),
                                                 Point{cx, cy, 0.0});
        },
        py::arg("u"), py::arg("length"), py::arg("center_x") = 0.0, py::arg("center_y") = 0.0);

    m.def(
        "verify_field_identities",
        [](const std::string& kind, double epsilon, int n_points, unsigned seed) {
            VectorFieldSpec spec;
            if (kind == "radial") spec = radial_weight(3, epsilon);
            else if (kind == "pair3d") spec = pair_weight_3d(epsilon);
            else if (kind == "line_diag2d")
                spec = line_diagonal_weight_2d(Line2D{{0.0, 0.0}, 0.0}, epsilon);
            else if (kind == "diag1d") spec = diag_1d_weight(epsilon);
            else throw std::invalid_argument("unknown weight kind: " + kind);
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> uni(-5.0, 5.0);
            std::vector<std::vector<double>> pts(
                static_cast<std::size_t>(n_points), std::vector<double>(spec.ambient_dim));
            for (auto& p : pts)
                for (auto& x : p) x = uni(rng);
            FieldIdentityReport rep = verify_field_identities(spec, pts);
            py::dict d;
            d["max_symmetry_residual"] = rep.max_symmetry_residual;
            d["max_trace_div_residual"] = rep.max_trace_div_residual;
            d["max_gradient_fd_residual"] = rep.max_gradient_fd_residual;
            d["max_jacobian_fd_residual"] = rep.max_jacobian_fd_residual;
            d["min_eigenvalue"] = rep.min_eigenvalue;
            d["max_x_norm"] = rep.max_x_norm;
            d["ok"] = rep.ok();
            return d;
        },
        py::arg("kind"), py::arg("epsilon") = 1e-2, py::arg("n_points") = 200,
        py::arg("seed") = 42);

    m.def(
        "run_config",
        [](const std::string& config_text, const std::vector<std::string>& overrides) {
            ConfigMap cfg = parse_config_text(config_text);
            apply_overrides(cfg, overrides);
            Scenario s = scenario_from_config(cfg);
            RunArtifacts art = run_scenario(s);
            py::dict out;
            out["directory"] = art.directory;
            out["aborted"] = art.aborted;
            out["failed"] = art.any_check_failed();
            py::list reports;
            for (const auto& r : art.reports) reports.append(report_to_dict(r));
            out["reports"] = reports;
            py::dict channels;
            channels["t"] = art.trace.times;
            for (const auto& name : art.channel_order) channels[name.c_str()] = art.trace.channel(name);
            out["channels"] = channels;
            return out;
        },
        py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{},
        "Run one scenario from flat key = value config text; returns reports and trace channels");
}
