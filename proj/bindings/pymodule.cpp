#include "adaptps/basis.hpp"
#include "adaptps/glam.hpp"
#include "adaptps/model.hpp"
#include "adaptps/penalty.hpp"
#include "adaptps/simlab.hpp"
#include "adaptps/sop.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace adaptps;

namespace {

AdaptivePenaltySpec make_penalty_spec(const std::vector<BasisSpec>& dims,
                                      const std::vector<std::string>& modes,
                                      const std::vector<std::vector<int>>& p,
                                      int psi_degree) {
    AdaptivePenaltySpec spec;
    spec.dims = dims;
    for (const std::string& m : modes) spec.modes.push_back(parse_adaptivity_mode(m));
    for (const auto& row : p) {
        std::array<int, 3> arr = {1, 1, 1};
        for (size_t i = 0; i < row.size() && i < 3; ++i) arr[i] = row[i];
        if (row.size() == 1) arr.fill(row[0]);
        spec.p.push_back(arr);
    }
    spec.psi_degree = psi_degree;
    spec.validate();
    return spec;
}

ModelSpec make_model_spec(const std::vector<BasisSpec>& dims,
                          const std::vector<std::string>& modes,
                          const std::vector<std::vector<int>>& p, int psi_degree,
                          const std::string& family) {
    ModelSpec spec;
    spec.penalty = make_penalty_spec(dims, modes, p, psi_degree);
    spec.family = Family{parse_family(family)};
    return spec;
}

py::dict fit_result_dict(const ModelFit& fit) {
    py::dict out;
    out["theta"] = fit.result.theta;
    out["beta"] = fit.result.beta;
    out["alpha"] = fit.result.alpha;
    out["sigma2"] = fit.result.sigma2;
    out["phi"] = fit.result.phi;
    out["ed_per_component"] = fit.result.ed_per_component;
    out["ed_total"] = fit.result.ed_total;
    out["deviance"] = fit.result.deviance;
    out["caic"] = fit.result.caic;
    out["converged"] = fit.result.converged;
    out["outer_iterations"] = fit.result.outer_iterations;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "anisotropic locally adaptive P-spline smoothing";

    py::class_<BasisSpec>(m, "BasisSpec")
        .def(py::init([](double x_min, double x_max, int d, int degree, int q) {
                 BasisSpec spec{x_min, x_max, d, degree, q};
                 spec.validate();
                 return spec;
             }),
             py::arg("x_min"), py::arg("x_max"), py::arg("d"), py::arg("degree") = 3,
             py::arg("q") = 2)
        .def_readonly("x_min", &BasisSpec::x_min)
        .def_readonly("x_max", &BasisSpec::x_max)
        .def_readonly("d", &BasisSpec::d)
        .def_readonly("degree", &BasisSpec::degree)
        .def_readonly("q", &BasisSpec::q);

    m.def("make_knots", &make_knots, py::arg("spec"));
    m.def("eval_basis", &eval_basis, py::arg("x"), py::arg("spec"));
    m.def("diff_matrix", &diff_matrix, py::arg("d"), py::arg("q"));
    m.def("box_product", &box_product, py::arg("a"), py::arg("b"));
    m.def("kron", &adaptps::kron, py::arg("a"), py::arg("b"));
    m.def("psi_matrix", &psi_matrix, py::arg("n_rows"), py::arg("p"), py::arg("psi_degree") = 3);

    m.def("standard_penalty_1d", &standard_penalty_1d, py::arg("lam"), py::arg("spec"));
    m.def(
        "standard_penalty_2d",
        [](double l1, double l2, const std::vector<BasisSpec>& specs) {
            return standard_penalty_2d(l1, l2, specs);
        },
        py::arg("lam1"), py::arg("lam2"), py::arg("specs"));
    m.def(
        "standard_penalty_3d",
        [](double l1, double l2, double l3, const std::vector<BasisSpec>& specs) {
            return standard_penalty_3d(l1, l2, l3, specs);
        },
        py::arg("lam1"), py::arg("lam2"), py::arg("lam3"), py::arg("specs"));

    m.def(
        "adaptive_components",
        [](const std::vector<BasisSpec>& dims, const std::vector<std::string>& modes,
           const std::vector<std::vector<int>>& p, int psi_degree) {
            py::list out;
            for (const PenaltyComponent& c :
                 adaptive_components(make_penalty_spec(dims, modes, p, psi_degree))) {
                py::dict entry;
                entry["matrix"] = c.matrix;
                entry["dimension"] = c.dimension_tag;
                entry["index"] = c.index;
                out.append(entry);
            }
            return out;
        },
        py::arg("dims"), py::arg("modes"), py::arg("p"), py::arg("psi_degree") = 3);

    m.def("adaptive_penalty_direct_2d", &adaptive_penalty_direct_2d, py::arg("lam"),
          py::arg("lam_tilde"), py::arg("specs"));

    m.def(
        "rh_transform",
        [](const Matrix& M, const Matrix& values, const std::vector<Index>& dims) {
            const GridArray out =
                rh_transform(M, GridArray::from_vec(values.reshaped(), dims));
            return py::make_tuple(Vector(out.values), out.dims);
        },
        py::arg("m"), py::arg("values"), py::arg("dims"));

    py::class_<ModelFit>(m, "ModelFit")
        .def_property_readonly("result", &fit_result_dict)
        .def_property_readonly("domain", [](const ModelFit& f) { return f.domain; })
        .def("predict",
             [](const ModelFit& fit, const Matrix& x, double level) {
                 const PredictionTable table = predict(fit, x, level);
                 py::dict out;
                 out["eta_hat"] = table.eta_hat;
                 out["mu_hat"] = table.mu_hat;
                 out["se_eta"] = table.se_eta;
                 out["lower"] = table.lower;
                 out["upper"] = table.upper;
                 return out;
             },
             py::arg("x"), py::arg("level") = 0.95);

    m.def(
        "fit_model",
        [](const std::vector<BasisSpec>& dims, const std::vector<std::string>& modes,
           const std::vector<std::vector<int>>& p, int psi_degree, const std::string& family,
           const Matrix& x, const Vector& y, std::optional<Vector> offset, int max_outer_iter,
           double rel_tol) {
            GridDataset data;
            data.x = x;
            data.y = y;
            if (offset) data.offset = *offset;
            detect_grid(data);
            FitControl control;
            control.max_outer_iter = max_outer_iter;
            control.rel_tol = rel_tol;
            return fit_model(make_model_spec(dims, modes, p, psi_degree, family), data,
                             control);
        },
        py::arg("dims"), py::arg("modes"), py::arg("p"), py::arg("psi_degree"),
        py::arg("family"), py::arg("x"), py::arg("y"), py::arg("offset") = std::nullopt,
        py::arg("max_outer_iter") = 200, py::arg("rel_tol") = 1e-6,
        "Fit the adaptive P-spline model; uses the array-structured path when "
        "the rows form a complete grid.");

    m.def(
        "true_surface",
        [](const std::string& id, double x1, double x2) {
            return true_surface(parse_scenario(id), x1, x2);
        },
        py::arg("scenario"), py::arg("x1"), py::arg("x2"));

    m.def(
        "gen_dataset",
        [](const std::string& id, int n, const std::string& family, double s,
           std::uint64_t seed) {
            Scenario sc;
            sc.id = parse_scenario(id);
            sc.n = n;
            sc.family = parse_family(family);
            sc.s = s;
            sc.seed = seed;
            const SimDataset ds = gen_dataset(sc);
            py::dict out;
            out["x"] = ds.data.x;
            out["y"] = ds.data.y;
            out["eta_true"] = ds.eta_true;
            if (ds.p_true.size()) out["p_true"] = ds.p_true;
            out["s_used"] = ds.s_used;
            return out;
        },
        py::arg("scenario"), py::arg("n"), py::arg("family") = "gaussian", py::arg("s") = 0.0,
        py::arg("seed") = 1);
}
