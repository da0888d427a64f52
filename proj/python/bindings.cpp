#include "csrkit/data.hpp"
#include "csrkit/errors.hpp"
#include "csrkit/evaluation.hpp"
#include "csrkit/io.hpp"
#include "csrkit/trainers.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace csrkit;

namespace {

Dataset to_dataset(const std::vector<FeatureVector>& X, const std::vector<int>& y) {
    if (X.size() != y.size()) throw InputError("X and y lengths differ");
    Dataset out;
    out.reserve(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) out.push_back({X[i], label_from_int(y[i])});
    return out;
}

py::tuple from_dataset(const Dataset& data) {
    std::vector<FeatureVector> X;
    std::vector<int> y;
    X.reserve(data.size());
    y.reserve(data.size());
    for (const auto& s : data) {
        X.push_back(s.x);
        y.push_back(to_int(s.y));
    }
    return py::make_tuple(X, y);
}

py::dict report_dict(const CoverageReport& r) {
    py::dict d;
    d["epsilon"] = r.epsilon;
    d["s_eps"] = r.s_eps.value;
    d["n_test"] = r.n_test;
    d["err"] = r.err;
    d["err_minus"] = r.err_minus;
    d["err_plus"] = r.err_plus;
    d["empty_rate"] = r.empty_rate;
    d["double_rate"] = r.double_rate;
    d["single_rate"] = r.single_rate;
    d["single_minus_rate"] = r.single_minus_rate;
    d["single_plus_rate"] = r.single_plus_rate;
    d["csr_error_coverage"] = r.csr_error_coverage;
    d["csr_mass"] = r.csr_mass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Scalable classifiers and conformal safety regions";

    auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    auto training_error = py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", training_error.ptr());
    (void)input_error;

    py::class_<LinearKernel>(m, "LinearKernel").def(py::init<>());
    py::class_<PolynomialKernel>(m, "PolynomialKernel")
        .def(py::init<int, double, double>(), py::arg("degree") = 3, py::arg("scale") = 1.0, py::arg("offset") = 1.0)
        .def_readwrite("degree", &PolynomialKernel::degree)
        .def_readwrite("scale", &PolynomialKernel::scale)
        .def_readwrite("offset", &PolynomialKernel::offset);
    py::class_<GaussianKernel>(m, "GaussianKernel")
        .def(py::init<double>(), py::arg("gamma") = 1.0)
        .def_readwrite("gamma", &GaussianKernel::gamma);

    m.def("kernel_eval", [](const KernelSpec& k, const FeatureVector& u, const FeatureVector& v) {
        return kernel_eval(k, u, v);
    });
    m.def("median_heuristic_gamma", [](const std::vector<FeatureVector>& X) { return median_heuristic_gamma(X); });

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init([](const std::string& kind, const KernelSpec& kernel, double C, double tolerance,
                         std::size_t max_iterations, double learning_rate, const std::string& lr_solver,
                         std::uint64_t seed) {
                 TrainConfig c;
                 c.kind = classifier_kind_from_string(kind);
                 c.kernel = kernel;
                 c.C = C;
                 c.tolerance = tolerance;
                 c.max_iterations = max_iterations;
                 c.learning_rate = learning_rate;
                 c.lr_solver = lr_solver_from_string(lr_solver);
                 c.seed = seed;
                 validate(c);
                 return c;
             }),
             py::arg("kind") = "svm", py::arg("kernel") = KernelSpec(LinearKernel{}), py::arg("C") = 1.0,
             py::arg("tolerance") = 1e-6, py::arg("max_iterations") = 100000, py::arg("learning_rate") = 0.1,
             py::arg("lr_solver") = "newton", py::arg("seed") = 0)
        .def_property_readonly("kind", [](const TrainConfig& c) { return to_string(c.kind); })
        .def_readonly("C", &TrainConfig::C)
        .def_readonly("tolerance", &TrainConfig::tolerance);

    py::class_<ScalableModel>(m, "ScalableModel")
        .def_property_readonly("kind", [](const ScalableModel& s) { return to_string(s.kind()); })
        .def_property_readonly("dimension", &ScalableModel::dimension)
        .def_property_readonly("support_size", &ScalableModel::support_size)
        .def_property_readonly("dual_weights", &ScalableModel::dual_weights)
        .def_property_readonly("bias", &ScalableModel::bias)
        .def_property_readonly("radius_sq", &ScalableModel::radius_sq)
        .def("predictor", [](const ScalableModel& s, const FeatureVector& x, double rho) { return predictor(s, x, rho); })
        .def("rho_bar", [](const ScalableModel& s, const FeatureVector& x) { return rho_bar(s, x); })
        .def("classify", [](const ScalableModel& s, const FeatureVector& x, double rho) { return to_int(classify(s, x, rho)); },
             py::arg("x"), py::arg("rho") = 0.0)
        .def("to_json", [](const ScalableModel& s) { return model_to_json(s).dump(2); })
        .def_static("from_json", [](const std::string& text) {
            try {
                return model_from_json(nlohmann::json::parse(text));
            } catch (const nlohmann::json::parse_error& e) {
                throw InputError(e.what());
            }
        });

    m.def("train", [](const std::vector<FeatureVector>& X, const std::vector<int>& y, const TrainConfig& config) {
        return train(to_dataset(X, y), config);
    });

    py::class_<CalibrationProfile>(m, "CalibrationProfile")
        .def(py::init<std::vector<double>>())
        .def_property_readonly("sorted_scores", &CalibrationProfile::sorted_scores)
        .def("__len__", &CalibrationProfile::size);

    m.def("score", [](const ScalableModel& s, const FeatureVector& x, int y) { return score(s, x, label_from_int(y)); });
    m.def("calibrate", [](const ScalableModel& s, const std::vector<FeatureVector>& X, const std::vector<int>& y) {
        return calibrate(s, to_dataset(X, y));
    });
    m.def("quantile", [](const CalibrationProfile& p, double eps) { return quantile(p, eps).value; });
    m.def("conformal_set", [](const ScalableModel& s, const CalibrationProfile& p, double eps, const FeatureVector& x) {
        const auto set = conformal_set(s, p, eps, x);
        std::vector<int> out;
        if (set.contains(Label::Unsafe)) out.push_back(-1);
        if (set.contains(Label::Safe)) out.push_back(1);
        return out;
    });
    m.def("in_sigma", [](const ScalableModel& s, const CalibrationProfile& p, double eps, const FeatureVector& x) {
        return in_sigma(s, p, eps, x);
    });
    m.def("in_safe_region", [](const ScalableModel& s, const CalibrationProfile& p, double eps, const FeatureVector& x) {
        return in_safe_region(s, p, eps, x);
    });

    m.def("evaluate", [](const ScalableModel& s, const CalibrationProfile& p, double eps, const std::vector<FeatureVector>& X,
                         const std::vector<int>& y) { return report_dict(evaluate(s, p, eps, to_dataset(X, y))); });
    m.def("sweep", [](const ScalableModel& s, const CalibrationProfile& p, const std::vector<double>& grid,
                      const std::vector<FeatureVector>& X, const std::vector<int>& y) {
        py::list out;
        for (const auto& r : sweep(s, p, grid, to_dataset(X, y))) out.append(report_dict(r));
        return out;
    });
    m.def("region_grid", [](const ScalableModel& s, const CalibrationProfile& p, double eps,
                            const std::array<double, 4>& bounds, std::size_t resolution) {
        py::list out;
        for (const auto& c : region_grid(s, p, eps, {bounds[0], bounds[1], bounds[2], bounds[3]}, resolution)) {
            out.append(py::make_tuple(c.x1, c.x2, to_string(c.category), c.in_sigma, c.in_safe_region));
        }
        return out;
    });

    m.def(
        "gen_two_gaussians",
        [](std::size_t n, std::uint64_t seed, double outlier_prob, const FeatureVector& mean_safe,
           const FeatureVector& mean_unsafe, double cov_safe, double cov_unsafe) {
            GaussianSpec spec;
            spec.seed = seed;
            spec.outlier_prob = outlier_prob;
            spec.mean_safe = mean_safe;
            spec.mean_unsafe = mean_unsafe;
            spec.cov_scale_safe = cov_safe;
            spec.cov_scale_unsafe = cov_unsafe;
            return from_dataset(gen_two_gaussians(n, spec));
        },
        py::arg("n"), py::arg("seed"), py::arg("outlier_prob") = 0.0, py::arg("mean_safe") = FeatureVector{-1.0, -1.0},
        py::arg("mean_unsafe") = FeatureVector{1.0, 1.0}, py::arg("cov_safe") = 0.5, py::arg("cov_unsafe") = 0.5);
    m.def(
        "gen_dns_surrogate",
        [](std::size_t windows, std::uint64_t seed, double intensity, double tunnel_fraction, std::size_t packets) {
            DnsSurrogateSpec spec;
            spec.n_windows = windows;
            spec.seed = seed;
            spec.intensity = intensity;
            spec.tunnel_fraction = tunnel_fraction;
            spec.packets_per_window = packets;
            return from_dataset(gen_dns_surrogate(spec));
        },
        py::arg("windows"), py::arg("seed"), py::arg("intensity") = 1.0, py::arg("tunnel_fraction") = 0.5,
        py::arg("packets") = 100);
}
