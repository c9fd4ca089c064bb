#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mtkrisk/dirichlet.hpp"
#include "mtkrisk/ergodic.hpp"
#include "mtkrisk/geometry.hpp"
#include "mtkrisk/kernel.hpp"
#include "mtkrisk/pwf.hpp"
#include "mtkrisk/riskops.hpp"

namespace py = pybind11;
using namespace mtk;

namespace {

WeightingFunctionSpec make_pwf(const std::string& family, double gamma, double beta,
                               const std::vector<std::pair<double, double>>& table) {
    if (family == "identity") return WeightingFunctionSpec::identity();
    if (family == "prelec") return WeightingFunctionSpec::prelec(gamma, beta);
    if (family == "tk") return WeightingFunctionSpec::tk1992(gamma);
    if (family == "tabulated") return WeightingFunctionSpec::tabulated(table);
    throw ConfigError("unknown PWF family: " + family);
}

UtilitySampler make_utility(const std::string& family, double a, double rho, double alpha,
                            double beta, double lambda) {
    if (family == "cara") return UtilitySampler::cara(a);
    if (family == "crra") return UtilitySampler::crra(rho);
    if (family == "linear") return UtilitySampler::linear();
    if (family == "tkvalue") return UtilitySampler::tk_value(alpha, beta, lambda);
    throw ConfigError("unknown utility family: " + family);
}

}  // namespace

PYBIND11_MODULE(_mtkrisk, m) {
    m.doc() = "behavioural-risk numerics: weighting kernels, risk operators, first-exit MC";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def(
        "eval_pwf",
        [](const std::string& family, double p, double gamma, double beta,
           const std::vector<std::pair<double, double>>& table) {
            return eval_pwf(make_pwf(family, gamma, beta, table), p);
        },
        py::arg("family"), py::arg("p"), py::arg("gamma") = 0.65, py::arg("beta") = 1.0,
        py::arg("table") = std::vector<std::pair<double, double>>{});

    m.def(
        "fixed_point",
        [](const std::string& family, double gamma, double beta,
           const std::vector<std::pair<double, double>>& table) {
            return fixed_point(make_pwf(family, gamma, beta, table));
        },
        py::arg("family"), py::arg("gamma") = 0.65, py::arg("beta") = 1.0,
        py::arg("table") = std::vector<std::pair<double, double>>{});

    m.def(
        "build_kernel_matrix",
        [](const std::string& family, int loss_n, int gain_n, double gamma, double beta,
           std::optional<double> p_star, const std::string& quad, int quad_points,
           double scale) {
            const auto K = build_kernel_matrix(
                make_pwf(family, gamma, beta, {}), loss_n, gain_n, p_star,
                quad == "trapezoid" ? Quadrature::Trapezoid : Quadrature::Simpson, quad_points,
                scale);
            return py::make_tuple(K.entries, K.p_star, K.loss_grid, K.gain_grid);
        },
        py::arg("family"), py::arg("loss_n"), py::arg("gain_n"), py::arg("gamma") = 0.65,
        py::arg("beta") = 1.0, py::arg("p_star") = std::nullopt, py::arg("quad") = "simpson",
        py::arg("quad_points") = 1024, py::arg("scale") = 1.0);

    m.def("confidence_kernel",
          [](const std::string& family, double p_l, double p_g, double gamma, double beta) {
              return confidence_kernel(make_pwf(family, gamma, beta, {}), p_l, p_g);
          },
          py::arg("family"), py::arg("p_l"), py::arg("p_g"), py::arg("gamma") = 0.65,
          py::arg("beta") = 1.0);

    m.def("behavioral_adjoint", &behavioral_adjoint, py::arg("M"));
    m.def("composite_T", &composite_T, py::arg("K"));

    m.def(
        "spectrum",
        [](const Eigen::MatrixXd& M) {
            const auto rep = spectrum(M);
            py::dict d;
            d["eigenvalues"] = rep.eigenvalues;
            d["singular_values"] = rep.singular_values;
            d["spectral_norm"] = rep.spectral_norm;
            d["is_contraction"] = rep.is_contraction;
            return d;
        },
        py::arg("M"));

    m.def(
        "orbit",
        [](const Eigen::MatrixXd& T, const Eigen::VectorXd& f0, int N) {
            const auto rec = orbit(T, f0, N);
            py::dict d;
            d["norms"] = rec.norms;
            d["time_average"] = rec.time_average;
            d["diverged"] = rec.diverged;
            d["steps_completed"] = rec.steps_completed;
            return d;
        },
        py::arg("T"), py::arg("f0"), py::arg("N"));

    m.def(
        "birkhoff_check",
        [](const Eigen::MatrixXd& T, const Eigen::VectorXd& f0, int N) {
            const auto rep = birkhoff_check(T, f0, N);
            py::dict d;
            d["time_average_limit"] = rep.time_average_limit;
            d["invariance_residual"] = rep.invariance_residual;
            d["time_vs_space_gap"] = rep.time_vs_space_gap;
            d["N_used"] = rep.N_used;
            d["diverged"] = rep.diverged;
            return d;
        },
        py::arg("T"), py::arg("f0"), py::arg("N"));

    m.def(
        "frenet",
        [](const std::string& curve, double t, double a, double b, double r) {
            CurveSampler c = [&] {
                if (curve == "circle") return CurveSampler::circle(r);
                if (curve == "helix") return CurveSampler::helix(a, b);
                if (curve == "line")
                    return CurveSampler::line(Eigen::Vector3d::Zero(), Eigen::Vector3d(a, b, 0));
                throw ConfigError("unknown curve: " + curve);
            }();
            const auto rep = frenet(c, t);
            py::dict d;
            d["curvature"] = rep.curvature;
            d["binormal"] = rep.binormal ? py::cast(*rep.binormal) : py::none();
            d["torsion"] = rep.torsion ? py::cast(*rep.torsion) : py::none();
            d["spin"] = rep.spin ? py::cast(*rep.spin) : py::none();
            return d;
        },
        py::arg("curve"), py::arg("t"), py::arg("a") = 1.0, py::arg("b") = 1.0,
        py::arg("r") = 1.0);

    m.def(
        "gauss_curvature",
        [](const std::string& surface, double x, double y) {
            SurfaceSampler s = [&] {
                if (surface == "saddle") return SurfaceSampler::saddle();
                if (surface == "paraboloid") return SurfaceSampler::paraboloid();
                throw ConfigError("unknown surface: " + surface);
            }();
            const auto rep = gauss_curvature(s, x, y);
            py::dict d;
            d["gauss_curvature"] = rep.gauss_curvature;
            d["classification"] = surface_class_name(rep.classification);
            d["hessian_eigenvalues"] = rep.hessian_eigenvalues;
            return d;
        },
        py::arg("surface"), py::arg("x"), py::arg("y"));

    m.def(
        "arrow_pratt",
        [](const std::string& family, double x, double a, double rho, double alpha, double beta,
           double lam) { return arrow_pratt(make_utility(family, a, rho, alpha, beta, lam), x); },
        py::arg("family"), py::arg("x"), py::arg("a") = 1.0, py::arg("rho") = 0.5,
        py::arg("alpha") = 0.88, py::arg("beta") = 0.88, py::arg("lambda_") = 2.25);

    m.def(
        "prudence",
        [](const std::string& family, double x, double a, double rho, double alpha, double beta,
           double lam) { return prudence(make_utility(family, a, rho, alpha, beta, lam), x); },
        py::arg("family"), py::arg("x"), py::arg("a") = 1.0, py::arg("rho") = 0.5,
        py::arg("alpha") = 0.88, py::arg("beta") = 0.88, py::arg("lambda_") = 2.25);

    m.def(
        "structure_constants",
        [](const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta) {
            InfinitesimalPair pair{alpha, beta, 1.0};
            const auto t = structure_constants(pair);
            py::dict d;
            d["theta"] = t.theta;
            d["a"] = t.a;
            d["a_hat"] = t.a_hat;
            d["c"] = t.c;
            return d;
        },
        py::arg("alpha"), py::arg("beta"));

    m.def("lie_bracket", &lie_bracket, py::arg("A"), py::arg("B"));
    m.def("group_commutator", &group_commutator, py::arg("X"), py::arg("Y"));

    m.def(
        "estimate_lambda",
        [](const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta, double r,
           bool hardy_variant) {
            const auto est = estimate_lambda({alpha, beta, r}, hardy_variant);
            return py::make_tuple(est.upper_bound, est.inf_product);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("r"), py::arg("hardy_variant") = false);

    m.def(
        "classify_regime",
        [](double alpha_i, double beta_j, double r) {
            return std::string(regime_name(classify_regime(alpha_i, beta_j, r)));
        },
        py::arg("alpha_i"), py::arg("beta_j"), py::arg("r"));

    m.def("harmonic_mode", &harmonic_mode, py::arg("n"), py::arg("r"), py::arg("theta"),
          py::arg("literal_exponent") = false);

    m.def(
        "estimate_value",
        [](const std::string& domain, const std::string& boundary,
           const Eigen::Vector2d& x0, long n_paths, std::uint64_t seed, double radius,
           double delta, int k, double c, int n_threads) {
            DomainSpec dom = [&] {
                if (domain == "disk") return DomainSpec::disk({0, 0}, radius, delta);
                throw ConfigError("unknown domain: " + domain);
            }();
            BoundaryData phi = [&]() {
                if (boundary == "cos") return BoundaryData::cos_harmonic(k);
                if (boundary == "sin") return BoundaryData::sin_harmonic(k);
                if (boundary == "const") return BoundaryData::constant(c);
                throw ConfigError("unknown boundary: " + boundary);
            }();
            const auto est = estimate_value(dom, phi, x0, n_paths, seed, n_threads);
            py::dict d;
            d["mean"] = est.mean;
            d["std_error"] = est.std_error;
            d["n_paths"] = est.n_paths;
            d["mean_exit_steps"] = est.mean_exit_steps;
            return d;
        },
        py::arg("domain"), py::arg("boundary"), py::arg("x0"), py::arg("n_paths"),
        py::arg("seed"), py::arg("radius") = 1.0, py::arg("delta") = 1e-6, py::arg("k") = 1,
        py::arg("c") = 0.0, py::arg("n_threads") = 0);
}
