#include "dispatch.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mtkrisk/dirichlet.hpp"
#include "mtkrisk/ergodic.hpp"
#include "mtkrisk/errors.hpp"
#include "mtkrisk/geometry.hpp"
#include "mtkrisk/kernel.hpp"
#include "mtkrisk/matrix_io.hpp"
#include "mtkrisk/pwf.hpp"
#include "mtkrisk/riskops.hpp"
#include "mtkrisk/rng.hpp"

namespace mtk::cli {

using json = nlohmann::ordered_json;

namespace {

std::vector<double> parse_reals(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": bad number '" + cell + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

Eigen::Vector2d parse_vec2(const std::string& csv, const char* what) {
    const auto v = parse_reals(csv, what);
    if (v.size() != 2) throw ConfigError(std::string(what) + ": expected two components");
    return {v[0], v[1]};
}

struct PwfFlags {
    std::string family = "prelec";
    double gamma = 0.65;
    double beta = 1.0;
    std::string table_file;

    void attach(CLI::App* app) {
        app->add_option("--family", family, "identity|prelec|tk|tabulated");
        app->add_option("--gamma", gamma);
        app->add_option("--beta", beta);
        app->add_option("--table", table_file, "two-column CSV (p, w) for tabulated");
    }

    WeightingFunctionSpec build() const {
        if (family == "identity") return WeightingFunctionSpec::identity();
        if (family == "prelec") return WeightingFunctionSpec::prelec(gamma, beta);
        if (family == "tk") return WeightingFunctionSpec::tk1992(gamma);
        if (family == "tabulated") {
            if (table_file.empty()) throw ConfigError("tabulated family requires --table");
            std::ifstream in(table_file);
            if (!in) throw ConfigError("cannot open table: " + table_file);
            std::vector<std::pair<double, double>> table;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                std::stringstream ss(line);
                std::string a, b;
                if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
                    throw ConfigError("table rows need two columns: " + table_file);
                table.emplace_back(std::stod(a), std::stod(b));
            }
            return WeightingFunctionSpec::tabulated(std::move(table));
        }
        throw ConfigError("unknown PWF family: " + family);
    }

    json echo() const {
        json j{{"family", family}};
        if (family == "prelec") {
            j["gamma"] = gamma;
            j["beta"] = beta;
        } else if (family == "tk") {
            j["gamma"] = gamma;
        } else if (family == "tabulated") {
            j["table"] = table_file;
        }
        return j;
    }
};

Quadrature parse_quad(const std::string& q) {
    if (q == "simpson") return Quadrature::Simpson;
    if (q == "trapezoid") return Quadrature::Trapezoid;
    throw ConfigError("unknown quadrature: " + q);
}

json envelope(const std::string& subcommand, json params, json payload) {
    return json{{"status", "ok"},
                {"version", kVersion},
                {"config_echo", json{{"subcommand", subcommand}, {"params", std::move(params)}}},
                {"payload", std::move(payload)}};
}

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd parse_f0(const std::string& spec, Eigen::Index dim, std::uint64_t seed) {
    if (spec == "e1") {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        v(0) = 1.0;
        return v;
    }
    if (spec == "random") {
        CounterRng rng(CounterRng::derive_key(seed, 0));
        Eigen::VectorXd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v(i) = 2.0 * rng.next_double() - 1.0;
        return v;
    }
    const auto vals = parse_reals(spec, "--f0");
    if (static_cast<Eigen::Index>(vals.size()) != dim)
        throw DomainError("--f0 length does not match operator dimension");
    Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

CurveSampler build_curve(const std::string& name, double a, double b, double r) {
    if (name == "circle") return CurveSampler::circle(r);
    if (name == "helix") return CurveSampler::helix(a, b);
    if (name == "line")
        return CurveSampler::line(Eigen::Vector3d::Zero(), Eigen::Vector3d(a, b, 0.0));
    throw ConfigError("unknown curve: " + name);
}

UtilitySampler build_utility(const std::string& name, double a, double rho, double alpha,
                             double beta, double lambda) {
    if (name == "cara") return UtilitySampler::cara(a);
    if (name == "crra") return UtilitySampler::crra(rho);
    if (name == "linear") return UtilitySampler::linear();
    if (name == "tkvalue") return UtilitySampler::tk_value(alpha, beta, lambda);
    throw ConfigError("unknown utility family: " + name);
}

}  // namespace

int dispatch(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    // --format applies to every subcommand; strip it before CLI11 sees argv
    std::string format = "json";
    std::vector<std::string> args;
    args.reserve(args_in.size());
    for (std::size_t i = 0; i < args_in.size(); ++i) {
        const std::string& a = args_in[i];
        if (a == "--format") {
            if (i + 1 >= args_in.size()) {
                err << json{{"status", "config_error"}, {"message", "--format needs a value"}}
                           .dump()
                    << std::endl;
                return 1;
            }
            format = args_in[++i];
        } else if (a.rfind("--format=", 0) == 0) {
            format = a.substr(9);
        } else {
            args.push_back(a);
        }
    }
    if (format != "json" && format != "csv") {
        err << json{{"status", "config_error"}, {"message", "--format must be json or csv"}}.dump()
            << std::endl;
        return 1;
    }

    // deferred handlers: CLI11 parses, then the selected closure runs
    CLI::App app{"behavioural-risk numerics"};
    app.require_subcommand(1);

    json result;
    std::function<json()> action;

    // ---- pwf ----------------------------------------------------------
    auto* pwf = app.add_subcommand("pwf", "probability weighting functions");
    pwf->require_subcommand(1);

    {
        auto* eval = pwf->add_subcommand("eval", "evaluate w(p)");
        auto flags = std::make_shared<PwfFlags>();
        auto p = std::make_shared<double>(0.5);
        flags->attach(eval);
        eval->add_option("--p", *p)->required()->check(CLI::Range(0.0, 1.0));
        eval->callback([&action, flags, p] {
            action = [flags, p] {
                const auto spec = flags->build();
                json params = flags->echo();
                params["p"] = *p;
                return envelope("pwf eval", params,
                                json{{"value", eval_pwf(spec, *p)},
                                     {"diagnostics", json{{"family", spec.family_name()}}}});
            };
        });
    }
    {
        auto* fp = pwf->add_subcommand("fixed-point", "fixed point p* of w");
        auto flags = std::make_shared<PwfFlags>();
        flags->attach(fp);
        fp->callback([&action, flags] {
            action = [flags] {
                const auto spec = flags->build();
                const double ps = fixed_point(spec);
                return envelope("pwf fixed-point", flags->echo(),
                                json{{"value", ps},
                                     {"diagnostics", json{{"residual", spec.eval(ps) - ps}}}});
            };
        });
    }
    {
        auto* part = pwf->add_subcommand("partition", "bump partition of unity");
        auto centers = std::make_shared<std::string>();
        auto widths = std::make_shared<std::string>();
        auto grid = std::make_shared<int>(101);
        auto out_file = std::make_shared<std::string>();
        part->add_option("--centers", *centers)->required();
        part->add_option("--half-widths", *widths)->required();
        part->add_option("--grid", *grid);
        part->add_option("--out", *out_file);
        part->callback([&action, centers, widths, grid, out_file] {
            action = [centers, widths, grid, out_file] {
                const auto c = parse_reals(*centers, "--centers");
                const auto h = parse_reals(*widths, "--half-widths");
                const auto part = build_partition(c, h, *grid);
                if (!out_file->empty()) {
                    std::ofstream f(*out_file);
                    if (!f) throw ConfigError("cannot open " + *out_file);
                    f << "p";
                    for (std::size_t i = 0; i < part.size(); ++i) f << ",w" << (i + 1);
                    f << "\n";
                    for (std::size_t k = 0; k < part.grid().size(); ++k) {
                        f << format_double(part.grid()[k]);
                        for (std::size_t i = 0; i < part.size(); ++i)
                            f << "," << format_double(part.weights()[i][k]);
                        f << "\n";
                    }
                }
                return envelope("pwf partition",
                                json{{"centers", *centers},
                                     {"half_widths", *widths},
                                     {"grid", *grid},
                                     {"out", *out_file}},
                                json{{"members", part.size()},
                                     {"max_sum_deviation", part.max_sum_deviation()}});
            };
        });
    }

    // ---- kernel -------------------------------------------------------
    auto* kernel = app.add_subcommand("kernel", "behavioural matrix operators");
    kernel->require_subcommand(1);

    {
        auto* build = kernel->add_subcommand("build", "discretize the confidence kernel");
        auto flags = std::make_shared<PwfFlags>();
        auto loss_n = std::make_shared<int>(50);
        auto gain_n = std::make_shared<int>(50);
        auto pstar = std::make_shared<std::string>("auto");
        auto quad = std::make_shared<std::string>("simpson");
        auto quad_points = std::make_shared<int>(1024);
        auto scale = std::make_shared<double>(1.0);
        auto out_file = std::make_shared<std::string>();
        flags->attach(build);
        build->add_option("--loss-n", *loss_n);
        build->add_option("--gain-n", *gain_n);
        build->add_option("--pstar", *pstar, "auto or a value in (0,1)");
        build->add_option("--quad", *quad, "simpson|trapezoid");
        build->add_option("--quad-points", *quad_points);
        build->add_option("--scale", *scale, "row scaling before orbit studies");
        build->add_option("--out", *out_file)->required();
        build->callback([&action, flags, loss_n, gain_n, pstar, quad, quad_points, scale,
                         out_file] {
            action = [flags, loss_n, gain_n, pstar, quad, quad_points, scale, out_file] {
                std::optional<double> ps;
                if (*pstar != "auto") ps = std::stod(*pstar);
                const auto K = build_kernel_matrix(flags->build(), *loss_n, *gain_n, ps,
                                                   parse_quad(*quad), *quad_points, *scale);
                write_matrix_csv(*out_file, K.entries, K.p_star);
                json params = flags->echo();
                params["loss_n"] = *loss_n;
                params["gain_n"] = *gain_n;
                params["pstar"] = *pstar;
                params["quad"] = *quad;
                params["quad_points"] = *quad_points;
                params["scale"] = *scale;
                params["out"] = *out_file;
                return envelope("kernel build", params,
                                json{{"rows", K.entries.rows()},
                                     {"cols", K.entries.cols()},
                                     {"p_star", K.p_star},
                                     {"max_abs_entry", K.entries.cwiseAbs().maxCoeff()}});
            };
        });
    }
    {
        auto* adj = kernel->add_subcommand("adjoint", "K* = -K^T");
        auto in_file = std::make_shared<std::string>();
        auto out_file = std::make_shared<std::string>();
        adj->add_option("--in", *in_file)->required();
        adj->add_option("--out", *out_file)->required();
        adj->callback([&action, in_file, out_file] {
            action = [in_file, out_file] {
                const auto mf = read_matrix_csv(*in_file);
                const Eigen::MatrixXd A = behavioral_adjoint(mf.entries);
                write_matrix_csv(*out_file, A, mf.p_star);
                return envelope("kernel adjoint", json{{"in", *in_file}, {"out", *out_file}},
                                json{{"rows", A.rows()}, {"cols", A.cols()}});
            };
        });
    }
    {
        auto* comp = kernel->add_subcommand("composite", "T = K^T K");
        auto in_file = std::make_shared<std::string>();
        auto out_file = std::make_shared<std::string>();
        comp->add_option("--in", *in_file)->required();
        comp->add_option("--out", *out_file)->required();
        comp->callback([&action, in_file, out_file] {
            action = [in_file, out_file] {
                const auto mf = read_matrix_csv(*in_file);
                const Eigen::MatrixXd T = composite_T(mf.entries);
                write_matrix_csv(*out_file, T, mf.p_star);
                return envelope("kernel composite", json{{"in", *in_file}, {"out", *out_file}},
                                json{{"rows", T.rows()}, {"cols", T.cols()}});
            };
        });
    }
    {
        auto* spec = kernel->add_subcommand("spectrum", "eigenvalues and spectral norm");
        auto in_file = std::make_shared<std::string>();
        spec->add_option("--in", *in_file)->required();
        spec->callback([&action, in_file] {
            action = [in_file] {
                const auto mf = read_matrix_csv(*in_file);
                const auto rep = spectrum(mf.entries);
                json eig = json::array();
                for (const auto& z : rep.eigenvalues)
                    eig.push_back(json{{"re", z.real()}, {"im", z.imag()}});
                json payload{{"spectral_norm", rep.spectral_norm},
                             {"is_contraction", rep.is_contraction},
                             {"singular_values", rep.singular_values}};
                if (!rep.eigenvalues.empty()) {
                    payload["eigenvalues"] = eig;
                    payload["eigenvalue_product_norm"] = rep.eigenvalue_product_norm;
                    payload["symmetry_residual"] = rep.symmetry_residual;
                    payload["skew_symmetry_residual"] = rep.skew_symmetry_residual;
                }
                return envelope("kernel spectrum", json{{"in", *in_file}}, payload);
            };
        });
    }

    // ---- ergodic ------------------------------------------------------
    auto* ergodic = app.add_subcommand("ergodic", "orbits and Birkhoff averages");
    ergodic->require_subcommand(1);

    {
        auto* orb = ergodic->add_subcommand("orbit", "iterate T^j f0");
        auto t_file = std::make_shared<std::string>();
        auto f0_spec = std::make_shared<std::string>("e1");
        auto steps = std::make_shared<int>(200);
        auto seed = std::make_shared<std::uint64_t>(0);
        auto out_file = std::make_shared<std::string>();
        orb->add_option("--T", *t_file)->required();
        orb->add_option("--f0", *f0_spec, "e1 | random | comma list");
        orb->add_option("--steps", *steps);
        orb->add_option("--seed", *seed);
        orb->add_option("--out", *out_file);
        orb->callback([&action, t_file, f0_spec, steps, seed, out_file] {
            action = [t_file, f0_spec, steps, seed, out_file] {
                const auto mf = read_matrix_csv(*t_file);
                const auto f0 = parse_f0(*f0_spec, mf.entries.rows(), *seed);
                const auto rec = orbit(mf.entries, f0, *steps);
                if (!out_file->empty()) {
                    std::ofstream f(*out_file);
                    if (!f) throw ConfigError("cannot open " + *out_file);
                    f << "step,norm";
                    for (Eigen::Index i = 0; i < f0.size(); ++i) f << ",c" << (i + 1);
                    f << "\n";
                    for (std::size_t j = 0; j < rec.iterates.size(); ++j) {
                        f << j << "," << format_double(rec.norms[j]);
                        for (Eigen::Index i = 0; i < f0.size(); ++i)
                            f << "," << format_double(rec.iterates[j](i));
                        f << "\n";
                    }
                }
                return envelope("ergodic orbit",
                                json{{"T", *t_file},
                                     {"f0", *f0_spec},
                                     {"steps", *steps},
                                     {"seed", *seed},
                                     {"out", *out_file}},
                                json{{"steps_completed", rec.steps_completed},
                                     {"diverged", rec.diverged},
                                     {"final_norm", rec.norms.back()},
                                     {"time_average", vector_json(rec.time_average)}});
            };
        });
    }
    {
        auto* birk = ergodic->add_subcommand("birkhoff", "time-average convergence report");
        auto t_file = std::make_shared<std::string>();
        auto f0_spec = std::make_shared<std::string>("random");
        auto steps = std::make_shared<int>(512);
        auto seed = std::make_shared<std::uint64_t>(7);
        birk->add_option("--T", *t_file)->required();
        birk->add_option("--f0", *f0_spec);
        birk->add_option("--steps", *steps);
        birk->add_option("--seed", *seed);
        birk->callback([&action, t_file, f0_spec, steps, seed] {
            action = [t_file, f0_spec, steps, seed] {
                const auto mf = read_matrix_csv(*t_file);
                const auto f0 = parse_f0(*f0_spec, mf.entries.rows(), *seed);
                const auto rep = birkhoff_check(mf.entries, f0, *steps);
                return envelope("ergodic birkhoff",
                                json{{"T", *t_file},
                                     {"f0", *f0_spec},
                                     {"steps", *steps},
                                     {"seed", *seed}},
                                json{{"invariance_residual", rep.invariance_residual},
                                     {"time_vs_space_gap", rep.time_vs_space_gap},
                                     {"N_used", rep.N_used},
                                     {"diverged", rep.diverged},
                                     {"time_average_limit", vector_json(rep.time_average_limit)}});
            };
        });
    }
    {
        auto* phase = ergodic->add_subcommand("phase", "phase-portrait data (p, w, w-p)");
        auto flags = std::make_shared<PwfFlags>();
        auto grid = std::make_shared<int>(101);
        auto out_file = std::make_shared<std::string>();
        flags->attach(phase);
        phase->add_option("--grid", *grid);
        phase->add_option("--out", *out_file);
        phase->callback([&action, flags, grid, out_file] {
            action = [flags, grid, out_file] {
                const auto port = phase_portrait(flags->build(), *grid);
                if (!out_file->empty()) {
                    std::ofstream f(*out_file);
                    if (!f) throw ConfigError("cannot open " + *out_file);
                    f << "p,w,gap\n";
                    for (const auto& pt : port.points)
                        f << format_double(pt.p) << "," << format_double(pt.w) << ","
                          << format_double(pt.gap) << "\n";
                }
                json brackets = json::array();
                for (const auto& [a, b] : port.sign_change_brackets)
                    brackets.push_back(json{{"lo", a}, {"hi", b}});
                json params = flags->echo();
                params["grid"] = *grid;
                params["out"] = *out_file;
                return envelope("ergodic phase", params,
                                json{{"points", port.points.size()},
                                     {"fixed_point_brackets", brackets}});
            };
        });
    }

    // ---- geometry -----------------------------------------------------
    auto* geometry = app.add_subcommand("geometry", "Frenet and Gauss descriptors");
    geometry->require_subcommand(1);

    {
        auto* fr = geometry->add_subcommand("frenet", "curvature, binormal, torsion");
        auto curve = std::make_shared<std::string>("helix");
        auto a = std::make_shared<double>(1.0);
        auto b = std::make_shared<double>(1.0);
        auto r = std::make_shared<double>(1.0);
        auto t = std::make_shared<double>(0.0);
        fr->add_option("--curve", *curve, "circle|helix|line");
        fr->add_option("--a", *a);
        fr->add_option("--b", *b);
        fr->add_option("--r", *r);
        fr->add_option("--t", *t)->required();
        fr->callback([&action, curve, a, b, r, t] {
            action = [curve, a, b, r, t] {
                const auto rep = frenet(build_curve(*curve, *a, *b, *r), *t);
                json payload{{"curvature", rep.curvature}};
                if (rep.spin)
                    payload["spin"] = json::array({(*rep.spin)(0), (*rep.spin)(1), (*rep.spin)(2)});
                if (rep.binormal)
                    payload["binormal"] = json::array(
                        {(*rep.binormal)(0), (*rep.binormal)(1), (*rep.binormal)(2)});
                else
                    payload["binormal"] = nullptr;
                if (rep.torsion)
                    payload["torsion"] = *rep.torsion;
                else
                    payload["torsion"] = nullptr;
                return envelope(
                    "geometry frenet",
                    json{{"curve", *curve}, {"a", *a}, {"b", *b}, {"r", *r}, {"t", *t}}, payload);
            };
        });
    }
    {
        auto* sp = geometry->add_subcommand("spin", "spin vector (x ^ x')/(x.x)");
        auto curve = std::make_shared<std::string>("circle");
        auto a = std::make_shared<double>(1.0);
        auto b = std::make_shared<double>(1.0);
        auto r = std::make_shared<double>(1.0);
        auto t = std::make_shared<double>(0.0);
        sp->add_option("--curve", *curve);
        sp->add_option("--a", *a);
        sp->add_option("--b", *b);
        sp->add_option("--r", *r);
        sp->add_option("--t", *t)->required();
        sp->callback([&action, curve, a, b, r, t] {
            action = [curve, a, b, r, t] {
                const auto v = spin_vector(build_curve(*curve, *a, *b, *r), *t);
                return envelope(
                    "geometry spin",
                    json{{"curve", *curve}, {"a", *a}, {"b", *b}, {"r", *r}, {"t", *t}},
                    json{{"spin", json::array({v(0), v(1), v(2)})}});
            };
        });
    }
    {
        auto* ga = geometry->add_subcommand("gauss", "Gauss curvature classification");
        auto surface = std::make_shared<std::string>("saddle");
        auto at = std::make_shared<std::string>("0,0");
        auto a = std::make_shared<double>(0.0);
        auto b = std::make_shared<double>(0.0);
        auto c = std::make_shared<double>(0.0);
        ga->add_option("--surface", *surface, "saddle|paraboloid|plane");
        ga->add_option("--at", *at, "x,y");
        ga->add_option("--a", *a);
        ga->add_option("--b", *b);
        ga->add_option("--c", *c);
        ga->callback([&action, surface, at, a, b, c] {
            action = [surface, at, a, b, c] {
                SurfaceSampler s = [&] {
                    if (*surface == "saddle") return SurfaceSampler::saddle();
                    if (*surface == "paraboloid") return SurfaceSampler::paraboloid();
                    if (*surface == "plane") return SurfaceSampler::plane(*a, *b, *c);
                    throw ConfigError("unknown surface: " + *surface);
                }();
                const auto pt = parse_vec2(*at, "--at");
                const auto rep = gauss_curvature(s, pt.x(), pt.y());
                return envelope(
                    "geometry gauss", json{{"surface", *surface}, {"at", *at}},
                    json{{"gauss_curvature", rep.gauss_curvature},
                         {"classification", surface_class_name(rep.classification)},
                         {"hessian_eigenvalues",
                          json::array(
                              {rep.hessian_eigenvalues[0], rep.hessian_eigenvalues[1]})}});
            };
        });
    }

    // ---- risk ---------------------------------------------------------
    auto* risk = app.add_subcommand("risk", "risk operators and structure constants");
    risk->require_subcommand(1);

    auto add_utility_cmd = [&](const char* name, const char* desc,
                               auto compute) {
        auto* cmd = risk->add_subcommand(name, desc);
        auto family = std::make_shared<std::string>("cara");
        auto a = std::make_shared<double>(1.0);
        auto rho = std::make_shared<double>(0.5);
        auto alpha = std::make_shared<double>(0.88);
        auto beta = std::make_shared<double>(0.88);
        auto lambda = std::make_shared<double>(2.25);
        auto x = std::make_shared<double>(1.0);
        cmd->add_option("--utility", *family, "cara|crra|linear|tkvalue");
        cmd->add_option("--a", *a);
        cmd->add_option("--rho", *rho);
        cmd->add_option("--alpha", *alpha);
        cmd->add_option("--beta", *beta);
        cmd->add_option("--lambda", *lambda);
        cmd->add_option("--x", *x)->required();
        std::string sub = std::string("risk ") + name;
        cmd->callback([&action, sub, compute, family, a, rho, alpha, beta, lambda, x] {
            action = [sub, compute, family, a, rho, alpha, beta, lambda, x] {
                const auto u = build_utility(*family, *a, *rho, *alpha, *beta, *lambda);
                return envelope(sub,
                                json{{"utility", *family},
                                     {"a", *a},
                                     {"rho", *rho},
                                     {"alpha", *alpha},
                                     {"beta", *beta},
                                     {"lambda", *lambda},
                                     {"x", *x}},
                                compute(u, *x));
            };
        });
    };

    add_utility_cmd("arrow-pratt", "-u''/u'", [](const UtilitySampler& u, double x) {
        return json{{"value", arrow_pratt(u, x)}};
    });
    add_utility_cmd("prudence", "-u'''/u''", [](const UtilitySampler& u, double x) {
        return json{{"value", prudence(u, x)}};
    });
    add_utility_cmd("torsion", "risk torsion 2(-u''/u')", [](const UtilitySampler& u, double x) {
        const auto t = risk_torsion(u, x);
        return json{{"ra", t.ra}, {"rs", t.rs}, {"torsion", t.torsion}};
    });

    {
        auto* st = risk->add_subcommand("structure", "structure constants theta, a, a_hat, c");
        auto alpha = std::make_shared<std::string>();
        auto beta = std::make_shared<std::string>();
        st->add_option("--alpha", *alpha)->required();
        st->add_option("--beta", *beta)->required();
        st->callback([&action, alpha, beta] {
            action = [alpha, beta] {
                const auto av = parse_reals(*alpha, "--alpha");
                const auto bv = parse_reals(*beta, "--beta");
                InfinitesimalPair pair;
                pair.alpha = Eigen::Map<const Eigen::VectorXd>(av.data(),
                                                               static_cast<Eigen::Index>(av.size()));
                pair.beta = Eigen::Map<const Eigen::VectorXd>(bv.data(),
                                                              static_cast<Eigen::Index>(bv.size()));
                pair.r = 1.0;
                const auto t = structure_constants(pair);
                auto mat_json = [](const Eigen::MatrixXd& M) {
                    json rows = json::array();
                    for (Eigen::Index i = 0; i < M.rows(); ++i) {
                        json row = json::array();
                        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
                        rows.push_back(row);
                    }
                    return rows;
                };
                json ah = json::array(), c = json::array();
                for (const auto& m : t.a_hat) ah.push_back(mat_json(m));
                for (const auto& m : t.c) c.push_back(mat_json(m));
                return envelope("risk structure", json{{"alpha", *alpha}, {"beta", *beta}},
                                json{{"theta", mat_json(t.theta)},
                                     {"a", mat_json(t.a)},
                                     {"a_hat", ah},
                                     {"c", c}});
            };
        });
    }
    {
        auto* la = risk->add_subcommand("lambda", "loss aversion index bound");
        auto alpha = std::make_shared<std::string>();
        auto beta = std::make_shared<std::string>();
        auto r = std::make_shared<double>(0.5);
        auto hardy = std::make_shared<bool>(false);
        la->add_option("--alpha", *alpha)->required();
        la->add_option("--beta", *beta)->required();
        la->add_option("--r", *r)->required();
        la->add_flag("--hardy", *hardy, "use the Hardy-membership variant r^2/(2 inf) - 1");
        la->callback([&action, alpha, beta, r, hardy] {
            action = [alpha, beta, r, hardy] {
                const auto av = parse_reals(*alpha, "--alpha");
                const auto bv = parse_reals(*beta, "--beta");
                InfinitesimalPair pair;
                pair.alpha = Eigen::Map<const Eigen::VectorXd>(av.data(),
                                                               static_cast<Eigen::Index>(av.size()));
                pair.beta = Eigen::Map<const Eigen::VectorXd>(bv.data(),
                                                              static_cast<Eigen::Index>(bv.size()));
                pair.r = *r;
                const auto est = estimate_lambda(pair, *hardy);
                return envelope(
                    "risk lambda",
                    json{{"alpha", *alpha}, {"beta", *beta}, {"r", *r}, {"hardy", *hardy}},
                    json{{"upper_bound", est.upper_bound}, {"inf_product", est.inf_product}});
            };
        });
    }
    {
        auto* re = risk->add_subcommand("regime", "Sc1/Sc2 classification of 4ab - r^2");
        auto ab = std::make_shared<double>();
        auto r = std::make_shared<double>(1.0);
        re->add_option("--ab", *ab, "product alpha_i * beta_j")->required();
        re->add_option("--r", *r)->required();
        re->callback([&action, ab, r] {
            action = [ab, r] {
                const auto regime = classify_regime(*ab, 1.0, *r);
                return envelope("risk regime", json{{"ab", *ab}, {"r", *r}},
                                json{{"regime", regime_name(regime)},
                                     {"discriminant", 4.0 * (*ab) - (*r) * (*r)}});
            };
        });
    }
    {
        auto* br = risk->add_subcommand("bracket", "Lie bracket AB - BA");
        auto a_file = std::make_shared<std::string>();
        auto b_file = std::make_shared<std::string>();
        auto out_file = std::make_shared<std::string>();
        br->add_option("--A", *a_file)->required();
        br->add_option("--B", *b_file)->required();
        br->add_option("--out", *out_file);
        br->callback([&action, a_file, b_file, out_file] {
            action = [a_file, b_file, out_file] {
                const auto A = read_matrix_csv(*a_file);
                const auto B = read_matrix_csv(*b_file);
                const Eigen::MatrixXd L = lie_bracket(A.entries, B.entries);
                if (!out_file->empty()) write_matrix_csv(*out_file, L);
                return envelope(
                    "risk bracket",
                    json{{"A", *a_file}, {"B", *b_file}, {"out", *out_file}},
                    json{{"rows", L.rows()},
                         {"cols", L.cols()},
                         {"trace", L.trace()},
                         {"skew_residual", (L + L.transpose()).cwiseAbs().maxCoeff()}});
            };
        });
    }

    // ---- dirichlet ----------------------------------------------------
    auto* dirichlet = app.add_subcommand("dirichlet", "first-exit value estimation");
    dirichlet->require_subcommand(1);

    struct DirichletFlags {
        std::string domain = "disk";
        double radius = 1.0;
        std::string center = "0,0";
        std::string lo = "0,0", hi = "1,1";
        double rin = 0.5, rout = 1.0;
        double delta = 1e-6;
        std::string boundary = "cos";
        int k = 1;
        double c = 0.0;
        double alpha = 0.88, beta = 0.88, lambda = 2.25;
        std::string axis = "1,0";
        long paths = 100000;
        std::uint64_t seed = 42;
        int threads = 0;

        void attach(CLI::App* cmd) {
            cmd->add_option("--domain", domain, "disk|rect|annulus");
            cmd->add_option("--radius", radius);
            cmd->add_option("--center", center);
            cmd->add_option("--lo", lo);
            cmd->add_option("--hi", hi);
            cmd->add_option("--rin", rin);
            cmd->add_option("--rout", rout);
            cmd->add_option("--delta", delta);
            cmd->add_option("--boundary", boundary, "const|cos|sin|tkvalue");
            cmd->add_option("--k", k);
            cmd->add_option("--c", c);
            cmd->add_option("--alpha", alpha);
            cmd->add_option("--beta", beta);
            cmd->add_option("--lambda", lambda);
            cmd->add_option("--axis", axis);
            cmd->add_option("--paths", paths);
            cmd->add_option("--seed", seed);
            cmd->add_option("--threads", threads, "0 = MTK_RISK_THREADS env (default 1)");
        }

        DomainSpec build_domain() const {
            if (domain == "disk") return DomainSpec::disk(parse_vec2(center, "--center"), radius, delta);
            if (domain == "rect")
                return DomainSpec::rectangle(parse_vec2(lo, "--lo"), parse_vec2(hi, "--hi"), delta);
            if (domain == "annulus")
                return DomainSpec::annulus(parse_vec2(center, "--center"), rin, rout, delta);
            throw ConfigError("unknown domain: " + domain);
        }

        BoundaryData build_boundary() const {
            if (boundary == "const") return BoundaryData::constant(c);
            if (boundary == "cos") return BoundaryData::cos_harmonic(k);
            if (boundary == "sin") return BoundaryData::sin_harmonic(k);
            if (boundary == "tkvalue")
                return BoundaryData::tk_value(alpha, beta, lambda, parse_vec2(axis, "--axis"));
            throw ConfigError("unknown boundary family: " + boundary);
        }

        json echo() const {
            return json{{"domain", domain},   {"radius", radius}, {"center", center},
                        {"delta", delta},     {"boundary", boundary}, {"k", k},
                        {"paths", paths},     {"seed", seed},     {"threads", threads}};
        }
    };

    {
        auto* solve = dirichlet->add_subcommand("solve", "estimate v(x0) = E[phi(B_tau)]");
        auto flags = std::make_shared<DirichletFlags>();
        auto x0 = std::make_shared<std::string>("0.5,0");
        flags->attach(solve);
        solve->add_option("--x0", *x0)->required();
        solve->callback([&action, flags, x0] {
            action = [flags, x0] {
                const auto est = estimate_value(flags->build_domain(), flags->build_boundary(),
                                                parse_vec2(*x0, "--x0"), flags->paths,
                                                flags->seed, flags->threads);
                json params = flags->echo();
                params["x0"] = *x0;
                return envelope("dirichlet solve", params,
                                json{{"mean", est.mean},
                                     {"std_error", est.std_error},
                                     {"paths", est.n_paths},
                                     {"mean_steps", est.mean_exit_steps}});
            };
        });
    }
    {
        auto* grid = dirichlet->add_subcommand("grid", "batch estimates over interior points");
        auto flags = std::make_shared<DirichletFlags>();
        auto grid_file = std::make_shared<std::string>();
        auto out_file = std::make_shared<std::string>();
        flags->attach(grid);
        grid->add_option("--grid-file", *grid_file, "CSV of x,y interior points")->required();
        grid->add_option("--out", *out_file)->required();
        grid->callback([&action, flags, grid_file, out_file] {
            action = [flags, grid_file, out_file] {
                std::ifstream in(*grid_file);
                if (!in) throw ConfigError("cannot open " + *grid_file);
                std::vector<Eigen::Vector2d> pts;
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty() || line[0] == '#') continue;
                    pts.push_back(parse_vec2(line, "grid point"));
                }
                const auto results =
                    estimate_value_grid(flags->build_domain(), flags->build_boundary(), pts,
                                        flags->paths, flags->seed, flags->threads);
                std::ofstream f(*out_file);
                if (!f) throw ConfigError("cannot open " + *out_file);
                f << "x,y,mean,std_error,mean_steps,ok\n";
                long failures = 0;
                for (std::size_t i = 0; i < results.size(); ++i) {
                    const auto& r = results[i];
                    f << format_double(pts[i].x()) << "," << format_double(pts[i].y()) << ",";
                    if (r.ok) {
                        f << format_double(r.estimate.mean) << ","
                          << format_double(r.estimate.std_error) << ","
                          << format_double(r.estimate.mean_exit_steps) << ",1\n";
                    } else {
                        f << "nan,nan,nan,0\n";
                        ++failures;
                    }
                }
                json params = flags->echo();
                params["grid_file"] = *grid_file;
                params["out"] = *out_file;
                return envelope("dirichlet grid", params,
                                json{{"points", results.size()}, {"failures", failures}});
            };
        });
    }

    // ---- scenario -----------------------------------------------------
    auto* scenario = app.add_subcommand("scenario", "batch runner");
    scenario->require_subcommand(1);
    {
        auto* run = scenario->add_subcommand("run", "run a scenario file");
        auto file = std::make_shared<std::string>();
        run->add_option("file", *file)->required();
        run->callback([&action, file, &out, &err] {
            action = [file, &out, &err]() -> json {
                const int code = run_scenario(*file, out, err);
                if (code != 0)
                    throw Error(static_cast<Status>(code), "scenario finished with failures");
                return json();  // envelopes already emitted per step
            };
        });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help() << std::endl;
            return 0;
        }
        err << json{{"status", "config_error"}, {"message", e.what()}}.dump() << std::endl;
        return 1;
    } catch (const Error& e) {
        err << json{{"status", status_name(e.status())}, {"message", e.what()}}.dump()
            << std::endl;
        return static_cast<int>(e.status());
    }

    try {
        const json result_env = action();
        if (!result_env.is_null()) {
            if (format == "csv") {
                // flattened key,value rows (JSON-pointer keys)
                const json flat = result_env.flatten();
                for (const auto& [key, value] : flat.items())
                    out << key << "," << (value.is_string() ? value.get<std::string>()
                                                            : value.dump())
                        << "\n";
            } else {
                out << result_env.dump() << std::endl;
            }
        }
        return 0;
    } catch (const Error& e) {
        err << json{{"status", status_name(e.status())}, {"message", e.what()}}.dump()
            << std::endl;
        return static_cast<int>(e.status());
    } catch (const std::exception& e) {
        err << json{{"status", "numeric_error"}, {"message", e.what()}}.dump() << std::endl;
        return 3;
    }
}

int run_scenario(const std::string& path, std::ostream& out, std::ostream& err) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    int max_code = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> args;
        std::stringstream ss(line);
        std::string tok;
        while (ss >> tok) args.push_back(tok);
        if (args.empty()) continue;
        max_code = std::max(max_code, dispatch(args, out, err));
    }
    return max_code;
}

}  // namespace mtk::cli
