#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dspdc/errors.hpp"
#include "dspdc/experiment.hpp"
#include "dspdc/instances.hpp"
#include "dspdc/metrics.hpp"
#include "dspdc/params.hpp"
#include "dspdc/problem.hpp"
#include "dspdc/scale.hpp"
#include "dspdc/solver.hpp"
#include "dspdc/version.hpp"

namespace py = pybind11;
using namespace dspdc;

namespace {

ThetaMode mode_from(const std::string& s) {
    if (s == "distance") return ThetaMode::distance;
    if (s == "gap") return ThetaMode::gap;
    throw std::invalid_argument("mode must be 'distance' or 'gap'");
}

LambdaPolicy policy_from(const std::string& s) {
    if (s == "exact") return LambdaPolicy::exact;
    if (s == "heuristic") return LambdaPolicy::heuristic;
    throw std::invalid_argument("lambda_policy must be 'exact' or 'heuristic'");
}

py::dict trace_record_to_dict(const TraceRecord& r) {
    py::dict d;
    d["iteration"] = r.iteration;
    d["elapsed_s"] = r.elapsed_s;
    d["primal"] = r.primal;
    d["dual"] = r.dual ? py::object(py::float_(*r.dual)) : py::object(py::none());
    d["gap"] = r.gap ? py::object(py::float_(*r.gap)) : py::object(py::none());
    d["dist_sq"] = r.dist_sq ? py::object(py::float_(*r.dist_sq)) : py::object(py::none());
    return d;
}

py::dict run_result_to_dict(const RunResult& res) {
    py::dict d;
    d["x"] = res.state.x;
    d["y"] = res.state.y;
    py::list trace;
    for (const auto& r : res.trace) trace.append(trace_record_to_dict(r));
    d["trace"] = trace;
    d["iterations"] = res.state.iteration;
    d["eig_decompositions"] = res.eig_decompositions;
    d["flops"] = res.flops;
    d["divergence_warning"] = res.divergence_warning;
    d["stopped_early"] = res.stopped_early;
    return d;
}

RunOptions make_options(std::uint64_t seed, std::size_t max_iters,
                        const std::vector<std::size_t>& checkpoints, double gap_tolerance,
                        const ReferenceSolution* reference) {
    RunOptions opts;
    opts.seed = seed;
    opts.max_iters = max_iters;
    opts.checkpoints = checkpoints;
    opts.gap_tolerance = gap_tolerance;
    opts.reference = reference;
    return opts;
}

}  // namespace

PYBIND11_MODULE(_dspdc, m) {
    m.doc() = "Doubly stochastic primal-dual coordinate solvers";
    m.attr("__version__") = kVersion;

    py::register_exception<capacity_error>(m, "CapacityError", PyExc_RuntimeError);
    py::register_exception<numerical_error>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<unsupported_operation>(m, "UnsupportedOperation", PyExc_RuntimeError);
    py::register_exception<consistency_error>(m, "ConsistencyError", PyExc_RuntimeError);
    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);

    py::class_<SaddlePoint>(m, "SaddlePoint")
        .def(py::init([](std::vector<double> x, std::vector<double> y) {
                 return SaddlePoint{std::move(x), std::move(y)};
             }),
             py::arg("x"), py::arg("y"))
        .def_readonly("x", &SaddlePoint::x)
        .def_readonly("y", &SaddlePoint::y);

    py::class_<Problem>(m, "Problem")
        .def_property_readonly("n_rows", &Problem::n_rows)
        .def_property_readonly("p_cols", &Problem::p_cols)
        .def_property_readonly("n_blocks", &Problem::n_blocks)
        .def_property_readonly("p_blocks", &Problem::p_blocks)
        .def_property_readonly("lam", &Problem::lambda)
        .def_property_readonly("gamma", &Problem::gamma)
        .def_property_readonly("closed_form",
                               [](const Problem& p) -> std::optional<SaddlePoint> {
                                   return p.closed_form;
                               })
        .def_property_readonly("provenance",
                               [](const Problem& p) { return p.provenance.dump(); })
        .def("to_json", [](const Problem& p) { return problem_to_json(p).dump(); })
        .def("__repr__", [](const Problem& p) {
            return "<dspdc.Problem " + std::to_string(p.n_rows()) + "x" +
                   std::to_string(p.p_cols()) + ">";
        });

    py::class_<SolverParams>(m, "SolverParams")
        .def_readonly("n", &SolverParams::n)
        .def_readonly("p", &SolverParams::p)
        .def_readonly("q", &SolverParams::q)
        .def_readonly("m", &SolverParams::m)
        .def_readonly("lam", &SolverParams::lambda)
        .def_readonly("gamma", &SolverParams::gamma)
        .def_readonly("Lambda", &SolverParams::Lambda)
        .def_readonly("tau", &SolverParams::tau)
        .def_readonly("sigma", &SolverParams::sigma)
        .def_readwrite("theta", &SolverParams::theta)
        .def("validate", &SolverParams::validate);

    py::class_<ReferenceSolution>(m, "ReferenceSolution")
        .def_property_readonly("x", [](const ReferenceSolution& r) { return r.point.x; })
        .def_property_readonly("y", [](const ReferenceSolution& r) { return r.point.y; })
        .def_readonly("gap_at_certification", &ReferenceSolution::gap_at_certification)
        .def_readonly("source", &ReferenceSolution::source)
        .def_readonly("provenance_hash", &ReferenceSolution::provenance_hash);

    // generators and serialization
    m.def("gen_synthetic", &gen_synthetic, py::arg("n"), py::arg("p"), py::arg("lambda1"),
          py::arg("lambda2"), py::arg("seed"));
    m.def(
        "gen_lower_bound",
        [](std::size_t n, double q_cond) {
            LowerBoundInstance inst = gen_lower_bound(n, q_cond);
            py::dict d;
            d["problem"] = inst.problem;
            d["r"] = inst.r;
            d["xi"] = inst.xi;
            d["x_star"] = inst.x_star;
            d["y_star"] = inst.y_star;
            d["lam"] = inst.lambda;
            d["gamma"] = inst.gamma;
            d["lambda11_bound"] = inst.lambda11_bound;
            return d;
        },
        py::arg("n"), py::arg("Q"));
    m.def("gen_matrix_risk", &gen_matrix_risk, py::arg("n"), py::arg("p"), py::arg("d"),
          py::arg("lambda_"), py::arg("seed"));
    m.def("gen_factorized", &gen_factorized, py::arg("base"), py::arg("d"), py::arg("seed"));
    m.def("gen_factorized_reduced", &gen_factorized_reduced, py::arg("base"), py::arg("d"),
          py::arg("seed"));
    m.def("load_problem", &load_problem, py::arg("path"));
    m.def("save_problem", &save_problem, py::arg("problem"), py::arg("path"));
    m.def(
        "problem_from_json",
        [](const std::string& text) { return problem_from_json(nlohmann::json::parse(text)); },
        py::arg("text"));

    // metrics
    m.def(
        "primal_objective",
        [](const Problem& prob, const std::vector<double>& x) {
            return primal_objective(prob, x);
        },
        py::arg("problem"), py::arg("x"));
    m.def(
        "dual_objective",
        [](const Problem& prob, const std::vector<double>& y) { return dual_objective(prob, y); },
        py::arg("problem"), py::arg("y"));
    m.def(
        "duality_gap",
        [](const Problem& prob, const std::vector<double>& x, const std::vector<double>& y) {
            return duality_gap(prob, x, y);
        },
        py::arg("problem"), py::arg("x"), py::arg("y"));
    m.def(
        "stationarity_residual",
        [](const Problem& prob, const std::vector<double>& x, const std::vector<double>& y) {
            return stationarity_residual(prob, x, y);
        },
        py::arg("problem"), py::arg("x"), py::arg("y"));
    m.def(
        "certify_reference",
        [](const Problem& prob, std::size_t max_iters, bool use_cache) {
            CertifyOptions opts;
            opts.max_iters = max_iters;
            opts.use_cache = use_cache;
            return certify_reference(prob, opts);
        },
        py::arg("problem"), py::arg("max_iters") = 2'000'000, py::arg("use_cache") = true);

    // parameters and scale constants
    m.def(
        "compute_params",
        [](std::size_t n, std::size_t p, std::size_t q, std::size_t mm, double lambda,
           double gamma, double Lambda, const std::string& mode) {
            return compute_params(n, p, q, mm, lambda, gamma, Lambda, mode_from(mode));
        },
        py::arg("n"), py::arg("p"), py::arg("q"), py::arg("m"), py::arg("lambda_"),
        py::arg("gamma"), py::arg("Lambda"), py::arg("mode") = "distance");
    m.def("distance_rate", &distance_rate, py::arg("n"), py::arg("p"), py::arg("q"), py::arg("m"),
          py::arg("lambda_"), py::arg("gamma"), py::arg("Lambda"));
    m.def("gap_rate", &gap_rate, py::arg("n"), py::arg("p"), py::arg("q"), py::arg("m"),
          py::arg("lambda_"), py::arg("gamma"), py::arg("Lambda"));
    m.def(
        "scale_constant_exact",
        [](const Problem& prob, std::size_t q, std::size_t mm, std::size_t cap) {
            return scale_constant_exact(prob.a, prob.dual_part, prob.primal_part, q, mm, cap);
        },
        py::arg("problem"), py::arg("q"), py::arg("m"), py::arg("enumeration_cap") = 100'000);
    m.def(
        "scale_constant_heuristic",
        [](const Problem& prob, std::size_t q, std::size_t mm) {
            return scale_constant_heuristic(prob.a, prob.dual_part, prob.primal_part, q, mm);
        },
        py::arg("problem"), py::arg("q"), py::arg("m"));
    m.def(
        "spectral_norm_sq", [](const Problem& prob) { return spectral_norm_sq(prob.a); },
        py::arg("problem"));

    // solvers
    m.def(
        "solve",
        [](const Problem& prob, std::size_t q, std::size_t mm, const std::string& mode,
           const std::string& policy, std::uint64_t seed, std::size_t max_iters,
           const std::vector<std::size_t>& checkpoints, double gap_tolerance,
           const ReferenceSolution* reference, std::optional<double> theta) {
            const double lam =
                policy_from(policy) == LambdaPolicy::exact
                    ? scale_constant_exact(prob.a, prob.dual_part, prob.primal_part, q, mm)
                    : scale_constant_heuristic(prob.a, prob.dual_part, prob.primal_part, q, mm);
            SolverParams sp = compute_params(prob.n_blocks(), prob.p_blocks(), q, mm,
                                             prob.lambda(), prob.gamma(), lam, mode_from(mode));
            if (theta) {
                sp.theta = *theta;
                sp.validate();
            }
            const RunOptions opts =
                make_options(seed, max_iters, checkpoints, gap_tolerance, reference);
            return run_result_to_dict(run_dspdc_auto(prob, sp, opts));
        },
        py::arg("problem"), py::arg("q"), py::arg("m"), py::arg("mode") = "distance",
        py::arg("lambda_policy") = "heuristic", py::arg("seed") = 0,
        py::arg("max_iters") = 1000, py::arg("checkpoints") = std::vector<std::size_t>{},
        py::arg("gap_tolerance") = 0.0, py::arg("reference") = nullptr,
        py::arg("theta") = py::none());
    m.def(
        "spdc",
        [](const Problem& prob, std::size_t mm, const std::string& mode,
           const std::string& policy, std::uint64_t seed, std::size_t max_iters,
           const std::vector<std::size_t>& checkpoints, double gap_tolerance,
           const ReferenceSolution* reference) {
            const RunOptions opts =
                make_options(seed, max_iters, checkpoints, gap_tolerance, reference);
            return run_result_to_dict(
                spdc_run(prob, mm, opts, mode_from(mode), policy_from(policy)));
        },
        py::arg("problem"), py::arg("m"), py::arg("mode") = "distance",
        py::arg("lambda_policy") = "heuristic", py::arg("seed") = 0,
        py::arg("max_iters") = 1000, py::arg("checkpoints") = std::vector<std::size_t>{},
        py::arg("gap_tolerance") = 0.0, py::arg("reference") = nullptr);
    m.def(
        "sdca",
        [](const Problem& prob, std::uint64_t seed, std::size_t max_iters,
           const std::vector<std::size_t>& checkpoints, double gap_tolerance,
           const ReferenceSolution* reference) {
            const RunOptions opts =
                make_options(seed, max_iters, checkpoints, gap_tolerance, reference);
            return run_result_to_dict(sdca_run(prob, opts));
        },
        py::arg("problem"), py::arg("seed") = 0, py::arg("max_iters") = 1000,
        py::arg("checkpoints") = std::vector<std::size_t>{}, py::arg("gap_tolerance") = 0.0,
        py::arg("reference") = nullptr);

    // experiments
    m.def(
        "run_experiment",
        [](const std::string& config_path) {
            const auto result = run_experiment(load_experiment_config(config_path));
            py::dict d;
            d["manifest"] = result.manifest_path;
            d["csvs"] = result.csv_paths;
            return d;
        },
        py::arg("config_path"));
    m.def(
        "verify_theorems",
        [](const std::string& config_path) {
            return verify_theorems(load_verify_config(config_path)).dump();
        },
        py::arg("config_path"));
}
