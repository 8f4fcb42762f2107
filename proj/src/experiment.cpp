#include "dspdc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dspdc/errors.hpp"
#include "dspdc/instances.hpp"
#include "dspdc/scale.hpp"
#include "dspdc/vec.hpp"
#include "dspdc/version.hpp"

namespace dspdc {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& msg) { throw config_error(msg); }

std::string hex16(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

template <typename T>
T req(const nlohmann::json& j, const char* key, const char* ctx) {
    if (!j.is_object() || !j.contains(key))
        bad(std::string(ctx) + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        bad(std::string(ctx) + ": field '" + key + "': " + e.what());
    }
}

template <typename T>
T opt(const nlohmann::json& j, const char* key, T fallback, const char* ctx) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        bad(std::string(ctx) + ": field '" + key + "': " + e.what());
    }
}

Regularizer parse_reg(const nlohmann::json& j) {
    const std::string kind = req<std::string>(j, "kind", "regularizer");
    try {
        if (kind == "l2") return Regularizer::l2(req<double>(j, "lambda", "regularizer"));
        if (kind == "elastic_net")
            return Regularizer::elastic_net(req<double>(j, "lambda2", "regularizer"),
                                            req<double>(j, "lambda1", "regularizer"));
        if (kind == "psd_frobenius")
            return Regularizer::psd_frobenius(req<double>(j, "lambda", "regularizer"),
                                              req<std::size_t>(j, "d", "regularizer"));
    } catch (const std::invalid_argument& e) {
        bad(std::string("regularizer: ") + e.what());
    }
    bad("regularizer: unknown kind '" + kind + "'");
}

ThetaMode parse_mode(const std::string& s, const char* ctx) {
    if (s == "distance") return ThetaMode::distance;
    if (s == "gap") return ThetaMode::gap;
    bad(std::string(ctx) + ": unknown mode '" + s + "' (expected distance|gap)");
}

LambdaPolicy parse_policy(const std::string& s, const char* ctx) {
    if (s == "exact") return LambdaPolicy::exact;
    if (s == "heuristic") return LambdaPolicy::heuristic;
    bad(std::string(ctx) + ": unknown lambda_policy '" + s + "' (expected exact|heuristic)");
}

void check_strictly_increasing(const std::vector<std::size_t>& v, const char* ctx) {
    for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k] == 0 || (k > 0 && v[k] <= v[k - 1]))
            bad(std::string(ctx) + ": checkpoints must be positive and strictly increasing");
}

nlohmann::json parse_json_file(const std::string& path, const char* ctx) {
    std::ifstream in(path);
    if (!in) bad(std::string(ctx) + ": cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        bad(std::string(ctx) + ": '" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

Problem instantiate(const nlohmann::json& spec) {
    if (!spec.is_object()) bad("instance: expected an object");

    if (spec.contains("path")) return load_problem(req<std::string>(spec, "path", "instance"));

    if (spec.contains("dataset")) {
        const std::string path = req<std::string>(spec, "dataset", "instance");
        std::ifstream in(path);
        if (!in) bad("instance: cannot open dataset '" + path + "'");
        LibsvmData data = parse_libsvm(in);
        const std::string loss = opt<std::string>(spec, "loss", "smoothed_hinge", "instance");
        std::vector<SmoothLoss> losses;
        losses.reserve(data.labels.size());
        for (const double b : data.labels) {
            // Classification conjugates are stated in s = b beta, valid for
            // +-1 labels only.
            if ((loss == "smoothed_hinge" || loss == "logistic") && b != 1.0 && b != -1.0)
                bad("instance: loss '" + loss + "' needs +-1 labels, got " + std::to_string(b));
            if (loss == "smoothed_hinge")
                losses.push_back(SmoothLoss::smoothed_hinge(b));
            else if (loss == "logistic")
                losses.push_back(SmoothLoss::logistic(b));
            else if (loss == "square")
                losses.push_back(SmoothLoss::square(b));
            else
                bad("instance: unknown loss '" + loss + "'");
        }
        if (!spec.contains("regularizer")) bad("instance: dataset specs require a regularizer");
        const Regularizer reg = parse_reg(spec.at("regularizer"));
        nlohmann::json prov{{"generator", "dataset"},
                            {"path", path},
                            {"loss", loss},
                            {"regularizer", spec.at("regularizer")}};
        return make_scalar_problem(std::move(data.matrix), std::move(losses), reg,
                                   std::move(prov));
    }

    const std::string gen = req<std::string>(spec, "generator", "instance");
    try {
        if (gen == "synthetic")
            return gen_synthetic(req<std::size_t>(spec, "n", "instance"),
                                 req<std::size_t>(spec, "p", "instance"),
                                 req<double>(spec, "lambda1", "instance"),
                                 req<double>(spec, "lambda2", "instance"),
                                 req<std::uint64_t>(spec, "seed", "instance"));
        if (gen == "lower_bound")
            return gen_lower_bound(req<std::size_t>(spec, "n", "instance"),
                                   req<double>(spec, "Q", "instance"))
                .problem;
        if (gen == "matrix_risk")
            return gen_matrix_risk(req<std::size_t>(spec, "n", "instance"),
                                   req<std::size_t>(spec, "p", "instance"),
                                   req<std::size_t>(spec, "d", "instance"),
                                   req<double>(spec, "lambda", "instance"),
                                   req<std::uint64_t>(spec, "seed", "instance"));
        if (gen == "factorized" || gen == "factorized_reduced") {
            if (!spec.contains("base")) bad("instance: factorized specs require a base instance");
            Problem base = instantiate(spec.at("base"));
            const std::size_t d = req<std::size_t>(spec, "d", "instance");
            const std::uint64_t seed = req<std::uint64_t>(spec, "seed", "instance");
            return gen == "factorized" ? gen_factorized(base, d, seed)
                                       : gen_factorized_reduced(base, d, seed);
        }
    } catch (const std::invalid_argument& e) {
        bad(std::string("instance: ") + e.what());
    }
    bad("instance: unknown generator '" + gen + "'");
}

std::vector<std::size_t> CheckpointSchedule::expand(std::size_t max_iters) const {
    std::vector<std::size_t> out;
    switch (kind) {
        case Kind::linear:
            if (stride == 0) bad("checkpoints: linear schedules need stride >= 1");
            for (std::size_t t = stride; t < max_iters; t += stride) out.push_back(t);
            if (max_iters > 0) out.push_back(max_iters);
            break;
        case Kind::geometric: {
            if (first == 0 || !(factor > 1.0))
                bad("checkpoints: geometric schedules need first >= 1 and factor > 1");
            double t = static_cast<double>(first);
            std::size_t last = 0;
            while (t < static_cast<double>(max_iters)) {
                const std::size_t ti = static_cast<std::size_t>(t);
                if (ti > last) {
                    out.push_back(ti);
                    last = ti;
                }
                t *= factor;
                if (t <= static_cast<double>(last)) t = static_cast<double>(last + 1);
            }
            if (max_iters > 0 && (out.empty() || out.back() != max_iters))
                out.push_back(max_iters);
            break;
        }
        case Kind::list:
            out = iterations;
            check_strictly_increasing(out, "checkpoints");
            break;
    }
    return out;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& doc) {
    if (!doc.is_object()) bad("config: expected a JSON object");
    ExperimentConfig cfg;
    cfg.raw = doc;
    if (!doc.contains("instance")) bad("config: missing field 'instance'");
    cfg.instance = doc.at("instance");

    if (!doc.contains("solvers") || !doc.at("solvers").is_array() || doc.at("solvers").empty())
        bad("config: 'solvers' must be a non-empty array");
    std::vector<std::string> labels;
    for (const auto& js : doc.at("solvers")) {
        SolverSpec s;
        s.name = req<std::string>(js, "name", "solver");
        if (s.name != "dspdc" && s.name != "spdc" && s.name != "sdca")
            bad("solver: unknown name '" + s.name + "' (expected dspdc|spdc|sdca)");
        s.q = opt<std::size_t>(js, "q", 1, "solver");
        s.m = opt<std::size_t>(js, "m", 1, "solver");
        s.mode = parse_mode(opt<std::string>(js, "mode", "distance", "solver"), "solver");
        s.lambda_policy =
            parse_policy(opt<std::string>(js, "lambda_policy", "heuristic", "solver"), "solver");
        if (js.is_object() && js.contains("theta"))
            s.theta_override = req<double>(js, "theta", "solver");
        s.label = opt<std::string>(js, "label", s.name, "solver");
        std::string candidate = s.label;
        for (std::size_t k = 2; std::find(labels.begin(), labels.end(), candidate) != labels.end();
             ++k)
            candidate = s.label + "-" + std::to_string(k);
        s.label = candidate;
        labels.push_back(s.label);
        cfg.solvers.push_back(std::move(s));
    }

    cfg.max_iters = req<std::size_t>(doc, "max_iters", "config");
    if (cfg.max_iters == 0) bad("config: max_iters must be >= 1");
    cfg.gap_tolerance = opt<double>(doc, "gap_tolerance", 0.0, "config");
    if (cfg.gap_tolerance < 0.0) bad("config: gap_tolerance must be >= 0");

    if (!doc.contains("checkpoints")) bad("config: missing field 'checkpoints'");
    const auto& jc = doc.at("checkpoints");
    const std::string kind = req<std::string>(jc, "kind", "checkpoints");
    if (kind == "linear") {
        cfg.checkpoints.kind = CheckpointSchedule::Kind::linear;
        cfg.checkpoints.stride = req<std::size_t>(jc, "stride", "checkpoints");
    } else if (kind == "geometric") {
        cfg.checkpoints.kind = CheckpointSchedule::Kind::geometric;
        cfg.checkpoints.first = opt<std::size_t>(jc, "first", 1, "checkpoints");
        cfg.checkpoints.factor = opt<double>(jc, "factor", 2.0, "checkpoints");
    } else if (kind == "list") {
        cfg.checkpoints.kind = CheckpointSchedule::Kind::list;
        cfg.checkpoints.iterations =
            req<std::vector<std::size_t>>(jc, "iterations", "checkpoints");
    } else {
        bad("checkpoints: unknown kind '" + kind + "' (expected linear|geometric|list)");
    }
    cfg.checkpoints.expand(cfg.max_iters);  // validates schedule parameters

    cfg.repetitions = opt<std::size_t>(doc, "repetitions", 1, "config");
    if (cfg.repetitions == 0) bad("config: repetitions must be >= 1");
    cfg.base_seed = opt<std::uint64_t>(doc, "base_seed", 0, "config");

    const std::string ref = opt<std::string>(doc, "reference", "auto", "config");
    if (ref != "auto" && ref != "none")
        bad("config: reference must be 'auto' or 'none'");
    cfg.want_reference = ref == "auto";

    cfg.output_dir = req<std::string>(doc, "output_dir", "config");
    if (cfg.output_dir.empty()) bad("config: output_dir must be non-empty");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return parse_experiment_config(parse_json_file(path, "config"));
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
    std::string out = "iteration,elapsed_s,primal,dual,gap,dist_sq\n";
    char buf[128];
    const auto put = [&](const std::optional<double>& v) {
        if (v) {
            std::snprintf(buf, sizeof buf, "%.17g", *v);
            out += buf;
        }
    };
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,", r.iteration, r.elapsed_s, r.primal);
        out += buf;
        put(r.dual);
        out += ',';
        put(r.gap);
        out += ',';
        put(r.dist_sq);
        out += '\n';
    }
    return out;
}

std::vector<TraceRecord> parse_trace_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "iteration,elapsed_s,primal,dual,gap,dist_sq")
        throw parse_error("bad or missing CSV header", 1);
    std::vector<TraceRecord> trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t k = 0; k <= line.size(); ++k) {
            if (k == line.size() || line[k] == ',') {
                fields.push_back(line.substr(start, k - start));
                start = k + 1;
            }
        }
        if (fields.size() != 6) throw parse_error("expected 6 fields", line_no);
        try {
            TraceRecord r;
            r.iteration = std::stoull(fields[0]);
            r.elapsed_s = std::stod(fields[1]);
            r.primal = std::stod(fields[2]);
            if (!fields[3].empty()) r.dual = std::stod(fields[3]);
            if (!fields[4].empty()) r.gap = std::stod(fields[4]);
            if (!fields[5].empty()) r.dist_sq = std::stod(fields[5]);
            trace.push_back(std::move(r));
        } catch (const std::exception&) {
            throw parse_error("non-numeric field", line_no);
        }
    }
    return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    Problem prob = instantiate(cfg.instance);
    const std::size_t nb = prob.n_blocks(), pb = prob.p_blocks();

    // Everything that can fail is resolved before the output directory is
    // created: solver parameters (including injected theta), the checkpoint
    // schedule, and the reference solution.
    struct Prepared {
        const SolverSpec* spec;
        std::optional<SolverParams> params;
    };
    std::vector<Prepared> prepared;
    for (const auto& s : cfg.solvers) {
        Prepared pr{&s, std::nullopt};
        if (s.name == "dspdc" || s.name == "spdc") {
            const std::size_t q = s.name == "spdc" ? pb : s.q;
            if (q == 0 || q > pb)
                bad("solver '" + s.label + "': q must be in [1, " + std::to_string(pb) + "]");
            if (s.m == 0 || s.m > nb)
                bad("solver '" + s.label + "': m must be in [1, " + std::to_string(nb) + "]");
            const double lam =
                s.lambda_policy == LambdaPolicy::exact
                    ? scale_constant_exact(prob.a, prob.dual_part, prob.primal_part, q, s.m)
                    : scale_constant_heuristic(prob.a, prob.dual_part, prob.primal_part, q, s.m);
            SolverParams sp =
                compute_params(nb, pb, q, s.m, prob.lambda(), prob.gamma(), lam, s.mode);
            if (s.theta_override) sp.theta = *s.theta_override;
            sp.validate();
            pr.params = sp;
        } else if (!prob.reg.has_conjugate()) {
            bad("solver '" + s.label + "': sdca needs a dual objective, which the configured "
                "regularizer does not admit");
        }
        prepared.push_back(pr);
    }

    const std::vector<std::size_t> checkpoints = cfg.checkpoints.expand(cfg.max_iters);

    std::optional<ReferenceSolution> ref;
    if (cfg.want_reference) ref = certify_reference(prob);

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) bad("output_dir '" + cfg.output_dir + "': " + ec.message());
    {
        const fs::path probe = fs::path(cfg.output_dir) / ".write-probe";
        std::ofstream out(probe);
        if (!out) bad("output_dir '" + cfg.output_dir + "' is not writable");
        out.close();
        fs::remove(probe, ec);
    }

    ExperimentResult result;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& pr : prepared) {
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            RunOptions opts;
            opts.seed = cfg.base_seed + rep;
            opts.max_iters = cfg.max_iters;
            opts.checkpoints = checkpoints;
            opts.gap_tolerance = cfg.gap_tolerance;
            if (ref) opts.reference = &*ref;

            const RunResult res = pr.spec->name == "sdca"
                                      ? sdca_run(prob, opts)
                                      : run_dspdc_auto(prob, *pr.params, opts);

            const std::string fname =
                pr.spec->label + "_seed" + std::to_string(opts.seed) + ".csv";
            const fs::path csv_path = fs::path(cfg.output_dir) / fname;
            std::ofstream out(csv_path);
            if (!out) bad("cannot write '" + csv_path.string() + "'");
            out << trace_to_csv(res.trace);
            out.close();
            result.csv_paths.push_back(csv_path.string());

            const TraceRecord& last = res.trace.back();
            nlohmann::json run{{"solver", pr.spec->label},
                               {"name", pr.spec->name},
                               {"seed", opts.seed},
                               {"csv", fname},
                               {"rows", res.trace.size()},
                               {"final_iteration", last.iteration},
                               {"final_primal", last.primal},
                               {"stopped_early", res.stopped_early},
                               {"divergence_warning", res.divergence_warning}};
            if (last.gap) run["final_gap"] = *last.gap;
            if (last.dist_sq) run["final_dist_sq"] = *last.dist_sq;
            runs.push_back(std::move(run));
        }
    }

    nlohmann::json manifest{{"format", "dspdc-manifest"},
                            {"version", kVersion},
                            {"config_hash", hex16(json_hash(cfg.raw))},
                            {"config", cfg.raw},
                            {"instance_provenance", prob.provenance},
                            {"runs", runs}};
    manifest["reference"] =
        ref ? nlohmann::json{{"source", ref->source},
                             {"gap_at_certification", ref->gap_at_certification},
                             {"provenance_hash", hex16(ref->provenance_hash)}}
            : nlohmann::json(nullptr);

    const fs::path mpath = fs::path(cfg.output_dir) / "manifest.json";
    std::ofstream mout(mpath);
    if (!mout) bad("cannot write '" + mpath.string() + "'");
    mout << manifest.dump(2) << '\n';
    result.manifest_path = mpath.string();
    return result;
}

VerifyConfig parse_verify_config(const nlohmann::json& doc) {
    if (!doc.is_object()) bad("verify config: expected a JSON object");
    VerifyConfig cfg;
    cfg.raw = doc;
    if (!doc.contains("instance")) bad("verify config: missing field 'instance'");
    cfg.instance = doc.at("instance");
    cfg.q = opt<std::size_t>(doc, "q", 1, "verify config");
    cfg.m = opt<std::size_t>(doc, "m", 1, "verify config");
    cfg.lambda_policy =
        parse_policy(opt<std::string>(doc, "lambda_policy", "exact", "verify config"),
                     "verify config");
    cfg.seeds = opt<std::size_t>(doc, "seeds", 50, "verify config");
    if (cfg.seeds == 0) bad("verify config: seeds must be >= 1");
    cfg.base_seed = opt<std::uint64_t>(doc, "base_seed", 0, "verify config");
    cfg.checkpoints = req<std::vector<std::size_t>>(doc, "checkpoints", "verify config");
    check_strictly_increasing(cfg.checkpoints, "verify config");
    if (cfg.checkpoints.empty()) bad("verify config: at least one checkpoint required");
    cfg.slack = opt<double>(doc, "slack", 1.5, "verify config");
    if (!(cfg.slack >= 1.0)) bad("verify config: slack must be >= 1");
    cfg.theta_scale = opt<double>(doc, "theta_scale", 1.0, "verify config");
    return cfg;
}

VerifyConfig load_verify_config(const std::string& path) {
    return parse_verify_config(parse_json_file(path, "verify config"));
}

nlohmann::json verify_theorems(const VerifyConfig& cfg) {
    Problem prob = instantiate(cfg.instance);
    const std::size_t nb = prob.n_blocks(), pb = prob.p_blocks();
    if (cfg.q == 0 || cfg.q > pb || cfg.m == 0 || cfg.m > nb)
        bad("verify config: (q, m) out of range for the instance");

    const double lam_c =
        cfg.lambda_policy == LambdaPolicy::exact
            ? scale_constant_exact(prob.a, prob.dual_part, prob.primal_part, cfg.q, cfg.m)
            : scale_constant_heuristic(prob.a, prob.dual_part, prob.primal_part, cfg.q, cfg.m);
    const double lambda = prob.lambda(), gamma = prob.gamma();
    SolverParams sp_dist =
        compute_params(nb, pb, cfg.q, cfg.m, lambda, gamma, lam_c, ThetaMode::distance);
    SolverParams sp_gap = compute_params(nb, pb, cfg.q, cfg.m, lambda, gamma, lam_c, ThetaMode::gap);
    sp_dist.theta *= cfg.theta_scale;
    sp_gap.theta *= cfg.theta_scale;
    sp_dist.validate();  // rejects an injected theta before any run starts
    sp_gap.validate();

    const ReferenceSolution ref = certify_reference(prob);
    const double rho_d = distance_rate(nb, pb, cfg.q, cfg.m, lambda, gamma, lam_c);
    const double rho_g = gap_rate(nb, pb, cfg.q, cfg.m, lambda, gamma, lam_c);

    const std::vector<double> x0(prob.p_cols(), 0.0), y0(prob.n_rows(), 0.0);
    const double omega0 = omega_potential(sp_dist, x0, y0, ref.point, /*initial=*/true);

    const double n = static_cast<double>(nb), p = static_cast<double>(pb);
    const double q = static_cast<double>(cfg.q), m = static_cast<double>(cfg.m);
    const auto gap0 = duality_gap(prob, x0, y0);
    if (!gap0) bad("verify config: the instance has no dual objective, so the gap bound "
                   "cannot be checked");
    const double a_norm_sq = spectral_norm_sq(prob.a);
    const double front =
        1.0 / std::min(p / q, n / m) +
        std::max(a_norm_sq / (n * gamma), a_norm_sq / (lambda * n * n)) /
            std::min(lambda * p / q, gamma / m);
    const double bracket =
        (p / (2.0 * q * sp_gap.tau) + p * lambda / (2.0 * q)) * dist_sq(x0, ref.point.x) +
        (n / (2.0 * m * sp_gap.sigma) + gamma / (2.0 * m)) * dist_sq(y0, ref.point.y) +
        std::max(p / q, n / m) * *gap0;
    const double c_gap = front * bracket;

    const std::size_t ncp = cfg.checkpoints.size();
    std::vector<double> omega_sum(ncp, 0.0), gap_sum(ncp, 0.0);
    for (std::size_t s = 0; s < cfg.seeds; ++s) {
        RunOptions opts;
        opts.seed = cfg.base_seed + s;
        opts.max_iters = cfg.checkpoints.back();
        opts.checkpoints = cfg.checkpoints;
        opts.reference = &ref;

        std::size_t ci = 0;
        opts.observer = [&](const IterateState& st) {
            if (ci < ncp && st.iteration == cfg.checkpoints[ci]) {
                omega_sum[ci] += omega_potential(sp_dist, st.x, st.y, ref.point, false);
                ++ci;
            }
        };
        run_dspdc_auto(prob, sp_dist, opts);

        RunOptions gopts;
        gopts.seed = cfg.base_seed + s;
        gopts.max_iters = cfg.checkpoints.back();
        gopts.checkpoints = cfg.checkpoints;
        gopts.reference = &ref;
        const RunResult rg = run_dspdc_auto(prob, sp_gap, gopts);
        for (std::size_t k = 0; k < ncp; ++k) gap_sum[k] += *rg.trace[k + 1].gap;
    }

    const auto ratio_of = [](double mean, double bound) {
        if (bound > 0.0) return mean / bound;
        return mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    };
    nlohmann::json t1 = nlohmann::json::array(), t2 = nlohmann::json::array();
    bool pass1 = true, pass2 = true;
    for (std::size_t k = 0; k < ncp; ++k) {
        const double t = static_cast<double>(cfg.checkpoints[k]);
        const double mean_omega = omega_sum[k] / static_cast<double>(cfg.seeds);
        const double bound1 = std::pow(rho_d, t) * omega0;
        const bool ok1 = mean_omega <= cfg.slack * bound1;
        pass1 = pass1 && ok1;
        t1.push_back({{"iteration", cfg.checkpoints[k]},
                      {"mean_omega", mean_omega},
                      {"bound", bound1},
                      {"ratio", ratio_of(mean_omega, bound1)},
                      {"pass", ok1}});

        const double mean_gap = gap_sum[k] / static_cast<double>(cfg.seeds);
        const double bound2 = std::pow(rho_g, t) * c_gap;
        const bool ok2 = mean_gap <= cfg.slack * bound2;
        pass2 = pass2 && ok2;
        t2.push_back({{"iteration", cfg.checkpoints[k]},
                      {"mean_gap", mean_gap},
                      {"bound", bound2},
                      {"ratio", ratio_of(mean_gap, bound2)},
                      {"pass", ok2}});
    }

    return nlohmann::json{
        {"format", "dspdc-verify-report"},
        {"version", kVersion},
        {"config_hash", hex16(json_hash(cfg.raw))},
        {"instance_provenance", prob.provenance},
        {"seeds", cfg.seeds},
        {"slack", cfg.slack},
        {"q", cfg.q},
        {"m", cfg.m},
        {"params",
         {{"Lambda", lam_c},
          {"tau", sp_dist.tau},
          {"sigma", sp_dist.sigma},
          {"theta_distance", sp_dist.theta},
          {"theta_gap", sp_gap.theta},
          {"rho_distance", rho_d},
          {"rho_gap", rho_g},
          {"omega0", omega0},
          {"gap_constant", c_gap}}},
        {"theorem1", {{"checkpoints", t1}, {"pass", pass1}}},
        {"theorem2", {{"checkpoints", t2}, {"pass", pass2}}},
        {"pass", pass1 && pass2}};
}

}  // namespace dspdc
