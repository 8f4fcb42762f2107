#include "dspdc/problem.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "dspdc/errors.hpp"

namespace dspdc {

namespace {

std::string loss_kind_name(SmoothLoss::Kind k) {
    switch (k) {
        case SmoothLoss::Kind::square: return "square";
        case SmoothLoss::Kind::logistic: return "logistic";
        case SmoothLoss::Kind::smoothed_hinge: return "smoothed_hinge";
    }
    return "?";
}

SmoothLoss::Kind loss_kind_from_name(const std::string& s) {
    if (s == "square") return SmoothLoss::Kind::square;
    if (s == "logistic") return SmoothLoss::Kind::logistic;
    if (s == "smoothed_hinge") return SmoothLoss::Kind::smoothed_hinge;
    throw parse_error("unknown loss kind '" + s + "'");
}

std::string reg_kind_name(Regularizer::Kind k) {
    switch (k) {
        case Regularizer::Kind::l2: return "l2";
        case Regularizer::Kind::elastic_net: return "elastic_net";
        case Regularizer::Kind::psd_frobenius: return "psd_frobenius";
    }
    return "?";
}

}  // namespace

double Problem::gamma() const {
    double g = losses.empty() ? 0.0 : losses[0].gamma;
    for (const auto& l : losses) g = std::min(g, l.gamma);
    return g;
}

void Problem::validate() const {
    if (dual_part.total() != a.rows())
        throw std::invalid_argument("Problem: dual partition covers " +
                                    std::to_string(dual_part.total()) + " rows, matrix has " +
                                    std::to_string(a.rows()));
    if (primal_part.total() != a.cols())
        throw std::invalid_argument("Problem: primal partition covers " +
                                    std::to_string(primal_part.total()) + " cols, matrix has " +
                                    std::to_string(a.cols()));
    if (losses.size() != a.rows())
        throw std::invalid_argument("Problem: need one loss per row (" + std::to_string(losses.size()) +
                                    " vs " + std::to_string(a.rows()) + ")");
    for (const auto& l : losses)
        if (l.kind != losses[0].kind)
            throw std::invalid_argument("Problem: losses must share one kind");
    if (reg.kind == Regularizer::Kind::psd_frobenius) {
        for (std::size_t b = 0; b < primal_part.blocks(); ++b)
            if (primal_part.size(b) != reg.block_len())
                throw std::invalid_argument("Problem: psd regularizer needs primal blocks of length d*d");
    }
    if (closed_form) {
        if (closed_form->x.size() != a.cols() || closed_form->y.size() != a.rows())
            throw std::invalid_argument("Problem: closed-form saddle point has wrong dimensions");
    }
}

Problem make_scalar_problem(DataMatrix a, std::vector<SmoothLoss> losses, Regularizer reg,
                            nlohmann::json provenance) {
    const std::size_t n = a.rows(), p = a.cols();
    Problem out{.a = std::move(a),
                .losses = std::move(losses),
                .reg = reg,
                .dual_part = BlockPartition::all_ones(n),
                .primal_part = BlockPartition::all_ones(p),
                .provenance = std::move(provenance),
                .closed_form = std::nullopt};
    out.validate();
    return out;
}

nlohmann::json problem_to_json(const Problem& p) {
    nlohmann::json j;
    j["format"] = "dspdc-problem";
    j["version"] = 1;
    j["rows"] = p.a.rows();
    j["cols"] = p.a.cols();
    j["provenance"] = p.provenance;

    nlohmann::json jm;
    switch (p.a.storage()) {
        case DataMatrix::Storage::dense: {
            jm["storage"] = "dense";
            jm["values"] = p.a.materialize().values;
            break;
        }
        case DataMatrix::Storage::sparse: {
            jm["storage"] = "sparse";
            nlohmann::json rows = nlohmann::json::array(), cols = nlohmann::json::array(),
                           vals = nlohmann::json::array();
            for (std::size_t i = 0; i < p.a.rows(); ++i)
                for (std::size_t jj = 0; jj < p.a.cols(); ++jj) {
                    const double v = p.a.entry(i, jj);
                    if (v != 0.0) {
                        rows.push_back(i);
                        cols.push_back(jj);
                        vals.push_back(v);
                    }
                }
            jm["rows"] = std::move(rows);
            jm["cols"] = std::move(cols);
            jm["values"] = std::move(vals);
            break;
        }
        case DataMatrix::Storage::factorized: {
            jm["storage"] = "factorized";
            jm["inner_dim"] = p.a.inner_dim();
            jm["u"] = p.a.u_factor().values;
            jm["vt"] = p.a.v_factor_t().values;
            break;
        }
    }
    j["matrix"] = std::move(jm);

    nlohmann::json jl;
    jl["kind"] = loss_kind_name(p.losses.empty() ? SmoothLoss::Kind::square : p.losses[0].kind);
    std::vector<double> bs(p.losses.size()), gs(p.losses.size());
    for (std::size_t i = 0; i < p.losses.size(); ++i) {
        bs[i] = p.losses[i].b;
        gs[i] = p.losses[i].gamma;
    }
    jl["labels"] = bs;
    jl["gammas"] = gs;
    j["losses"] = std::move(jl);

    nlohmann::json jr;
    jr["kind"] = reg_kind_name(p.reg.kind);
    jr["lambda"] = p.reg.lambda;
    if (p.reg.kind == Regularizer::Kind::elastic_net) jr["l1"] = p.reg.l1;
    if (p.reg.kind == Regularizer::Kind::psd_frobenius) jr["dim"] = p.reg.dim;
    j["regularizer"] = std::move(jr);

    if (!p.dual_part.is_all_ones()) j["dual_blocks"] = p.dual_part.sizes();
    if (!p.primal_part.is_all_ones()) j["primal_blocks"] = p.primal_part.sizes();
    if (p.closed_form) {
        j["closed_form"]["x"] = p.closed_form->x;
        j["closed_form"]["y"] = p.closed_form->y;
    }
    return j;
}

Problem problem_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != "dspdc-problem")
        throw parse_error("not a dspdc-problem document");
    const std::size_t n = j.at("rows").get<std::size_t>();
    const std::size_t p = j.at("cols").get<std::size_t>();

    DataMatrix a = [&]() -> DataMatrix {
        const auto& jm = j.at("matrix");
        const std::string storage = jm.at("storage").get<std::string>();
        if (storage == "dense")
            return DataMatrix::dense(n, p, jm.at("values").get<std::vector<double>>());
        if (storage == "sparse") {
            const auto rows = jm.at("rows").get<std::vector<std::size_t>>();
            const auto cols = jm.at("cols").get<std::vector<std::size_t>>();
            const auto vals = jm.at("values").get<std::vector<double>>();
            if (rows.size() != cols.size() || rows.size() != vals.size())
                throw parse_error("sparse matrix arrays have mismatched lengths");
            std::vector<Triplet> ts(rows.size());
            for (std::size_t k = 0; k < ts.size(); ++k) ts[k] = {rows[k], cols[k], vals[k]};
            return DataMatrix::sparse(n, p, ts);
        }
        if (storage == "factorized") {
            const std::size_t d = jm.at("inner_dim").get<std::size_t>();
            return DataMatrix::factorized(
                DenseMatrix(n, d, jm.at("u").get<std::vector<double>>()),
                DenseMatrix(p, d, jm.at("vt").get<std::vector<double>>()));
        }
        throw parse_error("unknown matrix storage '" + storage + "'");
    }();

    const auto& jl = j.at("losses");
    const auto kind = loss_kind_from_name(jl.at("kind").get<std::string>());
    const auto labels = jl.at("labels").get<std::vector<double>>();
    const auto gammas = jl.at("gammas").get<std::vector<double>>();
    if (labels.size() != n || gammas.size() != n)
        throw parse_error("losses arrays must have one entry per row");
    std::vector<SmoothLoss> losses(n);
    for (std::size_t i = 0; i < n; ++i) losses[i] = {kind, labels[i], gammas[i]};

    const auto& jr = j.at("regularizer");
    const std::string rk = jr.at("kind").get<std::string>();
    Regularizer reg;
    if (rk == "l2")
        reg = Regularizer::l2(jr.at("lambda").get<double>());
    else if (rk == "elastic_net")
        reg = Regularizer::elastic_net(jr.at("lambda").get<double>(), jr.at("l1").get<double>());
    else if (rk == "psd_frobenius")
        reg = Regularizer::psd_frobenius(jr.at("lambda").get<double>(),
                                         jr.at("dim").get<std::size_t>());
    else
        throw parse_error("unknown regularizer kind '" + rk + "'");

    Problem out{.a = std::move(a),
                .losses = std::move(losses),
                .reg = reg,
                .dual_part = j.contains("dual_blocks")
                                 ? BlockPartition(j.at("dual_blocks").get<std::vector<std::size_t>>())
                                 : BlockPartition::all_ones(n),
                .primal_part =
                    j.contains("primal_blocks")
                        ? BlockPartition(j.at("primal_blocks").get<std::vector<std::size_t>>())
                        : BlockPartition::all_ones(p),
                .provenance = j.value("provenance", nlohmann::json::object()),
                .closed_form = std::nullopt};
    if (j.contains("closed_form")) {
        SaddlePoint s;
        s.x = j.at("closed_form").at("x").get<std::vector<double>>();
        s.y = j.at("closed_form").at("y").get<std::vector<double>>();
        out.closed_form = std::move(s);
    }
    out.validate();
    return out;
}

void save_problem(const Problem& p, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_problem: cannot open '" + path + "' for writing");
    f << problem_to_json(p).dump(2) << "\n";
    if (!f) throw std::runtime_error("save_problem: write to '" + path + "' failed");
}

Problem load_problem(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_problem: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return problem_from_json(j);
}

std::uint64_t json_hash(const nlohmann::json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace dspdc
