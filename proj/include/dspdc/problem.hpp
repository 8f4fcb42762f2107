#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dspdc/matrix.hpp"
#include "dspdc/prox.hpp"

namespace dspdc {

// A primal-dual pair, typically the saddle point.
struct SaddlePoint {
    std::vector<double> x;
    std::vector<double> y;
};

// Regularized ERM saddle problem
//   min_x max_y  g(x) + (1/n) y^T A x - (1/n) sum_i phi_i*(y_i)
// with per-scalar-row losses (blocks act coordinate-wise on the dual side),
// one regularizer family on the primal side, and block partitions for the
// doubly stochastic block solver (all-ones for scalar coordinates).
struct Problem {
    DataMatrix a;
    std::vector<SmoothLoss> losses;  // one per scalar dual coordinate
    Regularizer reg;
    BlockPartition dual_part;    // rows; dual_part.total() == a.rows()
    BlockPartition primal_part;  // cols; primal_part.total() == a.cols()
    nlohmann::json provenance;   // generator name, parameters, seed
    std::optional<SaddlePoint> closed_form;

    std::size_t n_rows() const { return a.rows(); }
    std::size_t p_cols() const { return a.cols(); }
    std::size_t n_blocks() const { return dual_part.blocks(); }
    std::size_t p_blocks() const { return primal_part.blocks(); }

    // Strong convexity of g (per coordinate / block).
    double lambda() const { return reg.lambda; }
    // Strong convexity of the loss conjugates (minimum over rows).
    double gamma() const;

    // Structural checks; throws std::invalid_argument on mismatch.
    void validate() const;
};

// Helper for assembling scalar problems: all-ones partitions.
Problem make_scalar_problem(DataMatrix a, std::vector<SmoothLoss> losses, Regularizer reg,
                            nlohmann::json provenance = {});

// Self-describing JSON serialization; doubles round-trip exactly.
nlohmann::json problem_to_json(const Problem& p);
Problem problem_from_json(const nlohmann::json& j);
void save_problem(const Problem& p, const std::string& path);
Problem load_problem(const std::string& path);

// Stable FNV-1a hash of a canonically serialized JSON value.
std::uint64_t json_hash(const nlohmann::json& j);

}  // namespace dspdc
