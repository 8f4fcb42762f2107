#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dspdc {

// Dense row-major matrix.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // rows * cols, row-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
    DenseMatrix(std::size_t r, std::size_t c, std::vector<double> v);

    double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
    std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

// Partition of row/column index ranges into contiguous blocks. Block b covers
// [offset(b), offset(b) + size(b)).
class BlockPartition {
public:
    BlockPartition() = default;
    explicit BlockPartition(std::vector<std::size_t> sizes);
    static BlockPartition all_ones(std::size_t count);
    static BlockPartition uniform(std::size_t count, std::size_t block_size);

    std::size_t blocks() const { return sizes_.size(); }
    std::size_t total() const { return total_; }
    std::size_t size(std::size_t b) const { return sizes_[b]; }
    std::size_t offset(std::size_t b) const { return offsets_[b]; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }
    bool is_all_ones() const;

private:
    std::vector<std::size_t> sizes_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
};

// Data matrix A (n rows = instances, p cols = features) behind one of three
// storages: dense, sparse (CSR and CSC are both kept so row and column access
// are cheap), or factorized A = U V with U: n x d, V: d x p.
class DataMatrix {
public:
    enum class Storage { dense, sparse, factorized };

    static DataMatrix dense(DenseMatrix a);
    static DataMatrix dense(std::size_t n, std::size_t p, std::vector<double> row_major);
    static DataMatrix sparse(std::size_t n, std::size_t p, const std::vector<Triplet>& entries);
    // u_rows: n x d row-major; v_cols: the matrix V stored as p rows of length
    // d (i.e. V transposed), so both factor accesses are contiguous.
    static DataMatrix factorized(DenseMatrix u_rows, DenseMatrix v_cols_t);

    Storage storage() const { return storage_; }
    std::size_t rows() const { return n_; }
    std::size_t cols() const { return p_; }
    std::size_t inner_dim() const { return d_; }  // factorized only (0 otherwise)
    std::size_t nnz() const;

    double entry(std::size_t i, std::size_t j) const;

    // out = A x  (out has n entries)
    void apply(std::span<const double> x, std::span<double> out) const;
    // out = A^T y  (out has p entries)
    void apply_transpose(std::span<const double> y, std::span<double> out) const;

    double row_dot(std::size_t i, std::span<const double> x) const;      // <A_i, x>
    double col_dot(std::size_t j, std::span<const double> y) const;      // <A^j, y>
    void add_row_scaled(std::size_t i, double c, std::span<double> acc) const;  // acc += c A_i
    void add_col_scaled(std::size_t j, double c, std::span<double> acc) const;  // acc += c A^j

    // Sub-block A_i^j x_j for a block partition pair; out has row-block i's size.
    void block_apply(const BlockPartition& row_part, const BlockPartition& col_part,
                     std::size_t i, std::size_t j, std::span<const double> x_j,
                     std::span<double> out) const;
    // (A_i^j)^T y_i; out has column-block j's size.
    void block_apply_transpose(const BlockPartition& row_part, const BlockPartition& col_part,
                               std::size_t i, std::size_t j, std::span<const double> y_i,
                               std::span<double> out) const;

    // Materialize as dense; throws capacity_error above the entry cap.
    DenseMatrix materialize(std::size_t entry_cap = 100'000'000) const;

    // Factorized accessors (throw unless storage == factorized).
    std::span<const double> u_row(std::size_t i) const;
    std::span<const double> v_col(std::size_t j) const;
    const DenseMatrix& u_factor() const;
    const DenseMatrix& v_factor_t() const;

private:
    DataMatrix() = default;
    void require_factorized(const char* op) const;

    Storage storage_ = Storage::dense;
    std::size_t n_ = 0, p_ = 0, d_ = 0;

    DenseMatrix dense_;  // dense storage

    // sparse storage: CSR + CSC
    std::vector<std::size_t> csr_ptr_, csr_col_;
    std::vector<double> csr_val_;
    std::vector<std::size_t> csc_ptr_, csc_row_;
    std::vector<double> csc_val_;

    // factorized storage
    DenseMatrix u_;    // n x d
    DenseMatrix vt_;   // p x d (V transposed)
};

}  // namespace dspdc
