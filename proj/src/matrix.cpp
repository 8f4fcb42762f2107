#include "dspdc/matrix.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dspdc/errors.hpp"
#include "dspdc/vec.hpp"

namespace dspdc {

DenseMatrix::DenseMatrix(std::size_t r, std::size_t c, std::vector<double> v)
    : rows(r), cols(c), values(std::move(v)) {
    if (values.size() != rows * cols)
        throw std::invalid_argument("DenseMatrix: values size " + std::to_string(values.size()) +
                                    " != rows*cols " + std::to_string(rows * cols));
}

BlockPartition::BlockPartition(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    offsets_.reserve(sizes_.size());
    for (std::size_t s : sizes_) {
        if (s == 0) throw std::invalid_argument("BlockPartition: zero-size block");
        offsets_.push_back(total_);
        total_ += s;
    }
}

BlockPartition BlockPartition::all_ones(std::size_t count) {
    return BlockPartition(std::vector<std::size_t>(count, 1));
}

BlockPartition BlockPartition::uniform(std::size_t count, std::size_t block_size) {
    return BlockPartition(std::vector<std::size_t>(count, block_size));
}

bool BlockPartition::is_all_ones() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [](std::size_t s) { return s == 1; });
}

DataMatrix DataMatrix::dense(DenseMatrix a) {
    DataMatrix m;
    m.storage_ = Storage::dense;
    m.n_ = a.rows;
    m.p_ = a.cols;
    m.dense_ = std::move(a);
    return m;
}

DataMatrix DataMatrix::dense(std::size_t n, std::size_t p, std::vector<double> row_major) {
    return dense(DenseMatrix(n, p, std::move(row_major)));
}

DataMatrix DataMatrix::sparse(std::size_t n, std::size_t p, const std::vector<Triplet>& entries) {
    DataMatrix m;
    m.storage_ = Storage::sparse;
    m.n_ = n;
    m.p_ = p;
    for (const auto& t : entries)
        if (t.row >= n || t.col >= p)
            throw std::invalid_argument("DataMatrix::sparse: entry (" + std::to_string(t.row) + "," +
                                        std::to_string(t.col) + ") outside " + std::to_string(n) + "x" +
                                        std::to_string(p));
    std::vector<std::size_t> order(entries.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;

    // CSR: sort by (row, col); duplicate coordinates are rejected.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = entries[a];
        const auto& eb = entries[b];
        return ea.row != eb.row ? ea.row < eb.row : ea.col < eb.col;
    });
    m.csr_ptr_.assign(n + 1, 0);
    m.csr_col_.reserve(entries.size());
    m.csr_val_.reserve(entries.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& e = entries[order[k]];
        if (k > 0) {
            const auto& prev = entries[order[k - 1]];
            if (prev.row == e.row && prev.col == e.col)
                throw std::invalid_argument("DataMatrix::sparse: duplicate entry at (" +
                                            std::to_string(e.row) + "," + std::to_string(e.col) + ")");
        }
        m.csr_ptr_[e.row + 1]++;
        m.csr_col_.push_back(e.col);
        m.csr_val_.push_back(e.value);
    }
    for (std::size_t i = 0; i < n; ++i) m.csr_ptr_[i + 1] += m.csr_ptr_[i];

    // CSC: sort by (col, row).
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = entries[a];
        const auto& eb = entries[b];
        return ea.col != eb.col ? ea.col < eb.col : ea.row < eb.row;
    });
    m.csc_ptr_.assign(p + 1, 0);
    m.csc_row_.reserve(entries.size());
    m.csc_val_.reserve(entries.size());
    for (std::size_t k : order) {
        const auto& e = entries[k];
        m.csc_ptr_[e.col + 1]++;
        m.csc_row_.push_back(e.row);
        m.csc_val_.push_back(e.value);
    }
    for (std::size_t j = 0; j < p; ++j) m.csc_ptr_[j + 1] += m.csc_ptr_[j];
    return m;
}

DataMatrix DataMatrix::factorized(DenseMatrix u_rows, DenseMatrix v_cols_t) {
    if (u_rows.cols != v_cols_t.cols)
        throw std::invalid_argument("DataMatrix::factorized: inner dims differ (U has d=" +
                                    std::to_string(u_rows.cols) + ", V has d=" +
                                    std::to_string(v_cols_t.cols) + ")");
    DataMatrix m;
    m.storage_ = Storage::factorized;
    m.n_ = u_rows.rows;
    m.p_ = v_cols_t.rows;
    m.d_ = u_rows.cols;
    m.u_ = std::move(u_rows);
    m.vt_ = std::move(v_cols_t);
    return m;
}

std::size_t DataMatrix::nnz() const {
    switch (storage_) {
        case Storage::dense: return n_ * p_;
        case Storage::sparse: return csr_val_.size();
        case Storage::factorized: return n_ * p_;
    }
    return 0;
}

double DataMatrix::entry(std::size_t i, std::size_t j) const {
    switch (storage_) {
        case Storage::dense: return dense_.at(i, j);
        case Storage::sparse: {
            const auto begin = csr_col_.begin() + static_cast<std::ptrdiff_t>(csr_ptr_[i]);
            const auto end = csr_col_.begin() + static_cast<std::ptrdiff_t>(csr_ptr_[i + 1]);
            const auto it = std::lower_bound(begin, end, j);
            if (it != end && *it == j) return csr_val_[static_cast<std::size_t>(it - csr_col_.begin())];
            return 0.0;
        }
        case Storage::factorized: return dot(u_.row(i), vt_.row(j));
    }
    return 0.0;
}

void DataMatrix::apply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != p_ || out.size() != n_)
        throw std::invalid_argument("DataMatrix::apply: dimension mismatch");
    switch (storage_) {
        case Storage::dense:
            for (std::size_t i = 0; i < n_; ++i) out[i] = dot(dense_.row(i), x);
            break;
        case Storage::sparse:
            for (std::size_t i = 0; i < n_; ++i) {
                double s = 0.0;
                for (std::size_t k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k)
                    s += csr_val_[k] * x[csr_col_[k]];
                out[i] = s;
            }
            break;
        case Storage::factorized: {
            // A x = U (V x), never materializing A
            std::vector<double> w(d_, 0.0);
            for (std::size_t j = 0; j < p_; ++j) axpy(x[j], vt_.row(j), w);
            for (std::size_t i = 0; i < n_; ++i) out[i] = dot(u_.row(i), w);
            break;
        }
    }
}

void DataMatrix::apply_transpose(std::span<const double> y, std::span<double> out) const {
    if (y.size() != n_ || out.size() != p_)
        throw std::invalid_argument("DataMatrix::apply_transpose: dimension mismatch");
    switch (storage_) {
        case Storage::dense: {
            std::fill(out.begin(), out.end(), 0.0);
            for (std::size_t i = 0; i < n_; ++i) axpy(y[i], dense_.row(i), out);
            break;
        }
        case Storage::sparse: {
            std::fill(out.begin(), out.end(), 0.0);
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k)
                    out[csr_col_[k]] += csr_val_[k] * y[i];
            break;
        }
        case Storage::factorized: {
            std::vector<double> w(d_, 0.0);
            for (std::size_t i = 0; i < n_; ++i) axpy(y[i], u_.row(i), w);
            for (std::size_t j = 0; j < p_; ++j) out[j] = dot(vt_.row(j), w);
            break;
        }
    }
}

double DataMatrix::row_dot(std::size_t i, std::span<const double> x) const {
    switch (storage_) {
        case Storage::dense: return dot(dense_.row(i), x);
        case Storage::sparse: {
            double s = 0.0;
            for (std::size_t k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k) s += csr_val_[k] * x[csr_col_[k]];
            return s;
        }
        case Storage::factorized: {
            // <A_i, x> = <U_i, V x>
            double s = 0.0;
            const auto ui = u_.row(i);
            for (std::size_t k = 0; k < d_; ++k) {
                double vk = 0.0;
                for (std::size_t j = 0; j < p_; ++j) vk += vt_.at(j, k) * x[j];
                s += ui[k] * vk;
            }
            return s;
        }
    }
    return 0.0;
}

double DataMatrix::col_dot(std::size_t j, std::span<const double> y) const {
    switch (storage_) {
        case Storage::dense: {
            double s = 0.0;
            for (std::size_t i = 0; i < n_; ++i) s += dense_.at(i, j) * y[i];
            return s;
        }
        case Storage::sparse: {
            double s = 0.0;
            for (std::size_t k = csc_ptr_[j]; k < csc_ptr_[j + 1]; ++k) s += csc_val_[k] * y[csc_row_[k]];
            return s;
        }
        case Storage::factorized: {
            double s = 0.0;
            const auto vj = vt_.row(j);
            for (std::size_t k = 0; k < d_; ++k) {
                double uk = 0.0;
                for (std::size_t i = 0; i < n_; ++i) uk += u_.at(i, k) * y[i];
                s += vj[k] * uk;
            }
            return s;
        }
    }
    return 0.0;
}

void DataMatrix::add_row_scaled(std::size_t i, double c, std::span<double> acc) const {
    switch (storage_) {
        case Storage::dense:
            axpy(c, dense_.row(i), acc);
            break;
        case Storage::sparse:
            for (std::size_t k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k) acc[csr_col_[k]] += c * csr_val_[k];
            break;
        case Storage::factorized:
            for (std::size_t j = 0; j < p_; ++j) acc[j] += c * dot(u_.row(i), vt_.row(j));
            break;
    }
}

void DataMatrix::add_col_scaled(std::size_t j, double c, std::span<double> acc) const {
    switch (storage_) {
        case Storage::dense:
            for (std::size_t i = 0; i < n_; ++i) acc[i] += c * dense_.at(i, j);
            break;
        case Storage::sparse:
            for (std::size_t k = csc_ptr_[j]; k < csc_ptr_[j + 1]; ++k) acc[csc_row_[k]] += c * csc_val_[k];
            break;
        case Storage::factorized:
            for (std::size_t i = 0; i < n_; ++i) acc[i] += c * dot(u_.row(i), vt_.row(j));
            break;
    }
}

void DataMatrix::block_apply(const BlockPartition& row_part, const BlockPartition& col_part,
                             std::size_t i, std::size_t j, std::span<const double> x_j,
                             std::span<double> out) const {
    if (row_part.total() != n_ || col_part.total() != p_)
        throw std::invalid_argument("block_apply: partition totals do not match matrix shape");
    const std::size_t r0 = row_part.offset(i), mi = row_part.size(i);
    const std::size_t c0 = col_part.offset(j), qj = col_part.size(j);
    if (x_j.size() != qj || out.size() != mi)
        throw std::invalid_argument("block_apply: block vector sizes do not match partition");
    for (std::size_t r = 0; r < mi; ++r) {
        double s = 0.0;
        switch (storage_) {
            case Storage::dense:
                for (std::size_t c = 0; c < qj; ++c) s += dense_.at(r0 + r, c0 + c) * x_j[c];
                break;
            case Storage::sparse: {
                const std::size_t row = r0 + r;
                const auto begin = csr_col_.begin() + static_cast<std::ptrdiff_t>(csr_ptr_[row]);
                const auto end = csr_col_.begin() + static_cast<std::ptrdiff_t>(csr_ptr_[row + 1]);
                auto it = std::lower_bound(begin, end, c0);
                for (; it != end && *it < c0 + qj; ++it) {
                    const std::size_t k = static_cast<std::size_t>(it - csr_col_.begin());
                    s += csr_val_[k] * x_j[*it - c0];
                }
                break;
            }
            case Storage::factorized:
                for (std::size_t c = 0; c < qj; ++c) s += dot(u_.row(r0 + r), vt_.row(c0 + c)) * x_j[c];
                break;
        }
        out[r] = s;
    }
}

void DataMatrix::block_apply_transpose(const BlockPartition& row_part, const BlockPartition& col_part,
                                       std::size_t i, std::size_t j, std::span<const double> y_i,
                                       std::span<double> out) const {
    if (row_part.total() != n_ || col_part.total() != p_)
        throw std::invalid_argument("block_apply_transpose: partition totals do not match matrix shape");
    const std::size_t r0 = row_part.offset(i), mi = row_part.size(i);
    const std::size_t c0 = col_part.offset(j), qj = col_part.size(j);
    if (y_i.size() != mi || out.size() != qj)
        throw std::invalid_argument("block_apply_transpose: block vector sizes do not match partition");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t r = 0; r < mi; ++r) {
        const double yr = y_i[r];
        switch (storage_) {
            case Storage::dense:
                for (std::size_t c = 0; c < qj; ++c) out[c] += dense_.at(r0 + r, c0 + c) * yr;
                break;
            case Storage::sparse: {
                const std::size_t row = r0 + r;
                const auto begin = csr_col_.begin() + static_cast<std::ptrdiff_t>(csr_ptr_[row]);
                const auto end = csr_col_.begin() + static_cast<std::ptrdiff_t>(csr_ptr_[row + 1]);
                auto it = std::lower_bound(begin, end, c0);
                for (; it != end && *it < c0 + qj; ++it) {
                    const std::size_t k = static_cast<std::size_t>(it - csr_col_.begin());
                    out[*it - c0] += csr_val_[k] * yr;
                }
                break;
            }
            case Storage::factorized:
                for (std::size_t c = 0; c < qj; ++c) out[c] += dot(u_.row(r0 + r), vt_.row(c0 + c)) * yr;
                break;
        }
    }
}

DenseMatrix DataMatrix::materialize(std::size_t entry_cap) const {
    if (n_ * p_ > entry_cap)
        throw capacity_error("DataMatrix::materialize: " + std::to_string(n_ * p_) +
                             " entries exceed cap " + std::to_string(entry_cap));
    DenseMatrix out(n_, p_);
    switch (storage_) {
        case Storage::dense:
            out = dense_;
            break;
        case Storage::sparse:
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t k = csr_ptr_[i]; k < csr_ptr_[i + 1]; ++k)
                    out.at(i, csr_col_[k]) = csr_val_[k];
            break;
        case Storage::factorized:
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j < p_; ++j) out.at(i, j) = dot(u_.row(i), vt_.row(j));
            break;
    }
    return out;
}

void DataMatrix::require_factorized(const char* op) const {
    if (storage_ != Storage::factorized)
        throw unsupported_operation(std::string(op) + ": matrix is not in factorized storage");
}

std::span<const double> DataMatrix::u_row(std::size_t i) const {
    require_factorized("u_row");
    return u_.row(i);
}

std::span<const double> DataMatrix::v_col(std::size_t j) const {
    require_factorized("v_col");
    return vt_.row(j);
}

const DenseMatrix& DataMatrix::u_factor() const {
    require_factorized("u_factor");
    return u_;
}

const DenseMatrix& DataMatrix::v_factor_t() const {
    require_factorized("v_factor_t");
    return vt_;
}

}  // namespace dspdc
