#include "pmpd/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pmpd::linalg {

SparseSymMatrix::SparseSymMatrix(std::size_t dim, std::vector<std::size_t> row_offsets,
                                 std::vector<std::size_t> column_indices, std::vector<double> values)
    : dim_(dim),
      row_offsets_(std::move(row_offsets)),
      column_indices_(std::move(column_indices)),
      values_(std::move(values)) {
    if (row_offsets_.size() != dim_ + 1 || row_offsets_.front() != 0 ||
        row_offsets_.back() != column_indices_.size() || column_indices_.size() != values_.size()) {
        throw std::invalid_argument("SparseSymMatrix: inconsistent CSR arrays");
    }
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            if (column_indices_[k] >= dim_) {
                throw std::invalid_argument("SparseSymMatrix: column index out of range");
            }
            if (k > row_offsets_[i] && column_indices_[k] <= column_indices_[k - 1]) {
                throw std::invalid_argument("SparseSymMatrix: columns not strictly increasing");
            }
        }
    }
}

double SparseSymMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) throw std::out_of_range("SparseSymMatrix::at");
    const auto first = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto last = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - column_indices_.begin())];
}

Vector SparseSymMatrix::diagonal() const {
    Vector d(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) d[i] = at(i, i);
    return d;
}

double SparseSymMatrix::asymmetry() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            worst = std::max(worst, std::abs(values_[k] - at(column_indices_[k], i)));
        }
    }
    return worst;
}

SparseSymMatrix SparseSymMatrix::identity(std::size_t dim) {
    std::vector<std::size_t> offsets(dim + 1);
    std::vector<std::size_t> cols(dim);
    for (std::size_t i = 0; i <= dim; ++i) offsets[i] = i;
    for (std::size_t i = 0; i < dim; ++i) cols[i] = i;
    return SparseSymMatrix(dim, std::move(offsets), std::move(cols), Vector(dim, 1.0));
}

void MatrixBuilder::add(std::size_t row, std::size_t col, double value) {
    if (row >= rows_.size() || col >= rows_.size()) {
        throw std::out_of_range("MatrixBuilder::add: index out of range");
    }
    auto& entries = rows_[row];
    const auto it = std::lower_bound(entries.begin(), entries.end(), col,
                                     [](const auto& e, std::size_t c) { return e.first < c; });
    if (it != entries.end() && it->first == col) {
        it->second += value;
    } else {
        entries.insert(it, {col, value});
    }
}

SparseSymMatrix MatrixBuilder::build() const {
    const std::size_t dim = rows_.size();
    std::vector<std::size_t> offsets(dim + 1, 0);
    for (std::size_t i = 0; i < dim; ++i) offsets[i + 1] = offsets[i] + rows_[i].size();
    std::vector<std::size_t> cols;
    Vector vals;
    cols.reserve(offsets.back());
    vals.reserve(offsets.back());
    for (const auto& row : rows_) {
        for (const auto& [c, v] : row) {
            cols.push_back(c);
            vals.push_back(v);
        }
    }
    return SparseSymMatrix(dim, std::move(offsets), std::move(cols), std::move(vals));
}

void spmv(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y) {
    if (x.size() != a.dim() || y.size() != a.dim()) {
        throw std::invalid_argument("spmv: dimension mismatch (matrix " + std::to_string(a.dim()) +
                                    ", x " + std::to_string(x.size()) + ")");
    }
    const auto& offsets = a.row_offsets();
    const auto& cols = a.column_indices();
    const auto& vals = a.values();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double s = 0.0;
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) s += vals[k] * x[cols[k]];
        y[i] = s;
    }
}

Vector spmv(const SparseSymMatrix& a, std::span<const double> x) {
    Vector y(a.dim());
    spmv(a, x, y);
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

CgResult cg_solve(const SparseSymMatrix& a, std::span<const double> b, const CgOptions& options) {
    const std::size_t n = a.dim();
    if (b.size() != n) throw std::invalid_argument("cg_solve: dimension mismatch");
    if (!(options.rel_tol > 0.0)) throw std::invalid_argument("cg_solve: rel_tol must be positive");
    const std::size_t max_iter = options.max_iter > 0 ? options.max_iter : 10 * std::max<std::size_t>(n, 1);

    CgResult result;
    result.x.assign(n, 0.0);

    const double b_norm = norm2(b);
    if (!std::isfinite(b_norm)) throw SolverError("cg_solve: non-finite right-hand side", b_norm);
    if (b_norm == 0.0) return result;

    Vector inv_diag = a.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) throw SolverError("cg_solve: non-positive diagonal entry", 1.0);
        d = 1.0 / d;
    }

    Vector r(b.begin(), b.end());
    Vector z(n), p(n), ap(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    double rel = 1.0;

    for (std::size_t it = 1; it <= max_iter; ++it) {
        spmv(a, p, ap);
        const double pap = dot(p, ap);
        if (!std::isfinite(pap) || pap <= 0.0) {
            throw SolverError("cg_solve: breakdown (p^T A p = " + std::to_string(pap) + ")", rel);
        }
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            result.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        rel = norm2(r) / b_norm;
        result.iterations = it;
        result.relative_residual = rel;
        if (!std::isfinite(rel)) throw SolverError("cg_solve: non-finite residual", rel);
        if (rel <= options.rel_tol) return result;

        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("cg_solve: no convergence in " + std::to_string(max_iter) +
                          " iterations (relative residual " + std::to_string(rel) + ")",
                      rel);
}

}  // namespace pmpd::linalg
