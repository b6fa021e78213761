#pragma once

#include <cstddef>
#include <utility>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmpd::linalg {

using Vector = std::vector<double>;

// Compressed sparse row storage of a square matrix. Column indices are
// strictly increasing within each row.
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;
    SparseSymMatrix(std::size_t dim, std::vector<std::size_t> row_offsets,
                    std::vector<std::size_t> column_indices, std::vector<double> values);

    std::size_t dim() const { return dim_; }
    std::size_t nonzeros() const { return values_.size(); }

    const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
    const std::vector<std::size_t>& column_indices() const { return column_indices_; }
    const std::vector<double>& values() const { return values_; }

    // Stored entry (i, j), or 0 when not in the pattern.
    double at(std::size_t i, std::size_t j) const;
    Vector diagonal() const;

    // Max |A_ij - A_ji| over stored entries.
    double asymmetry() const;

    static SparseSymMatrix identity(std::size_t dim);

private:
    std::size_t dim_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> column_indices_;
    std::vector<double> values_;
};

// Accumulates (row, col, value) contributions; duplicates are summed.
class MatrixBuilder {
public:
    explicit MatrixBuilder(std::size_t dim) : rows_(dim) {}

    void add(std::size_t row, std::size_t col, double value);
    SparseSymMatrix build() const;

private:
    std::vector<std::vector<std::pair<std::size_t, double>>> rows_;
};

// y = A x, summed row by row in stored-column order.
Vector spmv(const SparseSymMatrix& a, std::span<const double> x);
void spmv(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

struct CgOptions {
    double rel_tol = 1e-12;
    // 0 selects 10 * dim.
    std::size_t max_iter = 0;
};

struct CgResult {
    Vector x;
    std::size_t iterations = 0;
    // ||b - A x||_2 / ||b||_2 from the recurrence (0 when b = 0).
    double relative_residual = 0.0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

// Jacobi-preconditioned conjugate gradients for SPD systems, zero initial guess.
// Throws SolverError on non-convergence or non-finite values.
CgResult cg_solve(const SparseSymMatrix& a, std::span<const double> b, const CgOptions& options = {});

}  // namespace pmpd::linalg
