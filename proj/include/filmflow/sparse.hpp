#ifndef FILMFLOW_SPARSE_HPP
#define FILMFLOW_SPARSE_HPP

#include <span>
#include <string>
#include <vector>

namespace filmflow {

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Square sparse operator in compressed sparse row layout plus a right-hand side.
class SparseSystem {
public:
    /// Finalizes CSR from (row, col, value) triplets; duplicates are summed.
    /// Throws std::out_of_range on an index outside [0, n).
    static SparseSystem assemble(std::span<const Triplet> triplets, int n);

    int size() const { return n_; }
    int nnz() const { return static_cast<int>(vals_.size()); }

    const std::vector<int>& row_offsets() const { return offsets_; }
    const std::vector<int>& cols() const { return cols_; }
    const std::vector<double>& values() const { return vals_; }

    std::vector<double>& rhs() { return rhs_; }
    const std::vector<double>& rhs() const { return rhs_; }
    void set_rhs(std::vector<double> b);

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y) const;

    /// ||b - A x||_2 / ||b||_2 (0/0 treated as 0).
    double relative_residual(std::span<const double> x) const;

    /// MatrixMarket coordinate text dump for debugging.
    void write_matrix_market(const std::string& path) const;

private:
    int n_ = 0;
    std::vector<int> offsets_, cols_;
    std::vector<double> vals_;
    std::vector<double> rhs_;
};

enum class SolveMethod { Direct, Krylov };

struct SolveReport {
    int iterations = 0;
    double rel_residual = 0.0;
    SolveMethod method = SolveMethod::Krylov;
};

struct SolveOptions {
    double tol = 1e-12;       ///< relative residual target
    int max_iter = 4000;      ///< Krylov cap
    bool try_krylov = true;
    bool try_direct = true;   ///< banded LU fallback
    int direct_max_n = 20000;
    std::size_t direct_max_bytes = 512u << 20;
};

/// Deterministic solve: BiCGSTAB with Jacobi preconditioning, banded LU
/// fallback. Throws SolveError when no path reaches the tolerance.
std::vector<double> solve(const SparseSystem& sys, const SolveOptions& opts,
                          SolveReport* report = nullptr);

}  // namespace filmflow

#endif
