#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <string>
#include <vector>

namespace fsifem {

using Vector = Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;
using SparseMatrix = Eigen::SparseMatrix<double>;

// Sum duplicate triplets into a compressed sparse matrix.
SparseMatrix finalize(int rows, int cols, const std::vector<Triplet>& triplets);

// max |A - A^T| over all entries
double asymmetry(const SparseMatrix& A);

// Direct sparse LU with pivoting.  Factorize once, solve many right-hand
// sides.  A singular or structurally deficient matrix is a hard error; the
// message carries enough context to diagnose a misassembled system.
class DirectSolver {
public:
    void factorize(const SparseMatrix& A, const std::string& context);
    Vector solve(const Vector& rhs) const;
    // relative residual |Ax-b|_2 / max(1, |b|_2)
    double residual(const Vector& x, const Vector& rhs) const;
    bool ready() const { return lu_ != nullptr || empty_; }
    int rows() const { return A_.rows(); }
    const SparseMatrix& matrix() const { return A_; }

private:
    SparseMatrix A_;
    std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu_;
    bool empty_ = false;  // 0x0 system: every dof eliminated or prescribed
    std::string context_;
};

} // namespace fsifem
