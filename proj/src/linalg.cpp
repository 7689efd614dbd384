#include "fsifem/linalg.hpp"

#include <stdexcept>

namespace fsifem {

SparseMatrix finalize(int rows, int cols, const std::vector<Triplet>& triplets) {
    SparseMatrix A(rows, cols);
    A.setFromTriplets(triplets.begin(), triplets.end());
    A.makeCompressed();
    return A;
}

double asymmetry(const SparseMatrix& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("asymmetry: matrix not square");
    SparseMatrix D = SparseMatrix(A - SparseMatrix(A.transpose()));
    double m = 0.0;
    for (int k = 0; k < D.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(D, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

void DirectSolver::factorize(const SparseMatrix& A, const std::string& context) {
    if (A.rows() != A.cols())
        throw std::invalid_argument("factorize: matrix not square (" + context + ")");
    A_ = A;
    A_.makeCompressed();
    context_ = context;
    if (A_.rows() == 0) {  // all dofs eliminated or prescribed; SparseLU rejects 0x0
        lu_.reset();
        empty_ = true;
        return;
    }
    empty_ = false;
    lu_ = std::make_unique<Eigen::SparseLU<SparseMatrix>>();
    lu_->analyzePattern(A_);
    lu_->factorize(A_);
    if (lu_->info() != Eigen::Success) {
        const std::string what =
            "sparse LU factorization failed for " + context + " (" +
            std::to_string(A.rows()) + " unknowns, " + std::to_string(A.nonZeros()) +
            " nonzeros): matrix is singular. For an all-Dirichlet or fully periodic "
            "fluid boundary the pressure is determined only up to a constant; check the "
            "boundary configuration. " + lu_->lastErrorMessage();
        lu_.reset();
        throw std::runtime_error(what);
    }
}

Vector DirectSolver::solve(const Vector& rhs) const {
    if (!ready()) throw std::logic_error("solve called before factorize");
    if (rhs.size() != A_.rows())
        throw std::invalid_argument("solve: rhs size mismatch (" + context_ + ")");
    if (empty_) return Vector(0);
    Vector x = lu_->solve(rhs);
    if (lu_->info() != Eigen::Success)
        throw std::runtime_error("sparse LU solve failed for " + context_);
    return x;
}

double DirectSolver::residual(const Vector& x, const Vector& rhs) const {
    return (A_ * x - rhs).norm() / std::max(1.0, rhs.norm());
}

} // namespace fsifem
