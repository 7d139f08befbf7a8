#pragma once

#include <Eigen/Eigenvalues>
#include <random>

#include "opconvex/hermitian.hpp"

namespace opconvex::testkit {

// Generators and oracles for property tests. Everything here deliberately avoids
// the library's own spectral routines so that it can serve as an independent check.

inline ComplexMatrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = Complex(n(rng), n(rng));
        }
    }
    return m;
}

// Unitary from modified Gram-Schmidt on a complex Gaussian matrix.
inline ComplexMatrix gram_schmidt_unitary(std::mt19937_64& rng, int dim) {
    ComplexMatrix q = gaussian_matrix(rng, dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < j; ++k) {
            q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
        }
        q.col(j) /= q.col(j).norm();
    }
    return q;
}

inline HermitianMatrix with_spectrum(std::mt19937_64& rng, const std::vector<double>& eigenvalues) {
    const int dim = static_cast<int>(eigenvalues.size());
    const ComplexMatrix u = gram_schmidt_unitary(rng, dim);
    Eigen::VectorXd d(dim);
    for (int i = 0; i < dim; ++i) d(i) = eigenvalues[static_cast<std::size_t>(i)];
    return HermitianMatrix::symmetrized(u * d.asDiagonal() * u.adjoint());
}

inline std::vector<double> uniform_values(std::mt19937_64& rng, int count, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(static_cast<std::size_t>(count));
    for (auto& x : v) x = u(rng);
    return v;
}

inline HermitianMatrix random_hermitian(std::mt19937_64& rng, int dim, double lo = -3.0, double hi = 3.0) {
    return with_spectrum(rng, uniform_values(rng, dim, lo, hi));
}

inline HermitianMatrix random_positive(std::mt19937_64& rng, int dim, double lo = 0.2, double hi = 5.0) {
    return random_hermitian(rng, dim, lo, hi);
}

inline Eigen::VectorXd reference_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double reference_min_eigenvalue(const ComplexMatrix& m) {
    return reference_eigenvalues(m)(0);
}

// Square root of a PSD matrix through the reference eigensolver.
inline ComplexMatrix reference_sqrt(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

inline double largest_singular_value(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

inline ComplexMatrix identity(int dim) { return ComplexMatrix::Identity(dim, dim); }

}  // namespace opconvex::testkit
