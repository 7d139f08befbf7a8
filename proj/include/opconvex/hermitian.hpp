#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "opconvex/interval.hpp"
#include "opconvex/tolerance.hpp"

namespace opconvex {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Absolute tolerance on |h_jk - conj(h_kj)| accepted at construction.
inline constexpr double kHermitianConstructionTol = 1e-12;

/// An n x n complex self-adjoint matrix.
///
/// The stored entries are always exactly Hermitian: the checked constructor
/// accepts inputs within kHermitianConstructionTol and stores (M + M*) / 2,
/// which leaves exactly Hermitian input bit-for-bit unchanged.
class HermitianMatrix {
public:
    /// Checked construction. Throws DimensionError for empty/non-square input
    /// and InvalidInput when the Hermitian defect exceeds the tolerance.
    explicit HermitianMatrix(const ComplexMatrix& m);

    /// Unchecked: averages `m` with its adjoint. Used on outputs of products
    /// whose self-adjointness holds mathematically.
    static HermitianMatrix symmetrized(const ComplexMatrix& m);
    static HermitianMatrix from_real(const Eigen::MatrixXd& m);
    static HermitianMatrix identity(int dim);
    static HermitianMatrix scalar(int dim, double value);
    static HermitianMatrix diagonal(const std::vector<double>& values);
    static HermitianMatrix zero(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& matrix() const { return m_; }
    Complex operator()(int row, int col) const { return m_(row, col); }

    /// Largest absolute entry difference from the adjoint of `m`.
    static double hermitian_defect(const ComplexMatrix& m);

    /// C* H C for a square C of matching dimension.
    HermitianMatrix congruence(const ComplexMatrix& c) const;
    /// Entrywise transpose (equivalently, the complex conjugate).
    HermitianMatrix transpose() const;

    double frobenius_norm() const { return m_.norm(); }

    friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b);
    friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b);
    friend HermitianMatrix operator*(double s, const HermitianMatrix& a);

private:
    struct Unchecked {};
    HermitianMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

    ComplexMatrix m_;
};

/// Eigenvalues ascending; column i of `unitary` is the eigenvector for
/// eigenvalue i, so P_i = u_i u_i*.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix unitary;

    int dim() const { return static_cast<int>(eigenvalues.size()); }
    double min() const { return eigenvalues.front(); }
    double max() const { return eigenvalues.back(); }
    double max_abs() const;
    HermitianMatrix projector(int index) const;
    HermitianMatrix reconstruct() const;
    /// U diag(g(lambda_i)) U*.
    HermitianMatrix map(const std::function<double(double)>& g) const;
};

/// Cyclic Jacobi sweep parameters.
inline constexpr int kJacobiSweepCap = 100;
inline constexpr double kJacobiRelativeOffNorm = 1e-13;

/// Spectral decomposition by cyclic complex Jacobi rotations.
/// Throws ConvergenceError when the sweep cap is reached.
SpectralDecomposition eig_hermitian(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);
double spectral_norm(const HermitianMatrix& h);
/// Largest singular value of a general square matrix.
double operator_norm(const ComplexMatrix& m);
/// Spectral norm of (sum of C_i* C_i) - I style defects.
double identity_defect(const ComplexMatrix& gram);

struct LoewnerResult {
    bool holds = false;
    /// Minimum eigenvalue of B - A.
    double margin = 0.0;
    /// Spectral scale the tolerance was applied against.
    double scale = 0.0;
};

/// A <= B in the Loewner order, up to psd_tol relative to max(|A|, |B|).
LoewnerResult loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b,
                          const ToleranceConfig& tol = {});

/// Functional calculus f(H) = U diag(f(lambda)) U*.
///
/// Eigenvalues must lie in `domain`; closed endpoints admit a
/// construction-tolerance overshoot, which is clamped to the endpoint.
/// Open endpoints are strict. Throws DomainError naming the eigenvalue.
HermitianMatrix apply_function(const std::function<double(double)>& f,
                               const SpectrumInterval& domain, const HermitianMatrix& h,
                               const ToleranceConfig& tol = {});

HermitianMatrix matrix_sqrt(const HermitianMatrix& h, const ToleranceConfig& tol = {});
HermitianMatrix matrix_inverse_sqrt(const HermitianMatrix& h, const ToleranceConfig& tol = {});
HermitianMatrix matrix_inverse(const HermitianMatrix& h, const ToleranceConfig& tol = {});

/// Throws InvalidInput unless min eigenvalue > psd_tol * scale.
void require_strictly_positive(const HermitianMatrix& h, const ToleranceConfig& tol,
                               const char* what);
bool is_strictly_positive(const HermitianMatrix& h, const ToleranceConfig& tol = {});
bool is_psd(const HermitianMatrix& h, const ToleranceConfig& tol = {});

/// A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.
HermitianMatrix geometric_mean(const HermitianMatrix& a, const HermitianMatrix& b,
                               const ToleranceConfig& tol = {});

/// Random V diag(d) V* with V Haar-distributed and d uniform inside
/// `spectrum`, kept away from the endpoints by a relative margin of 1e-6.
/// An unbounded side needs `scale`: the side is replaced by the finite
/// endpoint +/- scale (or [-scale, scale] for the real line).
HermitianMatrix sample_hermitian(int dim, const SpectrumInterval& spectrum, std::uint64_t seed,
                                 std::optional<double> scale = std::nullopt);

/// Direct sum H (+) [value].
HermitianMatrix direct_sum(const HermitianMatrix& h, double value);

}  // namespace opconvex
