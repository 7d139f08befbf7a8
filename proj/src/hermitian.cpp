#include "opconvex/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "opconvex/errors.hpp"
#include "opconvex/random.hpp"

namespace opconvex {

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw DimensionError("Hermitian matrix must be square with dim >= 1");
    }
    const double defect = hermitian_defect(m);
    if (!(defect <= kHermitianConstructionTol)) {
        std::ostringstream os;
        os << "matrix is not Hermitian: defect " << defect;
        throw InvalidInput(os.str());
    }
    m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw DimensionError("Hermitian matrix must be square with dim >= 1");
    }
    return HermitianMatrix(ComplexMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermitianMatrix HermitianMatrix::from_real(const Eigen::MatrixXd& m) {
    return HermitianMatrix(ComplexMatrix(m.cast<Complex>()));
}

HermitianMatrix HermitianMatrix::identity(int dim) { return scalar(dim, 1.0); }

HermitianMatrix HermitianMatrix::scalar(int dim, double value) {
    if (dim < 1) {
        throw DimensionError("dim must be >= 1");
    }
    return HermitianMatrix(ComplexMatrix(value * ComplexMatrix::Identity(dim, dim)), Unchecked{});
}

HermitianMatrix HermitianMatrix::zero(int dim) { return scalar(dim, 0.0); }

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& values) {
    if (values.empty()) {
        throw DimensionError("dim must be >= 1");
    }
    const auto n = static_cast<Eigen::Index>(values.size());
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = values[static_cast<std::size_t>(i)];
    }
    return HermitianMatrix(std::move(m), Unchecked{});
}

double HermitianMatrix::hermitian_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

HermitianMatrix HermitianMatrix::congruence(const ComplexMatrix& c) const {
    if (c.rows() != m_.rows() || c.cols() != m_.cols()) {
        throw DimensionError("congruence coefficient has the wrong shape");
    }
    return symmetrized(c.adjoint() * m_ * c);
}

HermitianMatrix HermitianMatrix::transpose() const {
    return HermitianMatrix(ComplexMatrix(m_.transpose()), Unchecked{});
}

HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("dimension mismatch in sum");
    }
    return HermitianMatrix(ComplexMatrix(a.m_ + b.m_), HermitianMatrix::Unchecked{});
}

HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("dimension mismatch in difference");
    }
    return HermitianMatrix(ComplexMatrix(a.m_ - b.m_), HermitianMatrix::Unchecked{});
}

HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    return HermitianMatrix(ComplexMatrix(s * a.m_), HermitianMatrix::Unchecked{});
}

// ---------------------------------------------------------------------------
// Spectral decomposition

double SpectralDecomposition::max_abs() const {
    return std::max(std::abs(eigenvalues.front()), std::abs(eigenvalues.back()));
}

HermitianMatrix SpectralDecomposition::projector(int index) const {
    const auto u = unitary.col(index);
    return HermitianMatrix::symmetrized(u * u.adjoint());
}

HermitianMatrix SpectralDecomposition::reconstruct() const {
    return map([](double x) { return x; });
}

HermitianMatrix SpectralDecomposition::map(const std::function<double(double)>& g) const {
    Eigen::VectorXd d(dim());
    for (int i = 0; i < dim(); ++i) {
        d(i) = g(eigenvalues[static_cast<std::size_t>(i)]);
    }
    return HermitianMatrix::symmetrized(unitary * d.cast<Complex>().asDiagonal() * unitary.adjoint());
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (i != j) {
                sum += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(sum);
}

// One complex Jacobi rotation annihilating a(p, q). G = D R where D puts
// the phase of a(p, q) on row/column q and R is the real rotation that
// diagonalizes the resulting real symmetric 2x2 block.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) {
        return;
    }
    const Complex phase = apq / mag;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Complex sp = s * std::conj(phase);  // s e^{-i phi}
    const Complex cp = c * std::conj(phase);  // c e^{-i phi}

    // A <- A G
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = c * akp - sp * akq;
        a(k, q) = s * akp + cp * akq;
    }
    // A <- G* A
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk - std::conj(sp) * aqk;
        a(q, k) = s * apk + std::conj(cp) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
    // V <- V G
    for (Eigen::Index k = 0; k < v.rows(); ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = c * vkp - sp * vkq;
        v(k, q) = s * vkp + cp * vkq;
    }
}

}  // namespace

SpectralDecomposition eig_hermitian(const HermitianMatrix& h) {
    const Eigen::Index n = h.dim();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::Identity(n, n);
    const double target = kJacobiRelativeOffNorm * a.norm();

    bool converged = off_diagonal_norm(a) <= target;
    for (int sweep = 0; sweep < kJacobiSweepCap && !converged; ++sweep) {
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                rotate(a, v, p, q);
            }
        }
        converged = off_diagonal_norm(a) <= target;
    }
    if (!converged) {
        std::ostringstream os;
        os << "Jacobi eigensolver did not converge within " << kJacobiSweepCap
           << " sweeps (off-diagonal norm " << off_diagonal_norm(a) << ")";
        throw ConvergenceError(os.str());
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return a(i, i).real() < a(j, j).real();
    });

    SpectralDecomposition out;
    out.eigenvalues.reserve(static_cast<std::size_t>(n));
    out.unitary.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues.push_back(a(src, src).real());
        out.unitary.col(k) = v.col(src);
    }
    return out;
}

double min_eigenvalue(const HermitianMatrix& h) { return eig_hermitian(h).min(); }

double spectral_norm(const HermitianMatrix& h) { return eig_hermitian(h).max_abs(); }

double operator_norm(const ComplexMatrix& m) {
    // Largest singular value = sqrt of the largest eigenvalue of M* M.
    const auto gram = HermitianMatrix::symmetrized(m.adjoint() * m);
    return std::sqrt(std::max(0.0, eig_hermitian(gram).max()));
}

double identity_defect(const ComplexMatrix& gram) {
    const auto n = gram.rows();
    return spectral_norm(HermitianMatrix::symmetrized(gram - ComplexMatrix::Identity(n, n)));
}

LoewnerResult loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b,
                          const ToleranceConfig& tol) {
    if (a.dim() != b.dim()) {
        throw DimensionError("loewner_leq: dimension mismatch");
    }
    LoewnerResult r;
    r.scale = std::max(spectral_norm(a), spectral_norm(b));
    r.margin = min_eigenvalue(b - a);
    r.holds = r.margin >= -tol.psd_threshold(r.scale);
    return r;
}

HermitianMatrix apply_function(const std::function<double(double)>& f,
                               const SpectrumInterval& domain, const HermitianMatrix& h,
                               const ToleranceConfig& tol) {
    auto sd = eig_hermitian(h);
    const double slack = tol.construction_threshold(sd.max_abs());
    for (double& lambda : sd.eigenvalues) {
        if (domain.contains(lambda)) {
            continue;
        }
        if (!domain.open_lo && domain.lo_finite() && lambda < domain.lo && lambda >= domain.lo - slack) {
            lambda = domain.lo;
            continue;
        }
        if (!domain.open_hi && domain.hi_finite() && lambda > domain.hi && lambda <= domain.hi + slack) {
            lambda = domain.hi;
            continue;
        }
        std::ostringstream os;
        os.precision(17);
        os << "eigenvalue " << lambda << " outside domain " << domain.to_string();
        throw DomainError(os.str());
    }
    return sd.map(f);
}

HermitianMatrix matrix_sqrt(const HermitianMatrix& h, const ToleranceConfig& tol) {
    return apply_function([](double x) { return std::sqrt(x); }, SpectrumInterval::nonnegative(), h,
                          tol);
}

HermitianMatrix matrix_inverse_sqrt(const HermitianMatrix& h, const ToleranceConfig& tol) {
    return apply_function([](double x) { return 1.0 / std::sqrt(x); }, SpectrumInterval::positive(),
                          h, tol);
}

HermitianMatrix matrix_inverse(const HermitianMatrix& h, const ToleranceConfig& tol) {
    auto sd = eig_hermitian(h);
    for (double lambda : sd.eigenvalues) {
        if (lambda == 0.0 || !std::isfinite(1.0 / lambda)) {
            throw DomainError("matrix is singular");
        }
    }
    (void)tol;
    return sd.map([](double x) { return 1.0 / x; });
}

bool is_strictly_positive(const HermitianMatrix& h, const ToleranceConfig& tol) {
    const auto sd = eig_hermitian(h);
    return sd.min() > tol.psd_threshold(sd.max_abs());
}

bool is_psd(const HermitianMatrix& h, const ToleranceConfig& tol) {
    const auto sd = eig_hermitian(h);
    return sd.min() >= -tol.psd_threshold(sd.max_abs());
}

void require_strictly_positive(const HermitianMatrix& h, const ToleranceConfig& tol,
                               const char* what) {
    if (!is_strictly_positive(h, tol)) {
        throw InvalidInput(std::string(what) + " must be strictly positive");
    }
}

HermitianMatrix geometric_mean(const HermitianMatrix& a, const HermitianMatrix& b,
                               const ToleranceConfig& tol) {
    if (a.dim() != b.dim()) {
        throw DimensionError("geometric_mean: dimension mismatch");
    }
    require_strictly_positive(a, tol, "geometric_mean: first operand");
    require_strictly_positive(b, tol, "geometric_mean: second operand");
    const auto sd = eig_hermitian(a);
    const auto a_half = sd.map([](double x) { return std::sqrt(x); });
    const auto a_neg_half = sd.map([](double x) { return 1.0 / std::sqrt(x); });
    const auto inner = b.congruence(a_neg_half.matrix());
    const auto inner_half = matrix_sqrt(inner, tol);
    return inner_half.congruence(a_half.matrix());
}

HermitianMatrix sample_hermitian(int dim, const SpectrumInterval& spectrum, std::uint64_t seed,
                                 std::optional<double> scale) {
    if (dim < 1) {
        throw DimensionError("sample_hermitian: dim must be >= 1");
    }
    spectrum.validate();
    double lo = spectrum.lo;
    double hi = spectrum.hi;
    if (!spectrum.bounded()) {
        if (!scale || !(*scale > 0.0)) {
            throw InvalidInput("sample_hermitian: unbounded interval " + spectrum.to_string() +
                               " needs a sampling scale");
        }
        if (!spectrum.lo_finite() && !spectrum.hi_finite()) {
            lo = -*scale;
            hi = *scale;
        } else if (!spectrum.hi_finite()) {
            hi = lo + *scale;
        } else {
            lo = hi - *scale;
        }
    }
    const double width = hi - lo;
    const double margin = 1e-6 * width;
    Rng rng(mix_seed(seed));
    std::uniform_real_distribution<double> unif(lo + margin, hi - margin);
    std::vector<double> d(static_cast<std::size_t>(dim));
    for (auto& x : d) {
        x = width > 0.0 ? unif(rng) : lo;
    }
    const ComplexMatrix u = haar_unitary(rng, dim);
    Eigen::VectorXd dv = Eigen::Map<Eigen::VectorXd>(d.data(), dim);
    return HermitianMatrix::symmetrized(u * dv.cast<Complex>().asDiagonal() * u.adjoint());
}

HermitianMatrix direct_sum(const HermitianMatrix& h, double value) {
    const int n = h.dim();
    ComplexMatrix m = ComplexMatrix::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = h.matrix();
    m(n, n) = value;
    return HermitianMatrix::symmetrized(m);
}

}  // namespace opconvex
