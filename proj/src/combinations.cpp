#include "opconvex/combinations.hpp"

#include <cmath>
#include <sstream>

#include "opconvex/errors.hpp"
#include "opconvex/random.hpp"

namespace opconvex {

namespace {

// Square root of a matrix known to be PSD up to rounding; negative
// eigenvalues are clamped to zero.
HermitianMatrix psd_sqrt(const HermitianMatrix& h) {
    return eig_hermitian(h).map([](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

void require_same_dim(int expected, int got, const char* what) {
    if (expected != got) {
        std::ostringstream os;
        os << what << ": dimension " << got << " does not match " << expected;
        throw DimensionError(os.str());
    }
}

}  // namespace

CoefficientTuple::CoefficientTuple(std::vector<ComplexMatrix> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw DimensionError("coefficient tuple needs at least one matrix");
    }
    const auto n = coeffs_.front().rows();
    if (n < 1) {
        throw DimensionError("coefficient dimension must be >= 1");
    }
    for (const auto& c : coeffs_) {
        if (c.rows() != n || c.cols() != n) {
            throw DimensionError("coefficients must all be square of the same dimension");
        }
    }
}

CoefficientTuple CoefficientTuple::scalar_weights(int dim, const std::vector<double>& weights) {
    std::vector<ComplexMatrix> cs;
    cs.reserve(weights.size());
    for (double w : weights) {
        if (w < 0.0) {
            throw InvalidInput("scalar weights must be nonnegative");
        }
        cs.emplace_back(std::sqrt(w) * ComplexMatrix::Identity(dim, dim));
    }
    return CoefficientTuple(std::move(cs));
}

CoefficientTuple CoefficientTuple::single(const ComplexMatrix& unitary) {
    return CoefficientTuple(std::vector<ComplexMatrix>{unitary});
}

ComplexMatrix CoefficientTuple::gram() const {
    ComplexMatrix g = ComplexMatrix::Zero(dim(), dim());
    for (const auto& c : coeffs_) {
        g.noalias() += c.adjoint() * c;
    }
    return g;
}

TupleCheck validate_tuple(const CoefficientTuple& t, const ToleranceConfig& tol) {
    TupleCheck r;
    r.defect = identity_defect(t.gram());
    r.valid = r.defect <= tol.construction_threshold(1.0);
    return r;
}

CoefficientTuple sample_tuple(int dim, int m, std::uint64_t seed) {
    if (dim < 1 || m < 1) {
        throw DimensionError("sample_tuple: dim and m must be >= 1");
    }
    Rng rng(mix_seed(seed));
    const ComplexMatrix q = haar_isometry(rng, m * dim, dim);
    std::vector<ComplexMatrix> cs;
    cs.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        cs.emplace_back(q.middleRows(i * dim, dim));
    }
    return CoefficientTuple(std::move(cs));
}

OperatorTuple::OperatorTuple(std::vector<HermitianMatrix> components)
    : components_(std::move(components)) {
    if (components_.empty()) {
        throw DimensionError("operator tuple needs at least one component");
    }
    for (const auto& x : components_) {
        require_same_dim(components_.front().dim(), x.dim(), "operator tuple");
    }
}

HermitianMatrix apply_combination(const CoefficientTuple& t, const std::vector<HermitianMatrix>& xs) {
    if (static_cast<int>(xs.size()) != t.size()) {
        throw DimensionError("apply_combination: number of operators does not match the tuple");
    }
    ComplexMatrix acc = ComplexMatrix::Zero(t.dim(), t.dim());
    for (int i = 0; i < t.size(); ++i) {
        const auto& x = xs[static_cast<std::size_t>(i)];
        require_same_dim(t.dim(), x.dim(), "apply_combination");
        acc.noalias() += t[i].adjoint() * x.matrix() * t[i];
    }
    return HermitianMatrix::symmetrized(acc);
}

OperatorTuple apply_combination(const CoefficientTuple& t, const std::vector<OperatorTuple>& xs) {
    if (static_cast<int>(xs.size()) != t.size()) {
        throw DimensionError("apply_combination: number of operator tuples does not match");
    }
    const int k = xs.front().size();
    std::vector<HermitianMatrix> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        std::vector<HermitianMatrix> column;
        column.reserve(xs.size());
        for (const auto& x : xs) {
            if (x.size() != k) {
                throw DimensionError("apply_combination: operator tuples differ in length");
            }
            column.push_back(x[j]);
        }
        out.push_back(apply_combination(t, column));
    }
    return OperatorTuple(std::move(out));
}

HermitianMatrix apply_log_combination(const CoefficientTuple& t,
                                      const std::vector<HermitianMatrix>& xs,
                                      const ToleranceConfig& tol) {
    if (static_cast<int>(xs.size()) != t.size()) {
        throw DimensionError("apply_log_combination: number of operators does not match the tuple");
    }
    std::vector<HermitianMatrix> inverses;
    inverses.reserve(xs.size());
    for (const auto& x : xs) {
        require_same_dim(t.dim(), x.dim(), "apply_log_combination");
        require_strictly_positive(x, tol, "apply_log_combination: operand");
        inverses.push_back(matrix_inverse(x, tol));
    }
    return matrix_inverse(apply_combination(t, inverses), tol);
}

CoefficientTuple complete_contraction(const ComplexMatrix& c, const ToleranceConfig& tol) {
    if (c.rows() < 1 || c.rows() != c.cols()) {
        throw DimensionError("complete_contraction: coefficient must be square");
    }
    const double norm = operator_norm(c);
    if (norm > 1.0 + tol.construction_tol) {
        std::ostringstream os;
        os << "complete_contraction: largest singular value " << norm << " exceeds 1";
        throw InvalidInput(os.str());
    }
    const auto n = c.rows();
    const auto defect = HermitianMatrix::symmetrized(ComplexMatrix::Identity(n, n) - c.adjoint() * c);
    return CoefficientTuple(std::vector<ComplexMatrix>{c, psd_sqrt(defect).matrix()});
}

SplitWitness split_sum_witness(const HermitianMatrix& x, const HermitianMatrix& y,
                               const ToleranceConfig& tol) {
    if (x.dim() != y.dim()) {
        throw DimensionError("split_sum_witness: dimension mismatch");
    }
    if (!is_psd(x, tol) || !is_psd(y, tol)) {
        throw InvalidInput("split_sum_witness: operands must be positive semidefinite");
    }
    const auto sum = x + y;
    if (!is_strictly_positive(sum, tol)) {
        throw InvalidInput("split_sum_witness: X + Y is singular");
    }
    const auto sum_neg_half = matrix_inverse_sqrt(sum, tol).matrix();
    return {sum_neg_half * psd_sqrt(x).matrix(), sum_neg_half * psd_sqrt(y).matrix()};
}

CoefficientTuple eigenvalue_scalarization_witness(const HermitianMatrix& x, int k) {
    const int n = x.dim();
    if (k < 1 || k > n) {
        std::ostringstream os;
        os << "eigenvalue index " << k << " out of range 1.." << n;
        throw InvalidInput(os.str());
    }
    const auto sd = eig_hermitian(x);
    std::vector<ComplexMatrix> cs;
    cs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // U E_{ki}: column i carries eigenvector k.
        ComplexMatrix c = ComplexMatrix::Zero(n, n);
        c.col(i) = sd.unitary.col(k - 1);
        cs.push_back(std::move(c));
    }
    return CoefficientTuple(std::move(cs));
}

HermitianMatrix PositiveMap::operator()(const HermitianMatrix& x) const {
    const ComplexMatrix in = transpose_input ? ComplexMatrix(x.matrix().transpose()) : x.matrix();
    ComplexMatrix acc = ComplexMatrix::Zero(x.dim(), x.dim());
    for (const auto& a : kraus) {
        require_same_dim(static_cast<int>(a.rows()), x.dim(), "positive map");
        acc.noalias() += a.adjoint() * in * a;
    }
    return HermitianMatrix::symmetrized(acc);
}

ComplexMatrix PositiveMap::unit_image() const {
    const auto n = kraus.front().rows();
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (const auto& a : kraus) {
        acc.noalias() += a.adjoint() * a;
    }
    return acc;
}

UnitalMapFamily::UnitalMapFamily(std::vector<PositiveMap> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) {
        throw DimensionError("map family needs at least one map");
    }
    const auto n = maps_.front().kraus.empty() ? 0 : maps_.front().kraus.front().rows();
    for (const auto& phi : maps_) {
        if (phi.kraus.empty()) {
            throw DimensionError("positive map needs at least one Kraus operator");
        }
        for (const auto& a : phi.kraus) {
            if (a.rows() != n || a.cols() != n || n < 1) {
                throw DimensionError("Kraus operators must be square of a common dimension");
            }
        }
    }
}

UnitalMapFamily UnitalMapFamily::from_tuple(const CoefficientTuple& t) {
    std::vector<PositiveMap> maps;
    for (const auto& c : t.coeffs()) {
        maps.push_back(PositiveMap{{c}, false});
    }
    return UnitalMapFamily(std::move(maps));
}

UnitalMapFamily UnitalMapFamily::sample(int dim, int m, int kraus_per_map, std::uint64_t seed) {
    if (kraus_per_map < 1) {
        throw DimensionError("kraus_per_map must be >= 1");
    }
    const auto t = sample_tuple(dim, m * kraus_per_map, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    std::bernoulli_distribution coin(0.5);
    std::vector<PositiveMap> maps;
    for (int i = 0; i < m; ++i) {
        PositiveMap phi;
        for (int k = 0; k < kraus_per_map; ++k) {
            phi.kraus.push_back(t[i * kraus_per_map + k]);
        }
        phi.transpose_input = coin(rng);
        maps.push_back(std::move(phi));
    }
    return UnitalMapFamily(std::move(maps));
}

int UnitalMapFamily::dim() const { return static_cast<int>(maps_.front().kraus.front().rows()); }

double UnitalMapFamily::unital_defect() const {
    ComplexMatrix acc = ComplexMatrix::Zero(dim(), dim());
    for (const auto& phi : maps_) {
        acc += phi.unit_image();
    }
    return identity_defect(acc);
}

HermitianMatrix UnitalMapFamily::apply(const std::vector<HermitianMatrix>& xs) const {
    if (static_cast<int>(xs.size()) != size()) {
        throw DimensionError("map family: number of operators does not match the number of maps");
    }
    ComplexMatrix acc = ComplexMatrix::Zero(dim(), dim());
    for (int i = 0; i < size(); ++i) {
        acc += maps_[static_cast<std::size_t>(i)](xs[static_cast<std::size_t>(i)]).matrix();
    }
    return HermitianMatrix::symmetrized(acc);
}

HermitianMatrix FamilyCombination::reproduce() const {
    ComplexMatrix acc = ComplexMatrix::Zero(equivalent.dim(), equivalent.dim());
    for (int j = 0; j < equivalent.size(); ++j) {
        acc.noalias() += scalars[static_cast<std::size_t>(j)] * (equivalent[j].adjoint() * equivalent[j]);
    }
    return HermitianMatrix::symmetrized(acc);
}

FamilyCombination positive_family_combination(const UnitalMapFamily& family,
                                              const std::vector<HermitianMatrix>& xs,
                                              const ToleranceConfig& tol) {
    const double defect = family.unital_defect();
    if (defect > tol.construction_threshold(1.0)) {
        std::ostringstream os;
        os << "map family is not unital: defect " << defect;
        throw InvalidInput(os.str());
    }
    auto value = family.apply(xs);
    std::vector<ComplexMatrix> cs;
    std::vector<double> scalars;
    for (int i = 0; i < family.size(); ++i) {
        const auto sd = eig_hermitian(xs[static_cast<std::size_t>(i)]);
        for (int j = 0; j < sd.dim(); ++j) {
            const auto image = family[i](sd.projector(j));
            cs.push_back(psd_sqrt(image).matrix());
            scalars.push_back(sd.eigenvalues[static_cast<std::size_t>(j)]);
        }
    }
    return {std::move(value), CoefficientTuple(std::move(cs)), std::move(scalars)};
}

}  // namespace opconvex
