#pragma once

#include <cstdint>
#include <vector>

#include "opconvex/hermitian.hpp"

namespace opconvex {

/// Coefficients (C_1, ..., C_m), square of a common dimension, with
/// sum C_i* C_i = I. The identity constraint is checked by validate_tuple,
/// not at construction, so that defective tuples can be inspected.
class CoefficientTuple {
public:
    explicit CoefficientTuple(std::vector<ComplexMatrix> coeffs);

    /// {sqrt(w_1) I, ..., sqrt(w_m) I}: the embedding of scalar convex weights.
    static CoefficientTuple scalar_weights(int dim, const std::vector<double>& weights);
    static CoefficientTuple single(const ComplexMatrix& unitary);

    int dim() const { return static_cast<int>(coeffs_.front().rows()); }
    int size() const { return static_cast<int>(coeffs_.size()); }
    const ComplexMatrix& operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
    const std::vector<ComplexMatrix>& coeffs() const { return coeffs_; }

    /// sum C_i* C_i.
    ComplexMatrix gram() const;

private:
    std::vector<ComplexMatrix> coeffs_;
};

struct TupleCheck {
    bool valid = false;
    /// Spectral norm of sum C_i* C_i - I.
    double defect = 0.0;
};

TupleCheck validate_tuple(const CoefficientTuple& t, const ToleranceConfig& tol = {});

/// Haar-style tuple: orthonormalize the columns of an (m dim) x dim complex
/// Gaussian and slice the result into m blocks of dim rows.
CoefficientTuple sample_tuple(int dim, int m, std::uint64_t seed);

/// An element (X_1, ..., X_k) of the module of k-tuples of operators.
class OperatorTuple {
public:
    explicit OperatorTuple(std::vector<HermitianMatrix> components);

    int dim() const { return components_.front().dim(); }
    int size() const { return static_cast<int>(components_.size()); }
    const HermitianMatrix& operator[](int j) const {
        return components_[static_cast<std::size_t>(j)];
    }
    const std::vector<HermitianMatrix>& components() const { return components_; }

private:
    std::vector<HermitianMatrix> components_;
};

/// sum C_i* X_i C_i, re-symmetrized.
HermitianMatrix apply_combination(const CoefficientTuple& t, const std::vector<HermitianMatrix>& xs);
/// Componentwise: (sum C_i* X_i1 C_i, ..., sum C_i* X_ik C_i).
OperatorTuple apply_combination(const CoefficientTuple& t, const std::vector<OperatorTuple>& xs);

/// (sum C_i* X_i^{-1} C_i)^{-1} for strictly positive X_i.
HermitianMatrix apply_log_combination(const CoefficientTuple& t,
                                      const std::vector<HermitianMatrix>& xs,
                                      const ToleranceConfig& tol = {});

/// (C, (I - C* C)^{1/2}) for a contraction C.
CoefficientTuple complete_contraction(const ComplexMatrix& c, const ToleranceConfig& tol = {});

struct SplitWitness {
    ComplexMatrix c1;
    ComplexMatrix c2;
};

/// C_1 = (X+Y)^{-1/2} X^{1/2}, C_2 = (X+Y)^{-1/2} Y^{1/2}, so that
/// C_1*(X+Y)C_1 = X and C_2*(X+Y)C_2 = Y. Both are contractions and
/// C_1 C_1* + C_2 C_2* = I; the sum C_1*C_1 + C_2*C_2 equals I only when X and Y commute.
SplitWitness split_sum_witness(const HermitianMatrix& x, const HermitianMatrix& y,
                               const ToleranceConfig& tol = {});

/// Tuple (U E_k1, ..., U E_kn) built from the unit matrices E_ij and the
/// eigenvectors U of X: combining n copies of X with it yields lambda_k I,
/// where lambda_k is the k-th ascending eigenvalue. `k` is 1-based.
CoefficientTuple eigenvalue_scalarization_witness(const HermitianMatrix& x, int k);

/// A positive linear map X -> sum_k A_k* X A_k, optionally applied to the
/// entrywise transpose of X instead (positive but not completely positive).
struct PositiveMap {
    std::vector<ComplexMatrix> kraus;
    bool transpose_input = false;

    HermitianMatrix operator()(const HermitianMatrix& x) const;
    /// Phi(I) = sum A_k* A_k for either flag value.
    ComplexMatrix unit_image() const;
};

class UnitalMapFamily {
public:
    explicit UnitalMapFamily(std::vector<PositiveMap> maps);

    /// Maps X -> C_i* X C_i for each coefficient of a tuple.
    static UnitalMapFamily from_tuple(const CoefficientTuple& t);
    /// m maps, each with `kraus_per_map` Kraus operators drawn from one Haar
    /// tuple; each map is transpose-composed with probability 1/2.
    static UnitalMapFamily sample(int dim, int m, int kraus_per_map, std::uint64_t seed);

    int size() const { return static_cast<int>(maps_.size()); }
    int dim() const;
    const PositiveMap& operator[](int i) const { return maps_[static_cast<std::size_t>(i)]; }
    const std::vector<PositiveMap>& maps() const { return maps_; }

    /// Spectral norm of sum Phi_i(I) - I.
    double unital_defect() const;

    /// sum Phi_i(X_i).
    HermitianMatrix apply(const std::vector<HermitianMatrix>& xs) const;

private:
    std::vector<PositiveMap> maps_;
};

/// sum Phi_i(X_i) together with an equivalent C*-combination of scalars:
/// value = sum_j C_j* (lambda_j I) C_j with C_j = sqrt(Phi_i(P_ij)) over the
/// spectral projections P_ij of each X_i.
struct FamilyCombination {
    HermitianMatrix value;
    CoefficientTuple equivalent;
    std::vector<double> scalars;

    /// sum_j C_j* (scalars_j I) C_j.
    HermitianMatrix reproduce() const;
};

FamilyCombination positive_family_combination(const UnitalMapFamily& family,
                                              const std::vector<HermitianMatrix>& xs,
                                              const ToleranceConfig& tol = {});

}  // namespace opconvex
