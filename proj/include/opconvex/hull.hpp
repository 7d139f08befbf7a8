#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opconvex/combinations.hpp"
#include "opconvex/function.hpp"
#include "opconvex/hermitian.hpp"
#include "opconvex/lab.hpp"

namespace opconvex {

/// Blocks E_1..E_n aligned with the ascending eigenvalues of T
/// (multiplicities included): E_i >= 0, sum E_i = I, sum lambda_i E_i = X.
struct HullWitness {
    std::vector<double> eigenvalues;
    std::vector<HermitianMatrix> blocks;
};

struct WitnessCheck {
    bool valid = false;
    double min_block_eigenvalue = 0.0;
    /// Frobenius norms of sum E_i - I and sum lambda_i E_i - X.
    double partition_residual = 0.0;
    double reconstruction_residual = 0.0;
};

/// Valid when every min-eig(E_i) >= -1e-10 scale and both residuals <= 1e-8.
WitnessCheck check_witness(const HullWitness& w, const HermitianMatrix& x);

enum class Membership { Member, NonMember, Boundary };

std::string to_string(Membership m);

/// Unit vector a with <Xa, a> outside [lambda_min(T), lambda_max(T)].
struct SeparatingCertificate {
    Eigen::VectorXcd vector;
    double quadratic_value = 0.0;
    /// Distance of <Xa, a> from the interval.
    double margin = 0.0;
};

struct FeasibilityResult {
    Membership status = Membership::Boundary;
    std::optional<HullWitness> witness;
    std::optional<SeparatingCertificate> certificate;
    int iterations = 0;
    /// Affine residual of the last iterate (Frobenius).
    double residual = 0.0;
    /// "dykstra", "degenerate", "two-point" or "certificate".
    std::string method;
};

struct OracleResult {
    bool inside = false;
    /// Signed distance of the worst eigenvalue of X to [lambda_min(T),
    /// lambda_max(T)]; positive inside.
    double margin = 0.0;
    double scale = 0.0;
};

/// lambda_min(T) I <= X <= lambda_max(T) I, up to psd_tol.
OracleResult spectral_interval_oracle(const HermitianMatrix& t, const HermitianMatrix& x,
                                      const ToleranceConfig& tol = {});

inline constexpr int kDykstraIterationCap = 10000;

/// Decides X in C*-CH(T) = {sum lambda_i E_i : E_i >= 0, sum E_i = I}.
///
/// A separating eigenvector of X certifies non-membership outright.
/// Otherwise Dykstra's alternating projections between the product of PSD
/// cones and the affine constraints look for a witness. If the iteration
/// cap is reached, the two-point witness is tried (method "two-point");
/// Boundary is returned only when no witness verifies.
FeasibilityResult hull_membership(const HermitianMatrix& t, const HermitianMatrix& x,
                                  const ToleranceConfig& tol = {},
                                  int iteration_cap = kDykstraIterationCap);

/// E_min = (lambda_max I - X)/(lambda_max - lambda_min),
/// E_max = (X - lambda_min I)/(lambda_max - lambda_min), others zero.
HullWitness two_point_witness(const HermitianMatrix& t, const HermitianMatrix& x,
                              const ToleranceConfig& tol = {});

/// sum C_i* T C_i.
HermitianMatrix sample_hull_member(const HermitianMatrix& t, const CoefficientTuple& c,
                                   const ToleranceConfig& tol = {});

/// X in C*-LCH(T) iff X^{-1} in C*-CH(T^{-1}); the witness refers to the
/// reduced problem.
FeasibilityResult lch_membership(const HermitianMatrix& t, const HermitianMatrix& x,
                                 const ToleranceConfig& tol = {});

/// Ascending eigenvalues of f(T), which parametrize C*-CH(f(T)).
std::vector<double> hull_of_function(const HermitianMatrix& t, const ScalarFunctionSpec& f,
                                     const ToleranceConfig& tol = {});

FeasibilityResult hull_of_function_membership(const HermitianMatrix& t,
                                              const ScalarFunctionSpec& f,
                                              const HermitianMatrix& x,
                                              const ToleranceConfig& tol = {});

/// With K = C*-LCH(T1), L = C*-LCH(T2): Z is in (K^{-1} + L^{-1})^{-1} iff
/// (1/a1 + 1/a2)^{-1} I <= Z <= (1/b1 + 1/b2)^{-1} I, where [a, b] spans
/// the spectrum of each T.
struct HarmonicSumBounds {
    double lower = 0.0;
    double upper = 0.0;
};

HarmonicSumBounds harmonic_sum_bounds(const HermitianMatrix& t1, const HermitianMatrix& t2);

/// Explicit X in K and Y in L with (X^{-1} + Y^{-1})^{-1} = Z, for Z
/// within the bounds.
std::pair<HermitianMatrix, HermitianMatrix> harmonic_sum_decomposition(
    const HermitianMatrix& t1, const HermitianMatrix& t2, const HermitianMatrix& z,
    const ToleranceConfig& tol = {});

/// Samples Z = (X^{-1} + Y^{-1})^{-1} from members of K and L, applies
/// log-combinations to lists of them, and checks the results stay in the
/// harmonic-sum set.
TestVerdict harmonic_sum_closure_test(const HermitianMatrix& t1, const HermitianMatrix& t2,
                                      int samples, std::uint64_t seed, int m = 2,
                                      const ToleranceConfig& tol = {});

}  // namespace opconvex
