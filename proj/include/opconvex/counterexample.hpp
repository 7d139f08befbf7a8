#pragma once

#include <map>
#include <string>
#include <vector>

#include "opconvex/hermitian.hpp"

namespace opconvex {

/// Everything needed to recompute a violation from scratch.
///
/// `kind` selects the inequality: "midpoint", "jensen", "jensen-maps",
/// "log-midpoint", "log-harmonic-jensen", "epigraph", "log-epigraph",
/// "interval-set", "sublevel", "harmonic-sum". Matrix inputs are keyed by
/// role ("X", "Y", "C", "A", "kraus", ...); scalar parameters likewise.
struct Counterexample {
    std::string kind;
    std::string function;
    std::map<std::string, std::vector<ComplexMatrix>> matrices;
    std::map<std::string, std::vector<double>> params;
    std::vector<std::string> labels;
    HermitianMatrix lhs = HermitianMatrix::zero(1);
    HermitianMatrix rhs = HermitianMatrix::zero(1);
    /// Most negative eigenvalue of rhs - lhs (absolute, not scaled).
    double violation = 0.0;

    const std::vector<ComplexMatrix>& inputs(const std::string& role) const;
};

/// Recomputes the violation of `ce` from its inputs alone, using Eigen's
/// self-adjoint eigensolver rather than the library's Jacobi kernel.
/// Returns the most negative eigenvalue of rhs - lhs.
double reverify(const Counterexample& ce);

/// True when the recomputed violation is negative and within a factor 2 of
/// the stored one.
bool reverifies(const Counterexample& ce);

}  // namespace opconvex
