#pragma once

#include <algorithm>

namespace opconvex {

/// Tolerances are relative to the spectral scale of the operands
/// (largest absolute eigenvalue), never below `kAbsoluteFloor`.
struct ToleranceConfig {
    static constexpr double kAbsoluteFloor = 1e-14;

    double construction_tol = 1e-12;
    double psd_tol = 1e-8;
    double solver_tol = 1e-9;

    /// Throws InvalidInput unless all tolerances are positive and
    /// construction_tol <= psd_tol.
    void validate() const;

    static double threshold(double tol, double scale) {
        return std::max(tol * scale, kAbsoluteFloor);
    }
    double psd_threshold(double scale) const { return threshold(psd_tol, scale); }
    double construction_threshold(double scale) const {
        return threshold(construction_tol, scale);
    }
    double solver_threshold(double scale) const { return threshold(solver_tol, scale); }
};

}  // namespace opconvex
