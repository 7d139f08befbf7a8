#pragma once

#include <functional>
#include <string>
#include <vector>

#include "opconvex/hermitian.hpp"
#include "opconvex/interval.hpp"

namespace opconvex {

enum class FunctionClass { OperatorConvex, OperatorLogConvex, Neither, Unknown };
enum class Provenance { Published, Derived };

std::string to_string(FunctionClass c);
std::string to_string(Provenance p);

/// A named real function f: J -> R with its expected operator classification.
///
/// OperatorLogConvex implies OperatorConvex (a log-convex f satisfies the
/// harmonic Jensen bound, which dominates the linear one).
struct ScalarFunctionSpec {
    std::string label;
    SpectrumInterval domain;
    std::function<double(double)> evaluator;
    FunctionClass expected_class = FunctionClass::Unknown;
    Provenance provenance = Provenance::Derived;

    double operator()(double t) const { return evaluator(t); }

    /// Expected to satisfy the operator Jensen inequality.
    bool expected_convex() const {
        return expected_class == FunctionClass::OperatorConvex ||
               expected_class == FunctionClass::OperatorLogConvex;
    }

    /// f maps (0, inf) into (0, inf), so log-convexity suites apply.
    bool log_suites_apply() const;
};

/// Builds a function from a label.
///
/// Catalog: "t^p" (any real p, "t" and "sqrt" as aliases), "const:c" or a
/// bare number, "exp", "log", "-log", "tlogt", and inline polynomials
/// "poly:a0,a1,...". Throws InvalidInput for unknown labels.
ScalarFunctionSpec parse_function(const std::string& label);

/// Labels of the built-in catalog entries.
std::vector<std::string> catalog_labels();

HermitianMatrix apply_function(const ScalarFunctionSpec& f, const HermitianMatrix& h,
                               const ToleranceConfig& tol = {});

}  // namespace opconvex
