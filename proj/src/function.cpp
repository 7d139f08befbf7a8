#include "opconvex/function.hpp"

#include <cmath>
#include <sstream>

#include "opconvex/errors.hpp"

namespace opconvex {

std::string to_string(FunctionClass c) {
    switch (c) {
        case FunctionClass::OperatorConvex: return "operator-convex";
        case FunctionClass::OperatorLogConvex: return "operator-log-convex";
        case FunctionClass::Neither: return "neither";
        case FunctionClass::Unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(Provenance p) { return p == Provenance::Published ? "published" : "derived"; }

bool ScalarFunctionSpec::log_suites_apply() const {
    if (!domain.covers_positive_axis()) {
        return false;
    }
    for (int k = -30; k <= 30; ++k) {
        const double t = std::pow(10.0, k / 10.0);
        const double v = evaluator(t);
        if (!(v > 0.0) || !std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

namespace {

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) {
        return false;
    }
    std::istringstream is(s);
    is >> out;
    return !is.fail() && is.eof();
}

ScalarFunctionSpec power_function(const std::string& label, double p) {
    ScalarFunctionSpec f;
    f.label = label;
    const bool integral = std::floor(p) == p;
    if (integral && p >= 0.0) {
        f.domain = SpectrumInterval::real_line();
    } else if (p > 0.0) {
        f.domain = SpectrumInterval::nonnegative();
    } else {
        f.domain = SpectrumInterval::positive();
    }
    if (p == 0.0) {
        f.evaluator = [](double) { return 1.0; };
    } else if (p == 1.0) {
        f.evaluator = [](double t) { return t; };
    } else if (p == 2.0) {
        f.evaluator = [](double t) { return t * t; };
    } else {
        f.evaluator = [p](double t) { return std::pow(t, p); };
    }
    if (p >= 1.0 && p <= 2.0) {
        f.expected_class = FunctionClass::OperatorConvex;
        f.provenance = Provenance::Published;
    } else if (p >= -1.0 && p <= 0.0) {
        f.expected_class = FunctionClass::OperatorLogConvex;
    } else if (p >= -2.0 && p < -1.0) {
        f.expected_class = FunctionClass::OperatorConvex;
    } else {
        f.expected_class = FunctionClass::Neither;
    }
    return f;
}

ScalarFunctionSpec constant_function(const std::string& label, double c) {
    ScalarFunctionSpec f;
    f.label = label;
    f.domain = SpectrumInterval::real_line();
    f.evaluator = [c](double) { return c; };
    f.expected_class = c > 0.0 ? FunctionClass::OperatorLogConvex : FunctionClass::OperatorConvex;
    return f;
}

ScalarFunctionSpec polynomial_function(const std::string& label, const std::string& body) {
    std::vector<double> coeffs;
    std::istringstream is(body);
    std::string item;
    while (std::getline(is, item, ',')) {
        double v = 0.0;
        if (!parse_double(item, v)) {
            throw InvalidInput("bad polynomial coefficient '" + item + "' in " + label);
        }
        coeffs.push_back(v);
    }
    if (coeffs.empty()) {
        throw InvalidInput("polynomial " + label + " has no coefficients");
    }
    while (coeffs.size() > 1 && coeffs.back() == 0.0) {
        coeffs.pop_back();
    }
    ScalarFunctionSpec f;
    f.label = label;
    f.domain = SpectrumInterval::real_line();
    f.evaluator = [coeffs](double t) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = acc * t + *it;
        }
        return acc;
    };
    const std::size_t degree = coeffs.size() - 1;
    if (degree <= 1 || (degree == 2 && coeffs[2] > 0.0)) {
        f.expected_class = FunctionClass::OperatorConvex;
    } else if (degree == 2) {
        f.expected_class = FunctionClass::Neither;
    } else {
        f.expected_class = FunctionClass::Unknown;
    }
    return f;
}

}  // namespace

ScalarFunctionSpec parse_function(const std::string& label) {
    if (label == "t") {
        return power_function(label, 1.0);
    }
    if (label == "sqrt") {
        return power_function(label, 0.5);
    }
    if (label.rfind("t^", 0) == 0) {
        double p = 0.0;
        if (!parse_double(label.substr(2), p)) {
            throw InvalidInput("unknown function label '" + label + "'");
        }
        return power_function(label, p);
    }
    if (label.rfind("const:", 0) == 0) {
        double c = 0.0;
        if (!parse_double(label.substr(6), c)) {
            throw InvalidInput("unknown function label '" + label + "'");
        }
        return constant_function(label, c);
    }
    if (label.rfind("poly:", 0) == 0) {
        return polynomial_function(label, label.substr(5));
    }
    if (double c = 0.0; parse_double(label, c)) {
        return constant_function(label, c);
    }

    ScalarFunctionSpec f;
    f.label = label;
    if (label == "exp") {
        f.domain = SpectrumInterval::real_line();
        f.evaluator = [](double t) { return std::exp(t); };
        f.expected_class = FunctionClass::Neither;
    } else if (label == "log") {
        f.domain = SpectrumInterval::positive();
        f.evaluator = [](double t) { return std::log(t); };
        f.expected_class = FunctionClass::Neither;
    } else if (label == "-log") {
        f.domain = SpectrumInterval::positive();
        f.evaluator = [](double t) { return -std::log(t); };
        f.expected_class = FunctionClass::OperatorConvex;
    } else if (label == "tlogt") {
        f.domain = SpectrumInterval::nonnegative();
        f.evaluator = [](double t) { return t > 0.0 ? t * std::log(t) : 0.0; };
        f.expected_class = FunctionClass::OperatorConvex;
    } else {
        throw InvalidInput("unknown function label '" + label + "'");
    }
    return f;
}

std::vector<std::string> catalog_labels() {
    return {"t", "t^1.5", "t^2", "t^3", "t^4", "t^-1", "t^-0.5", "t^-2", "sqrt",
            "const:1", "exp", "log", "-log", "tlogt"};
}

HermitianMatrix apply_function(const ScalarFunctionSpec& f, const HermitianMatrix& h,
                               const ToleranceConfig& tol) {
    return apply_function(f.evaluator, f.domain, h, tol);
}

}  // namespace opconvex
