#pragma once

#include <limits>
#include <string>

namespace opconvex {

/// A real interval J; self-adjoint operators with spectrum in J form sp(J).
struct SpectrumInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool open_lo = true;
    bool open_hi = true;

    static SpectrumInterval real_line() { return {}; }
    static SpectrumInterval positive() {
        return {0.0, std::numeric_limits<double>::infinity(), true, true};
    }
    static SpectrumInterval nonnegative() {
        return {0.0, std::numeric_limits<double>::infinity(), false, true};
    }
    static SpectrumInterval closed(double a, double b) { return {a, b, false, false}; }
    static SpectrumInterval open(double a, double b) { return {a, b, true, true}; }

    bool lo_finite() const { return lo > -std::numeric_limits<double>::infinity(); }
    bool hi_finite() const { return hi < std::numeric_limits<double>::infinity(); }
    bool bounded() const { return lo_finite() && hi_finite(); }

    bool contains(double x) const {
        const bool above = open_lo ? x > lo : x >= lo;
        const bool below = open_hi ? x < hi : x <= hi;
        return above && below;
    }

    /// Contains every point of (0, inf).
    bool covers_positive_axis() const { return lo <= 0.0 && !hi_finite(); }

    /// Throws InvalidInput when lo > hi, or the interval is empty.
    void validate() const;

    std::string to_string() const;
};

}  // namespace opconvex
