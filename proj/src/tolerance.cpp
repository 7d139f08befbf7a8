#include "opconvex/tolerance.hpp"

#include <sstream>

#include "opconvex/errors.hpp"
#include "opconvex/interval.hpp"

namespace opconvex {

void ToleranceConfig::validate() const {
    if (!(construction_tol > 0.0 && psd_tol > 0.0 && solver_tol > 0.0)) {
        throw InvalidInput("tolerances must be strictly positive");
    }
    if (construction_tol > psd_tol) {
        throw InvalidInput("construction_tol must not exceed psd_tol");
    }
}

void SpectrumInterval::validate() const {
    if (!(lo <= hi)) {
        throw InvalidInput("interval " + to_string() + " has lo > hi");
    }
    if (lo == hi && (open_lo || open_hi)) {
        throw InvalidInput("interval " + to_string() + " is empty");
    }
}

std::string SpectrumInterval::to_string() const {
    std::ostringstream os;
    os << (open_lo ? '(' : '[') << lo << ", " << hi << (open_hi ? ')' : ']');
    return os.str();
}

}  // namespace opconvex
