#include "opconvex/counterexample.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "opconvex/errors.hpp"
#include "opconvex/function.hpp"

// Re-verification uses Eigen's SelfAdjointEigenSolver and plain matrix
// products, not the Jacobi eigensolver, apply_function or apply_combination.

namespace opconvex {

const std::vector<ComplexMatrix>& Counterexample::inputs(const std::string& role) const {
    const auto it = matrices.find(role);
    if (it == matrices.end()) {
        throw InvalidInput("counterexample of kind '" + kind + "' lacks input '" + role + "'");
    }
    return it->second;
}

namespace {

using Solver = Eigen::SelfAdjointEigenSolver<ComplexMatrix>;

ComplexMatrix herm(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double min_eig(const ComplexMatrix& m) { return Solver(herm(m), Eigen::EigenvaluesOnly).eigenvalues()(0); }

ComplexMatrix spectral_map(const ComplexMatrix& m, const std::function<double(double)>& g) {
    const Solver es(herm(m));
    Eigen::VectorXd d = es.eigenvalues().unaryExpr(g);
    return herm(es.eigenvectors() * d.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint());
}

ComplexMatrix fn(const ScalarFunctionSpec& f, const ComplexMatrix& m) {
    const auto& dom = f.domain;
    return spectral_map(m, [&](double x) {
        // Rounding may push a spectrum a hair past a closed endpoint.
        if (dom.lo_finite() && !dom.open_lo && x < dom.lo) x = dom.lo;
        if (dom.hi_finite() && !dom.open_hi && x > dom.hi) x = dom.hi;
        return f(x);
    });
}

ComplexMatrix inv(const ComplexMatrix& m) { return herm(m.inverse()); }

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    return spectral_map(m, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

ComplexMatrix gmean(const ComplexMatrix& a, const ComplexMatrix& b) {
    const ComplexMatrix ah = psd_sqrt(a);
    const ComplexMatrix aih = inv(ah);
    return herm(ah * psd_sqrt(herm(aih * b * aih)) * ah);
}

ComplexMatrix combine(const std::vector<ComplexMatrix>& cs, const std::vector<ComplexMatrix>& xs) {
    if (cs.size() != xs.size()) {
        throw DimensionError("counterexample: coefficient and operator counts differ");
    }
    ComplexMatrix acc = ComplexMatrix::Zero(xs.front().rows(), xs.front().cols());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        acc += cs[i].adjoint() * xs[i] * cs[i];
    }
    return herm(acc);
}

ComplexMatrix combine_maps(const Counterexample& ce, const std::vector<ComplexMatrix>& xs) {
    const auto& kraus = ce.inputs("kraus");
    const auto& sizes = ce.params.at("map_sizes");
    const auto& flags = ce.params.at("transposed");
    if (sizes.size() != xs.size() || flags.size() != xs.size()) {
        throw DimensionError("counterexample: map count differs from operator count");
    }
    ComplexMatrix acc = ComplexMatrix::Zero(xs.front().rows(), xs.front().cols());
    std::size_t next = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const ComplexMatrix in = flags[i] != 0.0 ? ComplexMatrix(xs[i].transpose()) : xs[i];
        for (int k = 0; k < static_cast<int>(sizes[i]); ++k) {
            const auto& a = kraus.at(next++);
            acc += a.adjoint() * in * a;
        }
    }
    return herm(acc);
}

std::vector<ComplexMatrix> map_all(const ScalarFunctionSpec& f, const std::vector<ComplexMatrix>& xs) {
    std::vector<ComplexMatrix> out;
    for (const auto& x : xs) out.push_back(fn(f, x));
    return out;
}

std::vector<ComplexMatrix> invert_all(const std::vector<ComplexMatrix>& xs) {
    std::vector<ComplexMatrix> out;
    for (const auto& x : xs) out.push_back(inv(x));
    return out;
}

}  // namespace

double reverify(const Counterexample& ce) {
    const std::string& k = ce.kind;
    if (k == "interval-set") {
        const auto& a = ce.inputs("A").front();
        const ComplexMatrix combined = combine(ce.inputs("C"), ce.inputs("X"));
        return std::min(min_eig(combined), min_eig(a - combined));
    }
    if (k == "sublevel") {
        const ComplexMatrix combined = combine(ce.inputs("C"), ce.inputs("X"));
        const auto& bounds = ce.params.at("bounds");
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ce.labels.size(); ++i) {
            const auto f = parse_function(ce.labels[i]);
            const auto n = combined.rows();
            worst = std::min(worst, min_eig(bounds.at(i) * ComplexMatrix::Identity(n, n) - fn(f, combined)));
        }
        return worst;
    }
    if (k == "harmonic-sum") {
        const ComplexMatrix z = inv(combine(ce.inputs("C"), invert_all(ce.inputs("Z"))));
        const auto& b = ce.params.at("bounds");
        const auto n = z.rows();
        const ComplexMatrix id = ComplexMatrix::Identity(n, n);
        return std::min(min_eig(z - b.at(0) * id), min_eig(b.at(1) * id - z));
    }

    const auto f = parse_function(ce.function);
    ComplexMatrix lhs;
    ComplexMatrix rhs;
    if (k == "midpoint") {
        const auto& x = ce.inputs("X").front();
        const auto& y = ce.inputs("Y").front();
        lhs = fn(f, 0.5 * (x + y));
        rhs = 0.5 * (fn(f, x) + fn(f, y));
    } else if (k == "log-midpoint") {
        const auto& x = ce.inputs("X").front();
        const auto& y = ce.inputs("Y").front();
        lhs = fn(f, 0.5 * (x + y));
        rhs = gmean(fn(f, x), fn(f, y));
    } else if (k == "jensen") {
        const auto& xs = ce.inputs("X");
        lhs = fn(f, combine(ce.inputs("C"), xs));
        rhs = combine(ce.inputs("C"), map_all(f, xs));
    } else if (k == "jensen-maps") {
        const auto& xs = ce.inputs("X");
        lhs = fn(f, combine_maps(ce, xs));
        rhs = combine_maps(ce, map_all(f, xs));
    } else if (k == "log-harmonic-jensen") {
        const auto& xs = ce.inputs("X");
        lhs = fn(f, combine(ce.inputs("C"), xs));
        rhs = inv(combine(ce.inputs("C"), invert_all(map_all(f, xs))));
    } else if (k == "epigraph") {
        lhs = fn(f, combine(ce.inputs("C"), ce.inputs("X")));
        rhs = combine(ce.inputs("C"), ce.inputs("Y"));
    } else if (k == "log-epigraph") {
        const ComplexMatrix x_inv = combine(ce.inputs("C"), invert_all(ce.inputs("X")));
        lhs = fn(f, x_inv);
        rhs = inv(combine(ce.inputs("C"), invert_all(ce.inputs("Y"))));
    } else {
        throw InvalidInput("unknown counterexample kind '" + k + "'");
    }
    return min_eig(rhs - lhs);
}

bool reverifies(const Counterexample& ce) {
    if (!(ce.violation < 0.0)) {
        return false;
    }
    const double again = reverify(ce);
    return again < 0.0 && again <= 0.5 * ce.violation && again >= 2.0 * ce.violation;
}

}  // namespace opconvex
