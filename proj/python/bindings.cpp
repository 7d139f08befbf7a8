#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "opconvex/cli.hpp"
#include "opconvex/errors.hpp"
#include "opconvex/hull.hpp"
#include "opconvex/lab.hpp"
#include "opconvex/report.hpp"

namespace py = pybind11;
using namespace opconvex;

namespace {

py::object to_python(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
        case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
        case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
        case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(to_python(v));
            return std::move(out);
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
            return std::move(out);
        }
        default: return py::none();
    }
}

ToleranceConfig tolerance(double psd_tol) {
    ToleranceConfig tol;
    tol.psd_tol = psd_tol;
    tol.construction_tol = std::min(tol.construction_tol, psd_tol);
    tol.validate();
    return tol;
}

std::vector<HermitianMatrix> hermitians(const std::vector<ComplexMatrix>& ms) {
    return {ms.begin(), ms.end()};
}

SuiteOptions suite(int dim, int m, int samples, std::uint64_t seed, double psd_tol) {
    SuiteOptions opt;
    opt.dim = dim;
    opt.m = m;
    opt.samples = samples;
    opt.seed = seed;
    opt.tol = tolerance(psd_tol);
    return opt;
}

constexpr double kDefaultPsdTol = 1e-8;

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Operator convexity toolkit: Hermitian kernels, C*-combinations, falsification suites and hulls";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

    m.def("eig_hermitian", [](const ComplexMatrix& h) {
        const auto d = eig_hermitian(HermitianMatrix(h));
        return py::make_tuple(d.eigenvalues, d.unitary);
    }, py::arg("h"), "Ascending eigenvalues and unitary eigenvector matrix.");

    m.def("loewner_leq", [](const ComplexMatrix& a, const ComplexMatrix& b, double psd_tol) {
        const auto r = loewner_leq(HermitianMatrix(a), HermitianMatrix(b), tolerance(psd_tol));
        return py::make_tuple(r.holds, r.margin);
    }, py::arg("a"), py::arg("b"), py::arg("psd_tol") = kDefaultPsdTol);

    m.def("apply_function", [](const std::string& label, const ComplexMatrix& h) {
        return apply_function(parse_function(label), HermitianMatrix(h)).matrix();
    }, py::arg("function"), py::arg("h"));

    m.def("geometric_mean", [](const ComplexMatrix& a, const ComplexMatrix& b) {
        return geometric_mean(HermitianMatrix(a), HermitianMatrix(b)).matrix();
    }, py::arg("a"), py::arg("b"));

    m.def("sample_hermitian", [](int dim, double lo, double hi, std::uint64_t seed) {
        return sample_hermitian(dim, SpectrumInterval::closed(lo, hi), seed).matrix();
    }, py::arg("dim"), py::arg("lo"), py::arg("hi"), py::arg("seed"));

    m.def("sample_tuple", [](int dim, int count, std::uint64_t seed) {
        return sample_tuple(dim, count, seed).coeffs();
    }, py::arg("dim"), py::arg("m"), py::arg("seed"));

    m.def("validate_tuple", [](const std::vector<ComplexMatrix>& coeffs) {
        const auto r = validate_tuple(CoefficientTuple(coeffs));
        return py::make_tuple(r.valid, r.defect);
    }, py::arg("coeffs"));

    m.def("apply_combination", [](const std::vector<ComplexMatrix>& coeffs, const std::vector<ComplexMatrix>& xs) {
        return apply_combination(CoefficientTuple(coeffs), hermitians(xs)).matrix();
    }, py::arg("coeffs"), py::arg("xs"));

    m.def("apply_log_combination", [](const std::vector<ComplexMatrix>& coeffs, const std::vector<ComplexMatrix>& xs) {
        return apply_log_combination(CoefficientTuple(coeffs), hermitians(xs)).matrix();
    }, py::arg("coeffs"), py::arg("xs"));

    m.def("function_class", [](const std::string& label) {
        return to_string(parse_function(label).expected_class);
    }, py::arg("function"));

    m.def("midpoint_convexity_test", [](const std::string& f, int dim, int samples, std::uint64_t seed, double psd_tol) {
        return to_python(to_json(midpoint_convexity_test(parse_function(f), suite(dim, 2, samples, seed, psd_tol))));
    }, py::arg("function"), py::arg("dim"), py::arg("samples"), py::arg("seed"), py::arg("psd_tol") = kDefaultPsdTol);

    m.def("jensen_test", [](const std::string& f, const std::string& mode, int dim, int count, int samples,
                            std::uint64_t seed, double psd_tol) {
        return to_python(to_json(jensen_test(parse_function(f), parse_jensen_mode(mode),
                                             suite(dim, count, samples, seed, psd_tol))));
    }, py::arg("function"), py::arg("mode"), py::arg("dim"), py::arg("m"), py::arg("samples"), py::arg("seed"),
       py::arg("psd_tol") = kDefaultPsdTol);

    m.def("log_midpoint_test", [](const std::string& f, int dim, int samples, std::uint64_t seed, double psd_tol) {
        return to_python(to_json(log_midpoint_test(parse_function(f), suite(dim, 2, samples, seed, psd_tol))));
    }, py::arg("function"), py::arg("dim"), py::arg("samples"), py::arg("seed"), py::arg("psd_tol") = kDefaultPsdTol);

    m.def("log_harmonic_jensen_test", [](const std::string& f, int dim, int count, int samples, std::uint64_t seed,
                                         double psd_tol) {
        return to_python(to_json(log_harmonic_jensen_test(parse_function(f), suite(dim, count, samples, seed, psd_tol))));
    }, py::arg("function"), py::arg("dim"), py::arg("m"), py::arg("samples"), py::arg("seed"),
       py::arg("psd_tol") = kDefaultPsdTol);

    m.def("epigraph_closure_test", [](const std::string& f, int dim, int count, int samples, std::uint64_t seed,
                                      double noise) {
        return to_python(to_json(epigraph_closure_test(parse_function(f), suite(dim, count, samples, seed, kDefaultPsdTol), noise)));
    }, py::arg("function"), py::arg("dim"), py::arg("m"), py::arg("samples"), py::arg("seed"), py::arg("noise") = 0.1);

    m.def("log_epigraph_closure_test", [](const std::string& f, int dim, int count, int samples, std::uint64_t seed,
                                          double noise) {
        return to_python(to_json(log_epigraph_closure_test(parse_function(f), suite(dim, count, samples, seed, kDefaultPsdTol), noise)));
    }, py::arg("function"), py::arg("dim"), py::arg("m"), py::arg("samples"), py::arg("seed"), py::arg("noise") = 0.1);

    m.def("interval_set_falsifier", [](const ComplexMatrix& a, int samples, std::uint64_t seed) {
        return to_python(to_json(interval_set_falsifier(HermitianMatrix(a), samples, seed)));
    }, py::arg("a"), py::arg("samples"), py::arg("seed"));

    m.def("hull_membership", [](const ComplexMatrix& t, const ComplexMatrix& x) {
        return to_python(to_json(hull_membership(HermitianMatrix(t), HermitianMatrix(x))));
    }, py::arg("t"), py::arg("x"));

    m.def("lch_membership", [](const ComplexMatrix& t, const ComplexMatrix& x) {
        return to_python(to_json(lch_membership(HermitianMatrix(t), HermitianMatrix(x))));
    }, py::arg("t"), py::arg("x"));

    m.def("spectral_interval_oracle", [](const ComplexMatrix& t, const ComplexMatrix& x) {
        const auto r = spectral_interval_oracle(HermitianMatrix(t), HermitianMatrix(x));
        return py::make_tuple(r.inside, r.margin);
    }, py::arg("t"), py::arg("x"));

    m.def("two_point_witness", [](const ComplexMatrix& t, const ComplexMatrix& x) {
        const auto w = two_point_witness(HermitianMatrix(t), HermitianMatrix(x));
        std::vector<ComplexMatrix> blocks;
        for (const auto& b : w.blocks) blocks.push_back(b.matrix());
        return py::make_tuple(w.eigenvalues, blocks);
    }, py::arg("t"), py::arg("x"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Run a command-line invocation in-process; returns (exit_code, stdout, stderr).");
}
