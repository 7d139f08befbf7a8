#include "opconvex/report.hpp"

#include "opconvex/errors.hpp"
#include "opconvex/matrix_io.hpp"

namespace opconvex {

using nlohmann::json;

namespace {

json matrices_to_json(const std::vector<ComplexMatrix>& ms) {
    json arr = json::array();
    for (const auto& m : ms) {
        arr.push_back(matrix_to_json(m));
    }
    return arr;
}

}  // namespace

json to_json(const ToleranceConfig& tol) {
    return {{"construction_tol", tol.construction_tol},
            {"psd_tol", tol.psd_tol},
            {"solver_tol", tol.solver_tol},
            {"absolute_floor", ToleranceConfig::kAbsoluteFloor}};
}

json to_json(const Counterexample& ce) {
    json inputs = json::object();
    for (const auto& [role, ms] : ce.matrices) {
        inputs[role] = matrices_to_json(ms);
    }
    json j{{"kind", ce.kind},
           {"function", ce.function},
           {"inputs", std::move(inputs)},
           {"params", ce.params},
           {"lhs", matrix_to_json(ce.lhs.matrix())},
           {"rhs", matrix_to_json(ce.rhs.matrix())},
           {"violation", ce.violation}};
    if (!ce.labels.empty()) {
        j["labels"] = ce.labels;
    }
    return j;
}

Counterexample counterexample_from_json(const json& j) {
    try {
        Counterexample ce;
        ce.kind = j.at("kind").get<std::string>();
        ce.function = j.value("function", std::string{});
        for (const auto& [role, arr] : j.at("inputs").items()) {
            auto& out = ce.matrices[role];
            for (const auto& m : arr) {
                out.push_back(matrix_from_json(m));
            }
        }
        if (j.contains("params")) {
            ce.params = j.at("params").get<std::map<std::string, std::vector<double>>>();
        }
        if (j.contains("labels")) {
            ce.labels = j.at("labels").get<std::vector<std::string>>();
        }
        ce.lhs = HermitianMatrix::symmetrized(matrix_from_json(j.at("lhs")));
        ce.rhs = HermitianMatrix::symmetrized(matrix_from_json(j.at("rhs")));
        ce.violation = j.at("violation").get<double>();
        return ce;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed counterexample: ") + e.what());
    }
}

json to_json(const TestVerdict& v) {
    json j{{"status", to_string(v.status)},
           {"samples_run", v.samples_run},
           {"worst_margin", v.worst_margin},
           {"boundary_count", v.boundary_count},
           {"domain_rejections", v.domain_rejections}};
    if (v.counterexample) {
        j["counterexample"] = to_json(*v.counterexample);
    } else {
        j["note"] = kEvidenceNote;
    }
    return j;
}

json to_json(const HullWitness& w) {
    json blocks = json::array();
    for (const auto& e : w.blocks) {
        blocks.push_back(matrix_to_json(e.matrix()));
    }
    return {{"eigenvalues", w.eigenvalues}, {"blocks", std::move(blocks)}};
}

json to_json(const FeasibilityResult& r) {
    json j{{"status", to_string(r.status)},
           {"method", r.method},
           {"iterations", r.iterations},
           {"residual", r.residual}};
    if (r.witness) {
        j["witness"] = to_json(*r.witness);
    }
    if (r.certificate) {
        json vec = json::array();
        for (Eigen::Index i = 0; i < r.certificate->vector.size(); ++i) {
            const auto z = r.certificate->vector(i);
            vec.push_back(json::array({z.real(), z.imag()}));
        }
        j["certificate"] = {{"vector", std::move(vec)},
                            {"quadratic_value", r.certificate->quadratic_value},
                            {"margin", r.certificate->margin}};
    }
    return j;
}

}  // namespace opconvex
