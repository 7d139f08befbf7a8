#include "opconvex/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include "opconvex/errors.hpp"

namespace opconvex {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        }
        entries.push_back(std::move(row));
    }
    return json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
    try {
        if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
            throw InvalidInput("matrix object needs 'dim' and 'entries'");
        }
        const auto dim = j.at("dim").get<long long>();
        const auto& entries = j.at("entries");
        if (dim < 1 || !entries.is_array() || static_cast<long long>(entries.size()) != dim) {
            throw InvalidInput("'entries' must hold dim rows");
        }
        ComplexMatrix m(dim, dim);
        for (long long r = 0; r < dim; ++r) {
            const auto& row = entries[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<long long>(row.size()) != dim) {
                throw InvalidInput("row " + std::to_string(r) + " must hold dim entries");
            }
            for (long long c = 0; c < dim; ++c) {
                const auto& e = row[static_cast<std::size_t>(c)];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                    throw InvalidInput("entry [" + std::to_string(r) + "][" + std::to_string(c) +
                                       "] must be a [re, im] pair");
                }
                m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            }
        }
        return m;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed matrix: ") + e.what());
    }
}

HermitianMatrix hermitian_from_json(const json& j) {
    const ComplexMatrix m = matrix_from_json(j);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = r; c < m.cols(); ++c) {
            const double defect = std::abs(m(r, c) - std::conj(m(c, r)));
            if (defect > kHermitianConstructionTol) {
                std::ostringstream os;
                os << "matrix is not Hermitian: entries[" << r << "][" << c << "] and entries[" << c
                   << "][" << r << "] differ from conjugates by " << defect;
                throw InvalidInput(os.str());
            }
        }
    }
    return HermitianMatrix(m);
}

HermitianMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open matrix file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidInput("cannot parse '" + path + "': " + e.what());
    }
    return hermitian_from_json(j);
}

void save_matrix(const std::string& path, const ComplexMatrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidInput("cannot write matrix file '" + path + "'");
    }
    out << matrix_to_json(m).dump() << '\n';
}

}  // namespace opconvex
