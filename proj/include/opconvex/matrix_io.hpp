#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "opconvex/hermitian.hpp"

namespace opconvex {

/// {"dim": n, "entries": [[[re, im], ...], ...]}, row-major.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// Parses the shape only; no Hermitian check. Throws InvalidInput.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
/// Throws InvalidInput naming the first entry pair whose Hermitian defect
/// exceeds 1e-12.
HermitianMatrix hermitian_from_json(const nlohmann::json& j);

HermitianMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const ComplexMatrix& m);

}  // namespace opconvex
