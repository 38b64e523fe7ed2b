#pragma once

#include "nilsoliton/tensor.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace nilsoliton {

/// Tensor file format:
///   {"p": int, "q": int, "matrices": [[q*q numbers, row-major], ...], "labels": [...]}
/// Numbers may also be given as decimal strings. Errors name the offending
/// field (e.g. "matrices[1][5]").
StructureTensor tensor_from_json(const nlohmann::json& j);
nlohmann::json tensor_to_json(const StructureTensor& c);

/// Reads a tensor file; IoError when the file cannot be read, ContractError
/// when its contents are malformed (parse errors carry line/column).
StructureTensor read_tensor_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Square matrix <-> nested row arrays.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);

}  // namespace nilsoliton
