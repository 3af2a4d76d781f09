#pragma once

#include <filesystem>

#include "radi/common.hpp"

namespace radi {

/// Reads real `general` or `symmetric` Matrix Market files in coordinate or array
/// format. Symmetric storage is expanded. Parse errors carry the line number.
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Dense view of read_matrix_market.
Matrix read_matrix_market_dense(const std::filesystem::path& path);

/// Coordinate format, real general, values printed with 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m);

/// Array format, real general, column major.
void write_matrix_market(const std::filesystem::path& path, const Matrix& m);

}  // namespace radi
