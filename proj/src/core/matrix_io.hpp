#pragma once

// Plain-text fixture format: first line "dim", then dim rows of
// whitespace-separated reals. Values are written with 17 significant digits
// so a round trip is exact.

#include <filesystem>
#include <iosfwd>

#include "linalg.hpp"

namespace subpert {

Matrix read_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

}  // namespace subpert
