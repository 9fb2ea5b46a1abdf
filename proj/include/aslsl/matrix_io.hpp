#pragma once

#include <string>

#include "aslsl/types.hpp"

namespace aslsl {

// Reads a headerless CSV of real numbers into a dense matrix. All rows must
// have the same number of fields and every value must be finite; violations
// are reported with file, row and column (1-based).
Matrix read_csv_matrix(const std::string& path);

// Writes a matrix as headerless CSV with enough digits that a read back
// reproduces every entry bit-identically.
void write_csv_matrix(const std::string& path, const Matrix& m);

// Shortest-faithful formatting used for all numeric file output.
std::string format_double(double v);

} // namespace aslsl
