#ifndef VLAB_CSV_HPP
#define VLAB_CSV_HPP

#include <iosfwd>
#include <string>

#include "vlab/matrix.hpp"

namespace vlab {

/// Matrix CSV: one line per entry, "i,j,re,im", row-major, 17 significant
/// digits (round-trip exact for binary64).
void write_matrix_csv(std::ostream& os, const OperatorMatrix& a);
void write_matrix_csv_file(const std::string& path, const OperatorMatrix& a);

/// Inverse of write_matrix_csv; dimension inferred from the largest index.
OperatorMatrix read_matrix_csv(std::istream& is, const std::string& basis_tag);
OperatorMatrix read_matrix_csv_file(const std::string& path, const std::string& basis_tag);

std::string format_double(double v);  // %.17g

}  // namespace vlab

#endif
