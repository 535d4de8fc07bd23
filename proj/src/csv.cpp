#include "vlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace vlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream& os, const OperatorMatrix& a) {
  const int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      os << i << ',' << j << ',' << format_double(a.mat(i, j).real()) << ','
         << format_double(a.mat(i, j).imag()) << '\n';
}

void write_matrix_csv_file(const std::string& path, const OperatorMatrix& a) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_matrix_csv(os, a);
}

OperatorMatrix read_matrix_csv(std::istream& is, const std::string& basis_tag) {
  struct Entry {
    int i, j;
    double re, im;
  };
  std::vector<Entry> entries;
  int nmax = -1;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Entry e;
    std::istringstream ls(line);
    char c1, c2, c3;
    if (!(ls >> e.i >> c1 >> e.j >> c2 >> e.re >> c3 >> e.im) || c1 != ',' || c2 != ',' || c3 != ',')
      throw std::runtime_error("malformed matrix CSV line: " + line);
    entries.push_back(e);
    nmax = std::max(nmax, std::max(e.i, e.j));
  }
  if (nmax < 0) throw std::runtime_error("empty matrix CSV");
  const int n = nmax + 1;
  Matrix m = Matrix::Zero(n, n);
  for (const auto& e : entries) m(e.i, e.j) = Complex(e.re, e.im);
  return {std::move(m), basis_tag};
}

OperatorMatrix read_matrix_csv_file(const std::string& path, const std::string& basis_tag) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return read_matrix_csv(is, basis_tag);
}

}  // namespace vlab
