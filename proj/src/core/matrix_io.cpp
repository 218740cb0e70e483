#include "matrix_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "errors.hpp"

namespace subpert {

Matrix read_matrix(std::istream& in) {
  long dim = 0;
  if (!(in >> dim) || dim < 1) throw IoError("matrix file: bad dimension line");
  Matrix m(dim, dim);
  for (long i = 0; i < dim; ++i) {
    for (long j = 0; j < dim; ++j) {
      if (!(in >> m(i, j))) {
        std::ostringstream os;
        os << "matrix file: missing entry (" << i << ", " << j << ")";
        throw IoError(os.str());
      }
    }
  }
  std::string extra;
  if (in >> extra) throw IoError("matrix file: trailing data '" + extra + "'");
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("fixture matrices are square");
  out << m.rows() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_matrix(out, m);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace subpert
