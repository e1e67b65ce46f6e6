#include "qoc/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace qoc {

ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw Error(std::string(what) + ": expected a non-empty square matrix, got " +
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                      const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw Error(std::string(what) + ": dimension mismatch (" +
                std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) +
                ")");
  }
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a, "hermiticity_defect");
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& a) {
  require_square(a, "unitarity_defect");
  return (a.adjoint() * a - identity(a.rows())).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return hermiticity_defect(a) <= tol;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  return unitarity_defect(a) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "kron");
  require_square(b, "kron");
  const Eigen::Index da = a.rows();
  const Eigen::Index db = b.rows();
  ComplexMatrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix nested_commutator(const ComplexMatrix& x, const ComplexMatrix& b,
                                int depth) {
  require_same_dim(x, b, "nested_commutator");
  if (depth < 0) throw Error("nested_commutator: negative depth");
  ComplexMatrix term = b;
  for (int j = 0; j < depth; ++j) term = x * term - term * x;
  return term;
}

Complex overlap_trace(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "overlap_trace");
  // Tr(a* b) = sum_ij conj(a_ij) b_ij
  Complex sum{0.0, 0.0};
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      sum += std::conj(a(i, j)) * b(i, j);
    }
  }
  return sum;
}

HermitianEigensystem diagonalize_hermitian(const ComplexMatrix& h) {
  require_square(h, "diagonalize_hermitian");
  const double scale = h.cwiseAbs().maxCoeff();
  const double defect = hermiticity_defect(h);
  if (!(defect <= kHermitianTolerance * scale)) {
    throw Error("diagonalize_hermitian: matrix is not Hermitian (defect " +
                std::to_string(defect) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error("diagonalize_hermitian: eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm_from_eigensystem(const HermitianEigensystem& eig,
                                    double theta) {
  const Eigen::Index n = eig.dim();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    phases(a) = std::polar(1.0, -theta * eig.values(a));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double theta) {
  return expm_from_eigensystem(diagonalize_hermitian(h), theta);
}

}  // namespace qoc
