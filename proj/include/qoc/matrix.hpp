#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qoc {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. Carries Hamiltonians, propagators
/// and target gates.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;

/// Thrown for dimension mismatches, invalid inputs and numerical failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative tolerance used when validating Hamiltonians.
inline constexpr double kHermitianTolerance = 1e-10;

ComplexMatrix identity(Eigen::Index dim);

/// max |A - A*| over entries.
double hermiticity_defect(const ComplexMatrix& a);
/// max |A*A - I| over entries.
double unitarity_defect(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a, double tol);
bool is_unitary(const ComplexMatrix& a, double tol);

/// Throws unless `a` is square with dim >= 1.
void require_square(const ComplexMatrix& a, const char* what);

/// Kronecker product; (a ⊗ b)(i*db + p, j*db + q) = a(i, j) * b(p, q).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// ab - ba.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// ad_x^depth(b): `depth` nested commutators [x, [x, ... [x, b]]].
ComplexMatrix nested_commutator(const ComplexMatrix& x, const ComplexMatrix& b,
                                int depth);

/// Tr(a* b) with a* the conjugate transpose.
Complex overlap_trace(const ComplexMatrix& a, const ComplexMatrix& b);

/// Spectral decomposition h = V diag(values) V* of a Hermitian matrix.
struct HermitianEigensystem {
  RealVector values;
  ComplexMatrix vectors;

  Eigen::Index dim() const { return values.size(); }
};

/// Diagonalizes `h`. Rejects matrices whose anti-Hermitian part exceeds
/// kHermitianTolerance relative to the largest entry.
HermitianEigensystem diagonalize_hermitian(const ComplexMatrix& h);

/// exp(-i theta h) from a precomputed eigensystem of h.
ComplexMatrix expm_from_eigensystem(const HermitianEigensystem& eig,
                                    double theta);

/// exp(-i theta h) for Hermitian h.
ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double theta);

}  // namespace qoc
