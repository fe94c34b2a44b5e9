#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pherm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every analysis. All fields are relative and
/// must lie strictly inside (0, 1).
struct Tolerances {
  /// Singular values at or below rank_rel * sigma_max * dim count as zero.
  double rank_rel = 1e-10;
  /// Single-linkage radius for eigenvalue clustering, relative to the
  /// spectral scale max(1, spectral radius).
  double cluster_rel = 1e-2;
  /// Bound on normalized residuals of operator identities.
  double verify_rel = 1e-8;
  /// |Im E| <= real_rel * scale classifies an eigenvalue as real.
  double real_rel = 1e-8;

  void validate() const;
};

bool all_finite(const CMatrix& m);

/// Throws InvalidArgument unless `m` is non-empty, square and finite.
void require_square_finite(const CMatrix& m, std::string_view what);

CMatrix adjoint(const CMatrix& m);

CMatrix identity(Index dim);

std::vector<double> singular_values(const CMatrix& m);

/// rank_rel * sigma_max * dim; zero for the zero matrix.
double rank_threshold(double sigma_max, Index dim, const Tolerances& tol);

int numerical_rank(const CMatrix& m, const Tolerances& tol);

/// Orthonormal basis (as columns) for the right singular vectors of `m`
/// whose singular values are <= threshold.
CMatrix nullspace_basis(const CMatrix& m, double threshold);

/// Orthonormal basis for the column span of `m`, expecting exactly `rank`
/// independent columns. Throws SingularMatrix if the columns are dependent.
CMatrix orthonormal_span(const CMatrix& m, Index rank, double floor);

CMatrix inverse(const CMatrix& m, const Tolerances& tol);

/// sigma_max / sigma_min; infinity for singular input.
double condition_number(const CMatrix& m);

/// All n eigenvalues with multiplicity, via Hessenberg reduction and shifted
/// QR (complex Schur form). At most 100*dim iterations before
/// ConvergenceFailure.
std::vector<Complex> eigenvalues(const CMatrix& m);

/// Smallest eigenvalue of the Hermitian part (m + m^dagger) / 2.
double min_hermitian_eigenvalue(const CMatrix& m);

/// Largest absolute eigenvalue of the Hermitian part, i.e. its 2-norm.
double hermitian_norm2(const CMatrix& m);

}  // namespace pherm
