#include "pherm/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pherm/errors.hpp"

namespace pherm {

void Tolerances::validate() const {
  const auto check = [](double value, const char* name) {
    if (!(value > 0.0 && value < 1.0)) {
      fail(ErrorCode::InvalidArgument,
           std::string("tolerance ") + name + " must lie in (0, 1), got " + std::to_string(value));
    }
  };
  check(rank_rel, "rank_rel");
  check(cluster_rel, "cluster_rel");
  check(verify_rel, "verify_rel");
  check(real_rel, "real_rel");
}

bool all_finite(const CMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

void require_square_finite(const CMatrix& m, std::string_view what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " must be a non-empty square matrix");
  }
  if (!all_finite(m)) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
  }
}

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

CMatrix identity(Index dim) { return CMatrix::Identity(dim, dim); }

std::vector<double> singular_values(const CMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::BDCSVD<CMatrix> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double rank_threshold(double sigma_max, Index dim, const Tolerances& tol) {
  return tol.rank_rel * sigma_max * static_cast<double>(dim);
}

int numerical_rank(const CMatrix& m, const Tolerances& tol) {
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  const double threshold = rank_threshold(s.front(), std::max(m.rows(), m.cols()), tol);
  return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double v) { return v > threshold; }));
}

CMatrix nullspace_basis(const CMatrix& m, double threshold) {
  const Index n = m.cols();
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) > threshold) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

CMatrix orthonormal_span(const CMatrix& m, Index rank, double floor) {
  if (rank == 0) return CMatrix(m.rows(), 0);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() < rank || s(rank - 1) <= floor * std::max(1.0, s(0))) {
    fail(ErrorCode::SingularMatrix, "columns do not span the expected " + std::to_string(rank) +
                                        "-dimensional subspace");
  }
  return svd.matrixU().leftCols(rank);
}

CMatrix inverse(const CMatrix& m, const Tolerances& tol) {
  require_square_finite(m, "inverse operand");
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double threshold = rank_threshold(s(0), m.rows(), tol);
  if (s(0) == 0.0 || s(s.size() - 1) <= threshold) {
    fail(ErrorCode::SingularMatrix, "smallest singular value " + std::to_string(s(s.size() - 1)) +
                                        " is at or below the rank threshold");
  }
  // Solve with an LU factorization; the SVD only certifies invertibility.
  CMatrix result = m.fullPivLu().inverse();
  return result;
}

double condition_number(const CMatrix& m) {
  const auto s = singular_values(m);
  if (s.empty() || s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

std::vector<Complex> eigenvalues(const CMatrix& m) {
  require_square_finite(m, "eigenvalue operand");
  const Index n = m.rows();
  if (m.isZero(0.0)) return std::vector<Complex>(static_cast<std::size_t>(n), Complex{0.0, 0.0});
  Eigen::ComplexSchur<CMatrix> schur(n);
  schur.setMaxIterations(100 * n);
  schur.compute(m, /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    fail(ErrorCode::ConvergenceFailure,
         "shifted QR did not converge within " + std::to_string(100 * n) + " iterations");
  }
  const CMatrix& t = schur.matrixT();
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = t(i, i);
  return out;
}

double min_hermitian_eigenvalue(const CMatrix& m) {
  const CMatrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

double hermitian_norm2(const CMatrix& m) {
  const CMatrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace pherm
