#include "pherm/two_by_two.hpp"

#include <cmath>
#include <sstream>

#include "pherm/errors.hpp"
#include "pherm/jordan.hpp"
#include "pherm/pseudoherm.hpp"

namespace pherm {

namespace {

const Complex kI{0.0, 1.0};

/// Eigenvector of [[a, b], [c, -a]] for eigenvalue mu, picking the better
/// conditioned of the two null-row candidates and scaling its largest entry
/// to one (so sigma_3 factors with g = I).
Eigen::Vector2cd eigenvector(const Traceless2& m, Complex mu) {
  const Eigen::Vector2cd from_first_row(m.b, mu - m.a);
  const Eigen::Vector2cd from_second_row(mu + m.a, m.c);
  const Eigen::Vector2cd v = from_first_row.norm() >= from_second_row.norm() ? from_first_row : from_second_row;
  return std::abs(v(0)) >= std::abs(v(1)) ? Eigen::Vector2cd(v / v(0)) : Eigen::Vector2cd(v / v(1));
}

}  // namespace

CMatrix Traceless2::matrix() const {
  CMatrix m(2, 2);
  m << a, b, c, -a;
  return m;
}

double Traceless2::norm() const { return std::sqrt(2.0 * std::norm(a) + std::norm(b) + std::norm(c)); }

std::string_view to_string(Stratum s) noexcept {
  switch (s) {
    case Stratum::Zero: return "Zero";
    case Stratum::MPlus: return "MPlus";
    case Stratum::MMinus: return "MMinus";
    case Stratum::NilpotentNonDiagonalizable: return "NilpotentNonDiagonalizable";
    case Stratum::NotPseudoHermitian: return "NotPseudoHermitian";
  }
  return "Unknown";
}

Class2 classify(const Traceless2& m, const Tolerances& tol) {
  Class2 out;
  out.det = m.det();
  const Complex root = std::sqrt(-out.det);
  out.eigenvalues = {root, -root};

  const double norm = m.norm();
  if (norm <= tol.verify_rel) {
    out.stratum = Stratum::Zero;
  } else if (std::abs(out.det.imag()) > tol.verify_rel * (1.0 + std::abs(out.det))) {
    out.stratum = Stratum::NotPseudoHermitian;
  } else if (std::abs(out.det) <= tol.verify_rel * norm * norm) {
    out.stratum = Stratum::NilpotentNonDiagonalizable;
  } else {
    out.stratum = out.det.real() < 0.0 ? Stratum::MMinus : Stratum::MPlus;
  }
  return out;
}

CMatrix ModuliFactor::reconstruct() const {
  const Complex prefactor = sign < 0 ? Complex{1.0, 0.0} : kI;
  Eigen::Matrix2cd sigma3;
  sigma3 << 1.0, 0.0, 0.0, -1.0;
  const Eigen::Matrix2cd m = prefactor * energy * (g.inverse() * sigma3 * g);
  return CMatrix(m);
}

ModuliFactor factorize(const Traceless2& m, const Tolerances& tol) {
  const Class2 cls = classify(m, tol);
  if (cls.stratum != Stratum::MPlus && cls.stratum != Stratum::MMinus) {
    fail(ErrorCode::NotInModuli, "matrix lies in stratum " + std::string(to_string(cls.stratum)));
  }
  ModuliFactor out;
  out.sign = cls.stratum == Stratum::MMinus ? -1 : 1;
  const double det = cls.det.real();
  out.energy = std::sqrt(std::abs(det));

  // m = V diag(mu, -mu) V^{-1} with mu = sqrt(-sign) E, so g is V^{-1} up to
  // the scalar fixing det g = 1.
  const Complex mu = out.sign < 0 ? Complex{out.energy, 0.0} : kI * out.energy;
  Eigen::Matrix2cd v;
  v.col(0) = eigenvector(m, mu);
  v.col(1) = eigenvector(m, -mu);
  const Eigen::Matrix2cd rows = v.inverse();
  out.g = rows / std::sqrt(rows.determinant());

  const double residual = (out.reconstruct() - m.matrix()).norm();
  if (residual > 1e-10 * std::max(1.0, m.norm())) {
    std::ostringstream os;
    os << "factorization residual " << residual << " exceeds 1e-10 * ||m||";
    fail(ErrorCode::VerificationFailure, os.str());
  }
  return out;
}

Traceless2 CrossingFamily::at(double lambda) const {
  Traceless2 m;
  m.a = lambda <= 0.0 ? Complex{a_r * lambda, 0.0} : Complex{0.0, a_i * lambda};
  m.b = b0 + b1 * lambda;
  m.c = Complex{0.0, 0.0};
  return m;
}

std::vector<double> sweep_grid(double epsilon, int steps) {
  if (steps < 3 || steps % 2 == 0) {
    fail(ErrorCode::InvalidGrid, "steps must be odd and at least 3 so the grid contains lambda = 0");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    fail(ErrorCode::InvalidGrid, "epsilon must be positive and finite");
  }
  const int half = (steps - 1) / 2;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  for (int k = -half; k <= half; ++k) {
    grid.push_back(k == 0 ? 0.0 : epsilon * static_cast<double>(k) / static_cast<double>(half));
  }
  return grid;
}

std::vector<SweepRecord> sweep_family(const CrossingFamily& f, int steps, const Tolerances& tol) {
  if (f.a_r == 0.0 || f.a_i == 0.0) fail(ErrorCode::InvalidArgument, "a_r and a_i must be nonzero");
  const auto grid = sweep_grid(f.epsilon, steps);
  std::vector<SweepRecord> out;
  out.reserve(grid.size());
  for (double lambda : grid) {
    const Traceless2 m = f.at(lambda);
    SweepRecord rec;
    rec.lambda = lambda;
    rec.classification = classify(m, tol);
    const Verdict verdict = check_pseudo_hermiticity(m.matrix(), tol);
    rec.pseudo_hermitian = verdict.is_pseudo_hermitian;
    rec.diagonalizable = true;
    for (const auto& d : verdict.decomposition.data) rec.diagonalizable = rec.diagonalizable && !d.defective();
    out.push_back(rec);
  }
  return out;
}

}  // namespace pherm
