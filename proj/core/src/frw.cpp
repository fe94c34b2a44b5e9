#include "pherm/frw.hpp"

#include <cmath>
#include <sstream>

#include "pherm/errors.hpp"

namespace pherm {

namespace {

void check_level(const FrwParams& p, int n) {
  if (n < 0 || n >= p.levels) {
    fail(ErrorCode::IndexOutOfRange,
         "level " + std::to_string(n) + " outside [0, " + std::to_string(p.levels) + ")");
  }
}

}  // namespace

void FrwParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) fail(ErrorCode::InvalidArgument, "mass must be positive");
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorCode::InvalidArgument, "scale factor must be positive");
  if (levels < 1) fail(ErrorCode::InvalidArgument, "at least one oscillator level is required");
}

double oscillator_level(const FrwParams& p, int n) {
  check_level(p, n);
  const double a = p.scale;
  return p.mass * a * a * a * (2.0 * n + 1.0) - a * a * a * a;
}

std::pair<Complex, Complex> frw_eigenvalues(const FrwParams& p, int n) {
  const double d = oscillator_level(p, n);
  Complex plus{0.0, 0.0};
  if (d > 0.0) plus = Complex{std::sqrt(d), 0.0};
  if (d < 0.0) plus = Complex{0.0, std::sqrt(-d)};
  // + 0.0 keeps zero parts unsigned
  return {plus, Complex{-plus.real() + 0.0, -plus.imag() + 0.0}};
}

bool is_critical(const FrwParams& p, double d) {
  const double a4 = std::pow(p.scale, 4);
  return std::abs(d) <= 1e-9 * std::max(1.0, a4);
}

FrwLevel frw_level(const FrwParams& p, int n) {
  FrwLevel level;
  level.n = n;
  level.d = oscillator_level(p, n);
  std::tie(level.e_plus, level.e_minus) = frw_eigenvalues(p, n);
  level.critical = is_critical(p, level.d);
  return level;
}

CMatrix build_truncated_hamiltonian(const FrwParams& p) {
  p.validate();
  const Index dim = 2 * static_cast<Index>(p.levels);
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int n = 0; n < p.levels; ++n) {
    const double d = oscillator_level(p, n);
    const Index k = 2 * static_cast<Index>(n);
    h(k, k) = 0.5 * (1.0 + d);
    h(k, k + 1) = 0.5 * (-1.0 + d);
    h(k + 1, k) = 0.5 * (1.0 - d);
    h(k + 1, k + 1) = 0.5 * (-1.0 - d);
  }
  return h;
}

CMatrix block_sigma3(int levels) {
  const Index dim = 2 * static_cast<Index>(levels);
  CMatrix s = CMatrix::Zero(dim, dim);
  for (Index k = 0; k < dim; ++k) s(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return s;
}

std::vector<double> critical_scale_factors(const FrwParams& p) {
  p.validate();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(p.levels));
  for (int n = 0; n < p.levels; ++n) out.push_back((2.0 * n + 1.0) * p.mass);
  return out;
}

FrwReport analyze_frw(const FrwParams& p, const Tolerances& tol) {
  p.validate();
  FrwReport report;
  report.params = p;
  for (int n = 0; n < p.levels; ++n) {
    report.levels.push_back(frw_level(p, n));
    if (report.levels.back().critical) report.critical_levels.push_back(n);
  }
  report.hamiltonian = build_truncated_hamiltonian(p);
  report.sigma3_residual = verify_intertwining(report.hamiltonian, block_sigma3(p.levels), tol);
  if (!(report.sigma3_residual <= tol.verify_rel)) {
    std::ostringstream os;
    os << "sigma_3 fails to intertwine the truncated Hamiltonian (residual " << report.sigma3_residual << ")";
    fail(ErrorCode::VerificationFailure, os.str());
  }
  report.verdict = check_pseudo_hermiticity(report.hamiltonian, tol);

  const auto& data = report.verdict.decomposition.data;
  double scale = 1.0;
  for (const auto& d : data) scale = std::max(scale, std::abs(d.eigenvalue));
  for (const auto& d : data) {
    if (std::abs(d.eigenvalue) <= tol.cluster_rel * scale) report.zero_cluster = d;
  }
  return report;
}

}  // namespace pherm
