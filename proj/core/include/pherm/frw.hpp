#pragma once

#include <optional>
#include <vector>

#include "pherm/jordan.hpp"
#include "pherm/matcore.hpp"
#include "pherm/pseudoherm.hpp"

namespace pherm {

/// Closed FRW minisuperspace model with a massive scalar field, truncated to
/// the lowest `levels` oscillator levels of D.
struct FrwParams {
  double mass = 1.0;
  /// Scale factor a = e^alpha.
  double scale = 1.0;
  int levels = 1;

  void validate() const;
};

struct FrwLevel {
  int n = 0;
  /// Eigenvalue of D on level n: m a^3 (2n+1) - a^4.
  double d = 0.0;
  Complex e_plus;
  Complex e_minus;
  bool critical = false;
};

struct FrwReport {
  FrwParams params;
  std::vector<FrwLevel> levels;
  CMatrix hamiltonian;
  /// Intertwining residual of the block-alternating sigma_3 metric.
  double sigma3_residual = 0.0;
  Verdict verdict;
  /// Levels n with a = (2n+1) m to within the critical tolerance.
  std::vector<int> critical_levels;
  /// The cluster at zero when one exists.
  std::optional<SpectralDatum> zero_cluster;
};

double oscillator_level(const FrwParams& p, int n);

/// +-sqrt(d_n) on the principal branch: e_plus has a nonnegative real part,
/// or a nonnegative imaginary part when purely imaginary.
std::pair<Complex, Complex> frw_eigenvalues(const FrwParams& p, int n);

FrwLevel frw_level(const FrwParams& p, int n);

/// |d_n| <= 1e-9 * max(1, a^4).
bool is_critical(const FrwParams& p, double d);

/// Block-diagonal 2N x 2N matrix with blocks (1/2)[[1+d, -1+d], [1-d, -1-d]].
CMatrix build_truncated_hamiltonian(const FrwParams& p);

/// Direct sum of N copies of diag(1, -1).
CMatrix block_sigma3(int levels);

/// (2n+1) m for n < levels, ascending.
std::vector<double> critical_scale_factors(const FrwParams& p);

FrwReport analyze_frw(const FrwParams& p, const Tolerances& tol);

}  // namespace pherm
