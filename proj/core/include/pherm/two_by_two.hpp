#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "pherm/matcore.hpp"

namespace pherm {

/// The traceless matrix [[a, b], [c, -a]].
struct Traceless2 {
  Complex a;
  Complex b;
  Complex c;

  CMatrix matrix() const;
  Complex det() const { return -a * a - b * c; }
  /// Frobenius norm of the matrix.
  double norm() const;
};

enum class Stratum {
  Zero,
  MPlus,
  MMinus,
  NilpotentNonDiagonalizable,
  NotPseudoHermitian,
};

std::string_view to_string(Stratum s) noexcept;

struct Class2 {
  Stratum stratum = Stratum::Zero;
  Complex det;
  /// +sqrt(-det) (principal branch) and its negative.
  std::array<Complex, 2> eigenvalues;

  bool pseudo_hermitian() const { return stratum != Stratum::NotPseudoHermitian; }
};

/// m = sqrt(-sign) * energy * g^{-1} sigma_3 g with det g = 1 and energy > 0.
/// sign is the sign of det m: -1 on M- (real pair), +1 on M+ (imaginary pair).
struct ModuliFactor {
  int sign = -1;
  double energy = 0.0;
  Eigen::Matrix2cd g;

  CMatrix reconstruct() const;
};

/// a(l) = a_r l for l <= 0 and i a_i l for l >= 0; b(l) = b0 + b1 l; c = 0.
struct CrossingFamily {
  double a_r = 1.0;
  double a_i = 1.0;
  Complex b0;
  Complex b1;
  double epsilon = 1.0;

  Traceless2 at(double lambda) const;
};

struct SweepRecord {
  double lambda = 0.0;
  Class2 classification;
  bool diagonalizable = false;
  bool pseudo_hermitian = false;
};

Class2 classify(const Traceless2& m, const Tolerances& tol);

ModuliFactor factorize(const Traceless2& m, const Tolerances& tol);

/// Uniform grid over [-epsilon, epsilon] with `steps` points; steps must be odd
/// and >= 3 so that lambda = 0 is a grid point.
std::vector<double> sweep_grid(double epsilon, int steps);

std::vector<SweepRecord> sweep_family(const CrossingFamily& f, int steps, const Tolerances& tol);

}  // namespace pherm
