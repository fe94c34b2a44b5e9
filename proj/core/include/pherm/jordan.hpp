#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pherm/matcore.hpp"

namespace pherm {

/// Jordan data for one eigenvalue cluster E_n.
struct SpectralDatum {
  Complex eigenvalue;
  /// d_{n,1} <= d_{n,2} <= ... <= d_{n,p_n} = g_n, where d_{n,l} = dim ker (H - E_n)^l.
  std::vector<int> weyr;
  int geometric_mult = 0;
  int algebraic_mult = 0;
  /// Block sizes p_{n,a}, sorted descending.
  std::vector<int> jordan_dims;
  /// p_n, the length of the Weyr sequence (largest block size).
  int index = 0;

  bool defective() const { return algebraic_mult > geometric_mult; }
};

/// One Jordan chain psi_{n,a,1..p} stored as consecutive columns of the chain basis.
struct Chain {
  std::size_t cluster = 0;
  std::size_t label = 0;
  Index first_column = 0;
  int length = 0;

  Index column(int position) const { return first_column + position; }
};

/// (n, a, i) coordinates of one column of the chain basis; all zero-based.
struct ChainSlot {
  std::size_t cluster = 0;
  std::size_t label = 0;
  int position = 0;
};

struct JordanDecomposition {
  /// The analysed matrix H.
  CMatrix matrix;
  std::vector<SpectralDatum> data;
  /// A: columns are psi_{n,a,i}, clusters ordered by (Re, Im), chains by
  /// descending length, positions ascending inside a chain.
  CMatrix chain_basis;
  /// (A^{-1})^dagger: columns are phi_{n,a,i}.
  CMatrix dual_basis;
  std::vector<Chain> chains;
  std::vector<ChainSlot> layout;
  /// cond(A) in the 2-norm.
  double condition = 0.0;
  std::vector<std::string> warnings;

  Index dim() const { return matrix.rows(); }
  CVector psi(const Chain& chain, int position) const { return chain_basis.col(chain.column(position)); }
  CVector phi(const Chain& chain, int position) const { return dual_basis.col(chain.column(position)); }
  /// Chains belonging to one cluster, in basis order.
  std::vector<Chain> chains_of(std::size_t cluster) const;
  /// H_b = A^{-1} H A in canonical Jordan form, built from the layout.
  CMatrix canonical_form() const;
};

struct EigenCluster {
  Complex center;
  int count = 0;
};

/// Single-linkage clustering with radius cluster_rel * scale; centers are
/// arithmetic means. Throws AmbiguousClustering when two resulting centers
/// are closer than three radii.
std::vector<EigenCluster> cluster_spectrum(std::span<const Complex> eigs, const Tolerances& tol,
                                           double scale);

/// Weyr sequence d_1, d_2, ... of ker (H - E)^l up to saturation. Empty when
/// E is not an eigenvalue to within the rank threshold.
std::vector<int> kernel_dimension_sequence(const CMatrix& h, Complex e, const Tolerances& tol);

/// Conjugate partition: the number of parts >= l is weyr[l] - weyr[l-1].
std::vector<int> segre_from_weyr(std::span<const int> weyr);

JordanDecomposition jordan_chains(const CMatrix& h, const Tolerances& tol);

/// sum_n sum_a (E_n sum_i |psi_i><phi_i| + sum_i |psi_i><phi_{i+1}|).
CMatrix reconstruct(const JordanDecomposition& dec);

/// max(1, max |E|) over the given eigenvalues.
double spectral_scale(std::span<const Complex> eigs);

}  // namespace pherm
