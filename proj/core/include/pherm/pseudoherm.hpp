#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pherm/jordan.hpp"
#include "pherm/matcore.hpp"

namespace pherm {

/// Cluster `upper` has Im E > 0; `lower` holds its conjugate partner.
struct ConjugatePair {
  std::size_t upper = 0;
  std::size_t lower = 0;
};

/// Classes nu_0 (real clusters) and (nu, nu-) conjugate pairs.
struct SpectrumPairing {
  std::vector<std::size_t> real_labels;
  std::vector<ConjugatePair> pairs;
};

struct PairingFailure {
  enum class Kind { UnpairedEigenvalue, JordanMismatch };
  Kind kind = Kind::UnpairedEigenvalue;
  std::size_t cluster = 0;
  Complex eigenvalue;
  /// Set for JordanMismatch only.
  std::optional<std::size_t> partner;
  std::optional<Complex> partner_eigenvalue;

  std::string describe() const;
};

std::string_view to_string(PairingFailure::Kind kind) noexcept;

using PairingOutcome = std::variant<SpectrumPairing, PairingFailure>;

/// Per real chain (nu_0, a), in pairing order: one sign each.
using Signs = std::vector<int>;

/// Coefficients of the general metric. x[r] holds x_{k}, k = p+1..2p, for the
/// r-th real chain; xi[q] holds xi_{k} for the q-th chain of a conjugate pair.
struct MetricParameters {
  std::vector<std::vector<double>> x;
  std::vector<std::vector<Complex>> xi;
};

struct MetricOperator {
  CMatrix eta;
  std::variant<Signs, MetricParameters> provenance;
  /// ||eta - eta^dagger||_F / ||eta||_F
  double hermiticity_residual = 0.0;
  /// verify_intertwining against the decomposed matrix.
  double intertwining_residual = 0.0;
  double min_eigenvalue = 0.0;
};

struct Verdict {
  bool is_pseudo_hermitian = false;
  std::optional<MetricOperator> witness;
  std::optional<PairingFailure> failure;
  JordanDecomposition decomposition;
  std::optional<SpectrumPairing> pairing;
};

struct NullVector {
  std::size_t cluster = 0;
  std::size_t chain = 0;
  CVector vector;
  /// <psi|eta|psi>
  Complex norm;
};

/// Real clusters go to nu_0; the rest are matched greedily to the nearest
/// conjugate within cluster_rel * scale. Requires equal geometric
/// multiplicities and equal Jordan-dimension multisets per pair.
PairingOutcome pair_spectrum(const std::vector<SpectralDatum>& data, const Tolerances& tol);

Verdict check_pseudo_hermiticity(const CMatrix& h, const Tolerances& tol);
Verdict check_pseudo_hermiticity(JordanDecomposition dec, const Tolerances& tol);

/// Number of real chains, i.e. the length `sigma` must have.
std::size_t real_chain_count(const JordanDecomposition& dec, const SpectrumPairing& pairing);
std::size_t paired_chain_count(const JordanDecomposition& dec, const SpectrumPairing& pairing);

MetricOperator canonical_metric(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                                const Signs& sigma);

CMatrix canonical_metric_inverse(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                                 const Signs& sigma);

MetricOperator general_metric(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                              const MetricParameters& params);

/// The coefficient choice x = sigma at k = p+1, xi = 1 at k = p+1, zero
/// elsewhere, under which general_metric coincides with canonical_metric.
MetricParameters canonical_parameters(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                                      const Signs& sigma);

/// ||eta H - H^dagger eta||_F / (||eta||_F ||H||_F)
double verify_intertwining(const CMatrix& h, const CMatrix& eta, const Tolerances& tol);

/// <<u, v>>_eta = u^dagger eta v
Complex semidefinite_form(const CMatrix& eta, const CVector& u, const CVector& v);

/// max |<<f, H g>> - <<H f, g>>| / (||H|| ||eta|| ||f|| ||g||) over seeded random pairs.
double check_metric_hermiticity(const CMatrix& h, const CMatrix& eta, int samples, std::uint64_t seed);

std::vector<NullVector> null_vectors(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                                     const CMatrix& eta);

/// A^dagger op A, the matrix elements <psi_k|op|psi_l>.
CMatrix in_chain_basis(const JordanDecomposition& dec, const CMatrix& op);

double hermiticity_residual(const CMatrix& m);

}  // namespace pherm
