#include "pherm/pseudoherm.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "pherm/errors.hpp"

namespace pherm {

namespace {

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

double scale_of(const std::vector<SpectralDatum>& data) {
  double radius = 0.0;
  for (const auto& d : data) radius = std::max(radius, std::abs(d.eigenvalue));
  return std::max(1.0, radius);
}

void validate_signs(const Signs& sigma, std::size_t expected) {
  if (sigma.size() != expected) {
    fail(ErrorCode::SignCountMismatch, "expected " + std::to_string(expected) + " signs (one per real chain), got " +
                                           std::to_string(sigma.size()));
  }
  for (int s : sigma) {
    if (s != 1 && s != -1) fail(ErrorCode::InvalidArgument, "signs must be +1 or -1");
  }
}

/// Paired chains (nu, a) and (nu-, a): chains of both clusters are ordered by
/// descending length, so the a-th chains have equal length.
template <typename Visit>
void for_each_pair_chain(const JordanDecomposition& dec, const SpectrumPairing& pairing, Visit&& visit) {
  for (const ConjugatePair& pair : pairing.pairs) {
    const auto upper = dec.chains_of(pair.upper);
    const auto lower = dec.chains_of(pair.lower);
    if (upper.size() != lower.size()) {
      fail(ErrorCode::IndexMismatch, "paired clusters have different geometric multiplicities");
    }
    for (std::size_t a = 0; a < upper.size(); ++a) {
      if (upper[a].length != lower[a].length) {
        fail(ErrorCode::IndexMismatch, "paired chains have different lengths");
      }
      visit(upper[a], lower[a]);
    }
  }
}

template <typename Visit>
void for_each_real_chain(const JordanDecomposition& dec, const SpectrumPairing& pairing, Visit&& visit) {
  for (std::size_t label : pairing.real_labels) {
    for (const Chain& chain : dec.chains_of(label)) visit(chain);
  }
}

/// Shared body of the canonical metric and its inverse: the same flip sums
/// over either the dual vectors (eta) or the chain vectors (eta^{-1}).
CMatrix flip_sum(const JordanDecomposition& dec, const SpectrumPairing& pairing, const Signs& sigma,
                 const CMatrix& basis) {
  validate_signs(sigma, real_chain_count(dec, pairing));
  const Index n = dec.dim();
  CMatrix out = CMatrix::Zero(n, n);
  std::size_t r = 0;
  for_each_real_chain(dec, pairing, [&](const Chain& chain) {
    const double s = static_cast<double>(sigma[r++]);
    const int p = chain.length;
    for (int i = 0; i < p; ++i) {
      out += s * (basis.col(chain.column(i)) * basis.col(chain.column(p - 1 - i)).adjoint());
    }
  });
  for_each_pair_chain(dec, pairing, [&](const Chain& up, const Chain& down) {
    const int p = up.length;
    for (int i = 0; i < p; ++i) {
      out += basis.col(up.column(i)) * basis.col(down.column(p - 1 - i)).adjoint();
      out += basis.col(down.column(p - 1 - i)) * basis.col(up.column(i)).adjoint();
    }
  });
  return out;
}

MetricOperator finish(CMatrix eta, std::variant<Signs, MetricParameters> provenance, const JordanDecomposition& dec) {
  MetricOperator m;
  m.hermiticity_residual = hermiticity_residual(eta);
  m.intertwining_residual = verify_intertwining(dec.matrix, eta, Tolerances{});
  m.min_eigenvalue = min_hermitian_eigenvalue(eta);
  m.eta = std::move(eta);
  m.provenance = std::move(provenance);
  return m;
}

void require_same_dim(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    fail(ErrorCode::DimensionMismatch, "operands must be square of equal dimension");
  }
}

}  // namespace

std::string_view to_string(PairingFailure::Kind kind) noexcept {
  switch (kind) {
    case PairingFailure::Kind::UnpairedEigenvalue: return "UnpairedEigenvalue";
    case PairingFailure::Kind::JordanMismatch: return "JordanMismatch";
  }
  return "Unknown";
}

std::string PairingFailure::describe() const {
  if (kind == Kind::UnpairedEigenvalue) {
    return "eigenvalue " + format_complex(eigenvalue) + " has no complex-conjugate partner";
  }
  return "eigenvalue " + format_complex(eigenvalue) + " and its conjugate " +
         format_complex(partner_eigenvalue.value_or(Complex{})) + " have different Jordan structure";
}

PairingOutcome pair_spectrum(const std::vector<SpectralDatum>& data, const Tolerances& tol) {
  const double scale = scale_of(data);
  const double radius = tol.cluster_rel * scale;
  SpectrumPairing pairing;
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double im = data[k].eigenvalue.imag();
    if (std::abs(im) <= tol.real_rel * scale) {
      pairing.real_labels.push_back(k);
    } else if (im > 0.0) {
      upper.push_back(k);
    } else {
      lower.push_back(k);
    }
  }

  std::vector<bool> taken(data.size(), false);
  for (std::size_t u : upper) {
    const Complex target = std::conj(data[u].eigenvalue);
    std::optional<std::size_t> match;
    for (std::size_t l : lower) {
      if (taken[l] || std::abs(data[l].eigenvalue - target) > radius) continue;
      if (match) {
        fail(ErrorCode::AmbiguousClustering,
             "several conjugate candidates for " + format_complex(data[u].eigenvalue));
      }
      match = l;
    }
    if (!match) {
      return PairingFailure{PairingFailure::Kind::UnpairedEigenvalue, u, data[u].eigenvalue, std::nullopt,
                            std::nullopt};
    }
    taken[*match] = true;
    const SpectralDatum& a = data[u];
    const SpectralDatum& b = data[*match];
    if (a.geometric_mult != b.geometric_mult || a.jordan_dims != b.jordan_dims) {
      return PairingFailure{PairingFailure::Kind::JordanMismatch, u, a.eigenvalue, *match, b.eigenvalue};
    }
    pairing.pairs.push_back({u, *match});
  }
  for (std::size_t l : lower) {
    if (!taken[l]) {
      return PairingFailure{PairingFailure::Kind::UnpairedEigenvalue, l, data[l].eigenvalue, std::nullopt,
                            std::nullopt};
    }
  }
  return pairing;
}

std::size_t real_chain_count(const JordanDecomposition& dec, const SpectrumPairing& pairing) {
  std::size_t count = 0;
  for_each_real_chain(dec, pairing, [&](const Chain&) { ++count; });
  return count;
}

std::size_t paired_chain_count(const JordanDecomposition& dec, const SpectrumPairing& pairing) {
  std::size_t count = 0;
  for_each_pair_chain(dec, pairing, [&](const Chain&, const Chain&) { ++count; });
  return count;
}

MetricOperator canonical_metric(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                                const Signs& sigma) {
  return finish(flip_sum(dec, pairing, sigma, dec.dual_basis), sigma, dec);
}

CMatrix canonical_metric_inverse(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                                 const Signs& sigma) {
  return flip_sum(dec, pairing, sigma, dec.chain_basis);
}

MetricParameters canonical_parameters(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                                      const Signs& sigma) {
  validate_signs(sigma, real_chain_count(dec, pairing));
  MetricParameters params;
  std::size_t r = 0;
  for_each_real_chain(dec, pairing, [&](const Chain& chain) {
    std::vector<double> x(static_cast<std::size_t>(chain.length), 0.0);
    x.front() = static_cast<double>(sigma[r++]);
    params.x.push_back(std::move(x));
  });
  for_each_pair_chain(dec, pairing, [&](const Chain& up, const Chain&) {
    std::vector<Complex> xi(static_cast<std::size_t>(up.length), Complex{0.0, 0.0});
    xi.front() = Complex{1.0, 0.0};
    params.xi.push_back(std::move(xi));
  });
  return params;
}

MetricOperator general_metric(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                              const MetricParameters& params) {
  const std::size_t real_chains = real_chain_count(dec, pairing);
  const std::size_t pair_chains = paired_chain_count(dec, pairing);
  if (params.x.size() != real_chains || params.xi.size() != pair_chains) {
    fail(ErrorCode::IndexMismatch, "expected " + std::to_string(real_chains) + " x sequences and " +
                                       std::to_string(pair_chains) + " xi sequences");
  }

  const Index n = dec.dim();
  const CMatrix& phi = dec.dual_basis;
  CMatrix eta = CMatrix::Zero(n, n);

  // x_{k} multiplies |phi_i><phi_j| with k = i + j (1-based), j = p+1-i .. p.
  std::size_t r = 0;
  for_each_real_chain(dec, pairing, [&](const Chain& chain) {
    const auto& x = params.x[r];
    const int p = chain.length;
    if (x.size() != static_cast<std::size_t>(p)) {
      fail(ErrorCode::IndexMismatch, "x sequence " + std::to_string(r) + " needs " + std::to_string(p) +
                                         " coefficients (k = p+1 .. 2p)");
    }
    if (x.front() == 0.0) {
      fail(ErrorCode::ZeroLeadingCoefficient, "x sequence " + std::to_string(r) + " has a zero leading coefficient");
    }
    for (double v : x) {
      if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "x coefficients must be finite");
    }
    for (int i = 0; i < p; ++i) {
      for (int j = p - 1 - i; j < p; ++j) {
        const double coeff = x[static_cast<std::size_t>(i + j + 1 - p)];
        eta += coeff * (phi.col(chain.column(i)) * phi.col(chain.column(j)).adjoint());
      }
    }
    ++r;
  });

  std::size_t q = 0;
  for_each_pair_chain(dec, pairing, [&](const Chain& up, const Chain& down) {
    const auto& xi = params.xi[q];
    const int p = up.length;
    if (xi.size() != static_cast<std::size_t>(p)) {
      fail(ErrorCode::IndexMismatch, "xi sequence " + std::to_string(q) + " needs " + std::to_string(p) +
                                         " coefficients (k = p+1 .. 2p)");
    }
    if (xi.front() == Complex{0.0, 0.0}) {
      fail(ErrorCode::ZeroLeadingCoefficient, "xi sequence " + std::to_string(q) + " has a zero leading coefficient");
    }
    for (const Complex& v : xi) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        fail(ErrorCode::InvalidArgument, "xi coefficients must be finite");
      }
    }
    for (int i = 0; i < p; ++i) {
      for (int j = p - 1 - i; j < p; ++j) {
        const Complex coeff = xi[static_cast<std::size_t>(i + j + 1 - p)];
        eta += coeff * (phi.col(up.column(i)) * phi.col(down.column(j)).adjoint());
        eta += std::conj(coeff) * (phi.col(down.column(j)) * phi.col(up.column(i)).adjoint());
      }
    }
    ++q;
  });

  return finish(std::move(eta), params, dec);
}

Verdict check_pseudo_hermiticity(const CMatrix& h, const Tolerances& tol) {
  return check_pseudo_hermiticity(jordan_chains(h, tol), tol);
}

Verdict check_pseudo_hermiticity(JordanDecomposition dec, const Tolerances& tol) {
  Verdict verdict;
  auto outcome = pair_spectrum(dec.data, tol);
  if (auto* failure = std::get_if<PairingFailure>(&outcome)) {
    verdict.failure = *failure;
    verdict.decomposition = std::move(dec);
    return verdict;
  }
  auto pairing = std::get<SpectrumPairing>(std::move(outcome));
  Signs sigma(real_chain_count(dec, pairing), 1);
  MetricOperator witness = canonical_metric(dec, pairing, sigma);
  if (!(witness.intertwining_residual <= tol.verify_rel)) {
    std::ostringstream os;
    os << "canonical metric fails to intertwine H (residual " << witness.intertwining_residual << ")";
    fail(ErrorCode::VerificationFailure, os.str());
  }
  verdict.is_pseudo_hermitian = true;
  verdict.witness = std::move(witness);
  verdict.pairing = std::move(pairing);
  verdict.decomposition = std::move(dec);
  return verdict;
}

double verify_intertwining(const CMatrix& h, const CMatrix& eta, const Tolerances&) {
  require_same_dim(h, eta);
  const double numerator = (eta * h - h.adjoint() * eta).norm();
  if (numerator == 0.0) return 0.0;
  return numerator / (eta.norm() * h.norm());
}

Complex semidefinite_form(const CMatrix& eta, const CVector& u, const CVector& v) {
  if (eta.rows() != eta.cols() || u.size() != eta.rows() || v.size() != eta.rows()) {
    fail(ErrorCode::DimensionMismatch, "vectors must match the metric dimension");
  }
  return u.dot(eta * v);
}

double check_metric_hermiticity(const CMatrix& h, const CMatrix& eta, int samples, std::uint64_t seed) {
  require_same_dim(h, eta);
  if (samples <= 0) fail(ErrorCode::InvalidArgument, "sample count must be positive");
  const Index n = h.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&] {
    CVector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex{normal(rng), normal(rng)};
    return v;
  };
  const double scale = h.norm() * eta.norm();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CVector f = draw();
    const CVector g = draw();
    const Complex lhs = semidefinite_form(eta, f, h * g);
    const Complex rhs = semidefinite_form(eta, h * f, g);
    const double diff = std::abs(lhs - rhs);
    if (diff == 0.0) continue;
    worst = std::max(worst, diff / (scale * f.norm() * g.norm()));
  }
  return worst;
}

std::vector<NullVector> null_vectors(const JordanDecomposition& dec, const SpectrumPairing& pairing,
                                     const CMatrix& eta) {
  std::vector<NullVector> out;
  const auto add = [&](const Chain& chain) {
    CVector psi = dec.psi(chain, 0);
    const Complex norm = semidefinite_form(eta, psi, psi);
    out.push_back({chain.cluster, chain.label, std::move(psi), norm});
  };
  for_each_real_chain(dec, pairing, [&](const Chain& chain) {
    if (chain.length > 1) add(chain);
  });
  for (const ConjugatePair& pair : pairing.pairs) {
    for (const Chain& chain : dec.chains_of(pair.upper)) add(chain);
    for (const Chain& chain : dec.chains_of(pair.lower)) add(chain);
  }
  return out;
}

CMatrix in_chain_basis(const JordanDecomposition& dec, const CMatrix& op) {
  return dec.chain_basis.adjoint() * op * dec.chain_basis;
}

double hermiticity_residual(const CMatrix& m) {
  const double scale = m.norm();
  if (scale == 0.0) return 0.0;
  return (m - m.adjoint()).norm() / scale;
}

}  // namespace pherm
