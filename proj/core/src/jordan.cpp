#include "pherm/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "pherm/errors.hpp"

namespace pherm {

namespace {

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/// Nested kernels of N^l computed without forming powers: ker N^l is the
/// kernel of N with its range component inside ker N^{l-1} projected away.
struct Staircase {
  std::vector<int> weyr;
  /// kernels[l] spans ker (H - E)^l; kernels[0] is empty.
  std::vector<CMatrix> kernels;
};

Staircase kernel_staircase(const CMatrix& h, Complex e, const Tolerances& tol) {
  const Index n = h.rows();
  const CMatrix shifted = h - e * identity(n);
  // Relative to the larger of ||H - E|| and ||H||: when H is close to E*I
  // the shifted matrix is pure roundoff and must count as zero.
  const double reference = std::max(singular_values(shifted).front(), singular_values(h).front());
  const double threshold = rank_threshold(reference, n, tol);

  Staircase out;
  out.kernels.emplace_back(n, 0);
  CMatrix reduced = shifted;
  int previous = 0;
  for (Index level = 1; level <= n + 1; ++level) {
    CMatrix basis = nullspace_basis(reduced, threshold);
    const int d = static_cast<int>(basis.cols());
    if (d == previous) return out;
    if (d < previous) {
      fail(ErrorCode::NoSaturation, "kernel dimension decreased from " + std::to_string(previous) +
                                        " to " + std::to_string(d) + " at E = " + format_complex(e));
    }
    out.weyr.push_back(d);
    reduced = shifted - basis * (basis.adjoint() * shifted);
    out.kernels.push_back(std::move(basis));
    if (d == n) return out;
    previous = d;
  }
  fail(ErrorCode::NoSaturation, "kernel dimensions did not saturate at E = " + format_complex(e));
}

std::vector<std::vector<Complex>> single_linkage(std::span<const Complex> eigs, double radius) {
  const std::size_t n = eigs.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(eigs[i] - eigs[j]) <= radius) {
        const std::size_t a = find(i);
        const std::size_t b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<Complex>> groups;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == n) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(eigs[i]);
  }
  return groups;
}

Complex mean(const std::vector<Complex>& values) {
  Complex sum{0.0, 0.0};
  for (const Complex& v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

void check_separation(const std::vector<Complex>& centers, double radius) {
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) {
      if (std::abs(centers[i] - centers[j]) < 3.0 * radius) {
        fail(ErrorCode::AmbiguousClustering,
             "cluster centers " + format_complex(centers[i]) + " and " + format_complex(centers[j]) +
                 " are closer than three clustering radii");
      }
    }
  }
}

std::vector<std::vector<Complex>> separated_groups(std::span<const Complex> eigs, double radius) {
  auto groups = single_linkage(eigs, radius);
  std::vector<Complex> centers;
  centers.reserve(groups.size());
  for (const auto& g : groups) centers.push_back(mean(g));
  check_separation(centers, radius);
  return groups;
}

struct ResolvedCluster {
  Complex center;
  int count = 0;
  Staircase staircase;
};

/// Clusters start at the coarse radius so that the split eigenvalues of a
/// defective block merge. A cluster is accepted once the saturated kernel
/// dimension equals its eigenvalue count; otherwise it is re-clustered at a
/// tenth of the radius.
std::vector<ResolvedCluster> resolve_clusters(const CMatrix& h, std::span<const Complex> eigs,
                                              const Tolerances& tol, double scale) {
  struct Pending {
    std::vector<Complex> members;
    double radius;
  };
  const double floor_radius = 16.0 * std::numeric_limits<double>::epsilon() * scale;

  std::vector<ResolvedCluster> accepted;
  std::vector<Pending> pending;
  pending.push_back({std::vector<Complex>(eigs.begin(), eigs.end()), tol.cluster_rel * scale});
  while (!pending.empty()) {
    Pending job = std::move(pending.back());
    pending.pop_back();
    const double finer = job.radius / 10.0;

    std::vector<std::vector<Complex>> groups;
    try {
      groups = separated_groups(job.members, job.radius);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AmbiguousClustering || finer < floor_radius) throw;
      pending.push_back({std::move(job.members), finer});
      continue;
    }

    for (auto& group : groups) {
      const Complex center = mean(group);
      Staircase stair = kernel_staircase(h, center, tol);
      const int algebraic = stair.weyr.empty() ? 0 : stair.weyr.back();
      const int count = static_cast<int>(group.size());
      if (algebraic == count) {
        accepted.push_back({center, count, std::move(stair)});
      } else if (finer >= floor_radius) {
        pending.push_back({std::move(group), finer});
      } else {
        fail(ErrorCode::ChainConstructionFailure,
             "cluster at " + format_complex(center) + " holds " + std::to_string(count) +
                 " eigenvalues but its kernel sequence saturates at " + std::to_string(algebraic));
      }
    }
  }
  return accepted;
}

/// Builds the chains of one cluster, longest first. Top vectors at level l are
/// the dominant directions of ker N^l left over after removing ker N^{l-1}
/// and the level-l vectors of longer chains.
std::vector<CMatrix> cluster_chains(const CMatrix& shifted, const Staircase& stair,
                                    const Tolerances& tol, Complex center) {
  const Index n = shifted.rows();
  const int depth = static_cast<int>(stair.weyr.size());
  const double floor = std::sqrt(tol.rank_rel);

  std::vector<std::vector<CVector>> level_vectors(static_cast<std::size_t>(depth) + 1);
  std::vector<CMatrix> chains;
  for (int level = depth; level >= 1; --level) {
    const CMatrix& upper = stair.kernels[static_cast<std::size_t>(level)];
    const CMatrix& lower = stair.kernels[static_cast<std::size_t>(level - 1)];
    const auto& existing = level_vectors[static_cast<std::size_t>(level)];
    const int gained = stair.weyr[static_cast<std::size_t>(level - 1)] -
                       (level >= 2 ? stair.weyr[static_cast<std::size_t>(level - 2)] : 0);
    const int fresh = gained - static_cast<int>(existing.size());
    if (fresh < 0) {
      fail(ErrorCode::ChainConstructionFailure,
           "more chains pass through level " + std::to_string(level) + " than ker growth allows at " +
               format_complex(center));
    }
    if (fresh == 0) continue;

    CMatrix occupied(n, lower.cols() + static_cast<Index>(existing.size()));
    occupied.leftCols(lower.cols()) = lower;
    for (std::size_t k = 0; k < existing.size(); ++k) occupied.col(lower.cols() + static_cast<Index>(k)) = existing[k];

    CMatrix basis;
    try {
      basis = orthonormal_span(occupied, occupied.cols(), floor);
    } catch (const Error&) {
      fail(ErrorCode::ChainConstructionFailure,
           "longer chains are dependent modulo ker N^" + std::to_string(level - 1) + " at " +
               format_complex(center));
    }
    const CMatrix residual = upper - basis * (basis.adjoint() * upper);
    Eigen::JacobiSVD<CMatrix> svd(residual, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    if (s.size() < fresh || s(fresh - 1) <= floor) {
      fail(ErrorCode::ChainConstructionFailure,
           "ker N^" + std::to_string(level) + " does not supply " + std::to_string(fresh) +
               " new chain tops at " + format_complex(center));
    }
    for (int t = 0; t < fresh; ++t) {
      CMatrix chain(n, level);
      chain.col(level - 1) = upper * svd.matrixV().col(t);
      for (int i = level - 2; i >= 0; --i) chain.col(i) = shifted * chain.col(i + 1);
      const double bottom = chain.col(0).norm();
      const double top = chain.col(level - 1).norm();
      if (!(bottom > 0.0)) {
        fail(ErrorCode::ChainConstructionFailure, "chain collapsed to zero at " + format_complex(center));
      }
      chain /= std::sqrt(bottom * top);
      for (int k = 1; k < level; ++k) level_vectors[static_cast<std::size_t>(k)].push_back(chain.col(k - 1));
      chains.push_back(std::move(chain));
    }
  }
  if (static_cast<int>(chains.size()) != stair.weyr.front()) {
    fail(ErrorCode::ChainConstructionFailure, "chain count disagrees with geometric multiplicity at " +
                                                  format_complex(center));
  }
  return chains;
}

}  // namespace

std::vector<Chain> JordanDecomposition::chains_of(std::size_t cluster) const {
  std::vector<Chain> out;
  for (const Chain& c : chains) {
    if (c.cluster == cluster) out.push_back(c);
  }
  return out;
}

CMatrix JordanDecomposition::canonical_form() const {
  const Index n = dim();
  CMatrix j = CMatrix::Zero(n, n);
  for (const Chain& c : chains) {
    const Complex e = data[c.cluster].eigenvalue;
    for (int i = 0; i < c.length; ++i) {
      j(c.column(i), c.column(i)) = e;
      if (i + 1 < c.length) j(c.column(i), c.column(i + 1)) = 1.0;
    }
  }
  return j;
}

double spectral_scale(std::span<const Complex> eigs) {
  double radius = 0.0;
  for (const Complex& z : eigs) radius = std::max(radius, std::abs(z));
  return std::max(1.0, radius);
}

std::vector<EigenCluster> cluster_spectrum(std::span<const Complex> eigs, const Tolerances& tol,
                                           double scale) {
  if (eigs.empty()) fail(ErrorCode::InvalidArgument, "cannot cluster an empty spectrum");
  if (!(scale > 0.0)) fail(ErrorCode::InvalidArgument, "clustering scale must be positive");
  const auto groups = separated_groups(eigs, tol.cluster_rel * scale);
  std::vector<EigenCluster> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back({mean(g), static_cast<int>(g.size())});
  return out;
}

std::vector<int> kernel_dimension_sequence(const CMatrix& h, Complex e, const Tolerances& tol) {
  require_square_finite(h, "H");
  return kernel_staircase(h, e, tol).weyr;
}

std::vector<int> segre_from_weyr(std::span<const int> weyr) {
  if (weyr.empty() || weyr.front() <= 0) {
    fail(ErrorCode::InvalidWeyr, "Weyr sequence must start with a positive entry");
  }
  // gains[l] = number of blocks of size > l
  std::vector<int> gains;
  int previous = 0;
  for (int d : weyr) {
    const int gain = d - previous;
    if (gain < 0) fail(ErrorCode::InvalidWeyr, "Weyr sequence must be nondecreasing");
    if (!gains.empty() && gain > gains.back()) {
      fail(ErrorCode::InvalidWeyr, "Weyr differences must be non-increasing");
    }
    gains.push_back(gain);
    previous = d;
  }
  std::vector<int> dims;
  for (std::size_t l = 0; l < gains.size(); ++l) {
    const int next = l + 1 < gains.size() ? gains[l + 1] : 0;
    for (int k = 0; k < gains[l] - next; ++k) dims.push_back(static_cast<int>(l) + 1);
  }
  std::sort(dims.begin(), dims.end(), std::greater<>());
  return dims;
}

JordanDecomposition jordan_chains(const CMatrix& h, const Tolerances& tol) {
  tol.validate();
  require_square_finite(h, "H");
  const Index n = h.rows();
  const auto eigs = eigenvalues(h);
  const double scale = spectral_scale(eigs);

  auto clusters = resolve_clusters(h, eigs, tol, scale);
  const double bucket = tol.cluster_rel * scale;
  const auto key = [bucket](const ResolvedCluster& c) {
    return std::make_tuple(std::llround(c.center.real() / bucket), c.center.imag());
  };
  std::sort(clusters.begin(), clusters.end(),
            [&](const ResolvedCluster& a, const ResolvedCluster& b) { return key(a) < key(b); });

  int total = 0;
  for (const auto& c : clusters) total += c.count;
  if (total != n) {
    fail(ErrorCode::ChainConstructionFailure,
         "algebraic multiplicities sum to " + std::to_string(total) + ", expected " + std::to_string(n));
  }

  JordanDecomposition dec;
  dec.matrix = h;
  dec.chain_basis.resize(n, n);
  Index column = 0;
  for (std::size_t idx = 0; idx < clusters.size(); ++idx) {
    const ResolvedCluster& cluster = clusters[idx];
    SpectralDatum datum;
    datum.eigenvalue = cluster.center;
    datum.weyr = cluster.staircase.weyr;
    datum.geometric_mult = datum.weyr.front();
    datum.algebraic_mult = datum.weyr.back();
    datum.index = static_cast<int>(datum.weyr.size());
    datum.jordan_dims = segre_from_weyr(datum.weyr);

    const CMatrix shifted = h - cluster.center * identity(n);
    const auto chains = cluster_chains(shifted, cluster.staircase, tol, cluster.center);
    for (std::size_t a = 0; a < chains.size(); ++a) {
      const CMatrix& chain = chains[a];
      const int length = static_cast<int>(chain.cols());
      if (length != datum.jordan_dims[a]) {
        fail(ErrorCode::ChainConstructionFailure, "chain lengths disagree with the Weyr sequence at " +
                                                      format_complex(cluster.center));
      }
      dec.chains.push_back({idx, a, column, length});
      for (int i = 0; i < length; ++i) {
        dec.chain_basis.col(column) = chain.col(i);
        dec.layout.push_back({idx, a, i});
        ++column;
      }
    }
    dec.data.push_back(std::move(datum));
  }

  dec.dual_basis = adjoint(inverse(dec.chain_basis, tol));
  dec.condition = condition_number(dec.chain_basis);
  if (dec.condition > 1e8) {
    std::ostringstream os;
    os.precision(3);
    os << "chain basis is ill-conditioned (cond(A) = " << dec.condition
       << "); the Jordan structure may be fragile";
    dec.warnings.push_back(os.str());
  }
  return dec;
}

CMatrix reconstruct(const JordanDecomposition& dec) {
  return dec.chain_basis * dec.canonical_form() * dec.dual_basis.adjoint();
}

}  // namespace pherm
