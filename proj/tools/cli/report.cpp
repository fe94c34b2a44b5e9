#include "cli/report.hpp"

#include <cmath>

namespace pherm::cli {

Json tolerances_json(const Tolerances& tol) {
  Json t;
  t["rank_rel"] = tol.rank_rel;
  t["cluster_rel"] = tol.cluster_rel;
  t["verify_rel"] = tol.verify_rel;
  t["real_rel"] = tol.real_rel;
  return t;
}

Json report_header(const std::string& command, const std::vector<std::string>& args, const Tolerances& tol) {
  Json r;
  r["schema"] = kSchemaVersion;
  r["command"] = command;
  r["args"] = args;
  r["tolerances"] = tolerances_json(tol);
  return r;
}

Json spectrum_json(const JordanDecomposition& dec, const Tolerances& tol) {
  double scale = 1.0;
  for (const auto& d : dec.data) scale = std::max(scale, std::abs(d.eigenvalue));
  Json out = Json::array();
  for (std::size_t k = 0; k < dec.data.size(); ++k) {
    const SpectralDatum& d = dec.data[k];
    Json entry;
    entry["cluster"] = k;
    entry["eigenvalue"] = complex_to_json(d.eigenvalue);
    entry["real"] = std::abs(d.eigenvalue.imag()) <= tol.real_rel * scale;
    entry["weyr"] = d.weyr;
    entry["geometric_multiplicity"] = d.geometric_mult;
    entry["algebraic_multiplicity"] = d.algebraic_mult;
    entry["jordan_dims"] = d.jordan_dims;
    entry["defective"] = d.defective();
    out.push_back(std::move(entry));
  }
  return out;
}

Json decomposition_json(const JordanDecomposition& dec) {
  const Index n = dec.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  const double h_norm = dec.matrix.norm();
  const double rec = (reconstruct(dec) - dec.matrix).norm();
  Json out;
  out["dim"] = n;
  out["chain_basis_condition"] = dec.condition;
  out["reconstruction_residual"] = h_norm == 0.0 ? rec : rec / h_norm;
  out["biorthonormality_residual"] = (dec.chain_basis.adjoint() * dec.dual_basis - id).cwiseAbs().maxCoeff();
  Json chains = Json::array();
  for (const Chain& c : dec.chains) {
    Json entry;
    entry["cluster"] = c.cluster;
    entry["label"] = c.label;
    entry["length"] = c.length;
    entry["first_column"] = c.first_column;
    chains.push_back(std::move(entry));
  }
  out["chains"] = std::move(chains);
  return out;
}

Json pairing_json(const SpectrumPairing& pairing) {
  Json out;
  out["real_clusters"] = pairing.real_labels;
  Json pairs = Json::array();
  for (const auto& p : pairing.pairs) pairs.push_back(Json::array({p.upper, p.lower}));
  out["conjugate_pairs"] = std::move(pairs);
  return out;
}

Json failure_json(const PairingFailure& failure) {
  Json out;
  out["kind"] = std::string(to_string(failure.kind));
  out["cluster"] = failure.cluster;
  out["eigenvalue"] = complex_to_json(failure.eigenvalue);
  if (failure.partner) {
    out["partner_cluster"] = *failure.partner;
    out["partner_eigenvalue"] = complex_to_json(failure.partner_eigenvalue.value_or(Complex{}));
  }
  out["message"] = failure.describe();
  return out;
}

Json metric_json(const JordanDecomposition& dec, const SpectrumPairing& pairing, const MetricOperator& metric,
                 const CMatrix& inverse, const Tolerances& tol, const WitnessOptions& options) {
  const Index n = dec.dim();
  const auto sigma = singular_values(metric.eta);
  Json out;
  if (const auto* signs = std::get_if<Signs>(&metric.provenance)) {
    out["provenance"] = "signs";
    out["signs"] = *signs;
  } else {
    const auto& params = std::get<MetricParameters>(metric.provenance);
    out["provenance"] = "parameters";
    out["x"] = params.x;
    Json xi = Json::array();
    for (const auto& seq : params.xi) {
      Json row = Json::array();
      for (const Complex& z : seq) row.push_back(complex_to_json(z));
      xi.push_back(std::move(row));
    }
    out["xi"] = std::move(xi);
  }
  out["hermiticity_residual"] = metric.hermiticity_residual;
  out["intertwining_residual"] = metric.intertwining_residual;
  out["inverse_residual"] = (metric.eta * inverse - CMatrix::Identity(n, n)).norm();
  out["rank"] = numerical_rank(metric.eta, tol);
  out["min_eigenvalue"] = metric.min_eigenvalue;
  out["norm2"] = sigma.empty() ? 0.0 : sigma.front();
  out["positive_definite"] = metric.min_eigenvalue > rank_threshold(sigma.front(), n, tol);
  out["metric_hermiticity"] = {
      {"samples", options.samples},
      {"seed", options.seed},
      {"residual", check_metric_hermiticity(dec.matrix, metric.eta, options.samples, options.seed)},
  };
  Json nulls = Json::array();
  for (const NullVector& v : null_vectors(dec, pairing, metric.eta)) {
    Json entry;
    entry["cluster"] = v.cluster;
    entry["chain"] = v.chain;
    entry["eta_norm"] = complex_to_json(v.norm);
    nulls.push_back(std::move(entry));
  }
  out["null_vectors"] = std::move(nulls);
  if (options.emit_eta) out["eta"] = matrix_entries(metric.eta);
  return out;
}

Json class2_json(const Class2& cls) {
  Json out;
  out["class"] = std::string(to_string(cls.stratum));
  out["det"] = complex_to_json(cls.det);
  out["eigenvalues"] = Json::array({complex_to_json(cls.eigenvalues[0]), complex_to_json(cls.eigenvalues[1])});
  out["pseudo_hermitian"] = cls.pseudo_hermitian();
  return out;
}

Json factor_json(const ModuliFactor& factor, const Traceless2& m) {
  Json out;
  out["sign"] = factor.sign;
  out["energy"] = factor.energy;
  out["g"] = matrix_entries(CMatrix(factor.g));
  out["reconstruction_residual"] = (factor.reconstruct() - m.matrix()).norm() / m.norm();
  return out;
}

Json frw_level_json(const FrwLevel& level) {
  Json out;
  out["n"] = level.n;
  out["d"] = level.d;
  out["e_plus"] = complex_to_json(level.e_plus);
  out["e_minus"] = complex_to_json(level.e_minus);
  out["critical"] = level.critical;
  return out;
}

}  // namespace pherm::cli
