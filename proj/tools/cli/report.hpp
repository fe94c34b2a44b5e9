#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cli/matrix_io.hpp"
#include "pherm/frw.hpp"
#include "pherm/jordan.hpp"
#include "pherm/pseudoherm.hpp"
#include "pherm/two_by_two.hpp"

namespace pherm::cli {

inline constexpr int kSchemaVersion = 1;

/// Common header: schema version, command echo and tolerances.
Json report_header(const std::string& command, const std::vector<std::string>& args, const Tolerances& tol);

Json tolerances_json(const Tolerances& tol);
Json spectrum_json(const JordanDecomposition& dec, const Tolerances& tol);
Json decomposition_json(const JordanDecomposition& dec);
Json pairing_json(const SpectrumPairing& pairing);
Json failure_json(const PairingFailure& failure);

struct WitnessOptions {
  bool emit_eta = false;
  int samples = 1000;
  std::uint64_t seed = 1;
};

Json metric_json(const JordanDecomposition& dec, const SpectrumPairing& pairing, const MetricOperator& metric,
                 const CMatrix& inverse, const Tolerances& tol, const WitnessOptions& options);

Json class2_json(const Class2& cls);
Json factor_json(const ModuliFactor& factor, const Traceless2& m);
Json frw_level_json(const FrwLevel& level);

}  // namespace pherm::cli
