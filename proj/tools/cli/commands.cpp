#include "cli/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cli/matrix_io.hpp"
#include "cli/report.hpp"
#include "pherm/errors.hpp"
#include "pherm/frw.hpp"
#include "pherm/jordan.hpp"
#include "pherm/pseudoherm.hpp"
#include "pherm/two_by_two.hpp"

namespace pherm::cli {

namespace {

/// Thrown for argument values CLI11 accepts syntactically but we reject.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  Tolerances tol;
  // analyze / metric
  std::string file;
  bool emit_eta = false;
  std::uint64_t seed = 1;
  int samples = 1000;
  std::optional<std::string> signs;
  std::optional<std::string> general;
  // classify2
  std::string a = "0,0";
  std::string b = "0,0";
  std::string c = "0,0";
  // sweep
  double a_r = 1.0;
  double a_i = 1.0;
  std::string b0 = "0,0";
  std::string b1 = "0,0";
  double epsilon = 1.0;
  int steps = 21;
  std::optional<std::string> csv_out;
  // frw
  double mass = 1.0;
  double scale = 1.0;
  int levels = 1;
  std::optional<std::string> matrix_out;
};

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
  cmd->add_option("--tol-rank", tol.rank_rel, "relative singular-value threshold")->capture_default_str();
  cmd->add_option("--tol-cluster", tol.cluster_rel, "relative eigenvalue clustering radius")->capture_default_str();
  cmd->add_option("--tol-verify", tol.verify_rel, "relative residual bound")->capture_default_str();
  cmd->add_option("--tol-real", tol.real_rel, "relative |Im E| bound for real eigenvalues")->capture_default_str();
}

Complex complex_option(const std::string& text, const std::string& name) {
  try {
    return parse_complex_arg(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

Signs parse_signs(const std::string& text) {
  Signs out;
  if (text.empty()) return out;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token == "+" || token == "+1" || token == "1") {
      out.push_back(1);
    } else if (token == "-" || token == "-1") {
      out.push_back(-1);
    } else {
      throw UsageError("--signs: expected a comma-separated list of + and -, got '" + token + "'");
    }
  }
  return out;
}

std::string shortest(double v) {
  if (v == 0.0) v = 0.0;  // print -0 as 0
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ec == std::errc() ? ptr : buf.data());
}

void emit(std::ostream& out, const Json& report) { out << report.dump(2) << '\n'; }

int run_analyze(const Options& opt, Json report, std::ostream& out) {
  const CMatrix h = parse_matrix_file(opt.file);
  report["input"] = {{"file", opt.file}, {"dim", h.rows()}};
  Verdict verdict = check_pseudo_hermiticity(jordan_chains(h, opt.tol), opt.tol);
  const JordanDecomposition& dec = verdict.decomposition;
  report["spectrum"] = spectrum_json(dec, opt.tol);
  report["decomposition"] = decomposition_json(dec);
  report["verdict"] = {{"pseudo_hermitian", verdict.is_pseudo_hermitian}};
  if (verdict.failure) {
    report["verdict"]["failure"] = failure_json(*verdict.failure);
    report["pairing"] = nullptr;
    report["witness"] = nullptr;
  } else {
    report["verdict"]["failure"] = nullptr;
    const SpectrumPairing& pairing = *verdict.pairing;
    report["pairing"] = pairing_json(pairing);
    const Signs sigma(real_chain_count(dec, pairing), 1);
    report["witness"] = metric_json(dec, pairing, *verdict.witness, canonical_metric_inverse(dec, pairing, sigma),
                                    opt.tol, {opt.emit_eta, opt.samples, opt.seed});
  }
  report["warnings"] = dec.warnings;
  emit(out, report);
  return verdict.is_pseudo_hermitian ? kPseudoHermitian : kNotPseudoHermitian;
}

int run_metric(const Options& opt, Json report, std::ostream& out) {
  const CMatrix h = parse_matrix_file(opt.file);
  report["input"] = {{"file", opt.file}, {"dim", h.rows()}};
  const JordanDecomposition dec = jordan_chains(h, opt.tol);
  report["spectrum"] = spectrum_json(dec, opt.tol);
  report["decomposition"] = decomposition_json(dec);
  auto outcome = pair_spectrum(dec.data, opt.tol);
  if (const auto* failure = std::get_if<PairingFailure>(&outcome)) {
    report["verdict"] = {{"pseudo_hermitian", false}, {"failure", failure_json(*failure)}};
    report["metric"] = nullptr;
    report["warnings"] = dec.warnings;
    emit(out, report);
    return kNotPseudoHermitian;
  }
  const SpectrumPairing& pairing = std::get<SpectrumPairing>(outcome);
  report["verdict"] = {{"pseudo_hermitian", true}, {"failure", nullptr}};
  report["pairing"] = pairing_json(pairing);
  report["real_chains"] = real_chain_count(dec, pairing);
  report["paired_chains"] = paired_chain_count(dec, pairing);

  MetricOperator metric;
  CMatrix inv;
  if (opt.general) {
    MetricParameters params;
    try {
      params = parse_metric_parameters(read_file(*opt.general));
    } catch (const ParseError& e) {
      throw ParseError(*opt.general + ": " + e.what());
    }
    metric = general_metric(dec, pairing, params);
    inv = inverse(metric.eta, opt.tol);
  } else {
    const Signs sigma = opt.signs ? parse_signs(*opt.signs) : Signs(real_chain_count(dec, pairing), 1);
    metric = canonical_metric(dec, pairing, sigma);
    inv = canonical_metric_inverse(dec, pairing, sigma);
  }
  report["metric"] = metric_json(dec, pairing, metric, inv, opt.tol, {true, opt.samples, opt.seed});
  report["warnings"] = dec.warnings;
  emit(out, report);
  return kPseudoHermitian;
}

int run_classify2(const Options& opt, Json report, std::ostream& out) {
  const Traceless2 m{complex_option(opt.a, "a"), complex_option(opt.b, "b"), complex_option(opt.c, "c")};
  report["input"] = {{"a", complex_to_json(m.a)}, {"b", complex_to_json(m.b)}, {"c", complex_to_json(m.c)}};
  const Class2 cls = classify(m, opt.tol);
  report["classification"] = class2_json(cls);
  if (cls.stratum == Stratum::MPlus || cls.stratum == Stratum::MMinus) {
    report["factorization"] = factor_json(factorize(m, opt.tol), m);
  } else {
    report["factorization"] = nullptr;
  }
  emit(out, report);
  return cls.pseudo_hermitian() ? kPseudoHermitian : kNotPseudoHermitian;
}

int run_sweep(const Options& opt, Json report, std::ostream& out) {
  const CrossingFamily family{opt.a_r, opt.a_i, complex_option(opt.b0, "b0"), complex_option(opt.b1, "b1"),
                              opt.epsilon};
  report["family"] = {{"a_r", family.a_r},
                      {"a_i", family.a_i},
                      {"b0", complex_to_json(family.b0)},
                      {"b1", complex_to_json(family.b1)},
                      {"epsilon", family.epsilon},
                      {"steps", opt.steps}};
  const auto records = sweep_family(family, opt.steps, opt.tol);

  std::ostringstream csv;
  csv << "lambda,re_e1,im_e1,re_e2,im_e2,class,diagonalizable\n";
  Json rows = Json::array();
  bool all_pseudo_hermitian = true;
  for (const SweepRecord& r : records) {
    const auto& e = r.classification.eigenvalues;
    csv << shortest(r.lambda) << ',' << shortest(e[0].real()) << ',' << shortest(e[0].imag()) << ','
        << shortest(e[1].real()) << ',' << shortest(e[1].imag()) << ',' << to_string(r.classification.stratum) << ','
        << (r.diagonalizable ? "true" : "false") << '\n';
    Json row = class2_json(r.classification);
    row["lambda"] = r.lambda;
    row["diagonalizable"] = r.diagonalizable;
    row["pipeline_pseudo_hermitian"] = r.pseudo_hermitian;
    rows.push_back(std::move(row));
    all_pseudo_hermitian = all_pseudo_hermitian && r.pseudo_hermitian && r.classification.pseudo_hermitian();
  }
  if (opt.csv_out) {
    std::ofstream file(*opt.csv_out, std::ios::binary);
    if (!file) throw FileError("cannot write " + *opt.csv_out);
    file << csv.str();
    report["csv"] = *opt.csv_out;
  } else {
    report["csv"] = nullptr;
  }
  report["records"] = std::move(rows);
  report["pseudo_hermitian_everywhere"] = all_pseudo_hermitian;
  emit(out, report);
  return all_pseudo_hermitian ? kPseudoHermitian : kNotPseudoHermitian;
}

int run_frw(const Options& opt, Json report, std::ostream& out) {
  const FrwParams params{opt.mass, opt.scale, opt.levels};
  const FrwReport frw = analyze_frw(params, opt.tol);
  report["model"] = {{"mass", params.mass}, {"scale", params.scale}, {"levels", params.levels}};
  Json levels = Json::array();
  for (const FrwLevel& level : frw.levels) levels.push_back(frw_level_json(level));
  report["levels"] = std::move(levels);
  report["critical_scale_factors"] = critical_scale_factors(params);
  report["critical_levels"] = frw.critical_levels;
  report["sigma3_residual"] = frw.sigma3_residual;

  const Verdict& verdict = frw.verdict;
  const JordanDecomposition& dec = verdict.decomposition;
  report["spectrum"] = spectrum_json(dec, opt.tol);
  report["decomposition"] = decomposition_json(dec);
  if (frw.zero_cluster) {
    const SpectralDatum& z = *frw.zero_cluster;
    report["zero_cluster"] = {{"eigenvalue", complex_to_json(z.eigenvalue)},
                              {"geometric_multiplicity", z.geometric_mult},
                              {"algebraic_multiplicity", z.algebraic_mult},
                              {"jordan_dims", z.jordan_dims}};
  } else {
    report["zero_cluster"] = nullptr;
  }
  report["verdict"] = {{"pseudo_hermitian", verdict.is_pseudo_hermitian}};
  if (verdict.failure) {
    report["verdict"]["failure"] = failure_json(*verdict.failure);
    report["witness"] = nullptr;
  } else {
    report["verdict"]["failure"] = nullptr;
    const SpectrumPairing& pairing = *verdict.pairing;
    const Signs sigma(real_chain_count(dec, pairing), 1);
    report["witness"] = metric_json(dec, pairing, *verdict.witness, canonical_metric_inverse(dec, pairing, sigma),
                                    opt.tol, {false, opt.samples, opt.seed});
  }
  if (opt.matrix_out) {
    write_matrix_file(*opt.matrix_out, frw.hamiltonian);
    report["matrix_out"] = *opt.matrix_out;
  }
  report["warnings"] = dec.warnings;
  emit(out, report);
  return verdict.is_pseudo_hermitian ? kPseudoHermitian : kNotPseudoHermitian;
}

Json error_report(const std::string& command, const std::vector<std::string>& args, const std::string& code,
                  const std::string& message) {
  Json r;
  r["schema"] = kSchemaVersion;
  r["command"] = command;
  r["args"] = args;
  r["error"] = {{"code", code}, {"message", message}};
  return r;
}

}  // namespace

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Jordan structure, pseudo-Hermiticity and metric operators of complex matrices", "pherm"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "decide pseudo-Hermiticity and build a canonical metric");
  analyze->add_option("file", opt.file, "matrix file (JSON)")->required();
  analyze->add_flag("--emit-eta", opt.emit_eta, "include the metric entries in the report");
  analyze->add_option("--seed", opt.seed, "seed for the sampled Hermiticity check")->capture_default_str();
  analyze->add_option("--samples", opt.samples, "vector pairs for the sampled Hermiticity check")
      ->capture_default_str();
  add_tolerance_flags(analyze, opt.tol);

  auto* metric = app.add_subcommand("metric", "construct eta(sigma) or eta(x, xi)");
  metric->add_option("file", opt.file, "matrix file (JSON)")->required();
  auto* signs = metric->add_option("--signs", opt.signs, "one sign per real Jordan chain, e.g. +,-,+");
  metric->add_option("--general", opt.general, "JSON file with x and xi coefficient sequences")->excludes(signs);
  metric->add_option("--seed", opt.seed, "seed for the sampled Hermiticity check")->capture_default_str();
  metric->add_option("--samples", opt.samples, "vector pairs for the sampled Hermiticity check")
      ->capture_default_str();
  add_tolerance_flags(metric, opt.tol);

  auto* classify2 = app.add_subcommand("classify2", "classify the traceless matrix [[a, b], [c, -a]]");
  classify2->add_option("--a", opt.a, "RE,IM")->capture_default_str();
  classify2->add_option("--b", opt.b, "RE,IM")->capture_default_str();
  classify2->add_option("--c", opt.c, "RE,IM")->capture_default_str();
  add_tolerance_flags(classify2, opt.tol);

  auto* sweep = app.add_subcommand("sweep", "sweep the level-crossing family across lambda = 0");
  sweep->add_option("--ar", opt.a_r, "real slope of a(lambda) for lambda <= 0")->required();
  sweep->add_option("--ai", opt.a_i, "imaginary slope of a(lambda) for lambda >= 0")->required();
  sweep->add_option("--b0", opt.b0, "b(0) as RE,IM")->capture_default_str();
  sweep->add_option("--b1", opt.b1, "b'(0) as RE,IM")->capture_default_str();
  sweep->add_option("--eps", opt.epsilon, "half-width of the lambda grid")->capture_default_str();
  sweep->add_option("--steps", opt.steps, "odd number of grid points")->capture_default_str();
  sweep->add_option("--out", opt.csv_out, "CSV output file");
  add_tolerance_flags(sweep, opt.tol);

  auto* frw = app.add_subcommand("frw", "analyse the truncated FRW effective Hamiltonian");
  frw->add_option("--mass", opt.mass, "scalar field mass m")->required();
  frw->add_option("--scale", opt.scale, "scale factor a")->required();
  frw->add_option("--levels", opt.levels, "oscillator levels N")->required();
  frw->add_option("--matrix-out", opt.matrix_out, "write the truncated Hamiltonian as a matrix file");
  frw->add_option("--seed", opt.seed, "seed for the sampled Hermiticity check")->capture_default_str();
  frw->add_option("--samples", opt.samples, "vector pairs for the sampled Hermiticity check")->capture_default_str();
  add_tolerance_flags(frw, opt.tol);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pherm: " << e.what() << "\n" << "run 'pherm --help' for usage\n";
    return kUsage;
  }

  const std::vector<std::string> echo(args.begin(), args.end());
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    opt.tol.validate();
  } catch (const Error& e) {
    err << "pherm: " << e.what() << "\n";
    return kUsage;
  }
  Json report = report_header(name, echo, opt.tol);
  try {
    if (name == "analyze") return run_analyze(opt, std::move(report), out);
    if (name == "metric") return run_metric(opt, std::move(report), out);
    if (name == "classify2") return run_classify2(opt, std::move(report), out);
    if (name == "sweep") return run_sweep(opt, std::move(report), out);
    return run_frw(opt, std::move(report), out);
  } catch (const UsageError& e) {
    err << "pherm: " << e.what() << "\n";
    return kUsage;
  } catch (const FileError& e) {
    err << "pherm: " << e.what() << "\n";
    emit(out, error_report(name, echo, "FileError", e.what()));
    return kFileError;
  } catch (const ParseError& e) {
    err << "pherm: " << e.what() << "\n";
    emit(out, error_report(name, echo, "ParseError", e.what()));
    return kFileError;
  } catch (const Error& e) {
    err << "pherm: " << e.what() << "\n";
    emit(out, error_report(name, echo, std::string(to_string(e.code())), e.what()));
    const bool usage = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::InvalidGrid;
    return usage ? kUsage : kAnalysisError;
  }
}

}  // namespace pherm::cli
