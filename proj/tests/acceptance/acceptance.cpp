// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance [--write-goldens]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cli/commands.hpp"
#include "cli/matrix_io.hpp"
#include "pherm/errors.hpp"
#include "pherm/frw.hpp"
#include "pherm/jordan.hpp"
#include "pherm/pseudoherm.hpp"
#include "pherm/two_by_two.hpp"
#include "support/instances.hpp"

using namespace pherm;
namespace fs = std::filesystem;
namespace t = pherm::testing;

namespace {

bool g_write_goldens = false;

struct Result {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { details.push_back("     " + what); }
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel_frobenius(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

/// Jordan dims per constructed eigenvalue, compared with the recovered clusters.
bool dims_match(const JordanDecomposition& dec, const std::vector<t::BlockSpec>& blocks) {
  const auto expected = t::expected_dims(blocks);
  if (dec.data.size() != expected.size()) return false;
  for (const auto& [key, dims] : expected) {
    const Complex e{key.first, key.second};
    int hits = 0;
    for (const auto& d : dec.data) {
      if (std::abs(d.eigenvalue - e) < 0.25) {
        ++hits;
        if (d.jordan_dims != dims) return false;
      }
    }
    if (hits != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Result criterion1() {
  Result r;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  const Tolerances tol;
  int wrong_dims = 0, errors = 0;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto inst = t::random_jordan_instance(rng);
    try {
      const auto dec = jordan_chains(inst.h, tol);
      if (!dims_match(dec, inst.blocks)) ++wrong_dims;
      worst = std::max(worst, rel_frobenius(reconstruct(dec), inst.h));
    } catch (const Error& e) {
      ++errors;
      r.note(std::string("instance ") + std::to_string(k) + ": " + e.what());
    }
  }
  const double elapsed = seconds_since(start);
  r.check(wrong_dims == 0 && errors == 0, "jordan_dims exact on 200 instances (wrong " + std::to_string(wrong_dims) +
                                              ", errors " + std::to_string(errors) + ")");
  r.check(worst <= 1e-8, "worst reconstruction residual " + sci(worst) + " <= 1e-8");
  r.check(elapsed < 10.0, "runtime " + sci(elapsed) + " s < 10 s");
  return r;
}

// Shared with criterion 3: every witness verified in criterion 2.
struct Witnessed {
  JordanDecomposition dec;
  SpectrumPairing pairing;
  MetricOperator eta;
};
std::vector<Witnessed> g_witnesses;

Result criterion2() {
  Result r;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2002);
  const Tolerances tol;
  int yes_ok = 0, no_ok = 0;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto inst = t::random_pseudo_hermitian_instance(rng);
    try {
      Verdict v = check_pseudo_hermiticity(inst.h, tol);
      if (v.is_pseudo_hermitian && v.witness && dims_match(v.decomposition, inst.blocks)) {
        worst = std::max(worst, v.witness->intertwining_residual);
        if (v.witness->intertwining_residual <= 1e-8) ++yes_ok;
        g_witnesses.push_back({std::move(v.decomposition), *v.pairing, *v.witness});
      }
    } catch (const Error& e) {
      r.note(std::string("pseudo-Hermitian instance ") + std::to_string(k) + ": " + e.what());
    }
  }
  for (int k = 0; k < 100; ++k) {
    const auto defect = k % 2 == 0 ? t::Defect::Unpaired : t::Defect::Mismatch;
    const auto expected =
        defect == t::Defect::Unpaired ? PairingFailure::Kind::UnpairedEigenvalue : PairingFailure::Kind::JordanMismatch;
    const auto inst = t::random_defective_pairing_instance(rng, defect);
    try {
      const Verdict v = check_pseudo_hermiticity(inst.h, tol);
      if (!v.is_pseudo_hermitian && !v.witness && v.failure && v.failure->kind == expected) ++no_ok;
    } catch (const Error& e) {
      r.note(std::string("defective instance ") + std::to_string(k) + ": " + e.what());
    }
  }
  const double elapsed = seconds_since(start);
  r.check(yes_ok == 100, "verdict yes with verified witness: " + std::to_string(yes_ok) + "/100, worst residual " +
                             sci(worst));
  r.check(no_ok == 100, "verdict no with the correct reason: " + std::to_string(no_ok) + "/100");
  r.check(elapsed < 10.0, "runtime " + sci(elapsed) + " s < 10 s");
  return r;
}

Result criterion3() {
  Result r;
  double herm = 0.0, inv = 0.0, simple = 0.0, pattern = 0.0, pattern_general = 0.0;
  std::mt19937_64 rng(3003);
  std::normal_distribution<double> normal;
  for (const Witnessed& w : g_witnesses) {
    const Index n = w.dec.dim();
    const Signs sigma(real_chain_count(w.dec, w.pairing), 1);
    herm = std::max(herm, w.eta.hermiticity_residual);
    const CMatrix eta_inv = canonical_metric_inverse(w.dec, w.pairing, sigma);
    inv = std::max(inv, (w.eta.eta * eta_inv - identity(n)).norm());
    const auto from_params = general_metric(w.dec, w.pairing, canonical_parameters(w.dec, w.pairing, sigma));
    simple = std::max(simple, (from_params.eta - w.eta.eta).cwiseAbs().maxCoeff());

    // Entries of A^dagger eta A outside the chain-pair pattern must vanish.
    MetricParameters params = canonical_parameters(w.dec, w.pairing, sigma);
    for (auto& x : params.x)
      for (double& v : x) v = v == 0.0 ? normal(rng) : v;
    for (auto& xi : params.xi)
      for (Complex& v : xi) v = v == Complex{} ? Complex{normal(rng), normal(rng)} : v;
    const auto general = general_metric(w.dec, w.pairing, params);
    const auto slot_length = [&](const ChainSlot& s) { return w.dec.chains_of(s.cluster)[s.label].length; };
    const auto allowed = [&](const ChainSlot& a, const ChainSlot& b) {
      if (a.label != b.label || a.position + b.position < slot_length(a) - 1) return false;
      for (std::size_t c : w.pairing.real_labels)
        if (a.cluster == c && b.cluster == c) return true;
      for (const ConjugatePair& q : w.pairing.pairs)
        if ((a.cluster == q.upper && b.cluster == q.lower) || (a.cluster == q.lower && b.cluster == q.upper))
          return true;
      return false;
    };
    const CMatrix bc = in_chain_basis(w.dec, w.eta.eta);
    const CMatrix bg = in_chain_basis(w.dec, general.eta);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        const ChainSlot& a = w.dec.layout[static_cast<std::size_t>(i)];
        const ChainSlot& b = w.dec.layout[static_cast<std::size_t>(j)];
        if (allowed(a, b)) {
          // canonical: 1 (or sigma) on the anti-diagonal, 0 above it
          const bool flip = a.position + b.position == slot_length(a) - 1;
          pattern = std::max(pattern, std::abs(bc(i, j) - (flip ? 1.0 : 0.0)));
        } else {
          pattern = std::max(pattern, std::abs(bc(i, j)));
          pattern_general = std::max(pattern_general, std::abs(bg(i, j)));
        }
      }
    }
  }
  r.note("witnesses checked: " + std::to_string(g_witnesses.size()));
  r.check(!g_witnesses.empty(), "criterion 2 produced witnesses");
  r.check(herm <= 1e-12, "Hermiticity residual " + sci(herm) + " <= 1e-12");
  r.check(inv <= 1e-8, "||eta eta^-1 - I||_F " + sci(inv) + " <= 1e-8");
  r.check(simple <= 1e-12, "simple coefficients vs canonical metric, max entry " + sci(simple) + " <= 1e-12");
  r.check(pattern <= 1e-8, "canonical psi-basis pattern, max deviation " + sci(pattern) + " <= 1e-8");
  r.check(pattern_general <= 1e-8, "general psi-basis zero pattern, max entry " + sci(pattern_general) + " <= 1e-8");
  return r;
}

Result criterion4() {
  Result r;
  std::mt19937_64 rng(4004);
  const Tolerances tol;
  int instances = 0, defective = 0, semidef_fail = 0, pd_mismatch = 0, errors = 0;
  double worst_min = std::numeric_limits<double>::infinity(), worst_herm = 0.0, worst_null = 0.0;
  std::size_t null_count = 0;
  for (int k = 0; k < 100; ++k) {
    // real spectrum; every other instance diagonalizable
    std::vector<t::BlockSpec> blocks;
    std::vector<Complex> taken;
    int budget = 10;
    const int distinct = t::uniform_int(rng, 1, 3);
    for (int e = 0; e < distinct && budget > 0; ++e) {
      Complex z;
      do z = Complex{t::uniform(rng, -2.0, 2.0), 0.0};
      while (!t::separated(z, taken, 0.5));
      taken.push_back(z);
      for (int size : t::random_partition(rng, std::min(budget, 5), k % 2 == 0 ? 1 : 4)) {
        blocks.push_back({z, size});
        budget -= size;
      }
    }
    const auto inst = t::similar_instance(blocks, t::random_condition(rng), rng);
    try {
      const Verdict v = check_pseudo_hermiticity(inst.h, tol);
      if (!v.is_pseudo_hermitian || !v.witness) {
        ++errors;
        continue;
      }
      ++instances;
      const CMatrix& eta = v.witness->eta;
      const double norm2 = hermitian_norm2(eta);
      const double min_eig = v.witness->min_eigenvalue;
      worst_min = std::min(worst_min, min_eig / norm2);
      if (min_eig < -1e-10 * norm2) ++semidef_fail;
      bool all_simple = true;
      for (const auto& d : v.decomposition.data) all_simple = all_simple && d.jordan_dims.front() == 1;
      if (!all_simple) ++defective;
      const bool positive_definite = min_eig > 1e-10 * norm2;
      if (positive_definite != all_simple) ++pd_mismatch;
      worst_herm = std::max(worst_herm, check_metric_hermiticity(inst.h, eta, 1000, 1));
      for (const NullVector& nv : null_vectors(v.decomposition, *v.pairing, eta)) {
        worst_null = std::max(worst_null, std::abs(nv.norm));
        ++null_count;
      }
    } catch (const Error& e) {
      ++errors;
      r.note(std::string("instance ") + std::to_string(k) + ": " + e.what());
    }
  }
  r.note(std::to_string(instances) + " real-spectrum witnesses, " + std::to_string(defective) + " with a Jordan block");
  r.check(errors == 0, "pipeline produced a witness for every instance (failures " + std::to_string(errors) + ")");
  r.check(semidef_fail == 0, "min eig(eta) >= -1e-10 ||eta||_2: violated on " + std::to_string(semidef_fail) +
                                 " instances, worst min/||eta|| = " + sci(worst_min));
  r.check(pd_mismatch == 0, "positive definite exactly when all Jordan dims are 1 (mismatches " +
                                std::to_string(pd_mismatch) + ")");
  r.check(worst_herm <= 1e-10, "Hermiticity wrt eta over 1000 pairs: " + sci(worst_herm) + " <= 1e-10");
  r.check(null_count > 0 && worst_null <= 1e-10,
          std::to_string(null_count) + " eta-null eigenvectors, worst |<psi|eta|psi>| " + sci(worst_null));
  if (semidef_fail > 0) {
    r.note("the all-plus canonical metric restricted to one Jordan chain is the exchange");
    r.note("matrix, whose eigenvalues are +1 and -1; an invertible semidefinite metric");
    r.note("would be definite and force diagonalizability, so this clause cannot hold");
  }
  return r;
}

Result criterion5() {
  Result r;
  const auto start = std::chrono::steady_clock::now();
  const Tolerances tol;
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int band = 0, outside = 0, errors = 0, positives = 0;
  const auto compare = [&](const Traceless2& m) {
    const Class2 c = classify(m, tol);
    bool pipeline = false;
    bool failed = false;
    try {
      pipeline = check_pseudo_hermiticity(m.matrix(), tol).is_pseudo_hermitian;
    } catch (const Error&) {
      failed = true;
      ++errors;
    }
    positives += c.pseudo_hermitian() ? 1 : 0;
    const double threshold = tol.verify_rel * (1.0 + std::abs(c.det));
    const double im = std::abs(c.det.imag());
    const bool in_band = im > 0.5 * threshold && im < 2.0 * threshold;
    band += in_band ? 1 : 0;
    if ((failed || pipeline != c.pseudo_hermitian()) && !in_band) ++outside;
  };
  const int samples = 10000;
  for (int k = 0; k < samples; ++k) {
    compare({{unit(rng), unit(rng)}, {unit(rng), unit(rng)}, {unit(rng), unit(rng)}});
  }
  const int uniform_band = band;
  // Uniform entries almost never give a real determinant, so add samples
  // projected onto real det (both strata and the nilpotent cone).
  const int extras = 2000;
  for (int k = 0; k < extras; ++k) {
    const Complex a{unit(rng), unit(rng)};
    const Complex b{unit(rng) + 0.1, unit(rng)};
    const double det = k % 10 == 0 ? 0.0 : 4.0 * unit(rng) - 2.0;
    compare({a, b, (-a * a - det) / b});
  }
  const double elapsed = seconds_since(start);
  r.note(std::to_string(samples) + " uniform samples + " + std::to_string(extras) + " real-det samples; " +
         std::to_string(positives) + " classified pseudo-Hermitian");
  r.note("tolerance band |Im det| in (0.5, 2) x 1e-8 (1 + |det|): " + std::to_string(band) + " samples (" +
         std::to_string(uniform_band) + " uniform)");
  r.check(outside == 0, "disagreements outside the band: " + std::to_string(outside) + " (pipeline errors " +
                            std::to_string(errors) + ")");
  r.check(band < 0.005 * (samples + extras), "band fraction " + sci(band / double(samples + extras)) + " < 0.5%");
  r.check(elapsed < 30.0, "runtime " + sci(elapsed) + " s < 30 s");
  return r;
}

Result criterion6() {
  Result r;
  const Tolerances tol;
  std::mt19937_64 rng(6006);
  int families = 0, bad = 0;
  for (int k = 0; k < 40; ++k) {
    const bool zero_b0 = k % 2 == 1;
    const CrossingFamily f{t::uniform(rng, 0.2, 3.0), t::uniform(rng, 0.2, 3.0),
                           zero_b0 ? Complex{} : Complex{t::uniform(rng, 0.2, 2.0), t::uniform(rng, -1.0, 1.0)},
                           Complex{t::uniform(rng, -1.0, 1.0), t::uniform(rng, -1.0, 1.0)}, t::uniform(rng, 0.1, 2.0)};
    const int steps = 2 * t::uniform_int(rng, 1, 30) + 1;
    ++families;
    bool ok = true;
    for (const SweepRecord& rec : sweep_family(f, steps, tol)) {
      const Stratum s = rec.classification.stratum;
      if (rec.lambda < 0.0) ok = ok && s == Stratum::MMinus && rec.diagonalizable;
      if (rec.lambda > 0.0) ok = ok && s == Stratum::MPlus && rec.diagonalizable;
      if (rec.lambda == 0.0) {
        ok = ok && s == (zero_b0 ? Stratum::Zero : Stratum::NilpotentNonDiagonalizable);
        ok = ok && rec.diagonalizable == zero_b0;
      }
      ok = ok && rec.pseudo_hermitian && rec.classification.pseudo_hermitian();
    }
    bad += ok ? 0 : 1;
  }
  const auto example = sweep_family({1.0, 1.0, 1.0, 0.0, 1.0}, 5, tol);
  r.check(example[2].classification.stratum == Stratum::NilpotentNonDiagonalizable,
          "b0 = 1, steps 5: nilpotent at lambda = 0");
  const auto vanishing = sweep_family({1.0, 1.0, 0.0, 1.0, 1.0}, 5, tol);
  r.check(vanishing[2].classification.stratum == Stratum::Zero, "b0 = 0, steps 5: zero matrix at lambda = 0");
  r.check(bad == 0, "random families with correct strata and pseudo-Hermiticity everywhere: " +
                        std::to_string(families - bad) + "/" + std::to_string(families));
  return r;
}

Result criterion7() {
  Result r;
  const auto start = std::chrono::steady_clock::now();
  const Tolerances tol;
  const FrwReport rep = analyze_frw({1.0, 3.0, 3}, tol);
  const double s = std::sqrt(54.0);
  const std::vector<std::pair<Complex, int>> expected{
      {Complex{-s, 0.0}, 1}, {Complex{0.0, -s}, 1}, {Complex{0.0, 0.0}, 2}, {Complex{0.0, s}, 1}, {Complex{s, 0.0}, 1}};
  double worst = 0.0;
  bool multiset = rep.verdict.decomposition.data.size() == expected.size();
  for (const auto& [e, mult] : expected) {
    bool found = false;
    for (const auto& d : rep.verdict.decomposition.data) {
      if (std::abs(d.eigenvalue - e) < 1e-3) {
        found = d.algebraic_mult == mult;
        worst = std::max(worst, std::abs(d.eigenvalue - e));
      }
    }
    multiset = multiset && found;
  }
  r.check(multiset && worst <= 1e-9, "spectrum {+-i sqrt54, 0 (x2), +-sqrt54}, max error " + sci(worst) + " <= 1e-9");
  const bool zero_ok = rep.zero_cluster && rep.zero_cluster->geometric_mult == 1 &&
                       rep.zero_cluster->algebraic_mult == 2 && rep.zero_cluster->jordan_dims == std::vector<int>{2};
  r.check(zero_ok, "zero eigenvalue: geometric 1, algebraic 2, one block of size 2");
  r.check(rep.sigma3_residual <= 1e-12, "sigma_3 intertwining residual " + sci(rep.sigma3_residual) + " <= 1e-12");
  r.check(rep.verdict.is_pseudo_hermitian, "verdict pseudo-Hermitian");

  bool real = true;
  int cases = 0;
  for (double mass : {0.5, 1.0, 2.0}) {
    for (double frac : {0.05, 0.3, 0.6, 0.9, 1.0}) {
      for (int levels : {1, 3, 6}) {
        const FrwReport low = analyze_frw({mass, frac * mass, levels}, tol);
        const double scale = std::max(1.0, spectral_scale(eigenvalues(low.hamiltonian)));
        for (const auto& d : low.verdict.decomposition.data)
          real = real && std::abs(d.eigenvalue.imag()) <= tol.real_rel * scale;
        ++cases;
      }
    }
  }
  r.check(real, "a <= m gives a real truncated spectrum (" + std::to_string(cases) + " cases)");
  const double elapsed = seconds_since(start);
  r.check(elapsed < 1.0, "runtime " + sci(elapsed) + " s < 1 s");
  return r;
}

// ---------------------------------------------------------------------------

struct GoldenCase {
  std::string name;
  std::vector<std::string> args;
};

const std::vector<GoldenCase> kGoldens{
    {"j2", {"analyze", "j2.json", "--emit-eta"}},
    {"sigma3", {"analyze", "sigma3.json", "--emit-eta"}},
    {"diag_i", {"analyze", "diag_i.json", "--emit-eta"}},
    {"frw_1_3_3", {"frw", "--mass", "1", "--scale", "3", "--levels", "3"}},
};

std::string run_in_process(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run_command(args, out, err);
  return out.str();
}

std::string run_binary(const std::vector<std::string>& args, int& code) {
  std::string cmd = std::string("\"") + PHERM_CLI_PATH + "\"";
  for (const auto& a : args) cmd += " '" + a + "'";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    code = -1;
    return {};
  }
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

Result criterion8() {
  Result r;
  const fs::path previous = fs::current_path();
  fs::current_path(PHERM_FIXTURE_DIR);
  for (const GoldenCase& g : kGoldens) {
    int c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    const std::string a = run_in_process(g.args, c1);
    const std::string b = run_in_process(g.args, c2);
    const std::string c = run_binary(g.args, c3);
    const std::string d = run_binary(g.args, c4);
    const bool repeat = a == b && a == c && a == d && c1 == 0 && c2 == 0 && c3 == 0 && c4 == 0;
    const fs::path golden = fs::path("golden") / (g.name + ".json");
    if (g_write_goldens) {
      std::ofstream(golden, std::ios::binary) << a;
      r.note("wrote " + golden.string());
    }
    std::string stored;
    bool have = fs::exists(golden);
    if (have) stored = cli::read_file(golden);
    r.check(repeat, g.name + ": byte-identical across 2 in-process and 2 binary runs, exit 0");
    r.check(have && stored == a, g.name + ": matches " + golden.string());
  }
  fs::current_path(previous);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--write-goldens") g_write_goldens = true;
  }
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
      {"Jordan round-trip", criterion1},
      {"pseudo-Hermiticity biconditional", criterion2},
      {"canonical metric identities", criterion3},
      {"metric semidefiniteness and null vectors", criterion4},
      {"2x2 determinant oracle", criterion5},
      {"level-crossing sweep", criterion6},
      {"FRW truncated Hamiltonian", criterion7},
      {"CLI goldens", criterion8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result res;
    try {
      res = criteria[i].second();
    } catch (const std::exception& e) {
      res.check(false, std::string("uncaught exception: ") + e.what());
    }
    std::cout << (res.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << "\n";
    for (const auto& line : res.details) std::cout << "    " << line << "\n";
    std::cout.flush();
    failed += res.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion(s) failed") << "\n";
  return failed == 0 ? 0 : 1;
}
