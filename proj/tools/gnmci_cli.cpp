// gnmci: closed-form GN NLI analysis, test-set generation and oracle checks.

#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "gnmci/config.hpp"
#include "gnmci/nli_engine.hpp"
#include "gnmci/testset.hpp"

namespace {

using namespace gnmci;

const std::map<std::string, RhoMode> kRho = {{"unity", RhoMode::unity}, {"fitted", RhoMode::fitted}};
const std::map<std::string, FintMode> kFint = {{"dilog", FintMode::dilog}, {"asinh", FintMode::asinh}};
const std::map<std::string, OracleMode> kOracle = {
    {"none", OracleMode::none}, {"square", OracleMode::square}, {"island", OracleMode::island}};
const std::map<std::string, LossMode> kLoss = {
    {"auto", LossMode::automatic}, {"general", LossMode::general}, {"flat", LossMode::flat}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form GN model NLI estimator"};
  app.set_version_flag("--version", std::string(GNMCI_VERSION));
  app.require_subcommand(1);

  // analyze
  AnalysisRequest req;
  int rho_coh = 0, rho_mci = 1;
  bool after_span = false;
  double ase_w = -1.0;
  auto* analyze = app.add_subcommand("analyze", "NLI PSD and OSNR for one link");
  analyze->add_option("--config", req.config_path, "link config (JSON)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--cut", req.cut, "channel index, 'center' or 'all' (default: from config)");
  analyze->add_option("--rho-coh", rho_coh, "coherence correction")->check(CLI::IsMember({0, 1}));
  analyze->add_option("--rho-mci", rho_mci, "include MCI")->check(CLI::IsMember({0, 1}));
  analyze->add_option("--rho-sci", req.switches.rho_sci)->transform(CLI::CheckedTransformer(kRho, CLI::ignore_case));
  analyze->add_option("--rho-xci", req.switches.rho_xci)->transform(CLI::CheckedTransformer(kRho, CLI::ignore_case));
  analyze->add_option("--fint", req.switches.fint, "F_int kernel")
      ->transform(CLI::CheckedTransformer(kFint, CLI::ignore_case));
  analyze->add_option("--loss", req.switches.loss)->transform(CLI::CheckedTransformer(kLoss, CLI::ignore_case));
  analyze->add_option("--coeffs", req.coefficients_path, "23 correction coefficients")->check(CLI::ExistingFile);
  analyze->add_option("--out", req.out_dir, "output directory")->required();
  analyze->add_option("--oracle", req.oracle)->transform(CLI::CheckedTransformer(kOracle, CLI::ignore_case));
  analyze->add_option("--ase-w", ase_w, "ASE power in the CUT band, W (default: from amplifiers)");
  analyze->add_option("--threads", req.switches.threads)->check(CLI::Range(1u, 1024u));
  analyze->add_flag("--strict", req.strict, "model warnings give exit status 2");
  analyze->add_flag("--islands", req.dump_islands, "write islands.csv");
  analyze->add_flag("--span-params", req.dump_span_params, "write span_params.csv");
  analyze->add_flag("--g0-after-span", after_span, "start the g0 propagation product after the span");

  // gen-testset
  std::uint64_t seed = 1;
  std::size_t count = 1;
  std::string spec_path, gen_out;
  auto* gen = app.add_subcommand("gen-testset", "randomized link configs");
  auto* seed_opt = gen->add_option("--seed", seed);
  gen->add_option("--count", count)->check(CLI::PositiveNumber);
  gen->add_option("--spec", spec_path, "testset spec (JSON)")->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out)->required();

  // compare
  std::string cmp_in, cmp_out, cmp_domain = "square", cmp_closed = "generic";
  CompareOptions copt;
  std::size_t cmp_max = 16;
  unsigned cmp_threads = 1;
  auto* cmp = app.add_subcommand("compare", "closed form against the quadrature oracle");
  cmp->add_option("--in", cmp_in, "directory of link configs")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--out", cmp_out, "per-system CSV")->required();
  cmp->add_option("--oracle", cmp_domain)->check(CLI::IsMember({"square", "island"}));
  cmp->add_option("--closed", cmp_closed, "generic triple sum or corrected total")
      ->check(CLI::IsMember({"generic", "total"}));
  cmp->add_option("--fint", copt.switches.fint)->transform(CLI::CheckedTransformer(kFint, CLI::ignore_case));
  cmp->add_option("--max-channels", cmp_max, "skip larger combs (0: no cap)");
  cmp->add_option("--threads", cmp_threads)->check(CLI::Range(1u, 1024u));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      req.switches.rho_coh = rho_coh != 0;
      req.switches.rho_mci = rho_mci != 0;
      req.switches.g0_convention = after_span ? G0Convention::after_span : G0Convention::as_printed;
      if (ase_w >= 0.0) req.ase_power_w = ase_w;
      return run_analysis(req, std::cerr);
    }
    if (*gen) {
      TestSystemSpec spec;
      if (!spec_path.empty()) spec = load_testset_spec(spec_path);
      if (*seed_opt) spec.seed = seed;
      const auto systems = generate_testset(spec, count);
      write_testset(systems, spec, gen_out);
      std::cout << "wrote " << systems.size() << " systems to " << gen_out << '\n';
      return 0;
    }
    if (*cmp) {
      copt.closed = cmp_closed == "total" ? ClosedForm::total : ClosedForm::generic;
      copt.domain = cmp_domain == "island" ? oracle::Domain::true_island : oracle::Domain::square;
      copt.quadrature = cmp_domain == "island" ? oracle::island_defaults() : oracle::square_defaults();
      copt.max_channels = cmp_max;
      copt.threads = cmp_threads;
      const auto systems = load_config_set(cmp_in);
      const auto summary = compare_against_oracle(systems, copt);
      const std::filesystem::path out(cmp_out);
      if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
      write_compare_csv(summary, out);
      auto stem = out;
      stem.replace_extension();
      write_compare_summary_csv(summary, stem.string() + "_summary.csv");
      write_histogram_csv(summary, stem.string() + "_hist.csv");
      std::cout << "systems " << summary.rows.size() << ", used " << summary.used << ", flagged " << summary.flagged
                << ", mean " << format_double(summary.mean_err_db) << " dB, std "
                << format_double(summary.std_err_db) << " dB\n";
      return 0;
    }
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
