#pragma once

// Randomized test systems, oracle comparison batches and the analysis run
// behind the command-line tool.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnmci/model_types.hpp"
#include "gnmci/nli_engine.hpp"
#include "gnmci/reference_oracle.hpp"

namespace gnmci {

enum class CutPolicy { center, left_neighbor, right_neighbor, lowest, highest, random };
/// What the guard gap is measured between: the rectangles' edges or the
/// nulls of the raised-cosine spectra.
enum class GapReference { rectangle_edges, raised_cosine_nulls };

std::string_view to_string(CutPolicy p);
std::string_view to_string(GapReference g);

struct TestSystemSpec {
  std::uint64_t seed = 1;
  double band_center_thz = 193.41;
  double band_width_thz = 5.0;
  std::vector<double> symbol_rates_gbaud = {32.0, 64.0, 96.0, 128.0};
  double rolloff_min = 0.05, rolloff_max = 0.25;
  double guard_gap_min_ghz = 5.0, guard_gap_max_ghz = 20.0;
  GapReference gap_reference = GapReference::rectangle_edges;
  std::vector<std::string> formats = {"QPSK", "8QAM", "16QAM", "32QAM", "64QAM"};
  double launch_power_dbm = 0.0;  // per channel
  std::size_t max_channels = 0;   // 0: fill the band

  // Dispersion-shifted fiber.
  double alpha_db_km = 0.22;
  double gamma_1_w_km = 1.77;
  double beta3_ps3_km = 0.121;
  double lambda0_mean_nm = 1550.0;
  double lambda0_std_nm = 5.0;
  double reference_wavelength_nm = 1550.0;  // identified with the band center

  double span_length_min_km = 80.0, span_length_max_km = 120.0;
  double nf_min_db = 6.0, nf_max_db = 7.0;
  int span_count_min = 1, span_count_max = 16;
  CutPolicy cut_policy = CutPolicy::random;

  /// Throws ConfigError on an inconsistent spec.
  void validate() const;
};

TestSystemSpec parse_testset_spec(std::string_view json);
TestSystemSpec load_testset_spec(const std::string& path);
std::string emit_testset_spec(const TestSystemSpec& spec);

/// beta2 at the reference wavelength for a linear-slope fiber with zero
/// dispersion at lambda0; all lengths in m, beta3 in s^3/m.
double dsf_beta2(double beta3, double lambda0, double lambda_ref);

struct GeneratedSystem {
  Link link;
  std::size_t index = 0;
  std::uint64_t stream_seed = 0;
  CutPolicy cut_policy = CutPolicy::center;  // policy actually applied
  std::string cut_note;                      // collisions resolved for small combs
  std::vector<double> lambda0_nm;            // per span
};

/// Seed of system `index`: splitmix64 over (seed, index).
std::uint64_t system_stream_seed(std::uint64_t seed, std::size_t index);

GeneratedSystem generate_system(const TestSystemSpec& spec, std::size_t index);
std::vector<GeneratedSystem> generate_testset(const TestSystemSpec& spec, std::size_t count);

/// Writes system_NNNN.json files and manifest.json into `dir`.
void write_testset(const std::vector<GeneratedSystem>& systems, const TestSystemSpec& spec,
                   const std::filesystem::path& dir);

/// Reads every *.json in `dir` except manifest.json, sorted by file name.
std::vector<std::pair<std::string, Link>> load_config_set(const std::filesystem::path& dir);

enum class ClosedForm { generic, total };

struct CompareOptions {
  ClosedForm closed = ClosedForm::generic;
  EngineSwitches switches{.fint = FintMode::dilog};
  const CorrectionCoefficients* coefficients = nullptr;
  oracle::Domain domain = oracle::Domain::square;
  quad::Options quadrature = oracle::square_defaults();
  std::size_t max_channels = 16;
  unsigned threads = 1;  // systems in flight
};

struct CompareRow {
  std::string system;
  std::size_t channels = 0;
  std::size_t spans = 0;
  std::size_t cut = 0;
  double g_closed = 0.0;
  double g_oracle = 0.0;
  double oracle_error = 0.0;
  double err_db = 0.0;
  double g_sci = 0.0, g_xci = 0.0, g_mci = 0.0;
  std::string status = "ok";  // ok | too_many_channels | not_converged
};

struct CompareSummary {
  std::vector<CompareRow> rows;
  std::size_t used = 0;
  std::size_t flagged = 0;
  double mean_err_db = 0.0;
  double std_err_db = 0.0;
  double max_abs_err_db = 0.0;
};

CompareSummary compare_against_oracle(const std::vector<std::pair<std::string, Link>>& systems,
                                      const CompareOptions& opt);
void write_compare_csv(const CompareSummary& summary, const std::filesystem::path& path);
void write_compare_summary_csv(const CompareSummary& summary, const std::filesystem::path& path);
/// Histogram of err_db over the used rows, fixed-width bins aligned to 0.
void write_histogram_csv(const CompareSummary& summary, const std::filesystem::path& path, double bin_db = 0.05);

enum class OracleMode { none, square, island };

struct AnalysisRequest {
  std::string config_path;
  std::string cut = "";  // index, "center", "all"; empty uses the config's choice
  EngineSwitches switches;
  std::string coefficients_path;  // empty: built-in table
  std::string out_dir;
  OracleMode oracle = OracleMode::none;
  bool strict = false;
  std::optional<double> ase_power_w;
  bool dump_islands = false;
  bool dump_span_params = false;
};

/// Exit status: 0 success, 1 configuration error, 2 warnings under --strict.
int run_analysis(const AnalysisRequest& req, std::ostream& diag);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

std::string format_double(double v);

}  // namespace gnmci
