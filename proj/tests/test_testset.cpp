#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gnmci/config.hpp"
#include "gnmci/testset.hpp"
#include "helpers.hpp"

using namespace gnmci;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gnmci_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generator is deterministic") {
  TestSystemSpec spec;
  spec.seed = 99;
  const auto a = generate_system(spec, 7);
  const auto b = generate_system(spec, 7);
  CHECK(emit_link_config(a.link) == emit_link_config(b.link));
  CHECK(a.stream_seed == b.stream_seed);
  CHECK(system_stream_seed(99, 7) != system_stream_seed(99, 8));
  CHECK(system_stream_seed(99, 7) != system_stream_seed(98, 7));
  // a system does not depend on how many were generated before it
  const auto set = generate_testset(spec, 9);
  CHECK(emit_link_config(set[7].link) == emit_link_config(a.link));
}

TEST_CASE("generated systems respect the recipe") {
  TestSystemSpec spec;
  spec.seed = 2024;
  const double lo = (spec.band_center_thz - 0.5 * spec.band_width_thz) * 1e12;
  const double hi = (spec.band_center_thz + 0.5 * spec.band_width_thz) * 1e12;
  const std::set<double> rates = {32e9, 64e9, 96e9, 128e9};
  std::set<int> policies;
  for (std::size_t i = 0; i < 600; ++i) {
    const auto sys = generate_system(spec, i);
    const Link& link = sys.link;
    CHECK_NOTHROW(link.validate());
    CHECK(link.comb.front().f_start >= lo);
    CHECK(link.comb.back().f_end <= hi);
    CHECK(link.spans.size() >= 1);
    CHECK(link.spans.size() <= 16);
    for (std::size_t k = 0; k < link.comb.size(); ++k) {
      const auto& ch = link.comb[k];
      CHECK(rates.count(std::round(ch.bandwidth() / 1e9) * 1e9) == 1);
      CHECK(ch.rolloff >= 0.05);
      CHECK(ch.rolloff <= 0.25);
      CHECK(ch.power() == doctest::Approx(1e-3).epsilon(1e-12));
      if (k > 0) {
        const double gap = ch.f_start - link.comb[k - 1].f_end;
        CHECK(gap >= 5e9 * (1 - 1e-9));
        CHECK(gap <= 20e9 * (1 + 1e-9));
      }
    }
    for (const auto& sp : link.spans) {
      CHECK(sp.length >= 80e3);
      CHECK(sp.length <= 120e3);
      CHECK(sp.noise_figure_db >= 6.0);
      CHECK(sp.noise_figure_db <= 7.0);
      CHECK(sp.gamma == doctest::Approx(1.77e-3));
    }
    policies.insert(static_cast<int>(sys.cut_policy));
  }
  CHECK(policies.size() == 5);
}

TEST_CASE("zero-dispersion wavelength at the reference gives zero beta2") {
  CHECK(dsf_beta2(0.121e-39, 1550e-9, 1550e-9) == 0.0);
  // beta2 grows with the detuning from lambda0: D ~ S (lambda - lambda0)
  const double b = dsf_beta2(0.121e-39, 1545e-9, 1550e-9);
  CHECK(b < 0.0);
  const double c = constants::kSpeedOfLight;
  CHECK(b == doctest::Approx(-2 * std::numbers::pi * c / (1550e-9 * 1550e-9) * 0.121e-39 * 5e-9).epsilon(1e-12));

  TestSystemSpec spec;
  spec.lambda0_std_nm = 0.0;
  const auto sys = generate_system(spec, 3);
  for (const auto& sp : sys.link.spans) {
    CHECK(sp.beta2 == 0.0);
    CHECK(sp.fc == 193.41e12);
  }
}

TEST_CASE("spec parsing and validation") {
  const auto s = parse_testset_spec(R"({"seed": 5, "max_channels": 7, "span_count_range": [1, 5],
                                       "cut_policy": "highest", "gap_reference": "raised_cosine_nulls"})");
  CHECK(s.seed == 5);
  CHECK(s.max_channels == 7);
  CHECK(s.span_count_max == 5);
  CHECK(s.cut_policy == CutPolicy::highest);
  CHECK(s.gap_reference == GapReference::raised_cosine_nulls);
  const auto back = parse_testset_spec(emit_testset_spec(s));
  CHECK(emit_testset_spec(back) == emit_testset_spec(s));

  CHECK_THROWS_AS(parse_testset_spec(R"({"formats": ["OOK"]})"), ConfigError);
  CHECK_THROWS_AS(parse_testset_spec(R"({"rolloff_range": [0.3, 0.1]})"), ConfigError);
  CHECK_THROWS_AS(parse_testset_spec(R"({"span_count_range": [0, 3]})"), ConfigError);
  CHECK_THROWS_AS(parse_testset_spec(R"({"cut_policy": "middle"})"), ConfigError);
  CHECK_THROWS_AS(parse_testset_spec("[1, 2"), ConfigError);
  TestSystemSpec narrow;
  narrow.band_width_thz = 0.01;
  CHECK_THROWS_AS(generate_system(narrow, 0), ConfigError);
}

TEST_CASE("small combs de-duplicate CUT positions") {
  TestSystemSpec spec;
  spec.max_channels = 2;
  for (std::size_t i = 0; i < 20; ++i) {
    const auto sys = generate_system(spec, i);
    CHECK(sys.link.comb.size() == 2);
    CHECK(sys.cut_note.find("deduplicated to 2") != std::string::npos);
  }
  spec.max_channels = 1;
  spec.cut_policy = CutPolicy::left_neighbor;
  const auto one = generate_system(spec, 0);
  CHECK(one.link.cut_index == 0);
  CHECK_FALSE(one.cut_note.empty());
}

TEST_CASE("testset files and comparison") {
  TestSystemSpec spec;
  spec.seed = 4;
  spec.max_channels = 4;
  spec.span_count_max = 3;
  const auto dir = scratch("set");
  write_testset(generate_testset(spec, 4), spec, dir);
  CHECK(fs::exists(dir / "manifest.json"));
  const auto loaded = load_config_set(dir);
  REQUIRE(loaded.size() == 4);
  CHECK(loaded[0].first == "system_0000.json");

  CompareOptions opt;
  const auto summary = compare_against_oracle(loaded, opt);
  CHECK(summary.used == 4);
  CHECK(summary.max_abs_err_db <= 1e-5);
  opt.threads = 3;
  const auto again = compare_against_oracle(loaded, opt);
  for (std::size_t i = 0; i < 4; ++i) CHECK(again.rows[i].err_db == summary.rows[i].err_db);

  opt.max_channels = 2;
  const auto capped = compare_against_oracle(loaded, opt);
  CHECK(capped.flagged == 4);
  CHECK(capped.used == 0);

  write_compare_csv(summary, dir / "cmp.csv");
  write_histogram_csv(summary, dir / "hist.csv");
  CHECK(slurp(dir / "cmp.csv").rfind("system,channels", 0) == 0);
  CHECK(slurp(dir / "hist.csv").rfind("bin_lo_db", 0) == 0);

  const auto empty = compare_against_oracle({}, CompareOptions{});
  CHECK(empty.used == 0);
  CHECK(empty.mean_err_db == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("analysis run") {
  const auto dir = scratch("run");
  const std::string good = R"({"spans": [{"length_km": 100, "alpha_db_km": 0.2, "gamma_1_w_km": 1.3,
      "beta2_ps2_km": -21, "fc_thz": 193.41, "edfa_gain_db": "transparent", "nf_db": 5}],
      "comb": [{"center_thz": 193.41, "baud_gbaud": 64, "format": "QPSK", "power_dbm": 0}]})";
  std::ofstream(dir / "one.json") << good;
  std::ostringstream diag;

  AnalysisRequest req;
  req.config_path = (dir / "one.json").string();
  req.out_dir = (dir / "out").string();
  req.dump_islands = true;
  req.dump_span_params = true;
  CHECK(run_analysis(req, diag) == 0);
  const std::string csv = slurp(dir / "out" / "nli.csv");
  CHECK(csv.rfind("channel,f_cut_thz,g_sci_w_hz,g_xci_w_hz,g_mci_w_hz,g_coh_w_hz,g_total_w_hz,osnr_nl_db\n", 0) == 0);
  CHECK(csv.find(",0.000000000000e+00,0.000000000000e+00,") != std::string::npos);  // xci, mci
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  CHECK(fs::exists(dir / "out" / "islands.csv"));
  CHECK(fs::exists(dir / "out" / "span_params.csv"));

  req.oracle = OracleMode::square;
  req.out_dir = (dir / "oracle").string();
  CHECK(run_analysis(req, diag) == 0);
  CHECK(slurp(dir / "oracle" / "nli.csv").find("err_db") != std::string::npos);

  std::ofstream(dir / "bad.json") << "{\"spans\": [";
  req.config_path = (dir / "bad.json").string();
  req.out_dir = (dir / "bad_out").string();
  CHECK(run_analysis(req, diag) == 1);
  CHECK_FALSE(fs::exists(dir / "bad_out"));

  req.config_path = (dir / "one.json").string();
  req.cut = "5";
  CHECK(run_analysis(req, diag) == 1);
  CHECK_FALSE(fs::exists(dir / "bad_out"));

  // zero CUT power: OSNR undefined, a warning that --strict turns into status 2
  std::string dark = good;
  dark.replace(dark.find("\"power_dbm\": 0"), 14, "\"psd_w_hz\": 0");
  std::ofstream(dir / "dark.json") << dark;
  req.cut = "";
  req.oracle = OracleMode::none;
  req.config_path = (dir / "dark.json").string();
  req.out_dir = (dir / "dark").string();
  CHECK(run_analysis(req, diag) == 0);
  req.strict = true;
  CHECK(run_analysis(req, diag) == 2);
  fs::remove_all(dir);
}
