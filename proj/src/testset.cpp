#include "gnmci/testset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "gnmci/config.hpp"
#include "gnmci/island_geometry.hpp"
#include "gnmci/special_functions.hpp"

#ifndef GNMCI_VERSION
#define GNMCI_VERSION "0.0.0"
#endif

namespace gnmci {

using json = nlohmann::ordered_json;

namespace {

constexpr double kThz = 1e12;
constexpr double kGhz = 1e9;
constexpr double kKm = 1e3;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Explicit transforms so that draws do not depend on the standard library's
// distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : eng_(seed) {}
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  double normal(double mean, double sd) {
    const double u1 = 1.0 - unit();  // (0, 1]
    const double u2 = unit();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(unit() * static_cast<double>(n))); }
  int integer(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }

 private:
  std::mt19937_64 eng_;
};

const std::map<std::string, CutPolicy>& cut_policy_names() {
  static const std::map<std::string, CutPolicy> m = {
      {"center", CutPolicy::center},   {"left_neighbor", CutPolicy::left_neighbor},
      {"right_neighbor", CutPolicy::right_neighbor}, {"lowest", CutPolicy::lowest},
      {"highest", CutPolicy::highest}, {"random", CutPolicy::random}};
  return m;
}

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

template <typename T>
void read_opt(const json& js, const char* key, T& dst) {
  if (!js.contains(key)) return;
  try {
    dst = js.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("testset spec: bad value for '") + key + "': " + e.what());
  }
}

void read_range(const json& js, const char* key, double& lo, double& hi) {
  if (!js.contains(key)) return;
  const auto& v = js.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(std::string("testset spec: '") + key + "' must be [min, max]");
  lo = v[0].get<double>();
  hi = v[1].get<double>();
}

std::size_t center_index(const std::vector<Channel>& comb, double f) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < comb.size(); ++i)
    if (std::abs(comb[i].center() - f) < std::abs(comb[best].center() - f)) best = i;
  return best;
}

template <typename Fn>
void for_each_parallel(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(count);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

json switches_json(const EngineSwitches& sw) {
  json js;
  js["rho_coh"] = sw.rho_coh ? 1 : 0;
  js["rho_mci"] = sw.rho_mci ? 1 : 0;
  js["rho_sci"] = sw.rho_sci == RhoMode::fitted ? "fitted" : "unity";
  js["rho_xci"] = sw.rho_xci == RhoMode::fitted ? "fitted" : "unity";
  js["fint"] = sw.fint == FintMode::dilog ? "dilog" : "asinh";
  js["loss"] = sw.loss == LossMode::general ? "general" : sw.loss == LossMode::flat ? "flat" : "automatic";
  js["g0_convention"] = sw.g0_convention == G0Convention::as_printed ? "as_printed" : "after_span";
  return js;
}

}  // namespace

std::string_view to_string(CutPolicy p) {
  for (const auto& [name, value] : cut_policy_names())
    if (value == p) return name;
  return "?";
}

std::string_view to_string(GapReference g) {
  return g == GapReference::rectangle_edges ? "rectangle_edges" : "raised_cosine_nulls";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --- spec ---------------------------------------------------------------

void TestSystemSpec::validate() const {
  const auto fail = [](const std::string& m) { throw ConfigError("testset spec: " + m); };
  if (!(band_width_thz > 0.0)) fail("band width must be positive");
  if (symbol_rates_gbaud.empty()) fail("no symbol rates");
  for (double r : symbol_rates_gbaud)
    if (!(r > 0.0)) fail("symbol rates must be positive");
  if (!(rolloff_min >= 0.0 && rolloff_min <= rolloff_max && rolloff_max <= 1.0)) fail("bad roll-off range");
  if (!(guard_gap_min_ghz >= 0.0 && guard_gap_min_ghz <= guard_gap_max_ghz)) fail("bad guard gap range");
  if (formats.empty()) fail("no formats");
  for (const auto& f : formats)
    if (!builtin_phi(f)) fail("unknown format '" + f + "'");
  if (!(alpha_db_km > 0.0) || !(gamma_1_w_km >= 0.0)) fail("bad fiber parameters");
  if (!(lambda0_std_nm >= 0.0) || !(reference_wavelength_nm > 0.0)) fail("bad wavelength parameters");
  if (!(span_length_min_km > 0.0 && span_length_min_km <= span_length_max_km)) fail("bad span length range");
  if (!(nf_min_db <= nf_max_db)) fail("bad noise figure range");
  if (span_count_min < 1 || span_count_min > span_count_max) fail("bad span count range");
}

TestSystemSpec parse_testset_spec(std::string_view text) {
  json js;
  try {
    js = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("testset spec parse error: ") + e.what());
  }
  if (!js.is_object()) throw ConfigError("testset spec must be a JSON object");
  TestSystemSpec s;
  read_opt(js, "seed", s.seed);
  if (js.contains("band")) {
    read_opt(js["band"], "center_thz", s.band_center_thz);
    read_opt(js["band"], "width_thz", s.band_width_thz);
  }
  read_opt(js, "symbol_rates_gbaud", s.symbol_rates_gbaud);
  read_range(js, "rolloff_range", s.rolloff_min, s.rolloff_max);
  read_range(js, "guard_gap_range_ghz", s.guard_gap_min_ghz, s.guard_gap_max_ghz);
  if (js.contains("gap_reference")) {
    const auto g = js["gap_reference"].get<std::string>();
    if (g == "rectangle_edges") s.gap_reference = GapReference::rectangle_edges;
    else if (g == "raised_cosine_nulls") s.gap_reference = GapReference::raised_cosine_nulls;
    else throw ConfigError("testset spec: unknown gap_reference '" + g + "'");
  }
  read_opt(js, "formats", s.formats);
  read_opt(js, "launch_power_dbm", s.launch_power_dbm);
  read_opt(js, "max_channels", s.max_channels);
  if (js.contains("fiber")) {
    const auto& f = js["fiber"];
    read_opt(f, "alpha_db_km", s.alpha_db_km);
    read_opt(f, "gamma_1_w_km", s.gamma_1_w_km);
    read_opt(f, "beta3_ps3_km", s.beta3_ps3_km);
    read_opt(f, "reference_wavelength_nm", s.reference_wavelength_nm);
  }
  if (js.contains("lambda0")) {
    read_opt(js["lambda0"], "mean_nm", s.lambda0_mean_nm);
    read_opt(js["lambda0"], "std_nm", s.lambda0_std_nm);
  }
  read_range(js, "span_length_range_km", s.span_length_min_km, s.span_length_max_km);
  read_range(js, "nf_range_db", s.nf_min_db, s.nf_max_db);
  if (js.contains("span_count_range")) {
    double lo = s.span_count_min, hi = s.span_count_max;
    read_range(js, "span_count_range", lo, hi);
    if (lo != std::floor(lo) || hi != std::floor(hi)) throw ConfigError("testset spec: span counts must be integers");
    s.span_count_min = static_cast<int>(lo);
    s.span_count_max = static_cast<int>(hi);
  }
  if (js.contains("cut_policy")) {
    const auto name = js["cut_policy"].get<std::string>();
    const auto it = cut_policy_names().find(name);
    if (it == cut_policy_names().end()) throw ConfigError("testset spec: unknown cut_policy '" + name + "'");
    s.cut_policy = it->second;
  }
  s.validate();
  return s;
}

TestSystemSpec load_testset_spec(const std::string& path) { return parse_testset_spec(read_file(path, "testset spec")); }

std::string emit_testset_spec(const TestSystemSpec& s) {
  json js;
  js["seed"] = s.seed;
  js["band"] = {{"center_thz", s.band_center_thz}, {"width_thz", s.band_width_thz}};
  js["symbol_rates_gbaud"] = s.symbol_rates_gbaud;
  js["rolloff_range"] = {s.rolloff_min, s.rolloff_max};
  js["guard_gap_range_ghz"] = {s.guard_gap_min_ghz, s.guard_gap_max_ghz};
  js["gap_reference"] = std::string(to_string(s.gap_reference));
  js["formats"] = s.formats;
  js["launch_power_dbm"] = s.launch_power_dbm;
  js["max_channels"] = s.max_channels;
  js["fiber"] = {{"alpha_db_km", s.alpha_db_km},
                 {"gamma_1_w_km", s.gamma_1_w_km},
                 {"beta3_ps3_km", s.beta3_ps3_km},
                 {"reference_wavelength_nm", s.reference_wavelength_nm}};
  js["lambda0"] = {{"mean_nm", s.lambda0_mean_nm}, {"std_nm", s.lambda0_std_nm}};
  js["span_length_range_km"] = {s.span_length_min_km, s.span_length_max_km};
  js["nf_range_db"] = {s.nf_min_db, s.nf_max_db};
  js["span_count_range"] = {s.span_count_min, s.span_count_max};
  js["cut_policy"] = std::string(to_string(s.cut_policy));
  return js.dump(2);
}

// --- generation -----------------------------------------------------------

double dsf_beta2(double beta3, double lambda0, double lambda_ref) {
  const double c = constants::kSpeedOfLight;
  return -(2.0 * std::numbers::pi * c / (lambda_ref * lambda_ref)) * beta3 * (lambda_ref - lambda0);
}

std::uint64_t system_stream_seed(std::uint64_t seed, std::size_t index) {
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
}

GeneratedSystem generate_system(const TestSystemSpec& spec, std::size_t index) {
  spec.validate();
  GeneratedSystem out;
  out.index = index;
  out.stream_seed = system_stream_seed(spec.seed, index);
  Draw rng(out.stream_seed);

  const double center = spec.band_center_thz * kThz;
  const double band_lo = center - 0.5 * spec.band_width_thz * kThz;
  const double band_hi = center + 0.5 * spec.band_width_thz * kThz;
  const double p_ch = units::dbm_to_watt(spec.launch_power_dbm);

  Link& link = out.link;
  double edge = band_lo;       // right edge of the previous rectangle
  double prev_excess = 0.0;    // half raised-cosine excess of the previous channel
  for (;;) {
    if (spec.max_channels != 0 && link.comb.size() >= spec.max_channels) break;
    const double rate = spec.symbol_rates_gbaud[rng.index(spec.symbol_rates_gbaud.size())] * kGhz;
    const double rolloff = rng.uniform(spec.rolloff_min, spec.rolloff_max);
    const double gap = rng.uniform(spec.guard_gap_min_ghz, spec.guard_gap_max_ghz) * kGhz;
    const std::string& format = spec.formats[rng.index(spec.formats.size())];
    double start = edge + gap, end;
    if (spec.gap_reference == GapReference::raised_cosine_nulls) {
      const double excess = 0.5 * rolloff * rate;
      start += prev_excess + excess;
      end = start + rate;
      if (end + excess > band_hi) break;
      prev_excess = excess;
    } else {
      end = start + rate;
      if (end > band_hi) break;
    }
    Channel ch;
    ch.f_start = start;
    ch.f_end = end;
    ch.psd = p_ch / rate;
    ch.rolloff = rolloff;
    ch.phi = *builtin_phi(format);
    char label[64];
    std::snprintf(label, sizeof label, "%s@%g", format.c_str(), rate / kGhz);
    ch.label = label;
    link.comb.push_back(ch);
    edge = end;
  }
  if (link.comb.empty()) throw ConfigError("testset spec: band too narrow for any channel");
  const double shift = center - 0.5 * (link.comb.front().f_start + link.comb.back().f_end);
  for (auto& ch : link.comb) {
    ch.f_start += shift;
    ch.f_end += shift;
  }

  const int spans = rng.integer(spec.span_count_min, spec.span_count_max);
  const double lambda_ref = spec.reference_wavelength_nm * 1e-9;
  const double beta3 = spec.beta3_ps3_km * 1e-36 / kKm;
  for (int s = 0; s < spans; ++s) {
    Span sp;
    sp.length = rng.uniform(spec.span_length_min_km, spec.span_length_max_km) * kKm;
    sp.gamma = spec.gamma_1_w_km / kKm;
    sp.alpha0 = Profile(units::db_per_km_to_np_per_m(spec.alpha_db_km));
    const double lambda0_nm = rng.normal(spec.lambda0_mean_nm, spec.lambda0_std_nm);
    out.lambda0_nm.push_back(lambda0_nm);
    sp.beta3 = beta3;
    sp.beta2 = dsf_beta2(beta3, lambda0_nm * 1e-9, lambda_ref);
    sp.fc = center;
    sp.transparent_gain = true;
    sp.noise_figure_db = rng.uniform(spec.nf_min_db, spec.nf_max_db);
    link.spans.push_back(sp);
  }

  // CUT selection.
  const std::size_t nc = link.comb.size();
  const std::size_t c = center_index(link.comb, center);
  const auto pick = [&](CutPolicy p) -> std::size_t {
    switch (p) {
      case CutPolicy::center: return c;
      case CutPolicy::left_neighbor: return c > 0 ? c - 1 : 0;
      case CutPolicy::right_neighbor: return c + 1 < nc ? c + 1 : nc - 1;
      case CutPolicy::lowest: return 0;
      case CutPolicy::highest: return nc - 1;
      case CutPolicy::random: break;
    }
    return c;
  };
  CutPolicy applied = spec.cut_policy;
  if (applied == CutPolicy::random) {
    // Distinct positions only, so a small comb does not favor an index
    // reached by several policies.
    std::vector<std::pair<std::size_t, CutPolicy>> distinct;
    for (CutPolicy p : {CutPolicy::center, CutPolicy::left_neighbor, CutPolicy::right_neighbor, CutPolicy::lowest,
                        CutPolicy::highest}) {
      const std::size_t idx = pick(p);
      if (std::none_of(distinct.begin(), distinct.end(), [&](const auto& d) { return d.first == idx; }))
        distinct.emplace_back(idx, p);
    }
    if (distinct.size() < 5) out.cut_note = "deduplicated to " + std::to_string(distinct.size()) + " positions";
    applied = distinct[rng.index(distinct.size())].second;
  } else if ((applied == CutPolicy::left_neighbor && c == 0) || (applied == CutPolicy::right_neighbor && c + 1 == nc)) {
    out.cut_note = "no neighbor; edge channel used";
  }
  out.cut_policy = applied;
  link.cut_index = pick(applied);
  link.validate();
  return out;
}

std::vector<GeneratedSystem> generate_testset(const TestSystemSpec& spec, std::size_t count) {
  std::vector<GeneratedSystem> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate_system(spec, i));
  return out;
}

void write_testset(const std::vector<GeneratedSystem>& systems, const TestSystemSpec& spec,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json manifest;
  manifest["tool"] = "gnmci";
  manifest["version"] = GNMCI_VERSION;
  manifest["generator"] = "mt19937_64, splitmix64 substream per (seed, index)";
  manifest["spec"] = json::parse(emit_testset_spec(spec));
  manifest["systems"] = json::array();
  for (const auto& sys : systems) {
    char name[32];
    std::snprintf(name, sizeof name, "system_%04zu.json", sys.index);
    const std::string text = emit_link_config(sys.link);
    write_file(dir / name, text + "\n");
    json entry;
    entry["file"] = name;
    entry["index"] = sys.index;
    entry["stream_seed"] = sys.stream_seed;
    entry["channels"] = sys.link.comb.size();
    entry["spans"] = sys.link.spans.size();
    entry["cut"] = sys.link.cut_index;
    entry["cut_policy"] = std::string(to_string(sys.cut_policy));
    if (!sys.cut_note.empty()) entry["cut_note"] = sys.cut_note;
    entry["lambda0_nm"] = sys.lambda0_nm;
    entry["digest"] = fnv1a_hex(text);
    manifest["systems"].push_back(std::move(entry));
  }
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<std::pair<std::string, Link>> load_config_set(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("not a directory: '" + dir.string() + "'");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".json" || e.path().filename() == "manifest.json") continue;
    files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, Link>> out;
  for (const auto& f : files) out.emplace_back(f.filename().string(), load_link_config(f.string()));
  return out;
}

// --- oracle comparison ------------------------------------------------------

CompareSummary compare_against_oracle(const std::vector<std::pair<std::string, Link>>& systems,
                                      const CompareOptions& opt) {
  CompareSummary summary;
  summary.rows.resize(systems.size());
  EngineSwitches sw = opt.switches;
  sw.threads = 1;
  for_each_parallel(systems.size(), opt.threads, [&](std::size_t i) {
    const auto& [name, link] = systems[i];
    CompareRow& row = summary.rows[i];
    row.system = name;
    row.channels = link.comb.size();
    row.spans = link.spans.size();
    row.cut = link.cut_index;
    if (opt.max_channels != 0 && row.channels > opt.max_channels) {
      row.status = "too_many_channels";
      return;
    }
    const double f_cut = link.comb[link.cut_index].center();
    const NliRow parts = g_nli_total(link, link.cut_index, sw, opt.coefficients);
    row.g_sci = parts.g_sci;
    row.g_xci = parts.g_xci;
    row.g_mci = parts.g_mci;
    row.g_closed = opt.closed == ClosedForm::generic ? g_nli_generic(link, f_cut, sw.fint, sw) : parts.g_total;
    const auto o = oracle::gn_quadrature_total(link, f_cut, opt.domain, opt.quadrature);
    row.g_oracle = o.value;
    row.oracle_error = o.error;
    row.err_db = 10.0 * std::log10(row.g_closed / row.g_oracle);
    if (!o.converged) row.status = "not_converged";
  });
  double sum = 0.0;
  for (const auto& r : summary.rows) {
    if (r.status != "ok") {
      ++summary.flagged;
      continue;
    }
    ++summary.used;
    sum += r.err_db;
    summary.max_abs_err_db = std::max(summary.max_abs_err_db, std::abs(r.err_db));
  }
  if (summary.used > 0) {
    summary.mean_err_db = sum / static_cast<double>(summary.used);
    double ss = 0.0;
    for (const auto& r : summary.rows)
      if (r.status == "ok") ss += (r.err_db - summary.mean_err_db) * (r.err_db - summary.mean_err_db);
    summary.std_err_db = summary.used > 1 ? std::sqrt(ss / static_cast<double>(summary.used - 1)) : 0.0;
  }
  return summary;
}

void write_compare_csv(const CompareSummary& s, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "system,channels,spans,cut,g_closed_w_hz,g_oracle_w_hz,oracle_err_w_hz,err_db,g_sci_w_hz,g_xci_w_hz,"
         "g_mci_w_hz,status\n";
  for (const auto& r : s.rows) {
    out << r.system << ',' << r.channels << ',' << r.spans << ',' << r.cut << ',' << format_double(r.g_closed) << ','
        << format_double(r.g_oracle) << ',' << format_double(r.oracle_error) << ',' << format_double(r.err_db) << ','
        << format_double(r.g_sci) << ',' << format_double(r.g_xci) << ',' << format_double(r.g_mci) << ','
        << r.status << '\n';
  }
  write_file(path, out.str());
}

void write_compare_summary_csv(const CompareSummary& s, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "systems,used,flagged,mean_err_db,std_err_db,max_abs_err_db\n";
  out << s.rows.size() << ',' << s.used << ',' << s.flagged << ',' << format_double(s.mean_err_db) << ','
      << format_double(s.std_err_db) << ',' << format_double(s.max_abs_err_db) << '\n';
  write_file(path, out.str());
}

void write_histogram_csv(const CompareSummary& s, const std::filesystem::path& path, double bin_db) {
  std::map<long long, std::size_t> bins;
  for (const auto& r : s.rows)
    if (r.status == "ok") ++bins[static_cast<long long>(std::floor(r.err_db / bin_db))];
  std::ostringstream out;
  out << "bin_lo_db,bin_hi_db,count\n";
  if (!bins.empty()) {
    for (long long b = bins.begin()->first; b <= bins.rbegin()->first; ++b) {
      const auto it = bins.find(b);
      char buf[96];
      std::snprintf(buf, sizeof buf, "%.4f,%.4f,%zu\n", b * bin_db, (b + 1) * bin_db,
                    it == bins.end() ? std::size_t{0} : it->second);
      out << buf;
    }
  }
  write_file(path, out.str());
}

// --- analysis run -------------------------------------------------------------

int run_analysis(const AnalysisRequest& req, std::ostream& diag) {
  Link link;
  std::string config_text;
  CorrectionCoefficients coeffs = CorrectionCoefficients::defaults();
  std::string coeff_text;
  std::vector<std::size_t> cuts;
  try {
    config_text = read_file(req.config_path, "config");
    link = ingest_link_config(config_text);
    if (!req.coefficients_path.empty()) {
      coeff_text = read_file(req.coefficients_path, "coefficient file");
      coeffs = CorrectionCoefficients::parse(coeff_text);
    } else {
      coeff_text = coeffs.to_text();
    }
    if (req.cut.empty()) {
      cuts.push_back(link.cut_index);
    } else if (req.cut == "all") {
      for (std::size_t i = 0; i < link.comb.size(); ++i) cuts.push_back(i);
    } else if (req.cut == "center") {
      double lo = link.comb.front().f_start, hi = link.comb.back().f_end;
      cuts.push_back(center_index(link.comb, 0.5 * (lo + hi)));
    } else {
      std::size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(req.cut, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != req.cut.size() || v >= link.comb.size())
        throw ConfigError("cut must be an index below " + std::to_string(link.comb.size()) + ", center or all");
      cuts.push_back(v);
    }
  } catch (const ModelError& e) {
    diag << "error: " << e.what() << '\n';
    return 1;
  }

  std::ostringstream csv;
  csv << "channel,f_cut_thz,g_sci_w_hz,g_xci_w_hz,g_mci_w_hz,g_coh_w_hz,g_total_w_hz,osnr_nl_db";
  if (req.oracle != OracleMode::none) csv << ",g_oracle_w_hz,oracle_err_w_hz,err_db";
  csv << '\n';
  std::ostringstream islands, spans_csv;
  islands << "cut,m,n,k,class,area_hz2,f1_star_thz,f2_star_thz,side_ghz\n";
  spans_csv << "cut,m,span,alpha0_bar_np_m,alpha1_bar_np_m,sigma_bar_1_m,beta2_bar_s2_m,j1_m2,j2_m2,d1_s2,d2_s2,g0\n";
  std::size_t warnings = 0;
  try {
    for (std::size_t cut : cuts) {
      const NliRow row = g_nli_total(link, cut, req.switches, &coeffs);
      warnings += row.warnings;
      csv << cut << ',' << format_double(row.f_cut / kThz) << ',' << format_double(row.g_sci) << ','
          << format_double(row.g_xci) << ',' << format_double(row.g_mci) << ','
          << format_double(row.g_coherence_correction) << ',' << format_double(row.g_total) << ',';
      const double p_ase = req.ase_power_w ? *req.ase_power_w : ase_power(link, cut);
      try {
        csv << format_double(osnr_nl_db(link, cut, p_ase, row.g_total));
      } catch (const ModelError& e) {
        diag << "warning: channel " << cut << ": " << e.what() << '\n';
        ++warnings;
      }
      if (!(row.g_total >= 0.0)) {
        diag << "warning: channel " << cut << ": negative NLI total\n";
        ++warnings;
      }
      if (req.oracle != OracleMode::none) {
        const auto o = oracle::gn_quadrature_total(
            link, row.f_cut, req.oracle == OracleMode::square ? oracle::Domain::square : oracle::Domain::true_island,
            req.oracle == OracleMode::square ? oracle::square_defaults() : oracle::island_defaults());
        if (!o.converged) {
          diag << "warning: channel " << cut << ": oracle did not converge\n";
          ++warnings;
        }
        csv << ',' << format_double(o.value) << ',' << format_double(o.error) << ','
            << format_double(10.0 * std::log10(row.g_total / o.value));
      }
      csv << '\n';

      if (req.dump_islands) {
        const std::size_t nc = link.comb.size();
        for (std::size_t m = 0; m < nc; ++m)
          for (std::size_t n = 0; n < nc; ++n)
            for (std::size_t k = 0; k < nc; ++k) {
              const auto isl = island_descriptor(link.comb, m, n, k, row.f_cut);
              if (isl.empty) continue;
              islands << cut << ',' << m << ',' << n << ',' << k << ',' << to_string(classify_triple(m, n, k, cut))
                      << ',' << format_double(isl.area) << ',' << format_double(isl.f1_star() / kThz) << ','
                      << format_double(isl.f2_star() / kThz) << ',' << format_double(isl.side / kGhz) << '\n';
            }
      }
      if (req.dump_span_params) {
        for (std::size_t m = 0; m < link.comb.size(); ++m) {
          const double mid = link.comb[m].center();
          for (std::size_t s = 0; s < link.spans.size(); ++s) {
            const auto p = sci_xci_span_params(link.spans[s], mid, row.f_cut);
            spans_csv << cut << ',' << m << ',' << s << ',' << format_double(p.alpha0_bar) << ','
                      << format_double(p.alpha1_bar) << ',' << format_double(p.sigma_bar) << ','
                      << format_double(p.beta2_bar) << ',' << format_double(p.lorentz.J1) << ','
                      << format_double(p.lorentz.J2) << ',' << format_double(p.lorentz.D1_bar) << ','
                      << format_double(p.lorentz.D2_bar) << ','
                      << format_double(g0(link, s, mid, row.f_cut, row.f_cut, req.switches.g0_convention)) << '\n';
          }
        }
      }
    }
  } catch (const ModelError& e) {
    diag << "error: " << e.what() << '\n';
    return 1;
  }

  json manifest;
  manifest["tool"] = "gnmci";
  manifest["version"] = GNMCI_VERSION;
  manifest["config"] = req.config_path;
  manifest["config_digest"] = fnv1a_hex(config_text);
  manifest["coefficients_digest"] = fnv1a_hex(coeff_text);
  manifest["switches"] = switches_json(req.switches);
  manifest["oracle"] = req.oracle == OracleMode::none ? "none" : req.oracle == OracleMode::square ? "square" : "island";
  manifest["cuts"] = cuts;
  manifest["seed"] = nullptr;
  manifest["warnings"] = warnings;

  const std::filesystem::path dir(req.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "nli.csv", csv.str());
  if (req.dump_islands) write_file(dir / "islands.csv", islands.str());
  if (req.dump_span_params) write_file(dir / "span_params.csv", spans_csv.str());
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  if (warnings > 0 && req.strict) {
    diag << "error: " << warnings << " model warning(s) with --strict\n";
    return 2;
  }
  return 0;
}

}  // namespace gnmci
