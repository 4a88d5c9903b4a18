#include "gnmci/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace gnmci {

using nlohmann::json;

namespace units {

double db_per_km_to_np_per_m(double db_km) { return db_km * std::numbers::ln10 / (20.0 * 1000.0); }

double np_per_m_to_db_per_km(double np_m) { return np_m * 20.0 * 1000.0 / std::numbers::ln10; }

double dispersion_to_beta2(double d_ps_nm_km, double lambda) {
  const double d = d_ps_nm_km * 1e-6;  // s/m^2
  return -d * lambda * lambda / (2.0 * std::numbers::pi * constants::kSpeedOfLight);
}

double slope_to_beta3(double s_ps_nm2_km, double d_ps_nm_km, double lambda) {
  const double s = s_ps_nm2_km * 1e3;  // s/m^3
  const double d = d_ps_nm_km * 1e-6;  // s/m^2
  const double k = lambda * lambda / (2.0 * std::numbers::pi * constants::kSpeedOfLight);
  return (s + 2.0 * d / lambda) * k * k;
}

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

}  // namespace units

namespace {

constexpr double kThz = 1e12;
constexpr double kGhz = 1e9;
constexpr double kKm = 1e3;
constexpr double kPs2Km = 1e-24 / 1e3;  // ps^2/km -> s^2/m
constexpr double kPs3Km = 1e-36 / 1e3;  // ps^3/km -> s^3/m

double number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing key '" + key + "'");
  if (!it->is_number()) throw ConfigError(where + ": key '" + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": key '" + key + "' is not finite");
  return v;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

/// Scalar or [[f_thz, value], ...] table, with `convert` applied to values.
template <typename Fn>
Profile profile(const json& node, Fn convert, const std::string& where) {
  if (node.is_number()) return Profile(convert(node.get<double>()));
  if (!node.is_array() || node.empty()) throw ConfigError(where + ": expected number or [[f_thz, value], ...]");
  std::vector<Profile::Point> pts;
  for (const auto& row : node) {
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
      throw ConfigError(where + ": profile rows must be [f_thz, value]");
    pts.push_back({row[0].get<double>() * kThz, convert(row[1].get<double>())});
  }
  try {
    return Profile(std::move(pts));
  } catch (const ModelError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Span parse_span(const json& js, std::size_t idx) {
  const std::string where = "spans[" + std::to_string(idx) + "]";
  if (!js.is_object()) throw ConfigError(where + ": expected an object");
  Span s;
  s.length = number(js, "length_km", where) * kKm;
  if (!(s.length > 0.0)) throw ConfigError(where + ": length_km must be positive");
  s.gamma = number(js, "gamma_1_w_km", where) / kKm;

  const auto to_np = [](double v) { return units::db_per_km_to_np_per_m(v); };
  if (js.contains("alpha_db_km") && js.contains("alpha_profile"))
    throw ConfigError(where + ": give either alpha_db_km or alpha_profile");
  if (js.contains("alpha_db_km")) {
    s.alpha0 = profile(js["alpha_db_km"], to_np, where + ".alpha_db_km");
  } else if (js.contains("alpha_profile")) {
    s.alpha0 = profile(js["alpha_profile"], to_np, where + ".alpha_profile");
  } else {
    throw ConfigError(where + ": missing key 'alpha_db_km'");
  }
  if (js.contains("alpha1_db_km")) {
    s.alpha1 = profile(js["alpha1_db_km"], to_np, where + ".alpha1_db_km");
    if (!js.contains("sigma_1_km")) throw ConfigError(where + ": alpha1_db_km requires sigma_1_km");
    s.sigma = profile(js["sigma_1_km"], [](double v) { return v / kKm; }, where + ".sigma_1_km");
  }

  s.fc = number_or(js, "fc_thz", constants::kSpeedOfLight / constants::kNominalWavelength / kThz, where) * kThz;
  if (js.contains("beta2_ps2_km")) {
    if (js.contains("d_ps_nm_km")) throw ConfigError(where + ": give either beta2_ps2_km or d_ps_nm_km");
    s.beta2 = number(js, "beta2_ps2_km", where) * kPs2Km;
    s.beta3 = number_or(js, "beta3_ps3_km", 0.0, where) * kPs3Km;
  } else if (js.contains("d_ps_nm_km")) {
    const double lambda = constants::kSpeedOfLight / s.fc;
    const double d = number(js, "d_ps_nm_km", where);
    s.beta2 = units::dispersion_to_beta2(d, lambda);
    if (js.contains("beta3_ps3_km")) {
      s.beta3 = number(js, "beta3_ps3_km", where) * kPs3Km;
    } else {
      s.beta3 = units::slope_to_beta3(number_or(js, "slope_ps_nm2_km", 0.0, where), d, lambda);
    }
  } else {
    throw ConfigError(where + ": missing key 'beta2_ps2_km' (or 'd_ps_nm_km')");
  }
  s.beta0 = number_or(js, "beta0_1_m", 0.0, where);
  s.beta1 = number_or(js, "beta1_ps_km", 0.0, where) * 1e-12 / kKm;

  if (!js.contains("edfa_gain_db")) throw ConfigError(where + ": missing key 'edfa_gain_db'");
  const auto& g = js["edfa_gain_db"];
  if (g.is_string()) {
    if (g.get<std::string>() != "transparent")
      throw ConfigError(where + ": edfa_gain_db must be a number, a table or \"transparent\"");
    s.transparent_gain = true;
  } else {
    s.edfa_gain = profile(g, [](double db) { return std::pow(10.0, db / 10.0); }, where + ".edfa_gain_db");
  }
  if (js.contains("edfa_phase_rad"))
    s.edfa_phase = profile(js["edfa_phase_rad"], [](double v) { return v; }, where + ".edfa_phase_rad");
  if (js.contains("dcu_ps2"))
    s.dcu_phase = profile(js["dcu_ps2"], [](double v) { return v * 1e-24; }, where + ".dcu_ps2");
  s.noise_figure_db = number_or(js, "nf_db", 0.0, where);
  return s;
}

Channel parse_channel(const json& js, std::size_t idx) {
  const std::string where = "comb[" + std::to_string(idx) + "]";
  if (!js.is_object()) throw ConfigError(where + ": expected an object");
  Channel ch;
  const double center = number(js, "center_thz", where) * kThz;
  const double baud = number(js, "baud_gbaud", where) * kGhz;
  if (!(baud > 0.0)) throw ConfigError(where + ": baud_gbaud must be positive");
  ch.f_start = center - 0.5 * baud;
  ch.f_end = center + 0.5 * baud;
  ch.rolloff = number_or(js, "rolloff", 0.0, where);
  if (!(ch.rolloff >= 0.0 && ch.rolloff <= 1.0)) throw ConfigError(where + ": rolloff outside [0,1]");

  if (js.contains("phi")) {
    ch.phi = number(js, "phi", where);
  } else if (js.contains("format")) {
    if (!js["format"].is_string()) throw ConfigError(where + ": format must be a string");
    const auto name = js["format"].get<std::string>();
    auto phi = builtin_phi(name);
    if (!phi) throw ConfigError(where + ": unknown modulation format '" + name + "' and no explicit phi");
    ch.phi = *phi;
  } else {
    throw ConfigError(where + ": missing key 'format' (or 'phi')");
  }

  // The rectangle keeps the raised-cosine peak PSD, which is P / R_s for any roll-off.
  if (js.contains("psd_w_hz") && js.contains("power_dbm"))
    throw ConfigError(where + ": give either power_dbm or psd_w_hz");
  if (js.contains("psd_w_hz")) {
    ch.psd = number(js, "psd_w_hz", where);
  } else if (js.contains("power_dbm")) {
    ch.psd = units::dbm_to_watt(number(js, "power_dbm", where)) / baud;
  } else {
    throw ConfigError(where + ": missing key 'power_dbm' (or 'psd_w_hz')");
  }
  if (!(ch.psd >= 0.0)) throw ConfigError(where + ": PSD must be non-negative");
  ch.label = js.contains("label") && js["label"].is_string() ? js["label"].get<std::string>()
                                                              : "ch" + std::to_string(idx);
  return ch;
}

std::size_t center_channel(const std::vector<Channel>& comb) {
  double lo = comb.front().f_start, hi = comb.front().f_end;
  for (const auto& ch : comb) {
    lo = std::min(lo, ch.f_start);
    hi = std::max(hi, ch.f_end);
  }
  const double mid = 0.5 * (lo + hi);
  std::size_t best = 0;
  for (std::size_t i = 1; i < comb.size(); ++i) {
    if (std::abs(comb[i].center() - mid) < std::abs(comb[best].center() - mid)) best = i;
  }
  return best;
}

json profile_json(const Profile& p, double (*convert)(double)) {
  if (p.is_constant()) return convert(p.constant_value());
  json rows = json::array();
  for (const auto& pt : p.points()) rows.push_back({pt.frequency / kThz, convert(pt.value)});
  return rows;
}

}  // namespace

Link ingest_link_config(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (!doc.contains("spans") || !doc["spans"].is_array()) throw ConfigError("missing key 'spans'");
  if (!doc.contains("comb") || !doc["comb"].is_array()) throw ConfigError("missing key 'comb'");

  Link link;
  for (std::size_t i = 0; i < doc["spans"].size(); ++i) link.spans.push_back(parse_span(doc["spans"][i], i));
  for (std::size_t i = 0; i < doc["comb"].size(); ++i) link.comb.push_back(parse_channel(doc["comb"][i], i));
  if (link.spans.empty()) throw ConfigError("config has no spans");
  if (link.comb.empty()) throw ConfigError("config has no channels");

  // `cut` refers to the document order of the comb.
  if (doc.contains("cut")) {
    const auto& cut = doc["cut"];
    if (cut.is_string()) {
      if (cut.get<std::string>() != "center") throw ConfigError("cut must be an index or \"center\"");
      link.cut_index = center_channel(link.comb);
    } else if (cut.is_number_integer() && cut.get<long long>() >= 0 &&
               static_cast<std::size_t>(cut.get<long long>()) < link.comb.size()) {
      link.cut_index = static_cast<std::size_t>(cut.get<long long>());
    } else {
      throw ConfigError("cut index out of range");
    }
  } else {
    link.cut_index = center_channel(link.comb);
  }

  normalize_comb(link);
  try {
    link.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const ModelError& e) {
    throw ConfigError(e.what());
  }
  return link;
}

Link load_link_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_link_config(buf.str());
}

std::string emit_link_config(const Link& link) {
  json doc;
  doc["spans"] = json::array();
  for (const auto& s : link.spans) {
    json js;
    js["length_km"] = s.length / kKm;
    js["gamma_1_w_km"] = s.gamma * kKm;
    js["alpha_db_km"] = profile_json(s.alpha0, units::np_per_m_to_db_per_km);
    if (!s.alpha1.is_zero()) {
      js["alpha1_db_km"] = profile_json(s.alpha1, units::np_per_m_to_db_per_km);
      js["sigma_1_km"] = profile_json(s.sigma, [](double v) { return v * kKm; });
    }
    js["beta2_ps2_km"] = s.beta2 / kPs2Km;
    js["beta3_ps3_km"] = s.beta3 / kPs3Km;
    js["fc_thz"] = s.fc / kThz;
    js["beta0_1_m"] = s.beta0;
    js["beta1_ps_km"] = s.beta1 * kKm / 1e-12;
    if (s.transparent_gain) {
      js["edfa_gain_db"] = "transparent";
    } else {
      js["edfa_gain_db"] = profile_json(s.edfa_gain, [](double g) { return 10.0 * std::log10(g); });
    }
    js["edfa_phase_rad"] = profile_json(s.edfa_phase, [](double v) { return v; });
    js["dcu_ps2"] = profile_json(s.dcu_phase, [](double v) { return v / 1e-24; });
    js["nf_db"] = s.noise_figure_db;
    doc["spans"].push_back(std::move(js));
  }
  doc["comb"] = json::array();
  for (const auto& ch : link.comb) {
    json jc;
    jc["center_thz"] = ch.center() / kThz;
    jc["baud_gbaud"] = ch.bandwidth() / kGhz;
    jc["rolloff"] = ch.rolloff;
    jc["phi"] = ch.phi;
    jc["psd_w_hz"] = ch.psd;
    jc["label"] = ch.label;
    doc["comb"].push_back(std::move(jc));
  }
  doc["cut"] = link.cut_index;
  return doc.dump(2);
}

}  // namespace gnmci
