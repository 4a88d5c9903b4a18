#pragma once

// Link configuration documents (JSON) in engineering units.
//
//   {
//     "spans": [ { "length_km": 100, "alpha_db_km": 0.22, "gamma_1_w_km": 1.3,
//                  "beta2_ps2_km": -21.27, "beta3_ps3_km": 0.14, "fc_thz": 193.41,
//                  "edfa_gain_db": "transparent", "nf_db": 5.0 } ],
//     "comb":  [ { "center_thz": 193.41, "baud_gbaud": 64, "rolloff": 0.1,
//                  "format": "16QAM", "power_dbm": 0.0 } ],
//     "cut": "center"
//   }
//
// Profile-capable keys (alpha_db_km, alpha1_db_km, sigma_1_km, edfa_gain_db,
// edfa_phase_rad, dcu_ps2) accept a scalar or a table [[f_thz, value], ...].
// The dispersion can be given as beta2_ps2_km/beta3_ps3_km or as
// d_ps_nm_km/slope_ps_nm2_km, the latter referenced to fc_thz.

#include <string>
#include <string_view>

#include "gnmci/model_types.hpp"

namespace gnmci {

namespace constants {
inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kNominalWavelength = 1550e-9;      // m
}  // namespace constants

namespace units {
/// Power-domain dB/km to field attenuation in Np/m.
double db_per_km_to_np_per_m(double db_km);
double np_per_m_to_db_per_km(double np_m);
/// Dispersion parameter D (ps/nm/km) at wavelength `lambda` (m) to beta2 (s^2/m).
double dispersion_to_beta2(double d_ps_nm_km, double lambda);
/// Dispersion slope S (ps/nm^2/km) and D to beta3 (s^3/m) at `lambda`.
double slope_to_beta3(double s_ps_nm2_km, double d_ps_nm_km, double lambda);
double dbm_to_watt(double dbm);
}  // namespace units

/// Raised for malformed documents: parse errors, missing keys, bad values.
class ConfigError : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Parses and validates a link document. The returned Link is normalized
/// (comb sorted) and satisfies Link::validate().
Link ingest_link_config(std::string_view document);
Link load_link_config(const std::string& path);

/// Emits a canonical document that ingests back to the same physical values.
std::string emit_link_config(const Link& link);

}  // namespace gnmci
