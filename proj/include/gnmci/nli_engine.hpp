#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "gnmci/model_types.hpp"
#include "gnmci/special_functions.hpp"
#include "gnmci/span_response.hpp"

namespace gnmci {

using special::FintMode;

enum class RhoMode { unity, fitted };
/// `automatic` uses the flat-loss forms when every span is flat loss.
enum class LossMode { automatic, general, flat };

struct EngineSwitches {
  bool rho_coh = false;
  bool rho_mci = true;
  RhoMode rho_sci = RhoMode::unity;
  RhoMode rho_xci = RhoMode::unity;
  FintMode fint = FintMode::asinh;
  LossMode loss = LossMode::automatic;
  G0Convention g0_convention = G0Convention::as_printed;
  unsigned threads = 1;
};

/// a1..a23 of the fitted correction factors.
class CorrectionCoefficients {
 public:
  static CorrectionCoefficients defaults();
  /// Exactly 23 whitespace-separated decimals. Throws ModelError otherwise.
  static CorrectionCoefficients parse(std::string_view text);
  static CorrectionCoefficients load(const std::string& path);

  /// One-based, a(1) .. a(23).
  double a(int i) const { return values_.at(static_cast<std::size_t>(i - 1)); }
  const std::array<double, 23>& values() const { return values_; }
  std::string to_text() const;

 private:
  std::array<double, 23> values_{};
};

/// Units used inside the fitted correction factors: bandwidth in GHz,
/// accumulated dispersion in ps^2.
inline constexpr double kRhoBandwidthUnit = 1e9;
inline constexpr double kRhoDispersionUnit = 1e-24;
/// |Phi| below this is treated as a Gaussian constellation.
inline constexpr double kGaussianPhiTolerance = 1e-9;

/// Sum over all (m, n, k) of the square-island closed form at frequency f.
double g_nli_generic(const Link& link, double f, FintMode fint, const EngineSwitches& sw = {});

/// SCI plus XCI with the per-channel rectangle of each interferer.
double sci_xci(const Link& link, std::size_t cut, LossMode loss, FintMode fint, const EngineSwitches& sw = {});

/// Triples classified as MCI for the given cut.
double mci(const Link& link, std::size_t cut, LossMode loss, FintMode fint, const EngineSwitches& sw = {});

/// Per-span factor for the SCI term of span `span_index` (zero-based).
double rho_cut(std::size_t span_index, const Link& link, std::size_t cut, const CorrectionCoefficients& c);
/// Per-span factor for the XCI term of interferer m. Throws
/// std::invalid_argument for m == cut.
double rho_mch(std::size_t span_index, std::size_t m, const Link& link, std::size_t cut,
               const CorrectionCoefficients& c);

/// HN(Ns - 1) + (1 - Ns)/Ns.
double coherence_bracket(std::size_t num_spans);

/// Corrected total with its components. `coefficients` may be null only when
/// both rho modes are unity.
NliRow g_nli_total(const Link& link, std::size_t cut, const EngineSwitches& sw,
                   const CorrectionCoefficients* coefficients);

/// Sum over spans of NF h f_cut (G - 1) BW_cut; amplifiers with G < 1 add nothing.
double ase_power(const Link& link, std::size_t cut);

/// 10 log10(P_ch / (P_ASE + P_NLI)) with P_NLI = g_total BW_cut.
/// Throws ModelError for non-positive channel power or denominator.
double osnr_nl_db(const Link& link, std::size_t cut, double p_ase, double g_total);

}  // namespace gnmci
