#pragma once

// Per-span link-function factors evaluated at one island centroid.
//
// Span indices are zero-based here: `span_index` s corresponds to the
// (s + 1)-th span of the link.

#include <cstddef>
#include <cstdint>
#include <unordered_map>

#include "gnmci/model_types.hpp"

namespace gnmci {

struct RamanFit {
  double alpha1_bar = 0.0;  // Np/m
  double sigma_bar = 0.0;   // 1/m
  /// The averaged profile changes sign over the span or cannot be matched
  /// by a decaying exponential.
  bool warning = false;
};

/// Coefficients of the two-Lorentzian form
///   |xi|^2 = J1 / (1 + (x y D1)^2) + J2 / (1 + (x y D2)^2),  x = f1 - f, y = f2 - f.
struct LorentzianCoefficients {
  double J1 = 0.0;      // m^2
  double J2 = 0.0;      // m^2
  double D1_bar = 0.0;  // s^2 (Hz^-2)
  double D2_bar = 0.0;  // s^2 (Hz^-2)
};

struct EffectiveSpanParams {
  double alpha0_bar = 0.0;
  double alpha1_bar = 0.0;
  double sigma_bar = 0.0;
  double beta2_bar = 0.0;
  LorentzianCoefficients lorentz;
  bool fit_warning = false;
};

/// (alpha0(f1s) + alpha0(f2s) + alpha0(f3s) - alpha0(f)) / 2 with f3s = f1s + f2s - f.
double effective_alpha0(const Span& span, double f1s, double f2s, double f);

/// Single-exponential fit of the averaged Raman term over [0, L]. The fit
/// matches the averaged profile exactly at z = 0 and reproduces its
/// integral over the span; sigma_bar is found by bisection. Terms with
/// identical (alpha1, sigma) are merged first, so profiles that collapse to
/// one exponential are returned exactly.
RamanFit fit_effective_raman(const Span& span, double f1s, double f2s, double f);

/// beta2 + pi beta3 (fa + fb - 2 fc).
double beta2_bar(const Span& span, double fa, double fb);

/// Partial-fraction coefficients of |xi|^2. With alpha1_bar = 0 this returns
/// J1 = 0, J2 = 1 / (4 alpha0_bar^2). Throws ModelError for alpha0_bar <= 0 or
/// a singular sigma_bar.
LorentzianCoefficients lorentzian_coefficients(double alpha0_bar, double alpha1_bar, double sigma_bar,
                                               double beta2_bar);

/// Full general-loss evaluation at centroid (f1s, f2s) and frequency f.
EffectiveSpanParams effective_span_params(const Span& span, double f1s, double f2s, double f);

/// Parameters for the SCI/XCI rectangle of channel m: all loss terms are
/// read at the channel midpoint and beta2_bar uses (mid_m, f_cut).
EffectiveSpanParams sci_xci_span_params(const Span& span, double mid_m, double f_cut);

/// Frequency- and distance-independent loss: J1 = 0, J2 = 1/(4 alpha0^2).
EffectiveSpanParams flat_span_params(double alpha0, double beta2_bar);

/// |xi|^2 by direct complex arithmetic, as a function of the detuning
/// product (f1 - f)(f2 - f). Validation path.
double xi_squared_direct(const EffectiveSpanParams& p, double detuning_product);
inline double xi_squared_direct(const EffectiveSpanParams& p, double f1, double f2, double f) {
  return xi_squared_direct(p, (f1 - f) * (f2 - f));
}

/// The two-Lorentzian form of |xi|^2.
double xi_squared_lorentzian(const EffectiveSpanParams& p, double detuning_product);

/// Where the propagation product of g0 starts. `as_printed` includes the
/// span that generates the NLI; `after_span` starts at the next span.
enum class G0Convention { as_printed, after_span };

/// g0 with frequency-dependent loss, Raman term and amplifier gain.
double g0_general(const Link& link, std::size_t span_index, double f1s, double f2s, double f,
                  G0Convention convention = G0Convention::as_printed);
/// g0 for flat loss (every span has constant alpha0 and no Raman term).
double g0_flat(const Link& link, std::size_t span_index, double f1s, double f2s, double f,
               G0Convention convention = G0Convention::as_printed);
/// Routes to g0_flat when the whole link is flat loss.
double g0(const Link& link, std::size_t span_index, double f1s, double f2s, double f,
          G0Convention convention = G0Convention::as_printed);

/// Launch PSD of `channel` scaled to the entrance of span `span_index`,
/// evaluated at f_eval. Diagnostic.
double psd_at_span(const Link& link, const Channel& channel, std::size_t span_index, double f_eval);

/// Memo of effective_span_params keyed on (span, f1s, f2s, f). Not
/// synchronized: use one instance per worker.
class EffectiveParamsCache {
 public:
  explicit EffectiveParamsCache(const Link& link) : link_(&link) {}

  const EffectiveSpanParams& get(std::size_t span_index, double f1s, double f2s, double f);
  std::size_t size() const { return map_.size(); }
  std::size_t hits() const { return hits_; }

 private:
  struct Key {
    std::size_t span;
    std::uint64_t f1s, f2s, f;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  const Link* link_;
  std::unordered_map<Key, EffectiveSpanParams, KeyHash> map_;
  std::size_t hits_ = 0;
};

}  // namespace gnmci
