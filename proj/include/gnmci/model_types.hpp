#pragma once

// Domain data model for WDM links. Everything in here is stored in SI units:
// Hz, m, W, W/Hz, Np/m (field attenuation), s^2/m, s^3/m.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gnmci {

/// Raised when a link description violates a model invariant.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Piecewise-linear function of frequency with flat extrapolation outside
/// the tabulated range. A single point (or the scalar constructor) is a
/// constant profile.
class Profile {
 public:
  struct Point {
    double frequency;  // Hz
    double value;
  };

  Profile() : points_{{0.0, 0.0}} {}
  explicit Profile(double constant) : points_{{0.0, constant}} {}
  explicit Profile(std::vector<Point> points);

  double operator()(double frequency) const;

  bool is_constant() const;
  /// Throws ModelError unless is_constant().
  double constant_value() const;
  bool is_zero() const;

  const std::vector<Point>& points() const { return points_; }

  /// Applies `fn` to every tabulated value.
  template <typename Fn>
  Profile transformed(Fn fn) const {
    Profile out = *this;
    for (auto& p : out.points_) p.value = fn(p.value);
    return out;
  }

 private:
  std::vector<Point> points_;
};

/// Rectangular approximation of one WDM carrier.
struct Channel {
  double f_start = 0.0;  // Hz
  double f_end = 0.0;    // Hz
  double psd = 0.0;      // W/Hz, constant over [f_start, f_end]
  double rolloff = 0.0;  // of the original raised-cosine pulse
  double phi = 1.0;      // modulation-format constant
  std::string label;

  double bandwidth() const { return f_end - f_start; }
  double center() const { return 0.5 * (f_start + f_end); }
  double power() const { return psd * bandwidth(); }
};

/// One fiber segment followed by its amplifier and optional lumped
/// dispersion element.
struct Span {
  double length = 0.0;  // m
  double gamma = 0.0;   // 1/(W m)
  Profile alpha0;       // Np/m
  Profile alpha1;       // Np/m, Raman/SRS term amplitude
  Profile sigma;        // 1/m, Raman/SRS term decay
  double beta0 = 0.0;   // 1/m (inert for NLI magnitude)
  double beta1 = 0.0;   // s/m (inert for NLI magnitude)
  double beta2 = 0.0;   // s^2/m
  double beta3 = 0.0;   // s^3/m
  double fc = 0.0;      // Hz, Taylor expansion center
  bool transparent_gain = false;  // gain exactly undoes alpha0 at every f
  Profile edfa_gain{1.0};         // linear power gain, ignored if transparent
  Profile edfa_phase;             // rad (inert)
  Profile dcu_phase;              // rad (inert)
  double noise_figure_db = 0.0;

  /// Linear power gain of the trailing amplifier at `f`.
  double gain(double f) const;
  /// Natural log of gain(f); exact 2*alpha0(f)*L for transparent spans.
  double log_gain(double f) const;
  /// alpha0 is frequency independent and alpha1 vanishes.
  bool flat_loss() const;
};

struct Link {
  std::vector<Span> spans;
  std::vector<Channel> comb;
  std::size_t cut_index = 0;

  std::size_t num_spans() const { return spans.size(); }
  std::size_t num_channels() const { return comb.size(); }
  const Channel& cut() const { return comb.at(cut_index); }
  bool flat_loss() const;
  /// Throws ModelError when any invariant is violated.
  void validate() const;
};

/// Sorts the comb by f_start and keeps cut_index pointing at the same
/// channel. Idempotent.
void normalize_comb(Link& link);

struct NliRow {
  std::size_t channel = 0;
  double f_cut = 0.0;                   // Hz
  double g_sci = 0.0;                   // W/Hz
  double g_xci = 0.0;                   // W/Hz
  double g_mci = 0.0;                   // W/Hz
  double g_coherence_correction = 0.0;  // W/Hz, may be negative
  double g_total = 0.0;                 // W/Hz
  std::optional<double> osnr_nl_db;
  std::size_t warnings = 0;  // model-validity warnings raised while evaluating
};

struct NliReport {
  std::vector<NliRow> rows;
};

// --- modulation-format constants -------------------------------------------

struct ConstellationPoint {
  std::complex<double> symbol;
  double probability = 1.0;
};

/// Phi = 2 - E|a|^4 / (E|a|^2)^2. Probabilities are normalized internally.
/// Throws std::invalid_argument for an empty or zero-energy constellation.
double compute_phi(std::span<const ConstellationPoint> constellation);
/// Equiprobable overload.
double compute_phi(std::span<const std::complex<double>> symbols);

/// Square M-QAM grid with odd-integer coordinates.
std::vector<std::complex<double>> square_qam(int order);
/// 32-QAM cross constellation (6x6 grid without its four corners).
std::vector<std::complex<double>> cross_qam32();
/// Rectangular 8-QAM ({+-1,+-3} x {+-1}).
std::vector<std::complex<double>> rect_qam8();

/// Built-in Phi for a named format (QPSK, 8QAM, 16QAM, 32QAM, 64QAM,
/// 256QAM, Gaussian; an optional "PM-" prefix and case are ignored).
/// Returns nullopt for unknown names.
std::optional<double> builtin_phi(std::string_view format);

}  // namespace gnmci
