#pragma once

// Straightforward re-evaluations of the flat-loss SCI/XCI sums and the fitted
// correction factors, written independently of the library internals.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>

#include "gnmci/model_types.hpp"

namespace reference {

constexpr double kPi = std::numbers::pi;

inline double alpha(const gnmci::Span& s) { return s.alpha0.constant_value(); }

inline double direct_g0(const gnmci::Link& link, std::size_t ns, double f1, double f2, double f) {
  const double f3 = f1 + f2 - f;
  double g = 1.0;
  for (std::size_t p = 0; p < ns; ++p) {
    const auto& sp = link.spans[p];
    g *= std::sqrt(sp.gain(f1) * sp.gain(f2) * sp.gain(f3)) * std::exp(-3.0 * alpha(sp) * sp.length);
  }
  for (std::size_t p = ns; p < link.spans.size(); ++p) {
    const auto& sp = link.spans[p];
    g *= std::exp(-alpha(sp) * sp.length) / std::sqrt(sp.gain(f));
  }
  return g;
}

inline double beta_bar(const gnmci::Span& s, double fa, double fb) {
  return s.beta2 + kPi * s.beta3 * (fa + fb - 2.0 * s.fc);
}

/// Flat-loss SCI/XCI with an arbitrary F_int, channel by channel with the
/// (2 - delta) multiplicity.
inline double sci_xci_flat(const gnmci::Link& link, std::size_t cut, const std::function<double(double)>& fint) {
  const auto& c = link.comb[cut];
  const double fcut = c.center(), bwc = c.bandwidth();
  double total = 0.0;
  for (std::size_t m = 0; m < link.comb.size(); ++m) {
    const auto& ch = link.comb[m];
    const double mid = ch.center();
    double span_sum = 0.0;
    for (std::size_t s = 0; s < link.spans.size(); ++s) {
      const auto& sp = link.spans[s];
      const double a = alpha(sp);
      const double b = beta_bar(sp, mid, fcut);
      const double g = direct_g0(link, s, mid, fcut, fcut);
      double bracket;
      if (b == 0.0) {
        // F_int(x) ~ 2x: the bracket over beta_bar tends to 2 c BW_cut BW_m
        bracket = bwc * ch.bandwidth() / (4.0 * a * a);
      } else {
        const double k = kPi * kPi * b / a * bwc;
        double sum = 0.0;
        for (int j = 1; j <= 2; ++j) {
          const double sgn = j == 1 ? -1.0 : 1.0;
          sum += sgn * fint(k * (mid - fcut + sgn * 0.5 * ch.bandwidth()));
        }
        bracket = sum / (8.0 * kPi * kPi * a * b);
      }
      span_sum += sp.gamma * sp.gamma * g * g * bracket;
    }
    const double mult = m == cut ? 1.0 : 2.0;
    total += 16.0 / 27.0 * ch.psd * ch.psd * c.psd * mult * span_sum;
  }
  return total;
}

/// The asinh form: SCI with asinh(pi^2 |b| BW^2 / (4 a)) / (4 pi a |b|) and
/// XCI with the two-term asinh difference.
inline double sci_xci_asinh(const gnmci::Link& link, std::size_t cut) {
  const auto& c = link.comb[cut];
  const double fcut = c.center(), bwc = c.bandwidth();
  double sci = 0.0, xci = 0.0;
  for (std::size_t s = 0; s < link.spans.size(); ++s) {
    const auto& sp = link.spans[s];
    const double a = alpha(sp);
    const double b = std::abs(beta_bar(sp, fcut, fcut));
    const double g = direct_g0(link, s, fcut, fcut, fcut);
    const double x = kPi * kPi * bwc * bwc / (4.0 * a);
    const double term = b == 0.0 ? x / (4.0 * kPi * a) : std::asinh(x * b) / (4.0 * kPi * a * b);
    sci += sp.gamma * sp.gamma * g * g * term;
  }
  sci *= 16.0 / 27.0 * c.psd * c.psd * c.psd;
  for (std::size_t m = 0; m < link.comb.size(); ++m) {
    if (m == cut) continue;
    const auto& ch = link.comb[m];
    const double mid = ch.center();
    double span_sum = 0.0;
    for (std::size_t s = 0; s < link.spans.size(); ++s) {
      const auto& sp = link.spans[s];
      const double a = alpha(sp);
      const double b = std::abs(beta_bar(sp, mid, fcut));
      const double g = direct_g0(link, s, mid, fcut, fcut);
      double term;
      if (b == 0.0) {
        term = kPi * bwc * ch.bandwidth() / (8.0 * a * a);
      } else {
        const double k = kPi * kPi * b / (2.0 * a) * bwc;
        term = (std::asinh(k * (mid - fcut + 0.5 * ch.bandwidth())) - std::asinh(k * (mid - fcut - 0.5 * ch.bandwidth()))) /
               (4.0 * kPi * a * b);
      }
      span_sum += sp.gamma * sp.gamma * g * g * term;
    }
    xci += 16.0 / 27.0 * ch.psd * ch.psd * c.psd * span_sum;
  }
  return sci + xci;
}

inline constexpr std::array<double, 23> kPaperA = {
    -0.8509, 1.0923, 0.9305, -0.4097, 0.1652, -15.5857, -0.9648, -0.9826, 0.008273, -0.014253, 253.6104, 0.5174,
    0.1695,  0.6250, -1.1281, 0.1591, 0.9497, 0.8592,   0.2265,  0.9047,  0.027842, 0.005731,  1.2457e-41};

/// Correction factor of the channel under test; bandwidth in GHz and the
/// accumulated dispersion in ps^2.
inline double rho_cut(const gnmci::Link& link, std::size_t cut, std::size_t ns) {
  const auto& a = kPaperA;
  const auto& c = link.comb[cut];
  const double fcut = c.center();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 <= ns; ++k) {
    const auto& sp = link.spans[k];
    acc += (sp.beta2 + kPi * sp.beta3 * (2.0 * fcut - 2.0 * sp.fc)) * sp.length;
  }
  const double acc_ps2 = std::abs(acc) * 1e24;
  const double bw_ghz = c.bandwidth() * 1e-9;
  const double delta = c.phi == 0.0 ? 1.0 : 0.0;
  return (1 + a[0] * std::pow(c.rolloff, a[1])) *
         (a[2] + a[3] * std::pow(c.phi, a[4]) +
          a[5] * (1 + a[6] * delta) * (1 + a[7] * std::pow(bw_ghz, a[8]) + a[9] * std::log10(acc_ps2 + a[10])));
}

inline double rho_mch(const gnmci::Link& link, std::size_t cut, std::size_t m, std::size_t ns) {
  const auto& a = kPaperA;
  const auto& c = link.comb[cut];
  const auto& ch = link.comb[m];
  const double fcut = c.center();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 <= ns; ++k) {
    const auto& sp = link.spans[k];
    acc += (sp.beta2 + kPi * sp.beta3 * ((ch.f_start + ch.f_end) / 2.0 + fcut - 2.0 * sp.fc)) * sp.length;
  }
  const double acc_ps2 = std::abs(acc) * 1e24;
  const double delta = ch.phi == 0.0 ? 1.0 : 0.0;
  return (1 + a[11] * std::pow(c.rolloff, a[12])) *
         (a[13] + a[14] * std::pow(ch.phi + a[15], a[16]) +
          a[17] * std::pow(ch.phi + a[18], a[19]) * (1 + a[20] * delta) * (1 + a[21] * std::log10(acc_ps2 + a[22])));
}

}  // namespace reference
