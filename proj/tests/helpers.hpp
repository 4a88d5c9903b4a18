#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gnmci/config.hpp"
#include "gnmci/model_types.hpp"

namespace testutil {

inline double rel_err(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline gnmci::Channel channel(double center, double bw, double psd = 1e-14, double phi = 1.0, double rolloff = 0.1) {
  gnmci::Channel ch;
  ch.f_start = center - 0.5 * bw;
  ch.f_end = center + 0.5 * bw;
  ch.psd = psd;
  ch.phi = phi;
  ch.rolloff = rolloff;
  return ch;
}

inline gnmci::Span flat_span(double length_km = 100.0, double alpha_db_km = 0.2, double beta2_ps2_km = -21.0,
                             double beta3_ps3_km = 0.12, double fc = 193.41e12, double gamma_1_w_km = 1.3) {
  gnmci::Span s;
  s.length = length_km * 1e3;
  s.gamma = gamma_1_w_km * 1e-3;
  s.alpha0 = gnmci::Profile(gnmci::units::db_per_km_to_np_per_m(alpha_db_km));
  s.beta2 = beta2_ps2_km * 1e-27;
  s.beta3 = beta3_ps3_km * 1e-39;
  s.fc = fc;
  s.transparent_gain = true;
  s.noise_figure_db = 5.0;
  return s;
}

/// Evenly spaced comb with equal PSD.
inline std::vector<gnmci::Channel> uniform_comb(std::size_t n, double spacing, double bw, double center = 193.41e12,
                                                double psd = 1e-14) {
  std::vector<gnmci::Channel> comb;
  const double first = center - 0.5 * spacing * static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) comb.push_back(channel(first + spacing * static_cast<double>(i), bw, psd));
  return comb;
}

/// Random flat-loss link: 1..max_spans spans, 1..max_ch channels.
inline gnmci::Link random_flat_link(std::mt19937_64& rng, std::size_t max_ch = 7, std::size_t max_spans = 5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  gnmci::Link link;
  const std::size_t nc = 1 + static_cast<std::size_t>(u(rng) * max_ch) % max_ch;
  const std::size_t ns = 1 + static_cast<std::size_t>(u(rng) * max_spans) % max_spans;
  double edge = 192.9e12;
  const double rates[] = {32e9, 64e9, 96e9};
  for (std::size_t i = 0; i < nc; ++i) {
    const double bw = rates[static_cast<std::size_t>(u(rng) * 3) % 3];
    const double start = edge + 5e9 + 20e9 * u(rng);
    gnmci::Channel ch;
    ch.f_start = start;
    ch.f_end = start + bw;
    ch.psd = 1e-3 * std::pow(10.0, (u(rng) * 4.0 - 2.0) / 10.0) / bw;
    ch.rolloff = 0.05 + 0.2 * u(rng);
    ch.phi = u(rng) < 0.2 ? 0.0 : 0.6 + 0.4 * u(rng);
    link.comb.push_back(ch);
    edge = ch.f_end;
  }
  for (std::size_t s = 0; s < ns; ++s) {
    gnmci::Span sp = flat_span(60.0 + 60.0 * u(rng), 0.17 + 0.06 * u(rng), -25.0 + 30.0 * u(rng), 0.05 + 0.1 * u(rng));
    if (u(rng) < 0.5) {
      sp.transparent_gain = false;
      sp.edfa_gain = gnmci::Profile(std::exp(2.0 * sp.alpha0.constant_value() * sp.length) * (0.8 + 0.4 * u(rng)));
    }
    link.spans.push_back(sp);
  }
  link.cut_index = static_cast<std::size_t>(u(rng) * static_cast<double>(nc)) % nc;
  return link;
}

}  // namespace testutil
