#include "gnmci/span_response.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace gnmci {

namespace {

constexpr double kPi = std::numbers::pi;

// (1 - exp(-x)) / x, continuous at 0.
double decay_average(double x) {
  if (x == 0.0) return 1.0;
  return -std::expm1(-x) / x;
}

// alpha1 (1 - exp(-sigma L)) / sigma.
double raman_integral(double alpha1, double sigma, double length) {
  if (alpha1 == 0.0) return 0.0;
  return alpha1 * length * decay_average(sigma * length);
}

struct ExpTerm {
  double weight;  // coefficient * alpha1
  double alpha1;
  double sigma;
  double coef;
};

double sum_terms(const std::vector<ExpTerm>& terms, double z) {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight * std::exp(-t.sigma * z);
  return s;
}

// Solves decay_average(x) = target for x (any sign); decay_average is
// strictly decreasing with value 1 at x = 0.
double solve_decay_average(double target) {
  double lo, hi;
  if (target == 1.0) return 0.0;
  if (target < 1.0) {
    lo = 0.0;
    hi = 1.0 / target;
  } else {
    hi = 0.0;
    lo = -1.0;
    while (decay_average(lo) < target) lo *= 2.0;
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (decay_average(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Composite 5-point Gauss-Legendre over `pieces` equal sub-intervals.
template <typename Fn>
double integrate_gl5(Fn fn, double a, double b, int pieces) {
  static constexpr std::array<double, 5> x = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640,
                                              -0.9061798459386640};
  static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                              0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / pieces;
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    const double c = a + (i + 0.5) * h;
    double s = 0.0;
    for (std::size_t j = 0; j < 5; ++j) s += w[j] * fn(c + 0.5 * h * x[j]);
    total += 0.5 * h * s;
  }
  return total;
}

}  // namespace

double effective_alpha0(const Span& span, double f1s, double f2s, double f) {
  const double f3s = f1s + f2s - f;
  return 0.5 * (span.alpha0(f1s) + span.alpha0(f2s) + span.alpha0(f3s) - span.alpha0(f));
}

RamanFit fit_effective_raman(const Span& span, double f1s, double f2s, double f) {
  const double f3s = f1s + f2s - f;
  const std::array<std::pair<double, double>, 4> points = {{{0.5, f1s}, {0.5, f2s}, {-0.5, f}, {0.5, f3s}}};
  std::vector<ExpTerm> terms;
  for (const auto& [coef, freq] : points) {
    const double a1 = span.alpha1(freq);
    if (a1 == 0.0) continue;
    const double sg = span.sigma(freq);
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const ExpTerm& t) { return t.alpha1 == a1 && t.sigma == sg; });
    if (it != terms.end()) {
      it->coef += coef;
    } else {
      terms.push_back({0.0, a1, sg, coef});
    }
  }
  std::erase_if(terms, [](const ExpTerm& t) { return t.coef == 0.0; });
  for (auto& t : terms) t.weight = t.coef * t.alpha1;

  RamanFit fit;
  if (terms.empty()) return fit;
  if (terms.size() == 1) {
    fit.alpha1_bar = terms.front().weight;
    fit.sigma_bar = terms.front().sigma;
    return fit;
  }

  const double length = span.length;
  const double r0 = sum_terms(terms, 0.0);
  bool sign_change = false;
  constexpr int kGrid = 256;
  for (int j = 1; j <= kGrid && !sign_change; ++j) {
    const double v = sum_terms(terms, length * j / kGrid);
    if ((v > 0.0 && r0 < 0.0) || (v < 0.0 && r0 > 0.0)) sign_change = true;
  }

  double integral;
  if (!sign_change) {
    integral = 0.0;
    for (const auto& t : terms) integral += t.coef * raman_integral(t.alpha1, t.sigma, length);
  } else {
    fit.warning = true;
    integral = integrate_gl5([&](double z) { return std::abs(sum_terms(terms, z)); }, 0.0, length, 512);
    if (r0 < 0.0) integral = -integral;
  }

  if (r0 == 0.0) {
    // A single exponential cannot start at zero and carry a non-zero area.
    fit.warning = true;
    return RamanFit{0.0, 0.0, true};
  }
  const double target = integral / (r0 * length);
  if (!(target > 0.0)) {
    fit.warning = true;
    return RamanFit{0.0, 0.0, true};
  }
  fit.alpha1_bar = r0;
  fit.sigma_bar = solve_decay_average(target) / length;
  if (!(fit.sigma_bar > 0.0)) fit.warning = true;
  return fit;
}

double beta2_bar(const Span& span, double fa, double fb) {
  return span.beta2 + kPi * span.beta3 * (fa + fb - 2.0 * span.fc);
}

LorentzianCoefficients lorentzian_coefficients(double a0, double a1, double sg, double b2) {
  if (!(a0 > 0.0)) throw ModelError("effective attenuation must be positive");
  LorentzianCoefficients c;
  c.D2_bar = 2.0 * kPi * kPi * b2 / a0;
  if (a1 == 0.0) {
    c.J1 = 0.0;
    c.J2 = 1.0 / (4.0 * a0 * a0);
    c.D1_bar = 4.0 * kPi * kPi * b2 / (2.0 * a0 + sg);
    return c;
  }
  if (sg == 0.0 || 2.0 * a0 + sg == 0.0 || 4.0 * a0 + sg == 0.0)
    throw ModelError("singular Raman decay constant in Lorentzian decomposition");
  const double q = 2.0 * a0 + sg;
  const double r = 4.0 * a0 + sg;
  c.J1 = 4.0 * a1 * (q - a1) / (sg * q * q * r);
  c.J2 = (sg - 2.0 * a1) * (r - 2.0 * a1) / (4.0 * sg * a0 * a0 * r);
  c.D1_bar = 4.0 * kPi * kPi * b2 / q;
  return c;
}

EffectiveSpanParams effective_span_params(const Span& span, double f1s, double f2s, double f) {
  EffectiveSpanParams p;
  p.alpha0_bar = effective_alpha0(span, f1s, f2s, f);
  const auto fit = fit_effective_raman(span, f1s, f2s, f);
  p.alpha1_bar = fit.alpha1_bar;
  p.sigma_bar = fit.sigma_bar;
  p.fit_warning = fit.warning;
  p.beta2_bar = beta2_bar(span, f1s, f2s);
  p.lorentz = lorentzian_coefficients(p.alpha0_bar, p.alpha1_bar, p.sigma_bar, p.beta2_bar);
  return p;
}

EffectiveSpanParams sci_xci_span_params(const Span& span, double mid_m, double f_cut) {
  EffectiveSpanParams p;
  p.alpha0_bar = span.alpha0(mid_m);
  p.alpha1_bar = span.alpha1(mid_m);
  p.sigma_bar = p.alpha1_bar == 0.0 ? 0.0 : span.sigma(mid_m);
  p.beta2_bar = beta2_bar(span, mid_m, f_cut);
  p.lorentz = lorentzian_coefficients(p.alpha0_bar, p.alpha1_bar, p.sigma_bar, p.beta2_bar);
  return p;
}

EffectiveSpanParams flat_span_params(double alpha0, double b2) {
  EffectiveSpanParams p;
  p.alpha0_bar = alpha0;
  p.beta2_bar = b2;
  p.lorentz = lorentzian_coefficients(alpha0, 0.0, 0.0, b2);
  return p;
}

double xi_squared_direct(const EffectiveSpanParams& p, double detuning_product) {
  using cplx = std::complex<double>;
  const double b = 4.0 * kPi * kPi * detuning_product * p.beta2_bar;
  const cplx a(2.0 * p.alpha0_bar, -b);
  const cplx xi = 1.0 / a - 2.0 * p.alpha1_bar / a / (a + p.sigma_bar);
  return std::norm(xi);
}

double xi_squared_lorentzian(const EffectiveSpanParams& p, double detuning_product) {
  const auto& c = p.lorentz;
  const double u1 = detuning_product * c.D1_bar;
  const double u2 = detuning_product * c.D2_bar;
  return c.J1 / (1.0 + u1 * u1) + c.J2 / (1.0 + u2 * u2);
}

double g0_general(const Link& link, std::size_t span_index, double f1s, double f2s, double f,
                  G0Convention convention) {
  const double f3s = f1s + f2s - f;
  double log_g = 0.0;
  for (std::size_t p = 0; p < span_index; ++p) {
    const Span& sp = link.spans[p];
    for (double fx : {f1s, f2s, f3s}) {
      log_g += 0.5 * sp.log_gain(fx) - sp.length * sp.alpha0(fx) -
               raman_integral(sp.alpha1(fx), sp.sigma(fx), sp.length);
    }
  }
  const std::size_t start = convention == G0Convention::as_printed ? span_index : span_index + 1;
  for (std::size_t p = start; p < link.spans.size(); ++p) {
    const Span& sp = link.spans[p];
    log_g += -0.5 * sp.log_gain(f) - (sp.alpha0(f) * sp.length + raman_integral(sp.alpha1(f), sp.sigma(f), sp.length));
  }
  return std::exp(log_g);
}

double g0_flat(const Link& link, std::size_t span_index, double f1s, double f2s, double f,
               G0Convention convention) {
  const double f3s = f1s + f2s - f;
  double log_g = 0.0;
  for (std::size_t p = 0; p < span_index; ++p) {
    const Span& sp = link.spans[p];
    const double a0 = sp.alpha0.constant_value();
    log_g += 0.5 * (sp.log_gain(f1s) + sp.log_gain(f2s) + sp.log_gain(f3s)) - 3.0 * a0 * sp.length;
  }
  const std::size_t start = convention == G0Convention::as_printed ? span_index : span_index + 1;
  for (std::size_t p = start; p < link.spans.size(); ++p) {
    const Span& sp = link.spans[p];
    log_g += -0.5 * sp.log_gain(f) - sp.alpha0.constant_value() * sp.length;
  }
  return std::exp(log_g);
}

double g0(const Link& link, std::size_t span_index, double f1s, double f2s, double f, G0Convention convention) {
  if (link.flat_loss()) return g0_flat(link, span_index, f1s, f2s, f, convention);
  return g0_general(link, span_index, f1s, f2s, f, convention);
}

double psd_at_span(const Link& link, const Channel& channel, std::size_t span_index, double f_eval) {
  double log_scale = 0.0;
  for (std::size_t p = 0; p < span_index && p < link.spans.size(); ++p) {
    const Span& sp = link.spans[p];
    log_scale += sp.log_gain(f_eval) - 2.0 * sp.length * sp.alpha0(f_eval) -
                 2.0 * raman_integral(sp.alpha1(f_eval), sp.sigma(f_eval), sp.length);
  }
  return channel.psd * std::exp(log_scale);
}

std::size_t EffectiveParamsCache::KeyHash::operator()(const Key& k) const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint64_t v : {static_cast<std::uint64_t>(k.span), k.f1s, k.f2s, k.f}) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

const EffectiveSpanParams& EffectiveParamsCache::get(std::size_t span_index, double f1s, double f2s, double f) {
  const Key key{span_index, std::bit_cast<std::uint64_t>(f1s), std::bit_cast<std::uint64_t>(f2s),
                std::bit_cast<std::uint64_t>(f)};
  auto it = map_.find(key);
  if (it != map_.end()) {
    ++hits_;
    return it->second;
  }
  return map_.emplace(key, effective_span_params(link_->spans.at(span_index), f1s, f2s, f)).first->second;
}

}  // namespace gnmci
