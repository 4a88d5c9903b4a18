#include "gnmci/nli_engine.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gnmci/config.hpp"
#include "gnmci/island_geometry.hpp"

namespace gnmci {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGnPrefactor = 16.0 / 27.0;

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

bool use_flat(const Link& link, LossMode mode) {
  switch (mode) {
    case LossMode::flat: return true;
    case LossMode::general: return false;
    case LossMode::automatic: return link.flat_loss();
  }
  return false;
}

double lorentz_box(const special::OddKernel& k, const LorentzianCoefficients& c, const special::Box& box) {
  double s = 0.0;
  if (c.J1 != 0.0) s += special::corner_integral(k, c.D1_bar, c.J1, box);
  s += special::corner_integral(k, c.D2_bar, c.J2, box);
  return s;
}

// Runs fn(0..count-1); each index is one partition whose result the caller
// stores by index, so the reduction order never depends on scheduling.
template <typename Fn>
void run_partitions(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct TripleContext {
  const Link& link;
  double f;
  bool flat;
  const special::OddKernel& kernel;
  G0Convention convention;
};

// Span sum for one island, without the 16/27 G_m G_n G_k prefactor.
double island_span_sum(const TripleContext& ctx, const IslandSquare& isl, std::size_t& warnings) {
  const double half = 0.5 * isl.side;
  const special::Box box{isl.f1_offset - half, isl.f1_offset + half, isl.f2_offset - half, isl.f2_offset + half};
  const double f1s = isl.f1_star(), f2s = isl.f2_star();
  CompensatedSum acc;
  for (std::size_t s = 0; s < ctx.link.spans.size(); ++s) {
    const Span& span = ctx.link.spans[s];
    EffectiveSpanParams p;
    double g;
    if (ctx.flat) {
      p = flat_span_params(span.alpha0.constant_value(), beta2_bar(span, f1s, f2s));
      g = g0_flat(ctx.link, s, f1s, f2s, ctx.f, ctx.convention);
    } else {
      p = effective_span_params(span, f1s, f2s, ctx.f);
      if (p.fit_warning) ++warnings;
      g = g0_general(ctx.link, s, f1s, f2s, ctx.f, ctx.convention);
    }
    acc.add(span.gamma * span.gamma * g * g * lorentz_box(ctx.kernel, p.lorentz, box));
  }
  return acc.value();
}

template <typename Filter>
double triple_sum(const TripleContext& ctx, unsigned threads, Filter filter, std::size_t& warnings) {
  const auto& comb = ctx.link.comb;
  const std::size_t nc = comb.size();
  std::vector<double> partial(nc, 0.0);
  std::vector<std::size_t> partial_warnings(nc, 0);
  run_partitions(nc, threads, [&](std::size_t m) {
    CompensatedSum acc;
    std::size_t w = 0;
    for (std::size_t n = 0; n < nc; ++n) {
      for (std::size_t k = 0; k < nc; ++k) {
        if (!filter(m, n, k)) continue;
        const double weight = comb[m].psd * comb[n].psd * comb[k].psd;
        if (weight == 0.0) continue;
        const IslandSquare isl = island_descriptor(comb, m, n, k, ctx.f);
        if (isl.empty) continue;
        acc.add(weight * island_span_sum(ctx, isl, w));
      }
    }
    partial[m] = acc.value();
    partial_warnings[m] = w;
  });
  CompensatedSum total;
  for (std::size_t m = 0; m < nc; ++m) {
    total.add(partial[m]);
    warnings += partial_warnings[m];
  }
  return kGnPrefactor * total.value();
}

struct SciXciParts {
  double sci = 0.0;
  double xci = 0.0;
  double coherence = 0.0;
  std::size_t warnings = 0;
};

SciXciParts sci_xci_parts(const Link& link, std::size_t cut, bool flat, const special::OddKernel& kernel,
                          G0Convention convention, const CorrectionCoefficients* rho_sci,
                          const CorrectionCoefficients* rho_xci, bool coherence) {
  const auto& comb = link.comb;
  const Channel& ch_cut = comb.at(cut);
  const double f_cut = ch_cut.center();
  const double bw_cut = ch_cut.bandwidth();
  const std::size_t ns = link.spans.size();
  const double bracket = coherence ? coherence_bracket(ns) : 0.0;

  SciXciParts out;
  CompensatedSum xci_acc;
  for (std::size_t m = 0; m < comb.size(); ++m) {
    const Channel& ch = comb[m];
    const double weight = ch.psd * ch.psd * ch_cut.psd;
    if (weight == 0.0) continue;
    const double mid = ch.center();
    const special::Box box{ch.f_start - f_cut, ch.f_end - f_cut, -0.5 * bw_cut, 0.5 * bw_cut};
    CompensatedSum base_acc, coh_acc;
    for (std::size_t s = 0; s < ns; ++s) {
      const Span& span = link.spans[s];
      EffectiveSpanParams p;
      double g;
      if (flat) {
        p = flat_span_params(span.alpha0.constant_value(), beta2_bar(span, mid, f_cut));
        g = g0_flat(link, s, mid, f_cut, f_cut, convention);
      } else {
        p = sci_xci_span_params(span, mid, f_cut);
        g = g0_general(link, s, mid, f_cut, f_cut, convention);
      }
      double rho = 1.0;
      if (m == cut && rho_sci) rho = rho_cut(s, link, cut, *rho_sci);
      if (m != cut && rho_xci) rho = rho_mch(s, m, link, cut, *rho_xci);
      const double scale = span.gamma * span.gamma * g * g * rho;
      base_acc.add(scale * lorentz_box(kernel, p.lorentz, box));
      if (m == cut && coherence && bracket != 0.0) {
        const double x = kPi * kPi * std::abs(p.beta2_bar) * span.length * bw_cut * bw_cut;
        coh_acc.add(scale * bracket * special::sine_integral_over_x(x) * bw_cut * bw_cut /
                    (2.0 * p.alpha0_bar * p.alpha0_bar));
      }
    }
    if (m == cut) {
      out.sci = kGnPrefactor * weight * base_acc.value();
      out.coherence = kGnPrefactor * weight * coh_acc.value();
    } else {
      xci_acc.add(2.0 * kGnPrefactor * weight * base_acc.value());
    }
  }
  out.xci = xci_acc.value();
  return out;
}

double parse_decimal(std::string_view token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
    throw ModelError("coefficient file: bad number '" + std::string(token) + "'");
  return v;
}

}  // namespace

CorrectionCoefficients CorrectionCoefficients::defaults() {
  CorrectionCoefficients c;
  c.values_ = {-0.8509,   1.0923,   0.9305, -0.4097, 0.1652, -15.5857, -0.9648, -0.9826,
               0.008273,  -0.014253, 253.6104, 0.5174, 0.1695, 0.6250,  -1.1281, 0.1591,
               0.9497,    0.8592,   0.2265,  0.9047, 0.027842, 0.005731, 1.2457e-41};
  return c;
}

CorrectionCoefficients CorrectionCoefficients::parse(std::string_view text) {
  CorrectionCoefficients c;
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (text[i] == '+') ++i;
    const double v = parse_decimal(text.substr(i, j - i));
    if (count >= c.values_.size()) throw ModelError("coefficient file: more than 23 values");
    c.values_[count++] = v;
    i = j;
  }
  if (count != c.values_.size())
    throw ModelError("coefficient file: expected 23 values, got " + std::to_string(count));
  return c;
}

CorrectionCoefficients CorrectionCoefficients::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open coefficient file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string CorrectionCoefficients::to_text() const {
  std::string out;
  char buf[40];
  for (double v : values_) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

double g_nli_generic(const Link& link, double f, FintMode fint, const EngineSwitches& sw) {
  const TripleContext ctx{link, f, use_flat(link, sw.loss), special::kernel(fint), sw.g0_convention};
  std::size_t warnings = 0;
  return triple_sum(ctx, sw.threads, [](std::size_t, std::size_t, std::size_t) { return true; }, warnings);
}

double sci_xci(const Link& link, std::size_t cut, LossMode loss, FintMode fint, const EngineSwitches& sw) {
  const auto parts = sci_xci_parts(link, cut, use_flat(link, loss), special::kernel(fint), sw.g0_convention,
                                   nullptr, nullptr, false);
  return parts.sci + parts.xci;
}

double mci(const Link& link, std::size_t cut, LossMode loss, FintMode fint, const EngineSwitches& sw) {
  const TripleContext ctx{link, link.comb.at(cut).center(), use_flat(link, loss), special::kernel(fint),
                          sw.g0_convention};
  std::size_t warnings = 0;
  return triple_sum(
      ctx, sw.threads,
      [cut](std::size_t m, std::size_t n, std::size_t k) { return classify_triple(m, n, k, cut) == TripleClass::mci; },
      warnings);
}

double rho_cut(std::size_t span_index, const Link& link, std::size_t cut, const CorrectionCoefficients& c) {
  const Channel& ch = link.comb.at(cut);
  const double f_cut = ch.center();
  if (ch.phi < 0.0) throw ModelError("fitted correction needs phi >= 0");
  double acc = 0.0;
  for (std::size_t k = 0; k < span_index; ++k) acc += beta2_bar(link.spans.at(k), f_cut, f_cut) * link.spans[k].length;
  const double bw = ch.bandwidth() / kRhoBandwidthUnit;
  const double beta_acc = std::abs(acc) / kRhoDispersionUnit;
  const double delta = std::abs(ch.phi) < kGaussianPhiTolerance ? 1.0 : 0.0;
  return (1.0 + c.a(1) * std::pow(ch.rolloff, c.a(2))) *
         (c.a(3) + c.a(4) * std::pow(ch.phi, c.a(5)) +
          c.a(6) * (1.0 + c.a(7) * delta) *
              (1.0 + c.a(8) * std::pow(bw, c.a(9)) + c.a(10) * std::log10(beta_acc + c.a(11))));
}

double rho_mch(std::size_t span_index, std::size_t m, const Link& link, std::size_t cut,
               const CorrectionCoefficients& c) {
  if (m == cut) throw std::invalid_argument("rho_mch: interferer equals the channel under test");
  const Channel& ch_cut = link.comb.at(cut);
  const Channel& ch = link.comb.at(m);
  if (ch.phi < 0.0) throw ModelError("fitted correction needs phi >= 0");
  const double f_cut = ch_cut.center();
  const double mid = ch.center();
  double acc = 0.0;
  for (std::size_t k = 0; k < span_index; ++k) acc += beta2_bar(link.spans.at(k), mid, f_cut) * link.spans[k].length;
  const double beta_acc = std::abs(acc) / kRhoDispersionUnit;
  const double delta = std::abs(ch.phi) < kGaussianPhiTolerance ? 1.0 : 0.0;
  return (1.0 + c.a(12) * std::pow(ch_cut.rolloff, c.a(13))) *
         (c.a(14) + c.a(15) * std::pow(ch.phi + c.a(16), c.a(17)) +
          c.a(18) * std::pow(ch.phi + c.a(19), c.a(20)) * (1.0 + c.a(21) * delta) *
              (1.0 + c.a(22) * std::log10(beta_acc + c.a(23))));
}

double coherence_bracket(std::size_t num_spans) {
  if (num_spans == 0) throw std::invalid_argument("coherence_bracket: no spans");
  const double ns = static_cast<double>(num_spans);
  return special::harmonic_number(static_cast<long long>(num_spans) - 1) + (1.0 - ns) / ns;
}

NliRow g_nli_total(const Link& link, std::size_t cut, const EngineSwitches& sw,
                   const CorrectionCoefficients* coefficients) {
  if ((sw.rho_sci == RhoMode::fitted || sw.rho_xci == RhoMode::fitted) && coefficients == nullptr)
    throw ModelError("fitted correction mode needs a coefficient table");
  const bool flat = use_flat(link, sw.loss);
  const auto& kernel = special::kernel(sw.fint);
  const Channel& ch_cut = link.comb.at(cut);

  NliRow row;
  row.channel = cut;
  row.f_cut = ch_cut.center();
  const auto parts =
      sci_xci_parts(link, cut, flat, kernel, sw.g0_convention, sw.rho_sci == RhoMode::fitted ? coefficients : nullptr,
                    sw.rho_xci == RhoMode::fitted ? coefficients : nullptr, sw.rho_coh);
  row.g_sci = parts.sci;
  row.g_xci = parts.xci;
  row.g_coherence_correction = parts.coherence;
  row.warnings = parts.warnings;
  if (sw.rho_mci) {
    const TripleContext ctx{link, row.f_cut, flat, kernel, sw.g0_convention};
    row.g_mci = triple_sum(
        ctx, sw.threads,
        [cut](std::size_t m, std::size_t n, std::size_t k) {
          return classify_triple(m, n, k, cut) == TripleClass::mci;
        },
        row.warnings);
  }
  CompensatedSum total;
  total.add(row.g_sci);
  total.add(row.g_coherence_correction);
  total.add(row.g_xci);
  total.add(row.g_mci);
  row.g_total = total.value();
  return row;
}

double ase_power(const Link& link, std::size_t cut) {
  const Channel& ch = link.comb.at(cut);
  const double f = ch.center();
  CompensatedSum acc;
  for (const Span& span : link.spans) {
    const double excess = std::expm1(span.log_gain(f));
    if (excess <= 0.0) continue;
    const double nf = std::pow(10.0, span.noise_figure_db / 10.0);
    acc.add(nf * constants::kPlanck * f * excess * ch.bandwidth());
  }
  return acc.value();
}

double osnr_nl_db(const Link& link, std::size_t cut, double p_ase, double g_total) {
  const Channel& ch = link.comb.at(cut);
  const double p_ch = ch.power();
  const double p_nli = g_total * ch.bandwidth();
  if (!(p_ch > 0.0)) throw ModelError("OSNR: channel power must be positive");
  if (p_ase < 0.0) throw ModelError("OSNR: negative ASE power");
  const double den = p_ase + p_nli;
  if (!(den > 0.0)) throw ModelError("OSNR: noise power must be positive");
  return 10.0 * std::log10(p_ch / den);
}

}  // namespace gnmci
