#include "gnmci/model_types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

namespace gnmci {

Profile::Profile(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw ModelError("profile table is empty");
  std::stable_sort(points_.begin(), points_.end(),
                   [](const Point& a, const Point& b) { return a.frequency < b.frequency; });
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].frequency == points_[i - 1].frequency)
      throw ModelError("profile table has duplicate frequencies");
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.frequency) || !std::isfinite(p.value))
      throw ModelError("profile table has non-finite entries");
  }
}

double Profile::operator()(double frequency) const {
  if (points_.size() == 1 || frequency <= points_.front().frequency) return points_.front().value;
  if (frequency >= points_.back().frequency) return points_.back().value;
  auto hi = std::upper_bound(points_.begin(), points_.end(), frequency,
                             [](double f, const Point& p) { return f < p.frequency; });
  auto lo = hi - 1;
  const double t = (frequency - lo->frequency) / (hi->frequency - lo->frequency);
  return lo->value + t * (hi->value - lo->value);
}

bool Profile::is_constant() const {
  return std::all_of(points_.begin(), points_.end(),
                     [&](const Point& p) { return p.value == points_.front().value; });
}

double Profile::constant_value() const {
  if (!is_constant()) throw ModelError("profile is frequency dependent");
  return points_.front().value;
}

bool Profile::is_zero() const { return is_constant() && points_.front().value == 0.0; }

double Span::gain(double f) const {
  if (transparent_gain) return std::exp(2.0 * alpha0(f) * length);
  return edfa_gain(f);
}

double Span::log_gain(double f) const {
  if (transparent_gain) return 2.0 * alpha0(f) * length;
  return std::log(edfa_gain(f));
}

bool Span::flat_loss() const { return alpha0.is_constant() && alpha1.is_zero(); }

bool Link::flat_loss() const {
  return std::all_of(spans.begin(), spans.end(), [](const Span& s) { return s.flat_loss(); });
}

void Link::validate() const {
  if (spans.empty()) throw ModelError("link has no spans");
  if (comb.empty()) throw ModelError("link has no channels");
  if (cut_index >= comb.size()) throw ModelError("cut index out of range");
  for (std::size_t i = 0; i < comb.size(); ++i) {
    const auto& ch = comb[i];
    if (!std::isfinite(ch.f_start) || !std::isfinite(ch.f_end) || !(ch.f_end > ch.f_start))
      throw ModelError("channel " + std::to_string(i) + " has non-positive bandwidth");
    if (!(ch.psd >= 0.0) || !std::isfinite(ch.psd))
      throw ModelError("channel " + std::to_string(i) + " has invalid PSD");
    if (!std::isfinite(ch.phi)) throw ModelError("channel " + std::to_string(i) + " has non-finite phi");
    if (!(ch.rolloff >= 0.0 && ch.rolloff <= 1.0))
      throw ModelError("channel " + std::to_string(i) + " roll-off outside [0,1]");
    if (i > 0) {
      if (comb[i - 1].f_start > ch.f_start) throw ModelError("comb is not sorted by start frequency");
      if (comb[i - 1].f_end > ch.f_start)
        throw ModelError("channels " + std::to_string(i - 1) + " and " + std::to_string(i) + " overlap");
    }
  }
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const auto& sp = spans[s];
    const std::string tag = "span " + std::to_string(s) + ": ";
    if (!(sp.length > 0.0) || !std::isfinite(sp.length)) throw ModelError(tag + "length must be positive");
    if (!(sp.gamma >= 0.0)) throw ModelError(tag + "gamma must be non-negative");
    if (!std::isfinite(sp.beta2) || !std::isfinite(sp.beta3) || !std::isfinite(sp.fc))
      throw ModelError(tag + "dispersion parameters must be finite");
    for (const auto& ch : comb) {
      for (double f : {ch.f_start, ch.center(), ch.f_end}) {
        if (!sp.transparent_gain && !(sp.edfa_gain(f) > 0.0))
          throw ModelError(tag + "amplifier gain must be positive over the comb");
        if (sp.alpha1(f) != 0.0 && !(sp.sigma(f) > 0.0))
          throw ModelError(tag + "sigma must be positive where alpha1 is non-zero");
      }
    }
  }
}

void normalize_comb(Link& link) {
  if (link.comb.empty()) return;
  std::vector<std::size_t> order(link.comb.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return link.comb[a].f_start < link.comb[b].f_start;
  });
  std::vector<Channel> sorted;
  sorted.reserve(order.size());
  std::size_t cut = link.cut_index;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] == link.cut_index) cut = i;
    sorted.push_back(std::move(link.comb[order[i]]));
  }
  link.comb = std::move(sorted);
  link.cut_index = cut;
}

double compute_phi(std::span<const ConstellationPoint> constellation) {
  if (constellation.empty()) throw std::invalid_argument("empty constellation");
  double total = 0.0, m2 = 0.0, m4 = 0.0;
  for (const auto& p : constellation) {
    if (!(p.probability >= 0.0)) throw std::invalid_argument("negative symbol probability");
    const double e = std::norm(p.symbol);
    total += p.probability;
    m2 += p.probability * e;
    m4 += p.probability * e * e;
  }
  if (!(total > 0.0)) throw std::invalid_argument("constellation probabilities sum to zero");
  m2 /= total;
  m4 /= total;
  if (!(m2 > 0.0)) throw std::invalid_argument("constellation has zero energy");
  return 2.0 - m4 / (m2 * m2);
}

double compute_phi(std::span<const std::complex<double>> symbols) {
  std::vector<ConstellationPoint> pts;
  pts.reserve(symbols.size());
  for (auto s : symbols) pts.push_back({s, 1.0});
  return compute_phi(pts);
}

std::vector<std::complex<double>> square_qam(int order) {
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
  if (side < 2 || side * side != order) throw std::invalid_argument("QAM order is not a square");
  std::vector<std::complex<double>> pts;
  for (int i = 0; i < side; ++i)
    for (int q = 0; q < side; ++q) pts.emplace_back(2 * i - side + 1, 2 * q - side + 1);
  return pts;
}

std::vector<std::complex<double>> cross_qam32() {
  std::vector<std::complex<double>> pts;
  for (int i = -5; i <= 5; i += 2)
    for (int q = -5; q <= 5; q += 2)
      if (!(std::abs(i) == 5 && std::abs(q) == 5)) pts.emplace_back(i, q);
  return pts;
}

std::vector<std::complex<double>> rect_qam8() {
  std::vector<std::complex<double>> pts;
  for (int i : {-3, -1, 1, 3})
    for (int q : {-1, 1}) pts.emplace_back(i, q);
  return pts;
}

namespace {

std::string canonical_format(std::string_view name) {
  std::string s;
  for (char c : name) {
    if (c == '-' || c == '_' || c == ' ') continue;
    s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (s.rfind("PM", 0) == 0 && s.size() > 2) s = s.substr(2);
  if (s.rfind("DP", 0) == 0 && s.size() > 2) s = s.substr(2);
  return s;
}

const std::map<std::string, double>& phi_table() {
  static const std::map<std::string, double> table = [] {
    std::map<std::string, double> t;
    t["QPSK"] = compute_phi(square_qam(4));
    t["4QAM"] = t["QPSK"];
    t["8QAM"] = compute_phi(rect_qam8());
    t["16QAM"] = compute_phi(square_qam(16));
    t["32QAM"] = compute_phi(cross_qam32());
    t["64QAM"] = compute_phi(square_qam(64));
    t["256QAM"] = compute_phi(square_qam(256));
    // E|a|^4 = 2 (E|a|^2)^2 for a circular Gaussian.
    t["GAUSSIAN"] = 0.0;
    return t;
  }();
  return table;
}

}  // namespace

std::optional<double> builtin_phi(std::string_view format) {
  const auto& t = phi_table();
  auto it = t.find(canonical_format(format));
  if (it == t.end()) return std::nullopt;
  return it->second;
}

}  // namespace gnmci
