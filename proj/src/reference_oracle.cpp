#include "gnmci/reference_oracle.hpp"

#include <cmath>
#include <numbers>

#include "gnmci/span_response.hpp"

namespace gnmci::oracle {

namespace {

std::vector<Point2> clip(const std::vector<Point2>& poly, double c, bool keep_above) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  const auto inside = [&](const Point2& p) {
    const double s = p.f1 + p.f2;
    return keep_above ? s >= c : s <= c;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % n];
    const bool in_p = inside(p), in_q = inside(q);
    if (in_p) out.push_back(p);
    if (in_p != in_q) {
      Point2 x;
      if (p.f1 == q.f1) {
        x = {p.f1, c - p.f1};
      } else if (p.f2 == q.f2) {
        x = {c - p.f2, p.f2};
      } else {
        const double dp = p.f1 + p.f2 - c, dq = q.f1 + q.f2 - c;
        const double t = dp / (dp - dq);
        x = {p.f1 + t * (q.f1 - p.f1), p.f2 + t * (q.f2 - p.f2)};
      }
      out.push_back(x);
    }
  }
  std::vector<Point2> dedup;
  for (const auto& p : out) {
    if (!dedup.empty() && dedup.back().f1 == p.f1 && dedup.back().f2 == p.f2) continue;
    dedup.push_back(p);
  }
  while (dedup.size() > 1 && dedup.front().f1 == dedup.back().f1 && dedup.front().f2 == dedup.back().f2)
    dedup.pop_back();
  return dedup;
}

long double ti2_cvz(long double x) {
  // sum_k (-1)^k a_k with a_k = x^(2k+1)/(2k+1)^2, 0 < x <= 1.
  constexpr int n = 40;
  long double d = std::pow(3.0L + std::sqrt(8.0L), static_cast<long double>(n));
  d = 0.5L * (d + 1.0L / d);
  long double b = -1.0L, c = -d, s = 0.0L;
  long double power = x;
  const long double x2 = x * x;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    const long double den = 2.0L * k + 1.0L;
    s += c * power / (den * den);
    b = (static_cast<long double>(k) + n) * (static_cast<long double>(k) - n) * b /
        ((k + 0.5L) * (k + 1.0L));
    power *= x2;
  }
  return s / d;
}

long double ti2_series(long double x) {
  long double sum = 0.0L, power = x;
  const long double x2 = x * x;
  for (int k = 0; k < 400; ++k) {
    const long double den = 2.0L * k + 1.0L;
    const long double term = power / (den * den);
    sum += (k % 2 == 0) ? term : -term;
    if (term < 1e-22L * sum) break;
    power *= x2;
  }
  return sum;
}

struct TripleIntegrand {
  std::vector<EffectiveSpanParams> params;
  std::vector<double> weight;  // gamma^2 g0^2

  double operator()(double x, double y) const {
    const double prod = x * y;
    double s = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) s += weight[i] * xi_squared_direct(params[i], prod);
    return s;
  }
};

TripleIntegrand make_integrand(const Link& link, double f, double f1s, double f2s) {
  TripleIntegrand ig;
  for (std::size_t s = 0; s < link.spans.size(); ++s) {
    const Span& span = link.spans[s];
    ig.params.push_back(effective_span_params(span, f1s, f2s, f));
    const double g = g0(link, s, f1s, f2s, f);
    ig.weight.push_back(span.gamma * span.gamma * g * g);
  }
  return ig;
}

double triple_weight(const Link& link, std::size_t m, std::size_t n, std::size_t k) {
  return 16.0 / 27.0 * link.comb[m].psd * link.comb[n].psd * link.comb[k].psd;
}

}  // namespace

IslandPolygon island_polygon_exact(std::span<const Channel> comb, std::size_t m, std::size_t n, std::size_t k,
                                   double f, ClipOrder order) {
  IslandPolygon out;
  out.origin = f;
  const Channel& cm = comb[m];
  const Channel& cn = comb[n];
  const Channel& ck = comb[k];
  const double x1 = cm.f_start - f, x2 = cm.f_end - f;
  const double y1 = cn.f_start - f, y2 = cn.f_end - f;
  const double lo = ck.f_start - f, hi = ck.f_end - f;
  std::vector<Point2> poly = {{x1, y1}, {x2, y1}, {x2, y2}, {x1, y2}};
  if (order == ClipOrder::lower_first) {
    poly = clip(poly, lo, true);
    if (poly.size() >= 3) poly = clip(poly, hi, false);
  } else {
    poly = clip(poly, hi, false);
    if (poly.size() >= 3) poly = clip(poly, lo, true);
  }
  if (poly.size() < 3) return out;

  // Shoelace relative to the first vertex.
  const Point2 o = poly.front();
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    const double px = p.f1 - o.f1, py = p.f2 - o.f2;
    const double qx = q.f1 - o.f1, qy = q.f2 - o.f2;
    const double cr = px * qy - qx * py;
    a2 += cr;
    cx += (px + qx) * cr;
    cy += (py + qy) * cr;
  }
  if (!(a2 > 0.0)) return out;
  out.vertices = std::move(poly);
  out.area = 0.5 * a2;
  out.centroid = {o.f1 + cx / (3.0 * a2), o.f2 + cy / (3.0 * a2)};
  return out;
}

double dilog_series(double x) {
  if (x == 0.0) return 0.0;
  const long double t = std::abs(static_cast<long double>(x));
  long double ti2;
  if (t <= 0.5L) {
    ti2 = ti2_series(t);
  } else if (t <= 1.0L) {
    ti2 = ti2_cvz(t);
  } else {
    const long double inv = 1.0L / t;
    ti2 = (inv <= 0.5L ? ti2_series(inv) : ti2_cvz(inv)) + 0.5L * std::numbers::pi_v<long double> * std::log(t);
  }
  const double v = static_cast<double>(2.0L * ti2);
  return x < 0.0 ? -v : v;
}

OracleResult gn_quadrature_square(const Link& link, double f, std::size_t m, std::size_t n, std::size_t k,
                                  const quad::Options& opt) {
  OracleResult res;
  const IslandPolygon poly = island_polygon_exact(link.comb, m, n, k, f);
  if (poly.empty()) return res;
  const double half = 0.5 * std::sqrt(poly.area);
  const auto ig = make_integrand(link, f, f + poly.centroid.f1, f + poly.centroid.f2);
  const quad::Rect rect{poly.centroid.f1 - half, poly.centroid.f1 + half, poly.centroid.f2 - half,
                        poly.centroid.f2 + half};
  const auto q = quad::integrate(quad::Integrand2(ig), rect, opt);
  const double w = triple_weight(link, m, n, k);
  return OracleResult{w * q.value, w * q.error, q.converged, q.regions};
}

OracleResult gn_quadrature_true_island(const Link& link, double f, std::size_t m, std::size_t n, std::size_t k,
                                       const quad::Options& opt) {
  OracleResult res;
  const IslandPolygon poly = island_polygon_exact(link.comb, m, n, k, f);
  if (poly.empty()) return res;
  const auto ig = make_integrand(link, f, f + poly.centroid.f1, f + poly.centroid.f2);
  const Point2 c = poly.centroid;
  std::vector<quad::Piece> pieces;
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    const Point2 a = poly.vertices[i];
    const Point2 b = poly.vertices[(i + 1) % poly.vertices.size()];
    const double ax = a.f1 - c.f1, ay = a.f2 - c.f2;
    const double bax = b.f1 - a.f1, bay = b.f2 - a.f2;
    const double jac = std::abs(ax * bay - ay * bax);
    if (jac == 0.0) continue;
    // p(u, v) = c + u (a - c) + u v (b - a), dp = u |det| du dv.
    pieces.push_back(quad::Piece{[=](double u, double v) {
                                   const double x = c.f1 + u * ax + u * v * bax;
                                   const double y = c.f2 + u * ay + u * v * bay;
                                   return u * jac * ig(x, y);
                                 },
                                 quad::Rect{0.0, 1.0, 0.0, 1.0}});
  }
  const auto q = quad::integrate(pieces, opt);
  const double w = triple_weight(link, m, n, k);
  return OracleResult{w * q.value, w * q.error, q.converged, q.regions};
}

OracleResult gn_quadrature_total(const Link& link, double f, Domain domain, const quad::Options& opt,
                                 const TripleFilter& filter) {
  OracleResult total;
  double comp = 0.0;
  const std::size_t nc = link.comb.size();
  for (std::size_t m = 0; m < nc; ++m)
    for (std::size_t n = 0; n < nc; ++n)
      for (std::size_t k = 0; k < nc; ++k) {
        if (filter && !filter(m, n, k)) continue;
        const auto r = domain == Domain::square ? gn_quadrature_square(link, f, m, n, k, opt)
                                                : gn_quadrature_true_island(link, f, m, n, k, opt);
        const double y = r.value - comp;
        const double t = total.value + y;
        comp = (t - total.value) - y;
        total.value = t;
        total.error += r.error;
        total.converged = total.converged && r.converged;
        total.regions += r.regions;
      }
  return total;
}

}  // namespace gnmci::oracle
