#include "gnmci/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace gnmci::quad {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule15 {
  std::array<double, 15> x{};
  std::array<double, 15> wk{};
  std::array<double, 15> wg{};  // zero at Kronrod-only nodes
};

const Rule15& rule() {
  static const Rule15 r = [] {
    Rule15 out;
    for (std::size_t i = 0; i < 7; ++i) {
      out.x[i] = -kXgk[i];
      out.x[14 - i] = kXgk[i];
      out.wk[i] = out.wk[14 - i] = kWgk[i];
      const double g = (i % 2 == 1) ? kWg[i / 2] : 0.0;
      out.wg[i] = out.wg[14 - i] = g;
    }
    out.x[7] = 0.0;
    out.wk[7] = kWgk[7];
    out.wg[7] = kWg[3];
    return out;
  }();
  return r;
}

class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

struct Region {
  Rect rect;
  std::size_t piece;
  double value;
  double error;
  bool split_x;
  std::size_t id;
};

struct WorseFirst {
  bool operator()(const Region& a, const Region& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.id > b.id;
  }
};

Region evaluate(const Integrand2& f, const Rect& r, std::size_t piece, std::size_t id) {
  const auto& q = rule();
  const double cx = 0.5 * (r.x1 + r.x2), hx = 0.5 * (r.x2 - r.x1);
  const double cy = 0.5 * (r.y1 + r.y2), hy = 0.5 * (r.y2 - r.y1);
  double k = 0.0, gx = 0.0, gy = 0.0;
  std::array<double, 15> col_k{};  // Kronrod in y, per x node
  std::array<double, 15> col_g{};  // Gauss in y, per x node
  for (std::size_t i = 0; i < 15; ++i) {
    const double x = cx + hx * q.x[i];
    double sk = 0.0, sg = 0.0;
    for (std::size_t j = 0; j < 15; ++j) {
      const double v = f(x, cy + hy * q.x[j]);
      sk += q.wk[j] * v;
      sg += q.wg[j] * v;
    }
    col_k[i] = sk;
    col_g[i] = sg;
  }
  for (std::size_t i = 0; i < 15; ++i) {
    k += q.wk[i] * col_k[i];
    gx += q.wg[i] * col_k[i];
    gy += q.wk[i] * col_g[i];
  }
  const double scale = hx * hy;
  const double ex = std::abs(k - gx) * scale;
  const double ey = std::abs(k - gy) * scale;
  bool split_x = ex > ey || (ex == ey && (r.x2 - r.x1) >= (r.y2 - r.y1));
  return Region{r, piece, k * scale, ex + ey, split_x, id};
}

}  // namespace

Result integrate(const std::vector<Piece>& pieces, const Options& opt) {
  Result res;
  // Max-heap kept in a plain vector so the regions can be summed in place.
  // The storage order depends only on the push/pop sequence.
  std::vector<Region> heap;
  const WorseFirst cmp;
  std::size_t next_id = 0;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const Rect& r = pieces[p].rect;
    if (!(r.x2 > r.x1) || !(r.y2 > r.y1)) continue;
    heap.push_back(evaluate(pieces[p].f, r, p, next_id++));
    std::push_heap(heap.begin(), heap.end(), cmp);
    res.evaluations += 225;
  }
  const auto resum = [&] {
    Accumulator acc;
    double err = 0.0;
    for (const auto& it : heap) {
      acc.add(it.value);
      err += it.error;
    }
    return std::pair{acc.value(), err};
  };
  const auto tolerance = [&](double v) { return std::max(opt.abs_tol, opt.rel_tol * std::abs(v)); };

  auto [value, total_err] = resum();
  std::size_t since_sync = 0;
  while (!heap.empty()) {
    if (total_err <= tolerance(value)) {
      std::tie(value, total_err) = resum();
      if (total_err <= tolerance(value)) break;
    }
    if (heap.size() >= opt.max_regions) break;
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const Region worst = heap.back();
    Rect a = worst.rect, b = worst.rect;
    if (worst.split_x) {
      const double mid = 0.5 * (a.x1 + a.x2);
      a.x2 = mid;
      b.x1 = mid;
    } else {
      const double mid = 0.5 * (a.y1 + a.y2);
      a.y2 = mid;
      b.y1 = mid;
    }
    if (a.x2 <= a.x1 || a.y2 <= a.y1 || b.x2 <= b.x1 || b.y2 <= b.y1) {
      // Cannot refine further in floating point.
      std::push_heap(heap.begin(), heap.end(), cmp);
      break;
    }
    heap.pop_back();
    const Integrand2& f = pieces[worst.piece].f;
    for (const Rect& r : {a, b}) {
      const Region reg = evaluate(f, r, worst.piece, next_id++);
      value += reg.value;
      total_err += reg.error;
      heap.push_back(reg);
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
    res.evaluations += 450;
    if (++since_sync == 64) {
      since_sync = 0;
      std::tie(value, total_err) = resum();
    } else {
      value -= worst.value;
      total_err -= worst.error;
    }
  }
  std::tie(res.value, res.error) = resum();
  res.regions = heap.size();
  res.converged = res.error <= tolerance(res.value);
  return res;
}

Result integrate(const Integrand2& f, const Rect& rect, const Options& opt) {
  return integrate(std::vector<Piece>{Piece{f, rect}}, opt);
}

Result integrate(const Integrand1& f, double a, double b, const Options& opt) {
  const auto& q = rule();
  struct Seg {
    double a, b, value, error;
    std::size_t id;
  };
  const auto eval = [&](double lo, double hi, std::size_t id) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double k = 0.0, g = 0.0;
    for (std::size_t i = 0; i < 15; ++i) {
      const double v = f(c + h * q.x[i]);
      k += q.wk[i] * v;
      g += q.wg[i] * v;
    }
    return Seg{lo, hi, k * h, std::abs(k - g) * h, id};
  };
  const auto worse = [](const Seg& x, const Seg& y) {
    if (x.error != y.error) return x.error < y.error;
    return x.id > y.id;
  };
  std::priority_queue<Seg, std::vector<Seg>, decltype(worse)> heap(worse);
  Result res;
  if (!(b > a)) return res;
  std::size_t next = 0;
  heap.push(eval(a, b, next++));
  res.evaluations = 15;
  double value = heap.top().value, err = heap.top().error;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
    if (heap.size() >= opt.max_regions) {
      res.converged = false;
      break;
    }
    Seg w = heap.top();
    const double mid = 0.5 * (w.a + w.b);
    if (!(mid > w.a && mid < w.b)) {
      res.converged = false;
      break;
    }
    heap.pop();
    Seg l = eval(w.a, mid, next++), r = eval(mid, w.b, next++);
    res.evaluations += 30;
    value += l.value + r.value - w.value;
    err += l.error + r.error - w.error;
    heap.push(l);
    heap.push(r);
  }
  std::vector<Seg> items;
  while (!heap.empty()) {
    items.push_back(heap.top());
    heap.pop();
  }
  std::sort(items.begin(), items.end(), [](const Seg& x, const Seg& y) { return x.id < y.id; });
  Accumulator acc;
  double e = 0.0;
  for (const auto& s : items) {
    acc.add(s.value);
    e += s.error;
  }
  res.value = acc.value();
  res.error = e;
  res.regions = items.size();
  return res;
}

}  // namespace gnmci::quad
