#include "gnmci/special_functions.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gnmci::special {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// B_{2k} / (2k+1)!, k = 1..10.
const std::array<double, 10>& bernoulli_over_factorial() {
  static const std::array<double, 10> table = [] {
    const std::array<std::pair<double, double>, 10> b2k = {{
        {1.0, 6.0},
        {-1.0, 30.0},
        {1.0, 42.0},
        {-1.0, 30.0},
        {5.0, 66.0},
        {-691.0, 2730.0},
        {7.0, 6.0},
        {-3617.0, 510.0},
        {43867.0, 798.0},
        {-174611.0, 330.0},
    }};
    std::array<double, 10> out{};
    double fact = 1.0;  // (2k+1)!
    int n = 1;
    for (std::size_t k = 0; k < b2k.size(); ++k) {
      while (n < static_cast<int>(2 * (k + 1) + 1)) fact *= ++n;
      out[k] = b2k[k].first / b2k[k].second / fact;
    }
    return out;
  }();
  return table;
}

// Inverse tangent integral Ti2(x) = Im Li2(jx), 0 <= x.
double ti2_positive(double x) {
  if (x <= 0.5) {
    const double x2 = x * x;
    double power = x, sum = 0.0;
    for (int m = 0; m < 200; ++m) {
      const double den = 2.0 * m + 1.0;
      const double term = power / (den * den);
      sum += (m % 2 == 0) ? term : -term;
      if (term < 0.25 * kEps * sum) break;
      power *= x2;
    }
    return sum;
  }
  if (x <= 1.0) {
    // Li2(z) = sum_n B_n u^(n+1)/(n+1)!, u = -ln(1 - z), |u| < 2 pi.
    const std::complex<double> u = -std::log(std::complex<double>(1.0, -x));
    const std::complex<double> u2 = u * u;
    std::complex<double> sum = u - 0.25 * u2;
    std::complex<double> power = u;
    for (double b : bernoulli_over_factorial()) {
      power *= u2;
      sum += b * power;
    }
    return sum.imag();
  }
  // Ti2(x) - Ti2(1/x) = (pi/2) ln x for x > 0.
  return ti2_positive(1.0 / x) + 0.5 * kPi * std::log(x);
}

// hi^n - lo^n for odd n without cancellation when lo and hi share a sign.
struct PowerDifference {
  double lo, hi;
  double diff;       // hi - lo
  double lo_pow;     // lo^n
  double hi_pow;     // hi^n
  double partial;    // sum_{i<n} hi^(n-1-i) lo^i
  int n = 1;
  bool same_sign;

  PowerDifference(double lo_, double hi_) : lo(lo_), hi(hi_), diff(hi_ - lo_), lo_pow(lo_), hi_pow(hi_), partial(1.0) {
    same_sign = (lo > 0.0 && hi > 0.0) || (lo < 0.0 && hi < 0.0);
  }

  double value() const { return same_sign ? diff * partial : hi_pow - lo_pow; }

  // Advance n -> n + 2.
  void step() {
    for (int r = 0; r < 2; ++r) {
      partial = hi * partial + lo_pow;
      lo_pow *= lo;
      hi_pow *= hi;
    }
    n += 2;
  }
};

// sum_m c_m t^(2m) dX_m dY_m with dX_m = X2^(2m+1) - X1^(2m+1) on scaled boxes.
double factorized_series(std::span<const double> c, double t, double x1, double x2, double y1, double y2) {
  PowerDifference px(x1, x2), py(y1, y2);
  const double t2 = t * t;
  double tp = 1.0, sum = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double term = c[m] * tp * px.value() * py.value();
    sum += term;
    if (m > 2 && std::abs(term) <= 0.1 * kEps * std::abs(sum)) break;
    tp *= t2;
    px.step();
    py.step();
  }
  return sum;
}

std::array<double, 48> dilog_taylor() {
  std::array<double, 48> c{};
  for (std::size_t m = 0; m < c.size(); ++m) {
    const double den = 2.0 * m + 1.0;
    c[m] = (m % 2 == 0 ? 2.0 : -2.0) / (den * den);
  }
  return c;
}

std::array<double, 48> asinh_taylor() {
  // pi asinh(t/2) = pi sum_m (-1)^m (2m)! / (4^m (m!)^2 (2m+1)) (t/2)^(2m+1)
  std::array<double, 48> c{};
  double central = 1.0;  // (2m)! / (4^m (m!)^2)
  double half_pow = 0.5;
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (m > 0) {
      central *= (2.0 * m - 1.0) / (2.0 * m);
      half_pow *= 0.25;
    }
    c[m] = (m % 2 == 0 ? 1.0 : -1.0) * kPi * central / (2.0 * m + 1.0) * half_pow;
  }
  return c;
}

// ln terms cancel when all corners share a sign; what is left is
// 2 sum +-Ti2(1/(A x y)), expanded in the reciprocal box.
double log_tail_series(double a, double b, const Box& box) {
  const double inv_x_small = 1.0 / box.x2, inv_x_large = 1.0 / box.x1;  // u ordering: hi = 1/X1
  const double inv_y_small = 1.0 / box.y2, inv_y_large = 1.0 / box.y1;
  const double sx = std::max(std::abs(inv_x_small), std::abs(inv_x_large));
  const double sy = std::max(std::abs(inv_y_small), std::abs(inv_y_large));
  const double kappa = sx * sy / a;
  static const auto c = dilog_taylor();
  // 2 Ti2(s) = sum_m c_m s^(2m+1) with the same coefficients as f_int.
  const double series = factorized_series(c, kappa, inv_x_small / sx, inv_x_large / sx, inv_y_small / sy,
                                          inv_y_large / sy);
  return b / (2.0 * a) * kappa * series;
}

}  // namespace

double f_int(double x) {
  if (!std::isfinite(x)) throw std::domain_error("f_int: non-finite argument");
  const double v = 2.0 * ti2_positive(std::abs(x));
  return x < 0.0 ? -v : v;
}

double f_int_asinh(double x) { return kPi * std::asinh(0.5 * x); }

double harmonic_number(long long n) {
  if (n < 0) throw std::invalid_argument("harmonic_number: negative n");
  double sum = 0.0;
  for (long long k = n; k >= 1; --k) sum += 1.0 / static_cast<double>(k);
  return sum;
}

double sine_integral(double x) {
  const double t = std::abs(x);
  if (t == 0.0) return 0.0;
  double si;
  if (t <= 4.0) {
    const double t2 = t * t;
    double power = t, fact = 1.0, sum = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double n = 2.0 * k + 1.0;
      if (k > 0) fact *= (n - 1.0) * n;
      const double term = power / (n * fact);
      sum += (k % 2 == 0) ? term : -term;
      if (term < 0.1 * kEps * std::abs(sum)) break;
      power *= t2;
    }
    si = sum;
  } else {
    // Continued fraction for E1(i t) evaluated with the modified Lentz method.
    constexpr double kTiny = 1e-300;
    std::complex<double> b(1.0, t);
    std::complex<double> c(1.0 / kTiny, 0.0);
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 2; i < 100000; ++i) {
      const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
      b += 2.0;
      d = 1.0 / (a * d + b);
      c = b + a / c;
      const std::complex<double> del = c * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    h *= std::complex<double>(std::cos(t), -std::sin(t));
    const std::complex<double> cs = -std::conj(h) + std::complex<double>(0.0, 0.5 * kPi);
    si = cs.imag();
  }
  return x < 0.0 ? -si : si;
}

double sine_integral_over_x(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 18.0 + x2 * x2 / 600.0;
  }
  return sine_integral(x) / x;
}

double asinh_over_x(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + 3.0 * x2 * x2 / 40.0;
  }
  return std::asinh(x) / x;
}

const OddKernel& kernel(FintMode mode) {
  static const auto dilog_c = dilog_taylor();
  static const auto asinh_c = asinh_taylor();
  static const OddKernel dilog{&f_int, std::span<const double>(dilog_c), 0.5, true};
  static const OddKernel asinh{&f_int_asinh, std::span<const double>(asinh_c), 0.5, false};
  return mode == FintMode::dilog ? dilog : asinh;
}

double corner_integral(const OddKernel& k, double a, double b, const Box& box) {
  if (!(box.x1 <= box.x2) || !(box.y1 <= box.y2))
    throw std::invalid_argument("corner_integral: reversed integration bounds");
  if (box.x1 == box.x2 || box.y1 == box.y2 || b == 0.0) return 0.0;
  a = std::abs(a);  // the kernel is odd
  const double sx = std::max(std::abs(box.x1), std::abs(box.x2));
  const double sy = std::max(std::abs(box.y1), std::abs(box.y2));
  const double t = a * sx * sy;
  if (t <= k.series_radius) {
    return 0.5 * b * sx * sy *
           factorized_series(k.taylor, t, box.x1 / sx, box.x2 / sx, box.y1 / sy, box.y2 / sy);
  }
  if (k.log_tail) {
    const bool x_one_sign = (box.x1 > 0.0) || (box.x2 < 0.0);
    const bool y_one_sign = (box.y1 > 0.0) || (box.y2 < 0.0);
    if (x_one_sign && y_one_sign) {
      const double min_corner = a * std::min(std::abs(box.x1), std::abs(box.x2)) *
                                std::min(std::abs(box.y1), std::abs(box.y2));
      if (min_corner >= 1.0 / k.series_radius) return log_tail_series(a, b, box);
    }
  }
  const double sum = k.eval(a * box.x1 * box.y1) + k.eval(a * box.x2 * box.y2) - k.eval(a * box.x2 * box.y1) -
                     k.eval(a * box.x1 * box.y2);
  return b / (2.0 * a) * sum;
}

double rect_lorentzian_integral(double a, double b, double x1, double x2, double y1, double y2) {
  return corner_integral(FintMode::dilog, a, b, Box{x1, x2, y1, y2});
}

}  // namespace gnmci::special
