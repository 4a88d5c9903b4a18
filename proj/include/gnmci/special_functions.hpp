#pragma once

#include <span>

namespace gnmci::special {

/// F_int(x) = j (Li2(-jx) - Li2(jx)) = 2 Im Li2(jx), i.e. twice the inverse
/// tangent integral. Odd, strictly increasing, real for real x.
/// Throws std::domain_error for non-finite input.
double f_int(double x);

/// pi * asinh(x / 2), the large-argument approximation of f_int.
double f_int_asinh(double x);

/// Sum_{k=1..n} 1/k; zero for n = 0. Throws std::invalid_argument for n < 0.
double harmonic_number(long long n);

/// Si(x) = integral_0^x sin(t)/t dt.
double sine_integral(double x);

/// Si(x)/x, continuous at x = 0.
double sine_integral_over_x(double x);

/// asinh(x)/x, continuous at x = 0.
double asinh_over_x(double x);

struct Box {
  double x1, x2, y1, y2;
};

/// An odd scalar kernel K(t) together with its Taylor coefficients c_m of
/// t^(2m+1). `log_tail` marks kernels with K(t) = sgn(t) pi ln|t| + 2 Ti2(1/t)
/// (true only for f_int), which enables the large-argument branch.
struct OddKernel {
  double (*eval)(double);
  std::span<const double> taylor;
  double series_radius;  // largest |t| where the Taylor branch is used
  bool log_tail;
};

enum class FintMode { dilog, asinh };

const OddKernel& kernel(FintMode mode);

/// (B / 2A) * (K(A X1 Y1) + K(A X2 Y2) - K(A X2 Y1) - K(A X1 Y2)).
///
/// With K = f_int this is exactly the integral of B / (1 + A^2 x^2 y^2) over
/// the box. When |A| max|xy| is below the kernel's series radius the
/// factorized Taylor expansion is used, so A -> 0 tends to B * area without
/// cancellation. Throws std::invalid_argument for reversed bounds.
double corner_integral(const OddKernel& k, double a, double b, const Box& box);

inline double corner_integral(FintMode mode, double a, double b, const Box& box) {
  return corner_integral(kernel(mode), a, b, box);
}

/// Exact integral of B / (1 + x^2 y^2 A^2) over [X1,X2] x [Y1,Y2].
double rect_lorentzian_integral(double a, double b, double x1, double x2, double y1, double y2);

}  // namespace gnmci::special
