#pragma once

// Adaptive Gauss-Kronrod quadrature in one and two dimensions.
//
// The 2-D rule is the tensor product of the 7/15-point pair. Regions are kept
// in a max-heap on their error estimate and the worst one is bisected along
// the axis whose embedded Gauss rule disagrees most. Ties are broken by
// creation order, so a given integrand always sees the same refinement.

#include <cstddef>
#include <functional>
#include <vector>

namespace gnmci::quad {

struct Rect {
  double x1, x2, y1, y2;
};

struct Options {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  std::size_t max_regions = 400000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  std::size_t regions = 0;
  std::size_t evaluations = 0;
};

using Integrand1 = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

struct Piece {
  Integrand2 f;
  Rect rect;
};

Result integrate(const Integrand1& f, double a, double b, const Options& opt = {});
Result integrate(const Integrand2& f, const Rect& rect, const Options& opt = {});
/// Sum of several integrals refined against one shared tolerance.
Result integrate(const std::vector<Piece>& pieces, const Options& opt = {});

}  // namespace gnmci::quad
