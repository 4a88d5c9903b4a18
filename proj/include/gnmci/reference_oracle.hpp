#pragma once

// Brute-force validators for the closed form: exact island polygons,
// adaptive quadrature of the GN integrand, and a high-precision F_int.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gnmci/model_types.hpp"
#include "gnmci/quadrature.hpp"

namespace gnmci::oracle {

struct Point2 {
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Island as a convex polygon. Vertices and centroid are offsets from
/// `origin` (f1 - f, f2 - f), counterclockwise.
struct IslandPolygon {
  double origin = 0.0;
  std::vector<Point2> vertices;
  double area = 0.0;
  Point2 centroid;

  bool empty() const { return !(area > 0.0); }
};

enum class ClipOrder { lower_first, upper_first };

/// Rectangle channel_m x channel_n clipped by f_s,k <= f1 + f2 - f <= f_e,k.
IslandPolygon island_polygon_exact(std::span<const Channel> comb, std::size_t m, std::size_t n, std::size_t k,
                                   double f, ClipOrder order = ClipOrder::lower_first);

/// 2 Im Li2(jx) from an accelerated alternating series in extended precision.
double dilog_series(double x);

struct OracleResult {
  double value = 0.0;  // W/Hz
  double error = 0.0;  // estimated absolute error
  bool converged = true;
  std::size_t regions = 0;
};

inline quad::Options square_defaults() { return quad::Options{1e-9, 0.0, 400000}; }
inline quad::Options island_defaults() { return quad::Options{1e-7, 0.0, 400000}; }

/// Integral of sum_s gamma^2 g0^2 |xi|^2 over the equal-area square centered
/// on the polygon centroid, times 16/27 G_m G_n G_k.
OracleResult gn_quadrature_square(const Link& link, double f, std::size_t m, std::size_t n, std::size_t k,
                                  const quad::Options& opt = square_defaults());

/// Same integrand over the exact island polygon.
OracleResult gn_quadrature_true_island(const Link& link, double f, std::size_t m, std::size_t n, std::size_t k,
                                       const quad::Options& opt = island_defaults());

enum class Domain { square, true_island };
using TripleFilter = std::function<bool(std::size_t, std::size_t, std::size_t)>;

/// Sum over all triples (or those accepted by `filter`), lexicographic order.
OracleResult gn_quadrature_total(const Link& link, double f, Domain domain, const quad::Options& opt,
                                 const TripleFilter& filter = {});

}  // namespace gnmci::oracle
