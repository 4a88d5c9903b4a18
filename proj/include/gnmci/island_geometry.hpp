#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "gnmci/model_types.hpp"

namespace gnmci {

/// Equal-area square replacing the integration island of one channel triple
/// (m, n, k) at evaluation frequency f. The island is the part of the
/// rectangle channel_m x channel_n where f1 + f2 - f falls inside channel_k.
///
/// All intermediate quantities are kept in coordinates shifted by the
/// evaluation frequency: per-axis offsets are f_i - f, and the quantities on
/// the f1 + f2 axis (F1..F4 and the taus) are measured from 2f. Channel
/// frequencies in one comb are within a factor of two of each other, so the
/// shift itself is exact.
struct IslandSquare {
  double origin = 0.0;     // evaluation frequency f, Hz
  double area = 0.0;       // S, Hz^2
  double f1_offset = 0.0;  // f1* - f, Hz (valid when !empty)
  double f2_offset = 0.0;  // f2* - f, Hz (valid when !empty)
  double side = 0.0;       // L1 = L2 = sqrt(S), Hz
  bool empty = true;

  // Diagnostics.
  double F1 = 0, F2 = 0, F3 = 0, F4 = 0;
  double tau1_plus = 0, tau1_minus = 0, tau1 = 0, tau2 = 0, tau3_plus = 0, tau3_minus = 0;
  double S1_plus = 0, S1_minus = 0, S2 = 0, S3_plus = 0, S3_minus = 0;

  double f1_star() const { return origin + f1_offset; }
  double f2_star() const { return origin + f2_offset; }
  double L1() const { return side; }
  double L2() const { return side; }
};

/// Area and centroid of the island by the closed-form zone decomposition,
/// with the half-valued unit step u(0) = 1/2. Tangent configurations whose
/// zone areas cancel to S = 0 are reported as empty; no epsilon is applied to
/// the step arguments, so such cases are decided by exact IEEE comparison.
IslandSquare island_descriptor(const Channel& ch_m, const Channel& ch_n, const Channel& ch_k, double f);

inline IslandSquare island_descriptor(std::span<const Channel> comb, std::size_t m, std::size_t n, std::size_t k,
                                      double f) {
  return island_descriptor(comb[m], comb[n], comb[k], f);
}

enum class TripleClass { sci, xci1, xci2, xci3, xci4, xci5, xci6, mci };

TripleClass classify_triple(std::size_t m, std::size_t n, std::size_t k, std::size_t cut);

inline bool is_xci(TripleClass c) { return c != TripleClass::sci && c != TripleClass::mci; }

std::string_view to_string(TripleClass c);

struct PartitionCounts {
  std::size_t sci = 0;
  std::size_t xci = 0;
  std::size_t mci = 0;
};

/// Enumerates all num_channels^3 triples.
PartitionCounts count_partition(std::size_t num_channels, std::size_t cut);

}  // namespace gnmci
