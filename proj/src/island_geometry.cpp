#include "gnmci/island_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace gnmci {

namespace {

double unit_step(double x) {
  if (x > 0.0) return 1.0;
  if (x < 0.0) return 0.0;
  return 0.5;
}

}  // namespace

IslandSquare island_descriptor(const Channel& ch_m, const Channel& ch_n, const Channel& ch_k, double f) {
  IslandSquare isl;
  isl.origin = f;

  const double sm = ch_m.f_start - f, em = ch_m.f_end - f;
  const double sn = ch_n.f_start - f, en = ch_n.f_end - f;
  // f'_{s,k} = f_{s,k} + f, measured from 2f.
  const double sk = ch_k.f_start - f, ek = ch_k.f_end - f;
  const double bw_m = em - sm, bw_n = en - sn;
  const double mid_m = 0.5 * (em + sm), mid_n = 0.5 * (en + sn);

  // Lower corner triangle, middle band, upper corner triangle.
  const auto s1 = [&](double tau) { return 0.5 * (tau - sm - sn) * (tau - sm - sn); };
  const auto f1_zone1 = [&](double tau) { return (2.0 * sm + tau - sn) / 3.0; };
  const auto f2_zone1 = [&](double tau) { return (2.0 * sn + tau - sm) / 3.0; };
  const auto s2 = [&](double t1, double t2) { return (t2 - t1) * std::min(bw_m, bw_n); };
  const auto f1_zone2 = [&](double t1, double t2) {
    return mid_m * unit_step(bw_n - bw_m) + (0.5 * (t1 + t2) - mid_n) * unit_step(bw_m - bw_n);
  };
  const auto f2_zone2 = [&](double t1, double t2) {
    return mid_n * unit_step(bw_m - bw_n) + (0.5 * (t1 + t2) - mid_m) * unit_step(bw_n - bw_m);
  };
  const auto s3 = [&](double tau) { return 0.5 * (tau - em - en) * (tau - em - en); };
  const auto f1_zone3 = [&](double tau) { return (2.0 * em + tau - en) / 3.0; };
  const auto f2_zone3 = [&](double tau) { return (2.0 * en + tau - em) / 3.0; };

  isl.F1 = sm + sn;
  isl.F2 = std::min(sm + en, em + sn);
  isl.F3 = std::max(sm + en, em + sn);
  isl.F4 = em + en;

  isl.tau1_plus = std::min(ek, isl.F2);
  isl.tau1_minus = std::max(sk, isl.F1);
  isl.tau1 = std::max(sk, isl.F2);
  isl.tau2 = std::min(ek, isl.F3);
  isl.tau3_plus = std::max(sk, isl.F3);
  isl.tau3_minus = std::min(ek, isl.F4);

  const double gate1 = unit_step(isl.F2 - sk) * unit_step(ek - isl.F1);
  const double gate2 = unit_step(isl.F3 - sk) * unit_step(ek - isl.F2);
  const double gate3 = unit_step(isl.F4 - sk) * unit_step(ek - isl.F3);

  isl.S1_plus = s1(isl.tau1_plus) * gate1;
  isl.S1_minus = s1(isl.tau1_minus) * gate1;
  isl.S2 = s2(isl.tau1, isl.tau2) * gate2;
  isl.S3_plus = s3(isl.tau3_plus) * gate3;
  isl.S3_minus = s3(isl.tau3_minus) * gate3;

  const double area = isl.S1_plus - isl.S1_minus + isl.S2 + isl.S3_plus - isl.S3_minus;
  if (!(area > 0.0)) {
    isl.area = 0.0;
    return isl;
  }

  // Centroid denominators reuse the area above.
  const double m1 = isl.S1_plus * f1_zone1(isl.tau1_plus) - isl.S1_minus * f1_zone1(isl.tau1_minus) +
                    isl.S2 * f1_zone2(isl.tau1, isl.tau2) + isl.S3_plus * f1_zone3(isl.tau3_plus) -
                    isl.S3_minus * f1_zone3(isl.tau3_minus);
  const double m2 = isl.S1_plus * f2_zone1(isl.tau1_plus) - isl.S1_minus * f2_zone1(isl.tau1_minus) +
                    isl.S2 * f2_zone2(isl.tau1, isl.tau2) + isl.S3_plus * f2_zone3(isl.tau3_plus) -
                    isl.S3_minus * f2_zone3(isl.tau3_minus);
  isl.area = area;
  isl.f1_offset = m1 / area;
  isl.f2_offset = m2 / area;
  isl.side = std::sqrt(area);
  isl.empty = false;
  return isl;
}

TripleClass classify_triple(std::size_t m, std::size_t n, std::size_t k, std::size_t cut) {
  const bool mc = m == cut, nc = n == cut, kc = k == cut;
  if (mc && nc && kc) return TripleClass::sci;
  if (mc && nc) return TripleClass::xci1;
  if (mc && kc) return TripleClass::xci2;
  if (kc && nc) return TripleClass::xci3;
  if (mc && k == n) return TripleClass::xci4;
  if (nc && k == m) return TripleClass::xci5;
  if (kc && m == n) return TripleClass::xci6;
  return TripleClass::mci;
}

std::string_view to_string(TripleClass c) {
  switch (c) {
    case TripleClass::sci: return "SCI";
    case TripleClass::xci1: return "XCI1";
    case TripleClass::xci2: return "XCI2";
    case TripleClass::xci3: return "XCI3";
    case TripleClass::xci4: return "XCI4";
    case TripleClass::xci5: return "XCI5";
    case TripleClass::xci6: return "XCI6";
    case TripleClass::mci: return "MCI";
  }
  return "?";
}

PartitionCounts count_partition(std::size_t num_channels, std::size_t cut) {
  PartitionCounts counts;
  for (std::size_t m = 0; m < num_channels; ++m)
    for (std::size_t n = 0; n < num_channels; ++n)
      for (std::size_t k = 0; k < num_channels; ++k) {
        const auto c = classify_triple(m, n, k, cut);
        if (c == TripleClass::sci) ++counts.sci;
        else if (c == TripleClass::mci) ++counts.mci;
        else ++counts.xci;
      }
  return counts;
}

}  // namespace gnmci
