#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "gnmci/config.hpp"
#include "gnmci/model_types.hpp"
#include "helpers.hpp"

using namespace gnmci;

namespace {

const char* kDoc = R"({
  "spans": [
    {"length_km": 100, "alpha_db_km": 0.22, "gamma_1_w_km": 1.3, "beta2_ps2_km": -21.27,
     "beta3_ps3_km": 0.14, "fc_thz": 193.41, "edfa_gain_db": "transparent", "nf_db": 5.0},
    {"length_km": 80, "alpha_db_km": 0.2, "gamma_1_w_km": 1.3, "beta2_ps2_km": -21.27,
     "beta3_ps3_km": 0.14, "fc_thz": 193.41, "edfa_gain_db": 16, "nf_db": 5.5}
  ],
  "comb": [
    {"center_thz": 193.51, "baud_gbaud": 64, "rolloff": 0.1, "format": "QPSK", "power_dbm": 1.0},
    {"center_thz": 193.41, "baud_gbaud": 64, "rolloff": 0.15, "format": "16QAM", "power_dbm": 0.0}
  ],
  "cut": 1
})";

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(units::db_per_km_to_np_per_m(0.22) == doctest::Approx(2.5328e-5).epsilon(1e-4));
  CHECK(units::np_per_m_to_db_per_km(units::db_per_km_to_np_per_m(0.17)) == doctest::Approx(0.17).epsilon(1e-14));
  // D = 16.7 ps/nm/km at 1550 nm
  const double b2 = units::dispersion_to_beta2(16.7, 1550e-9) / 1e-27;
  CHECK(b2 == doctest::Approx(-21.3).epsilon(2e-3));
  CHECK(units::dbm_to_watt(0.0) == doctest::Approx(1e-3));
}

TEST_CASE("channel geometry") {
  const Channel ch = testutil::channel(193.41e12, 64e9);
  CHECK(ch.f_start == 193.41e12 - 32e9);
  CHECK(ch.f_end == 193.41e12 + 32e9);
  CHECK(ch.bandwidth() == 64e9);
  CHECK(ch.center() == 193.41e12);
}

TEST_CASE("profile interpolation") {
  const Profile p({{1.0, 2.0}, {3.0, 6.0}});
  CHECK(p(0.0) == 2.0);
  CHECK(p(2.0) == doctest::Approx(4.0));
  CHECK(p(10.0) == 6.0);
  CHECK_FALSE(p.is_constant());
  CHECK_THROWS_AS(p.constant_value(), ModelError);
  CHECK(Profile(0.3).constant_value() == 0.3);
  CHECK(Profile().is_zero());
}

TEST_CASE("link validation") {
  Link link;
  link.spans.push_back(testutil::flat_span());
  link.comb = testutil::uniform_comb(3, 75e9, 64e9);
  CHECK_NOTHROW(link.validate());

  SUBCASE("overlap") {
    link.comb[1].f_start = link.comb[0].f_end - 1e9;
    CHECK_THROWS_AS(link.validate(), ModelError);
  }
  SUBCASE("zero bandwidth") {
    link.comb[0].f_end = link.comb[0].f_start;
    CHECK_THROWS_AS(link.validate(), ModelError);
  }
  SUBCASE("negative psd") {
    link.comb[2].psd = -1.0;
    CHECK_THROWS_AS(link.validate(), ModelError);
  }
  SUBCASE("rolloff range") {
    link.comb[2].rolloff = 1.5;
    CHECK_THROWS_AS(link.validate(), ModelError);
  }
  SUBCASE("span length") {
    link.spans[0].length = 0.0;
    CHECK_THROWS_AS(link.validate(), ModelError);
  }
  SUBCASE("raman decay") {
    link.spans[0].alpha1 = Profile(1e-5);
    link.spans[0].sigma = Profile(0.0);
    CHECK_THROWS_AS(link.validate(), ModelError);
  }
  SUBCASE("cut out of range") {
    link.cut_index = 3;
    CHECK_THROWS(link.validate());
  }
}

TEST_CASE("normalize_comb keeps the cut and is idempotent") {
  Link link;
  link.spans.push_back(testutil::flat_span());
  link.comb = testutil::uniform_comb(4, 75e9, 64e9);
  const double cut_center = link.comb[1].center();
  std::swap(link.comb[0], link.comb[3]);
  link.cut_index = 1;
  normalize_comb(link);
  CHECK(link.comb[link.cut_index].center() == cut_center);
  for (std::size_t i = 1; i < link.comb.size(); ++i) CHECK(link.comb[i - 1].f_start < link.comb[i].f_start);
  const Link once = link;
  normalize_comb(link);
  CHECK(link.cut_index == once.cut_index);
  for (std::size_t i = 0; i < link.comb.size(); ++i) CHECK(link.comb[i].f_start == once.comb[i].f_start);
}

TEST_CASE("config ingest") {
  const Link link = ingest_link_config(kDoc);
  REQUIRE(link.comb.size() == 2);
  CHECK(link.comb[0].center() == doctest::Approx(193.41e12));
  CHECK(link.cut().center() == doctest::Approx(193.41e12));
  CHECK(link.comb[0].phi == doctest::Approx(0.68));
  CHECK(link.comb[1].phi == doctest::Approx(1.0));
  CHECK(link.comb[1].power() == doctest::Approx(std::pow(10.0, 0.1) * 1e-3));
  CHECK(link.spans[0].transparent_gain);
  CHECK(link.spans[1].gain(193e12) == doctest::Approx(std::pow(10.0, 1.6)));
  CHECK(link.spans[0].alpha0.constant_value() == doctest::Approx(2.5328e-5).epsilon(1e-4));
}

TEST_CASE("config round trip") {
  const Link a = ingest_link_config(kDoc);
  const Link b = ingest_link_config(emit_link_config(a));
  REQUIRE(a.comb.size() == b.comb.size());
  REQUIRE(a.spans.size() == b.spans.size());
  CHECK(a.cut_index == b.cut_index);
  for (std::size_t i = 0; i < a.comb.size(); ++i) {
    CHECK(testutil::rel_err(a.comb[i].f_start, b.comb[i].f_start) <= 1e-12);
    CHECK(testutil::rel_err(a.comb[i].f_end, b.comb[i].f_end) <= 1e-12);
    CHECK(testutil::rel_err(a.comb[i].psd, b.comb[i].psd) <= 1e-12);
    CHECK(testutil::rel_err(a.comb[i].phi, b.comb[i].phi) <= 1e-12);
  }
  for (std::size_t s = 0; s < a.spans.size(); ++s) {
    CHECK(testutil::rel_err(a.spans[s].length, b.spans[s].length) <= 1e-12);
    CHECK(testutil::rel_err(a.spans[s].beta2, b.spans[s].beta2) <= 1e-12);
    CHECK(testutil::rel_err(a.spans[s].beta3, b.spans[s].beta3) <= 1e-12);
    CHECK(testutil::rel_err(a.spans[s].alpha0(193e12), b.spans[s].alpha0(193e12)) <= 1e-12);
    CHECK(testutil::rel_err(a.spans[s].gain(193e12), b.spans[s].gain(193e12)) <= 1e-12);
    CHECK(a.spans[s].transparent_gain == b.spans[s].transparent_gain);
  }
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(ingest_link_config("{not json"), ConfigError);
  CHECK_THROWS_AS(ingest_link_config(R"({"spans": [], "comb": []})"), ConfigError);
  const std::string span =
      R"({"length_km": 100, "alpha_db_km": 0.2, "gamma_1_w_km": 1.3, "beta2_ps2_km": -21, "fc_thz": 193.4,
          "edfa_gain_db": "transparent"})";
  const std::string ch = R"({"center_thz": 193.4, "baud_gbaud": 64, "format": "QPSK", "power_dbm": 0})";
  CHECK_NOTHROW(ingest_link_config(R"({"spans": [)" + span + R"(], "comb": [)" + ch + "]}"));
  // missing gamma
  CHECK_THROWS_AS(ingest_link_config(R"({"spans": [{"length_km": 100, "alpha_db_km": 0.2, "beta2_ps2_km": -21,
      "edfa_gain_db": "transparent"}], "comb": [)" + ch + "]}"),
                  ConfigError);
  // unknown format without phi
  CHECK_THROWS_AS(ingest_link_config(R"({"spans": [)" + span +
                                     R"(], "comb": [{"center_thz": 193.4, "baud_gbaud": 64, "format": "APSK-7",
                                        "power_dbm": 0}]})"),
                  ConfigError);
  // overlapping channels
  CHECK_THROWS_AS(ingest_link_config(R"({"spans": [)" + span + R"(], "comb": [)" + ch + "," + ch + "]}"),
                  ConfigError);
  // negative length
  CHECK_THROWS_AS(ingest_link_config(R"({"spans": [{"length_km": -1, "alpha_db_km": 0.2, "gamma_1_w_km": 1.3,
      "beta2_ps2_km": -21, "edfa_gain_db": "transparent"}], "comb": [)" + ch + "]}"),
                  ConfigError);
}

TEST_CASE("modulation constants") {
  CHECK(*builtin_phi("QPSK") == doctest::Approx(1.0));
  CHECK(*builtin_phi("PM-16QAM") == doctest::Approx(0.68));
  CHECK(*builtin_phi("64qam") == doctest::Approx(0.619047619).epsilon(1e-8));
  CHECK(*builtin_phi("Gaussian") == 0.0);
  CHECK_FALSE(builtin_phi("OOK").has_value());

  CHECK(compute_phi(square_qam(4)) == doctest::Approx(1.0));
  CHECK(compute_phi(square_qam(16)) == doctest::Approx(0.68));
  CHECK(compute_phi(square_qam(256)) == doctest::Approx(*builtin_phi("256QAM")));
  CHECK(compute_phi(cross_qam32()) == doctest::Approx(*builtin_phi("32QAM")));
  CHECK(compute_phi(rect_qam8()) == doctest::Approx(*builtin_phi("8QAM")));

  // scale and rotation invariance
  auto pts = square_qam(16);
  for (auto& p : pts) p *= std::polar(3.7, 0.4);
  CHECK(compute_phi(pts) == doctest::Approx(0.68));

  std::vector<std::complex<double>> none;
  CHECK_THROWS_AS(compute_phi(none), std::invalid_argument);
  std::vector<std::complex<double>> zero = {0.0, 0.0};
  CHECK_THROWS_AS(compute_phi(zero), std::invalid_argument);

  // non-uniform probabilities: two-level ring
  std::vector<ConstellationPoint> ring = {{1.0, 0.5}, {2.0, 0.5}};
  const double e2 = 0.5 * 1 + 0.5 * 4, e4 = 0.5 * 1 + 0.5 * 16;
  CHECK(compute_phi(ring) == doctest::Approx(2.0 - e4 / (e2 * e2)));
}
