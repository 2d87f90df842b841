#include <cmath>
#include <string>

#include "doctest.h"
#include "dispel/common/error.hpp"
#include "dispel/common/kv.hpp"
#include "dispel/interconnect/itf.hpp"
#include "dispel/interconnect/tech_stack.hpp"

using namespace dispel;
using namespace dispel::interconnect;

namespace {
const std::string kStackFile = std::string(DISPEL_DATA_DIR) + "/tech/cu_5nm.itf";
}

TEST_CASE("resistivity matches the scalar oracle") {
  const TechStack s = default_stack();
  // tests/oracles/scalar_oracles.py
  CHECK(cu_resistivity(20, 20, s) == doctest::Approx(8.4995820176638354).epsilon(1e-12));
  CHECK(cu_resistivity(12, 24, s) == doctest::Approx(11.689182821989208).epsilon(1e-12));
  CHECK(cu_resistivity(1e4, 1e4, s) == doctest::Approx(1.913930746161939).epsilon(1e-9));
}

TEST_CASE("resistivity approaches bulk and grows as wires shrink") {
  const TechStack s = default_stack();
  CHECK(std::abs(cu_resistivity(1e4, 1e4, s) / s.rho_bulk - 1.0) < 0.02);
  CHECK(cu_resistivity(12, 24, s) > cu_resistivity(24, 48, s));
  CHECK(cu_resistivity(24, 48, s) > cu_resistivity(1000, 1000, s));
  double prev = 1e300;
  for (double w = 5; w < 2e5; w *= 1.3) {
    const double r = cu_resistivity(w, 2 * w, s);
    CHECK(r < prev);
    CHECK(r >= s.rho_bulk);
    prev = r;
  }
  // each dimension separately
  CHECK(cu_resistivity(12, 48, s) < cu_resistivity(12, 24, s));
  CHECK(cu_resistivity(24, 24, s) < cu_resistivity(12, 24, s));
  CHECK_THROWS_AS(cu_resistivity(0, 10, s), DomainError);
}

TEST_CASE("series branch of the grain term is continuous") {
  TechStack s = default_stack();
  s.mfp = 400;
  // alpha crosses 50 near w = mfp*R/(1-R)/50
  const double w0 = s.mfp * s.grain_r / (1 - s.grain_r) / 50.0;
  const double a = cu_resistivity(w0 * (1 - 1e-9), 100, s);
  const double b = cu_resistivity(w0 * (1 + 1e-9), 100, s);
  CHECK(a == doctest::Approx(b).epsilon(1e-7));
}

TEST_CASE("wire RC scales with the multiplier and the dielectric") {
  const TechStack s = default_stack();
  const WireRC m2 = wire_rc_per_um(s.layer("M2"), s);
  const TechStack s2 = scale_wire_resistance(s, 2.0);
  const WireRC m2x = wire_rc_per_um(s2.layer("M2"), s2);
  CHECK(m2x.r_per_um == doctest::Approx(2 * m2.r_per_um).epsilon(1e-15));
  CHECK(m2x.c_per_um == m2.c_per_um);

  LayerSpec low_k = s.layer("M2");
  low_k.k_ild *= 0.75;
  CHECK(wire_rc_per_um(low_k, s).c_per_um == doctest::Approx(0.75 * m2.c_per_um).epsilon(1e-14));
  CHECK(wire_rc_per_um(low_k, s).r_per_um == m2.r_per_um);

  // hand arithmetic: rho 11.689 uOhm cm over 12x24 nm
  CHECK(m2.r_per_um == doctest::Approx(11.689182821989208e4 / 288.0).epsilon(1e-12));
  CHECK(m2.c_per_um == doctest::Approx(1.15 * 2 * 8.8541878128e-3 * 2.7 * (2.0 + 0.5)).epsilon(1e-12));

  // M1 is not a routing layer
  CHECK(wire_rc_per_um(s2.layer("M1"), s2).r_per_um == wire_rc_per_um(s.layer("M1"), s).r_per_um);
  CHECK_THROWS_AS(wire_rc_per_um(s.layer("V1"), s), ConfigError);
}

TEST_CASE("routing-layer resistance falls with level") {
  const TechStack s = default_stack();
  const double r2 = wire_rc_per_um(s.layer("M2"), s).r_per_um;
  const double r4 = wire_rc_per_um(s.layer("M4"), s).r_per_um;
  const double r6 = wire_rc_per_um(s.layer("M6"), s).r_per_um;
  CHECK(r2 > r4);
  CHECK(r4 > r6);
  const double c2 = wire_rc_per_um(s.layer("M2"), s).c_per_um;
  const double c6 = wire_rc_per_um(s.layer("M6"), s).c_per_um;
  CHECK(std::abs(c2 / c6 - 1) < std::abs(r2 / r6 - 1));
}

TEST_CASE("via resistance") {
  TechStack s = default_stack();
  CHECK(via_resistance(s.layer("V1"), s) > via_resistance(s.layer("V4"), s));

  LayerSpec v = s.layer("V1");
  v.model = ResistivityModel::bulk;
  v.rho = 5.0;
  const double r1 = via_resistance(v, s);
  CHECK(r1 == doctest::Approx(5.0 * 24 / 144.0 * 10).epsilon(1e-14));
  v.min_width *= 2;
  CHECK(via_resistance(v, s) == doctest::Approx(r1 / 4).epsilon(1e-14));

  const double base = via_resistance(s.layer("V2"), s);
  TechStack wires_only = scale_wire_resistance(s, 0.1);
  CHECK(via_resistance(wires_only.layer("V2"), wires_only) == base);
  s.scale_vias = true;
  TechStack both = scale_wire_resistance(s, 0.1);
  CHECK(via_resistance(both.layer("V2"), both) == doctest::Approx(base / 10).epsilon(1e-14));
  CHECK_THROWS_AS(via_resistance(s.layer("M2"), s), ConfigError);
}

TEST_CASE("contact resistance") {
  CHECK(contact_resistance(1e-8, 10, 1) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(contact_resistance(5e-8, 10, 1) == doctest::Approx(500.0).epsilon(1e-14));
  CHECK(contact_resistance(1e-8, 10, 2) == doctest::Approx(50.0).epsilon(1e-14));
  for (double rho : {1e-9, 1e-8, 5e-8})
    for (double l : {5.0, 10.0, 20.0})
      for (double w : {0.1, 1.0, 3.0}) {
        const double r = contact_resistance(rho, l, w);
        CHECK(r == doctest::Approx(100.0 * (rho / 1e-8) * (10.0 / l) / w).epsilon(1e-13));
      }
  CHECK_THROWS_AS(contact_resistance(0, 10, 1), DomainError);
}

TEST_CASE("multiplier identity and composition") {
  const TechStack s = default_stack();
  CHECK(scale_wire_resistance(s, 1.0) == s);
  CHECK(scale_wire_resistance(scale_wire_resistance(s, 2.0), 2.0) == scale_wire_resistance(s, 4.0));
  const TechStack t = scale_wire_resistance(s, 3.0);
  CHECK(s.x_rw == 1.0);
  CHECK(t.x_rw == 3.0);
  CHECK_THROWS_AS(scale_wire_resistance(s, 0.0), DomainError);
}

TEST_CASE("shipped stack file loads to the width table") {
  const TechStack s = load_itf(kStackFile);
  CHECK(s == default_stack());
  for (const char* n : {"M1", "M2", "M3"}) CHECK(s.layer(n).min_width == 12);
  for (const char* n : {"M4", "M5"}) CHECK(s.layer(n).min_width == 18);
  CHECK(s.layer("M6").min_width == 24);
  CHECK(parse_itf(itf_to_text(s)) == s);
  CHECK(itf_to_text(parse_itf(itf_to_text(s))) == itf_to_text(s));
}

TEST_CASE("malformed stack files are rejected") {
  const std::string good = itf_to_text(default_stack());
  CHECK_THROWS_AS(parse_itf(good + "layer X kind=wire min_width_nm=1 min_spacing_nm=1 thickness_nm=1 k_ild=1 color=red\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_itf(good + "stack rho_bulk_uohm_cm=1.9 mfp_nm=39 grain_R=0.4 specularity=0 rho_con_ohm_cm2=1e-8\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_itf("layer M2 kind=wire min_width_nm=12 min_spacing_nm=12 thickness_nm=24 k_ild=2.7\n"),
                  ConfigError);
  std::string bad_r = good;
  bad_r.replace(bad_r.find("grain_R=0.43"), 12, "grain_R=1.00");
  CHECK_THROWS_AS(parse_itf(bad_r), DomainError);
  std::string no_m6 = good.substr(0, good.find("layer M6"));
  CHECK_THROWS_AS(parse_itf(no_m6), ConfigError);
  CHECK_THROWS_AS(load_itf("/nonexistent/stack.itf"), IoError);
  try {
    parse_itf(good + "bogus record\n", "f.itf");
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("f.itf:") != std::string::npos);
  }
}
