#include <cmath>
#include <random>
#include <set>
#include <string>

#include "doctest.h"
#include "dispel/common/error.hpp"
#include "dispel/sweep/dataset.hpp"
#include "pareto_oracle.hpp"

using namespace dispel;
using namespace dispel::sweep;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.vdd = {0.6, 0.8};
  c.f_coarse = {1.0, 2.0, 3.0, 4.0};
  c.f_fine_half = 1;
  c.n_gates = 200;
  c.depth = 8;
  c.place_moves = 50;
  c.l_spa = {6, 8, 10};
  c.x_rw = {1, 4};
  return c;
}

const SweepResult& small_sweep() {
  static const SweepResult r = [] {
    const SweepConfig c = small_config();
    return ef_sweep(c, default_setup(c));
  }();
  return r;
}

EFPoint pt(double f, double e, double a = 1, double v = 0.6, std::string prov = "") {
  EFPoint p;
  p.f_ach = f;
  p.energy = e;
  p.area = a;
  p.v_dd = v;
  p.provenance = std::move(prov);
  return p;
}

}  // namespace

TEST_CASE("config defaults, ranges and fine grid") {
  const SweepConfig d;
  CHECK(d.f_coarse.size() == 11);
  CHECK(d.f_coarse.front() == 1.0);
  CHECK(d.f_coarse.back() == doctest::Approx(3.0));
  const auto g = d.fine_grid(2.013);
  REQUIRE(g.size() == 11);
  CHECK(g[5] == doctest::Approx(2.02));
  CHECK(g[1] - g[0] == doctest::Approx(0.02));

  const SweepConfig c = SweepConfig::parse("vdd=0.5:0.7:0.1\nf_coarse=1,2\nn_gates=300\n");
  REQUIRE(c.vdd.size() == 3);
  CHECK(c.vdd[2] == doctest::Approx(0.7));
  CHECK(c.n_gates == 300);
  const SweepConfig back = SweepConfig::parse(c.to_text());
  CHECK(back.to_text() == c.to_text());

  CHECK_THROWS_AS(SweepConfig::parse("vdd=0.6\nbogus=1\n"), ConfigError);
  CHECK_THROWS_AS(SweepConfig::parse("l_spa_nm=14\n"), DomainError);
  CHECK_THROWS_AS(SweepConfig::parse("f_coarse=2,1\n"), ConfigError);
}

TEST_CASE("pareto frontier: worked examples and idempotence") {
  auto one = pareto_frontier({pt(1, 2)});
  REQUIRE(one.size() == 1);
  CHECK(one[0].energy == 2);

  const auto f = pareto_frontier({pt(1, 2), pt(1, 3), pt(2, 2.5)});
  REQUIRE(f.size() == 2);
  CHECK(f[0].f_ach == 1);
  CHECK(f[0].energy == 2);
  CHECK(f[1].f_ach == 2);
  CHECK(f[1].energy == 2.5);
  CHECK(testing::same_points(pareto_frontier(f), f));

  // Ties on (f, E) keep the smaller area, then the lower supply.
  const auto t = pareto_frontier({pt(1, 1, 5, 0.5, "a"), pt(1, 1, 4, 0.9, "b"), pt(1, 1, 4, 0.7, "c")});
  REQUIRE(t.size() == 1);
  CHECK(t[0].provenance == "c");
  CHECK_THROWS_AS(pareto_frontier({}), ConfigError);
}

TEST_CASE("pareto frontier matches brute-force dominance") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> n(1, 60), q(0, 9);
    std::vector<EFPoint> pts;
    const int m = n(rng);
    for (int i = 0; i < m; ++i)
      pts.push_back(pt(1 + 0.1 * q(rng), 0.5 + 0.05 * q(rng), q(rng), 0.5 + 0.1 * (q(rng) % 5), std::to_string(i)));
    const auto got = pareto_frontier(pts);
    CHECK(testing::same_points(got, testing::brute_force_frontier(pts)));
    CHECK(testing::same_points(pareto_frontier(got), got));
  }
}

TEST_CASE("ef_sweep records, provenance and directionality") {
  const SweepConfig c = small_config();
  const SweepResult& r = small_sweep();
  CHECK(r.records.size() == c.vdd.size() * (c.f_coarse.size() + 2 * c.f_fine_half + 1));
  CHECK(r.libraries.size() == c.vdd.size());
  CHECK(r.fo3.size() == c.vdd.size());
  std::set<std::string> prov;
  for (size_t i = 0; i < r.records.size(); ++i) {
    CHECK(r.records[i].provenance == r.config_hash + "#" + std::to_string(i));
    prov.insert(r.records[i].provenance);
  }
  CHECK(prov.size() == r.records.size());

  // Coarse records at a fixed supply share one optimizer trajectory.
  for (int vi = 0; vi < 2; ++vi) {
    const EFRecord* prev = nullptr;
    for (const EFRecord& rec : r.records) {
      if (rec.vdd_index != vi || rec.fine) continue;
      if (prev) {
        CHECK(rec.result.buffer_count >= prev->result.buffer_count);
        CHECK(rec.result.cell_area >= prev->result.cell_area);
      }
      CHECK(rec.rc.share_c > rec.rc.share_r);
      prev = &rec;
    }
  }

  const auto front = pareto_frontier(r.points());
  for (size_t i = 1; i < front.size(); ++i) CHECK(front[i].energy >= front[i - 1].energy);
  for (const EFPoint& p : front) {
    const EFRecord& rec = r.records.at(p.record);
    CHECK(rec.provenance == p.provenance);
    CHECK(rec.result.f_ach == p.f_ach);
  }
  int arg = -1;
  const double edp = r.min_edp(&arg);
  CHECK(edp == r.records[arg].result.energy / r.records[arg].result.f_ach);
}

TEST_CASE("ef_sweep is deterministic to the byte") {
  const SweepConfig c = small_config();
  const SweepResult again = ef_sweep(c, default_setup(c));
  CHECK(result_csv(again) == result_csv(small_sweep()));
  CHECK(frontier_csv(again) == frontier_csv(small_sweep()));
}

TEST_CASE("sweep errors name the failing point") {
  SweepConfig c = small_config();
  c.vdd = {0.6};
  c.f_coarse = {40};  // forces the optimizer to run
  SweepSetup s = default_setup(c);
  s.lib_opt.sizes = {1};  // no BUF_X4 for the optimizer
  try {
    ef_sweep(c, s);
    FAIL("expected a configuration error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("v_dd=0.6") != std::string::npos);
  }
}

TEST_CASE("dataset schema and frontier filter") {
  const auto names = feature_names();
  REQUIRE(names.size() == 41);
  CHECK(names[0] == "INV_ion_pu_uA");
  CHECK(names[30] == "R_M2");
  CHECK(names[38] == "R_V5");
  CHECK(names[39] == "v_dd");
  CHECK(names[40] == "f_ach");
  for (const auto& n : names) CHECK(n.rfind("C_V", 0) == std::string::npos);

  const SweepResult& r = small_sweep();
  const auto rows = emit_dataset({r});
  size_t expect = 0;
  for (int vi = 0; vi < 2; ++vi) expect += pareto_frontier(r.points_at(vi)).size();
  CHECK(rows.size() == expect);
  for (const FeatureRow& row : rows) {
    bool on_front = false;
    const int vi = std::abs(row.x[39] - 0.6) < 1e-12 ? 0 : 1;
    for (const EFPoint& p : pareto_frontier(r.points_at(vi))) on_front |= p.provenance == row.provenance;
    CHECK(on_front);
    CHECK(row.x[0] == r.fo3[vi][0]);
  }
  const CsvTable t = dataset_table(rows);
  CHECK(t.header.size() == 43);
  CHECK(t.header[41] == "label_energy");
  CHECK(t.header[42] == "label_area");
  CHECK_THROWS_AS(emit_dataset({}), ConfigError);

  const auto ic = interconnect_features(interconnect::default_stack());
  CHECK(ic[0] > ic[2]);  // narrow M2 is more resistive than M4
  const auto ic4 = interconnect_features(interconnect::scale_wire_resistance(interconnect::default_stack(), 4));
  CHECK(ic4[0] == doctest::Approx(4 * ic[0]));
  CHECK(ic4[1] == ic[1]);
}

TEST_CASE("result csv header is frozen") {
  const std::string csv = result_csv(small_sweep());
  CHECK(csv.rfind("# manifest " + small_sweep().config_hash + "\n", 0) == 0);
  CHECK(csv.find("config_hash,v_dd_V,f_tar_GHz,f_ach_GHz,t_slack_ns,energy_pJ,power_mW,cell_area_um2,"
                 "die_area_um2,buffer_count,avg_net_len_um,shareR,shareC\n") != std::string::npos);
}

TEST_CASE("device_opt parasitic trade-off and single point grid") {
  SweepConfig c = small_config();
  c.vdd = {0.7};
  const DeviceOptResult d = device_opt(c, default_setup(c));
  REQUIRE(d.rows.size() == 3);
  for (size_t i = 1; i < d.rows.size(); ++i) {
    CHECK(d.rows[i].c_g2c < d.rows[i - 1].c_g2c);
    CHECK(d.rows[i].r_con > d.rows[i - 1].r_con);
    CHECK(d.rows[i].l_con == doctest::Approx(36 - 10 - 2 * d.rows[i].l_spa));
  }
  c.l_spa = {8};
  const DeviceOptResult one = device_opt(c, default_setup(c));
  CHECK(one.argmin == 0);
  CHECK(one.rows[0].min_edp == d.rows[1].min_edp);
}

TEST_CASE("xrw sweep identity and ring oscillator reference") {
  SweepConfig c = small_config();
  c.vdd = {0.7};
  const SweepSetup s = default_setup(c);
  const auto rows = xrw_sweep(c, s);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].min_edp == ef_sweep(c, s).min_edp());
  CHECK(rows[1].ro_edp > rows[0].ro_edp);

  const SweepResult& r = small_sweep();
  RingOscillator ro;
  const double e1 = ring_oscillator_edp(r.libraries[0], r.stack, ro);
  ro.wire_um = 4;
  CHECK(ring_oscillator_edp(r.libraries[0], r.stack, ro) > e1);
  ro.stages = 4;
  CHECK_THROWS_AS(ring_oscillator_edp(r.libraries[0], r.stack, ro), DomainError);
}
