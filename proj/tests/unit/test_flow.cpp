#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "dispel/cells/library.hpp"
#include "dispel/device/vs_model.hpp"
#include "dispel/flow/flow.hpp"

using namespace dispel;
using namespace dispel::flow;

namespace {

device::VSParams nfet(double vdd) {
  device::VSParams n;
  n.v = 1.17e7;
  n.mu = 200;
  n.l_gate = 10;
  n.c_inv = 4.36;
  n.ss = 70;
  return device::tune_vt(n, 1.0, vdd);
}

device::VSParams pfet(double vdd) {
  device::VSParams p;
  p.polarity = device::Polarity::p;
  p.v = 1.7e7;
  p.mu = 350;
  p.l_gate = 10;
  p.c_inv = 4.26;
  p.ss = 70;
  return device::tune_vt(p, 1.0, vdd);
}

const interconnect::TechStack& stack() {
  static const interconnect::TechStack s = interconnect::default_stack();
  return s;
}

const cells::CellLibrary& lib() {
  static const cells::CellLibrary l = cells::build_library(cells::CellDims{}, stack(), nfet(0.6), pfet(0.6), 0.6);
  return l;
}

double row_height() { return lib().dims.height() * 1e-3; }

Design make_design(const Netlist& nl, double moves = 100, std::uint64_t seed = 42,
                   const interconnect::TechStack& s = stack()) {
  const Floorplan fp = size_die(netlist_cell_area(nl, lib()), 0.6, 1.0, row_height());
  PlaceOptions po;
  po.moves_per_cell = moves;
  po.seed = seed;
  return Design(nl, place(nl, lib(), fp, po), lib(), s);
}

// Shared 2k-gate design for the trend checks.
const Design& mid_design() {
  static const Design d = [] {
    NetlistSpec spec;
    spec.n_gates = 2000;
    return make_design(generate_netlist(spec), 300);
  }();
  return d;
}

}  // namespace

TEST_CASE("f_ach follows the period identity") {
  CHECK(f_ach(2.0, 0.0) == 2.0);
  CHECK(f_ach(2.0, 0.1) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(f_ach(2.0, -0.1) == doctest::Approx(1.0 / 0.6).epsilon(1e-12));
  double prev = 0;
  for (double s = -1.0; s < 0.45; s += 0.05) {
    const double f = f_ach(2.0, s);
    CHECK(f > prev);
    prev = f;
  }
  CHECK_THROWS_AS(f_ach(2.0, 0.5), DomainError);
  CHECK_THROWS_AS(f_ach(2.0, 0.7), DomainError);
  CHECK_THROWS_AS(f_ach(0.0, 0.0), DomainError);
}

TEST_CASE("generator: trivial case, determinism and fanout statistics") {
  NetlistSpec one;
  one.n_gates = 1;
  one.depth = 1;
  const Netlist a = generate_netlist(one);
  REQUIRE(a.gate_count() == 1);
  CHECK(a.logic_depth() == 1);
  int g = -1;
  for (size_t i = 0; i < a.nodes.size(); ++i)
    if (a.nodes[i].kind == NodeKind::gate) g = static_cast<int>(i);
  bool from_reg = false, to_reg = false;
  for (int in : a.nodes[g].ins) from_reg |= a.nodes[a.nets[in].driver].kind == NodeKind::reg;
  for (const Sink& s : a.nets[a.nodes[g].out].sinks) to_reg |= a.nodes[s.node].kind == NodeKind::reg;
  CHECK(from_reg);
  CHECK(to_reg);

  NetlistSpec spec;
  spec.n_gates = 10000;
  spec.fanout_mean = 3.0;
  const Netlist b = generate_netlist(spec), c = generate_netlist(spec);
  CHECK(b.hash() == c.hash());
  CHECK(b.mean_fanout() >= 2.85);
  CHECK(b.mean_fanout() <= 3.15);
  CHECK(b.logic_depth() == spec.depth);
  spec.seed = 7;
  CHECK(generate_netlist(spec).hash() != b.hash());

  NetlistSpec bad;
  bad.n_gates = 3;
  bad.depth = 4;
  CHECK_THROWS_AS(generate_netlist(bad), DomainError);
}

TEST_CASE("netlist text round trip and malformed records") {
  NetlistSpec spec;
  spec.n_gates = 60;
  spec.depth = 6;
  const Netlist nl = generate_netlist(spec);
  const Netlist back = Netlist::parse(nl.to_text());
  CHECK(back.hash() == nl.hash());
  CHECK(back.depth == 6);

  CHECK_THROWS_WITH_AS(Netlist::parse("pin a dir=in net=x\ngate g INV_X1 in=x out=y colour=red\n", "t.net"),
                       "t.net:2: unknown key 'colour'", ConfigError);
  CHECK_THROWS_AS(Netlist::parse("pin a dir=in net=x\ngate g1 INV_X1 in=x out=y\ngate g2 INV_X1 in=x out=y\n"),
                  ConfigError);
  // combinational loop
  CHECK_THROWS_AS(Netlist::parse("gate g1 INV_X1 in=b out=a\ngate g2 INV_X1 in=a out=b\n"), ConfigError);
  // undriven net
  CHECK_THROWS_AS(Netlist::parse("gate g1 INV_X1 in=nowhere out=a\npin o dir=out net=a\n"), ConfigError);
}

TEST_CASE("two connected cells are placed next to each other") {
  const Netlist nl = Netlist::parse("reg r d=b q=a\ngate g INV_X1 in=a out=b\n");
  const Floorplan fp = size_die(netlist_cell_area(nl, lib()), 0.05, 1.0, row_height());
  const Placement pl = place(nl, lib(), fp, {});
  REQUIRE(is_legal(pl, nl, lib()));
  const auto w = node_widths(nl, lib());
  const double dx = std::abs(pl.pos[0].x - pl.pos[1].x), dy = std::abs(pl.pos[0].y - pl.pos[1].y);
  const double abut = 0.5 * (w[0] + w[1]);
  // Same row and touching, or stacked in neighbouring rows.
  const bool same_row = dy < 1e-12 && dx <= abut + 1e-9;
  const bool stacked = std::abs(dy - row_height()) < 1e-9 && dx <= abut;
  CHECK((same_row || stacked));
}

TEST_CASE("tiny designs with a wide flop still legalize") {
  // Three rows of 0.42 um: the DFF and AOI21 land in one row and the DFF fits nowhere else.
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    NetlistSpec spec;
    spec.n_gates = 2 + static_cast<int>(rng() % 19);
    spec.depth = 1 + static_cast<int>(rng() % std::min(spec.n_gates, 8));
    spec.fanout_mean = 1.5 + (rng() % 100) / 100.0;
    spec.seed = rng();
    const Netlist nl = generate_netlist(spec);
    const Floorplan fp = size_die(netlist_cell_area(nl, lib()), 0.6, 1.0, row_height());
    PlaceOptions po;
    po.moves_per_cell = 20;
    po.seed = spec.seed;
    CHECK(is_legal(place(nl, lib(), fp, po), nl, lib()));
  }
}

TEST_CASE("annealed placement beats 100 random placements") {
  NetlistSpec spec;
  spec.n_gates = 400;
  spec.depth = 10;
  const Netlist nl = generate_netlist(spec);
  const Floorplan fp = size_die(netlist_cell_area(nl, lib()), 0.6, 1.0, row_height());
  PlaceOptions po;
  po.moves_per_cell = 300;
  const Placement best = place(nl, lib(), fp, po);
  CHECK(is_legal(best, nl, lib()));
  const double h = total_hpwl(nl, best.pos);
  double best_random = 1e300;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Placement r = random_placement(nl, lib(), fp, s + 1000);
    best_random = std::min(best_random, total_hpwl(nl, r.pos));
  }
  CHECK(h < best_random);
  // determinism
  CHECK(total_hpwl(nl, place(nl, lib(), fp, po).pos) == h);
}

TEST_CASE("die resize holds the aspect ratio and hits the utilization target") {
  const Design& d = mid_design();
  const double area = d.cell_area() * 1.37;  // e.g. after upsizing
  const Floorplan fp = resize_die(d.pl.fp, area, 0.6);
  CHECK(fp.aspect() == doctest::Approx(d.pl.fp.aspect()).epsilon(1e-12));
  CHECK(std::abs(area / fp.area() - 0.6) <= 0.02);

  const Placement scaled = scale_placement(d.pl, d.nl, lib(), resize_die(d.pl.fp, d.cell_area(), 0.4));
  CHECK(is_legal(scaled, d.nl, lib()));
  CHECK(d.cell_area() / scaled.fp.area() == doctest::Approx(0.4).epsilon(0.02));

  Floorplan small = d.pl.fp;
  small.width *= 0.8;
  CHECK_THROWS_AS(place(d.nl, lib(), small, {}), CapacityError);
}

TEST_CASE("routing: layers by length, via stacks and the zero-length net") {
  const RouteOptions ro;
  const NetRoute z = route_wire(0.0, 0.0, 0.0, 36, stack(), ro);
  CHECK(z.r_wire == 0.0);
  CHECK(z.c_wire == 0.0);
  CHECK(z.layer == 2);
  CHECK(z.vias == 2);
  CHECK(z.r_via == interconnect::via_resistance(stack().layer("V1"), stack()));

  int prev = 0;
  for (double len = 0; len < 10; len += 0.05) {
    const NetRoute r = route_wire(len, len, 0.0, 36, stack(), ro);
    CHECK(r.layer >= prev);
    CHECK(r.vias == 2 * (r.layer - 1));
    prev = r.layer;
  }
  CHECK(prev == 6);
  CHECK(route_wire(0.5, 0.0, 0.5, 36, stack(), ro).layer == 3);
  CHECK(route_wire(2.0, 0.0, 2.0, 36, stack(), ro).layer == 5);

  const NetRoute m6 = route_wire(10.0, 10.0, 0.0, 36, stack(), ro);
  double vias = 0;
  for (int v = 1; v <= 5; ++v) vias += interconnect::via_resistance(stack().layer("V" + std::to_string(v)), stack());
  CHECK(m6.r_via == doctest::Approx(vias).epsilon(1e-12));
  CHECK(m6.r_wire == doctest::Approx(10.0 * interconnect::wire_rc_per_um(stack().layer("M6"), stack()).r_per_um));
}

TEST_CASE("Elmore delay of an RC ladder equals the hand sum") {
  // 3-stage ladder: R1*(C1+C2+C3) + R2*(C2+C3) + R3*C3 in Ohm*fF
  CHECK(elmore_ladder({100, 200, 300}, {4, 5, 6}) == doctest::Approx((100.0 * 15 + 200.0 * 11 + 300.0 * 6) * 1e-3));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> r(3), c(3);
    for (int i = 0; i < 3; ++i) r[i] = u(rng), c[i] = u(rng) * 1e-2;
    double brute = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) brute += r[i] * c[j];
    CHECK(elmore_ladder(r, c) == doctest::Approx(brute * 1e-3).epsilon(1e-12));
  }
  NetRoute n;
  n.r_wire = 900;
  n.c_wire = 1.2;
  n.r_via = 150;
  n.c_pins = 0.3;
  const double closed = n.r_via * (n.c_wire + 2 * n.c_pins) + n.r_wire * (n.c_wire / 2 + n.c_pins);
  CHECK(net_elmore(n) == doctest::Approx(closed * 1e-3).epsilon(1e-12));
  CHECK_THROWS_AS(elmore_ladder({1, 2}, {1}), ConfigError);
}

TEST_CASE("single inverter with no wire times at its table delay") {
  const Netlist nl = Netlist::parse("pin a dir=in net=x\ngate g INV_X1 in=x out=y\npin o dir=out net=y\n");
  Design d = make_design(nl, 0);
  for (auto& r : d.routes) r = NetRoute{};
  d.routes[nl.net_index("y")].c_pins = d.route_opt.po_load;
  StaOptions o;
  o.input_slew = 16;
  const TimingReport r = run_sta(d, 1.0, o);
  const cells::Cell& inv = lib().cell("INV_X1");
  const double want = std::max(inv.arcs[0].delay[0].lookup(16, d.route_opt.po_load),
                               inv.arcs[0].delay[1].lookup(16, d.route_opt.po_load));
  CHECK(r.t_cp == want);
  REQUIRE(r.path.size() == 2);
  CHECK(nl.nodes[r.path[0].node].name == "a");
}

TEST_CASE("slack changes sign where the period meets t_CP plus uncertainty") {
  const Design& d = mid_design();
  const StaOptions o;
  const double t_cp = run_sta(d, 1.0, o).t_cp;
  const double f0 = (1.0 - o.uncertainty_frac) / (t_cp * 1e-3);
  CHECK(run_sta(d, f0 * (1 - 1e-9), o).slack > 0);
  CHECK(run_sta(d, f0 * (1 + 1e-9), o).slack < 0);
  const TimingReport r = run_sta(d, 2.0, o);
  CHECK(r.slack == doctest::Approx(0.5 - 0.05 * 0.5 - t_cp * 1e-3).epsilon(1e-12));
}

TEST_CASE("graph STA equals exhaustive path enumeration on small netlists") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 50; ++t) {
    NetlistSpec spec;
    spec.n_gates = 2 + static_cast<int>(rng() % 19);
    spec.depth = 1 + static_cast<int>(rng() % std::min(spec.n_gates, 8));
    spec.seed = rng();
    spec.fanout_mean = 1.5 + (rng() % 100) / 100.0;
    const Design d = make_design(generate_netlist(spec), 20, spec.seed);
    CHECK(run_sta(d, 1.0).t_cp == sta_path_enumeration(d));
  }
}

TEST_CASE("optimization: fixed point, monotone t_CP and growth with f_tar") {
  const Design& d = mid_design();
  const double t0 = run_sta(d, 1.0).t_cp;
  const double easy = 0.5 / (t0 * 1e-3);
  const Design same = optimize(d, easy);
  CHECK(same.nl.hash() == d.nl.hash());
  CHECK(same.cell_area() == d.cell_area());

  Trajectory tr(d);
  int prev_buf = -1;
  double prev_area = 0;
  for (double f = 1.0; f <= 4.0; f += 0.5) {
    const Design o = tr.design_at(tr.steps_for(timing_budget(f, {})));
    CHECK(o.buffer_count() >= prev_buf);
    CHECK(o.cell_area() >= prev_area);
    prev_buf = o.buffer_count();
    prev_area = o.cell_area();
  }
  CHECK(prev_buf > 0);
  const auto& t = tr.t_cp();
  for (size_t i = 1; i < t.size(); ++i) CHECK(t[i] < t[i - 1]);
  // A replayed prefix times exactly as recorded.
  const size_t k = t.size() / 2;
  CHECK(run_sta(tr.design_at(k), 1.0).t_cp == t[k]);
}

TEST_CASE("a wire ten optimal spacings long gets repeaters") {
  const Netlist nl = Netlist::parse("reg r d=c q=a\ngate g1 INV_X1 in=a out=b\ngate g2 INV_X1 in=b out=c\n");
  const OptimizeOptions oo;
  const cells::Cell& buf = lib().cell(oo.buffer_cell);
  const auto rc = interconnect::wire_rc_per_um(stack().layer("M6"), stack());
  const double l_opt = optimal_buffer_spacing(drive_resistance(buf, 0.6), buf.pin_cap[0], rc.r_per_um, rc.c_per_um);
  Placement pl;
  pl.fp = Floorplan{12 * l_opt, 2 * row_height(), row_height()};
  const double y = 0.5 * row_height();
  pl.pos = {{0.5, y}, {1.0, y}, {1.0 + 10 * l_opt, y}};
  const Design d(nl, pl, lib(), stack());
  REQUIRE(d.routes[nl.net_index("b")].layer == 6);
  const double before = run_sta(d, 1.0).t_cp;
  const Design o = optimize(d, 100.0);
  CHECK(o.buffer_count() >= 1);
  CHECK(run_sta(o, 1.0).t_cp < before);
}

TEST_CASE("power identities") {
  const Design& d = mid_design();
  const DesignResult r = evaluate(d, 1.5);
  CHECK(r.energy * r.f_ach == doctest::Approx(r.power.total()).epsilon(1e-14));
  CHECK(r.utilization <= 0.6 * (1 + 1e-9));
  CHECK(switching_power(2.0, 0.3, 1.0, 0.1) == doctest::Approx(switching_power(2.0, 0.6, 1.0, 0.1) / 4).epsilon(1e-15));

  const TimingReport tr = run_sta(d, 1.0);
  double loads = 0;
  for (size_t i = 0; i < d.nl.nodes.size(); ++i)
    if (d.cell_of[i]) loads += net_load(d.routes[d.nl.nodes[i].out]);
  const PowerReport p = power(d, tr, 1.0, 0.1);
  CHECK(p.switching == doctest::Approx(switching_power(loads, 0.6, 1.0, 0.1)).epsilon(1e-12));
  CHECK(p.leakage > 0);
  // Leakage per cycle diverges as the clock slows.
  double prev = 0;
  for (double f = 1.0; f > 1e-4; f *= 0.5) {
    const PowerReport q = power(d, tr, f, 0.1);
    const double e = q.total() / f;
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("RC contribution of the critical path") {
  const Design& d = mid_design();
  const RcShare s = rc_contribution(d);
  CHECK(s.share_c > s.share_r);
  CHECK(s.share_r > 0);
  CHECK(s.share_r < 0.7);
  CHECK(s.share_c < 0.7);

  Design free = d;
  for (auto& r : free.routes) {
    const double pins = r.c_pins;
    r = NetRoute{};
    r.c_pins = pins;
  }
  const RcShare z = rc_contribution(free);
  CHECK(z.share_r == 0.0);
  CHECK(z.share_c == 0.0);

  const interconnect::TechStack heavy = interconnect::scale_wire_resistance(stack(), 2.0);
  const Design h(d.nl, d.pl, lib(), heavy);
  CHECK(rc_contribution(h).share_r > s.share_r);
}

TEST_CASE("layer statistics and determinism of the flow") {
  const Design& d = mid_design();
  FlowOptions fo;
  const DesignResult a = run_flow(d, 2.5, fo), b = run_flow(d, 2.5, fo);
  CHECK(a.f_ach == b.f_ach);
  CHECK(a.energy == b.energy);
  CHECK(a.cell_area == b.cell_area);
  CHECK(a.critical_path == b.critical_path);
  CHECK(a.layers[2].avg_length < a.layers[4].avg_length);
  CHECK(a.layers[4].avg_length < a.layers[6].avg_length);
  CHECK(a.layers[2].avg_length > 0);
  CHECK(a.critical_path.size() >= 2);
}
