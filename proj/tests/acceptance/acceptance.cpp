// Acceptance run: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; otherwise only the listed numbers.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "dispel/common/error.hpp"
#include "dispel/common/parallel.hpp"
#include "dispel/device/fit.hpp"
#include "dispel/device/vs_model.hpp"
#include "dispel/nn/analysis.hpp"
#include "dispel/sweep/dataset.hpp"
#include "pareto_oracle.hpp"

using namespace dispel;

namespace {

const std::string kData = DISPEL_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ---- 1-5: formulas, device model, STA ------------------------------------

void c1_f_ach(Outcome& o) {
  const double a = flow::f_ach(2.0, 0.1), b = flow::f_ach(2.0, -0.1);
  o.detail << "f_ach(2, +0.1) = " << fmt(a, 15) << ", f_ach(2, -0.1) = " << fmt(b, 15);
  o.require(rel(a, 2.5) <= 1e-12, "+0.1 ns");
  o.require(rel(b, 1.0 / 0.6) <= 1e-12, "-0.1 ns");
}

void c2_contact(Outcome& o) {
  const double r0 = interconnect::contact_resistance(1e-8, 10, 1);
  o.detail << "R_con(1e-8, 10 nm, 1 um) = " << fmt(r0, 15) << " Ohm";
  o.require(rel(r0, 100.0) <= 1e-14, "unit conversion");
  double worst = 0;
  for (double rho : {1e-9, 1e-8, 4e-8})
    for (double l : {5.0, 10.0, 20.0})
      for (double w : {0.25, 1.0, 3.0}) {
        const double r = interconnect::contact_resistance(rho, l, w);
        worst = std::max(worst, rel(r, r0 * (rho / 1e-8) * (10.0 / l) / w));
      }
  o.detail << ", linearity error " << fmt(worst, 2) << " over 27 points";
  o.require(worst <= 1e-13, "linearity");
}

void c3_resistivity(Outcome& o) {
  const auto s = interconnect::default_stack();
  const double bulk = interconnect::cu_resistivity(1e4, 1e4, s);
  o.detail << "rho(10x10 um) / rho_bulk = " << fmt(bulk / s.rho_bulk, 6);
  o.require(std::abs(bulk / s.rho_bulk - 1) <= 0.02, "bulk limit");
  // Wire and via layers grouped by cross-section, largest first.
  std::map<double, std::set<double>, std::greater<>> by_area;
  for (const auto& l : s.layers)
    if (l.kind != interconnect::LayerKind::meol)
      by_area[l.min_width * l.thickness].insert(interconnect::layer_resistivity(l, s));
  std::vector<double> rho;
  for (const auto& [area, vals] : by_area) {
    o.require(vals.size() == 1, "equal cross-sections give equal resistivity");
    rho.push_back(*vals.begin());
  }
  o.detail << ", rho by shrinking cross-section:";
  for (double r : rho) o.detail << " " << fmt(r);
  for (size_t i = 1; i < rho.size(); ++i) o.require(rho[i] > rho[i - 1], "strict increase");
  o.require(rho.size() >= 3, "at least three sizes");
}

device::VSParams table_nfet() {
  device::VSParams p;
  p.v = 1.17e7;
  p.mu = 200;
  p.l_gate = 10;
  p.c_inv = 4.36;
  p.ss = 70;
  p.v_t0 = 0.3;
  return p;
}

void c4_device(Outcome& o) {
  const device::VSParams p = table_nfet();
  const double n_phit = device::body_factor(p) * 0.025852;
  const double v0 = p.v_t0 - p.dibl * 0.6 - 5 * n_phit, h = 1e-3;
  const double decades = std::log10(device::drain_current(p, v0 + h, 0.6)) -
                         std::log10(device::drain_current(p, v0 - h, 0.6));
  const double ss = 2 * h / decades * 1e3;
  o.detail << "extracted SS " << fmt(ss) << " mV/dec";
  o.require(std::abs(ss / 70 - 1) <= 0.05, "SS within 5%");

  const device::VSParams t = device::tune_vt(p, 1.0, 0.6);
  const double i_off = device::drain_current(t, 0.0, 0.6) * 1e3;
  o.detail << ", tuned I_off " << fmt(i_off, 12) << " nA/um";
  o.require(rel(i_off, 1.0) <= 1e-6, "I_off target");

  device::VSParams truth = p;
  truth.v_t0 = 0.32;
  truth.dibl = 0.09;
  const std::vector<double> vg{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}, vd{0.02, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8};
  const auto pts = device::synthesize_iv(truth, vg, vd);
  const device::FitResult f =
      device::fit_iv(pts, device::FitFixed{device::Polarity::n, truth.l_gate, truth.c_inv, truth.ss, 300});
  o.detail << ", fit v/v0 " << fmt(f.params.v / truth.v, 6) << " mu/mu0 " << fmt(f.params.mu / truth.mu, 6);
  o.require(rel(f.params.v, truth.v) <= 0.02, "fit v");
  o.require(rel(f.params.mu, truth.mu) <= 0.02, "fit mu");
}

void c5_sta(Outcome& o) {
  sweep::SweepConfig cfg;
  cfg.vdd = {0.6};
  const auto setup_lib = [&] {
    sweep::SweepSetup s;
    s.stack = interconnect::default_stack();
    s.n = sweep::mos2_nfet();
    s.p = sweep::bp_pfet();
    return std::make_pair(s, sweep::build_libraries(cfg, s).front());
  }();
  const auto& [s, lib] = setup_lib;
  std::mt19937_64 rng(2024);
  int equal = 0;
  for (int t = 0; t < 50; ++t) {
    flow::NetlistSpec spec;
    spec.n_gates = 2 + static_cast<int>(rng() % 19);
    spec.depth = 1 + static_cast<int>(rng() % std::min(spec.n_gates, 8));
    spec.fanout_mean = 1.5 + (rng() % 100) / 100.0;
    spec.seed = rng();
    const flow::Netlist nl = flow::generate_netlist(spec);
    const flow::Floorplan fp = flow::size_die(flow::netlist_cell_area(nl, lib), 0.6, 1.0, lib.dims.height() * 1e-3);
    flow::PlaceOptions po;
    po.moves_per_cell = 20;
    po.seed = spec.seed;
    const flow::Design d(nl, flow::place(nl, lib, fp, po), lib, s.stack);
    equal += flow::run_sta(d, 1.0).t_cp == flow::sta_path_enumeration(d) ? 1 : 0;
  }
  o.detail << equal << "/50 netlists bit-exact against path enumeration";
  o.require(equal == 50, "bit-exact t_CP");
}

// ---- 6-8: sweeps on the desk-scale core ----------------------------------

struct Core {
  sweep::SweepConfig cfg;
  sweep::SweepSetup setup;
};

// The shipped 5k-gate configuration.
const Core& core() {
  static const Core c = [] {
    Core k;
    k.cfg = sweep::SweepConfig::load(kData + "/configs/default_5k.cfg");
    k.setup = sweep::default_setup(k.cfg);
    return k;
  }();
  return c;
}

void c6_tradeoff(Outcome& o) {
  const Core& c = core();
  const sweep::DeviceOptResult cu = sweep::device_opt(c.cfg, c.setup);
  o.detail << "L_SPA";
  for (const auto& r : cu.rows) o.detail << " " << fmt(r.l_spa);
  o.detail << " nm: EDP";
  for (const auto& r : cu.rows) o.detail << " " << fmt(r.min_edp);
  o.detail << " pJ*ns";
  o.require(cu.rows.size() == 5, "five spacer points");
  for (size_t i = 1; i < cu.rows.size(); ++i) {
    o.require(cu.rows[i].c_g2c < cu.rows[i - 1].c_g2c, "c_g2c strictly decreasing");
    o.require(cu.rows[i].r_con > cu.rows[i - 1].r_con, "r_con strictly increasing");
  }
  o.require(cu.argmin > 0 && cu.argmin + 1 < static_cast<int>(cu.rows.size()), "interior minimum");

  sweep::SweepSetup low = c.setup;
  low.stack.scale_vias = true;
  low.stack = interconnect::scale_wire_resistance(low.stack, 0.1);
  const sweep::DeviceOptResult lo = sweep::device_opt(c.cfg, low);
  const double a_cu = cu.rows[cu.argmin].l_spa, a_lo = lo.rows[lo.argmin].l_spa;
  o.detail << "; x_rw=0.1 EDP";
  for (const auto& r : lo.rows) o.detail << " " << fmt(r.min_edp);
  o.detail << "; argmin Cu " << fmt(a_cu) << " nm, x_rw=0.1 " << fmt(a_lo) << " nm";
  o.require(a_lo <= a_cu, "argmin does not move right");
}

void c7_xrw(Outcome& o) {
  const Core& c = core();
  const auto rows = sweep::xrw_sweep(c.cfg, c.setup);
  o.detail << "x_rw";
  for (const auto& r : rows) o.detail << " " << fmt(r.x_rw);
  o.detail << ": EDP";
  for (const auto& r : rows) o.detail << " " << fmt(r.min_edp);
  o.detail << ", area";
  for (const auto& r : rows) o.detail << " " << fmt(r.area);
  o.detail << ", RO EDP";
  for (const auto& r : rows) o.detail << " " << fmt(r.ro_edp);
  for (size_t i = 1; i < rows.size(); ++i) {
    o.require(rows[i].min_edp >= rows[i - 1].min_edp, "EDP non-decreasing");
    o.require(rows[i].area >= rows[i - 1].area, "area non-decreasing");
  }
  // A line through the origin would grow EDP by the same factor as x_rw.
  const auto at = [&](double x) {
    for (const auto& r : rows)
      if (r.x_rw == x) return r;
    throw ConfigError("x_rw grid lacks " + fmt(x));
  };
  const double growth = at(4).min_edp / at(1).min_edp, ro = at(4).ro_edp / at(1).ro_edp;
  o.detail << "; EDP(4)/EDP(1) " << fmt(growth) << ", RO " << fmt(ro);
  o.require(growth < 4.0, "sub-linear growth");
}

void c8_flow(Outcome& o) {
  Core c = core();
  c.cfg.vdd = {0.6};
  const sweep::SweepResult r = sweep::ef_sweep(c.cfg, c.setup);
  int prev_buf = -1, buffers_max = 0;
  double prev_area = 0, worst_c = 1, worst_r = 1, max_c = 0, max_r = 0;
  bool c_over_r = true;
  size_t coarse = 0;
  for (const auto& rec : r.records) {
    if (!rec.fine) {
      ++coarse;
      o.require(rec.result.buffer_count >= prev_buf, "buffers at f_tar=" + fmt(rec.result.f_tar));
      o.require(rec.result.cell_area >= prev_area, "cell area at f_tar=" + fmt(rec.result.f_tar));
      prev_buf = rec.result.buffer_count;
      prev_area = rec.result.cell_area;
      buffers_max = std::max(buffers_max, prev_buf);
    }
    c_over_r &= rec.rc.share_c > rec.rc.share_r;
    worst_c = std::min(worst_c, rec.rc.share_c);
    worst_r = std::min(worst_r, rec.rc.share_r);
    max_c = std::max(max_c, rec.rc.share_c);
    max_r = std::max(max_r, rec.rc.share_r);
  }
  o.detail << coarse << " f_tar points at " << fmt(c.cfg.vdd[0]) << " V, buffers 0.." << buffers_max
           << ", cell area " << fmt(r.records.front().result.cell_area) << ".." << fmt(prev_area)
           << " um2; share_C " << fmt(worst_c, 3) << ".." << fmt(max_c, 3) << ", share_R " << fmt(worst_r, 3) << ".."
           << fmt(max_r, 3) << " over " << r.records.size() << " designs";
  o.require(buffers_max > 0, "optimizer inserted buffers");
  o.require(c_over_r, "share_C > share_R");
  o.require(worst_c > 0 && worst_r > 0 && max_c < 0.7 && max_r < 0.7, "shares in (0, 0.7)");
}

// ---- 9-10: frontier and schema -------------------------------------------

void c9_pareto(Outcome& o) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> size(1, 80), q(0, 12);
  int match = 0, idem = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<sweep::EFPoint> pts(size(rng));
    for (size_t i = 0; i < pts.size(); ++i) {
      // Coarse lattice so ties and duplicates occur.
      pts[i].f_ach = 1 + 0.25 * q(rng);
      pts[i].energy = 0.5 + 0.05 * q(rng);
      pts[i].area = q(rng);
      pts[i].v_dd = 0.5 + 0.1 * (q(rng) % 5);
      pts[i].provenance = std::to_string(i);
    }
    const auto got = sweep::pareto_frontier(pts);
    match += testing::same_points(got, testing::brute_force_frontier(pts)) ? 1 : 0;
    idem += testing::same_points(sweep::pareto_frontier(got), got) ? 1 : 0;
  }
  o.detail << match << "/1000 match brute force, " << idem << "/1000 idempotent";
  o.require(match == 1000 && idem == 1000, "exact frontier");
}

const std::vector<std::string> kFrozenColumns = {
    "INV_ion_pu_uA",     "INV_ion_pd_uA",     "INV_delay_rise_ps",   "INV_delay_fall_ps",   "INV_energy_fJ",
    "NAND2_ion_pu_uA",   "NAND2_ion_pd_uA",   "NAND2_delay_rise_ps", "NAND2_delay_fall_ps", "NAND2_energy_fJ",
    "NAND3_ion_pu_uA",   "NAND3_ion_pd_uA",   "NAND3_delay_rise_ps", "NAND3_delay_fall_ps", "NAND3_energy_fJ",
    "NOR2_ion_pu_uA",    "NOR2_ion_pd_uA",    "NOR2_delay_rise_ps",  "NOR2_delay_fall_ps",  "NOR2_energy_fJ",
    "NOR3_ion_pu_uA",    "NOR3_ion_pd_uA",    "NOR3_delay_rise_ps",  "NOR3_delay_fall_ps",  "NOR3_energy_fJ",
    "AOI21_ion_pu_uA",   "AOI21_ion_pd_uA",   "AOI21_delay_rise_ps", "AOI21_delay_fall_ps", "AOI21_energy_fJ",
    "R_M2",              "C_M2",              "R_M4",                "C_M4",                "R_M6",
    "C_M6",              "R_V1",              "R_V3",                "R_V5",                "v_dd",
    "f_ach",             "label_energy",      "label_area"};

void c10_schema(Outcome& o) {
  sweep::SweepConfig cfg;
  cfg.vdd = {0.6, 0.8};
  cfg.f_coarse = {1, 2, 3};
  cfg.f_fine_half = 1;
  cfg.n_gates = 100;
  cfg.depth = 6;
  cfg.place_moves = 20;
  // Library characterization dominates; it is shared with nothing else here.
  const auto t0 = std::chrono::steady_clock::now();
  const sweep::SweepResult r = sweep::ef_sweep(cfg, sweep::default_setup(cfg));
  const double setup_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto t1 = std::chrono::steady_clock::now();
  const auto rows = sweep::emit_dataset({r});
  const CsvTable t = sweep::dataset_table(rows);
  const double emit_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t1).count();
  bool widths = true;
  for (const auto& row : rows) widths &= row.x.size() == 41;
  for (const auto& row : t.rows) widths &= row.size() == 43;
  bool no_via_c = true;
  for (const auto& h : t.header) no_via_c &= h.rfind("C_V", 0) == std::string::npos;
  o.detail << rows.size() << " rows of " << t.header.size() << " columns, emitted in " << fmt(emit_ms, 3)
           << " ms (sweep setup " << fmt(setup_s, 3) << " s)";
  o.require(!rows.empty(), "rows emitted");
  o.require(widths, "41 features + 2 labels per row");
  o.require(t.header == kFrozenColumns, "frozen column order");
  o.require(no_via_c, "no via capacitance columns");
  o.require(emit_ms < 1000, "emit under 1 s");
}

// ---- 11-12: predictor ----------------------------------------------------

const std::vector<int> kSizes = {sweep::kFeatureCount, 40, 20, 1};

struct Trained {
  sweep::SweepConfig cfg;
  std::vector<sweep::SweepResult> runs;
  nn::Dataset data;
  nn::TrainResult result;
  std::string model_text;
};

std::optional<Trained>& trained() {
  static std::optional<Trained> t;
  return t;
}

void c11_train(Outcome& o) {
  Trained t;
  t.cfg = sweep::SweepConfig::load(kData + "/configs/dataset.cfg");
  t.runs = sweep::variant_sweeps(t.cfg, sweep::default_setup(t.cfg));
  t.data = nn::dataset_from_table(sweep::dataset_table(sweep::emit_dataset(t.runs)), "label_energy",
                                  sweep::feature_names());
  o.detail << t.data.size() << " frontier rows from " << t.runs.size() << " sweeps";
  o.require(t.data.size() >= 1000, "at least 1000 rows");

  const nn::MLP init = nn::build_mlp(kSizes, nn::Activation::softplus, 42);
  const nn::TrainConfig tc;
  t.result = nn::train(init, t.data, tc);
  t.model_text = nn::model_to_text(t.result.model);
  const nn::TrainResult again = nn::train(init, t.data, tc);
  const bool same = nn::model_to_text(again.model) == t.model_text && again.val_loss == t.result.val_loss &&
                    again.train_loss == t.result.train_loss;

  // Gate: fresh Xavier nets at h = 1e-5. The trained net is reported too; its
  // smallest slopes (~1e-9) sit at the roundoff floor of h = 1e-5, so it is
  // also shown at h = 1e-3. The L2 term is checked exactly against 2 * l2 * w.
  double worst = 0, worst_with_l2 = 0, trained_fd = 0, trained_wide = 0, l2_err = 0;
  std::vector<nn::MLP> fresh;
  for (std::uint64_t seed : {42, 7, 1234}) fresh.push_back(nn::build_mlp(kSizes, nn::Activation::softplus, seed));
  for (int k = 0; k < 5; ++k) {
    const int row = t.result.val_rows[k * t.result.val_rows.size() / 5];
    const auto xs = t.result.model.scale_input(t.data.x[row]);
    const double y = t.result.model.normalize_label(t.data.y[row]);
    for (const nn::MLP& m : fresh) {
      worst = std::max(worst, nn::grad_check(m, xs, y, 0.0));
      worst_with_l2 = std::max(worst_with_l2, nn::grad_check(m, xs, y, tc.l2));
    }
    trained_fd = std::max(trained_fd, nn::grad_check(t.result.model, xs, y, 0.0));
    trained_wide = std::max(trained_wide, nn::grad_check(t.result.model, xs, y, 0.0, 1e-3));
    for (const nn::MLP* m : {&init, static_cast<const nn::MLP*>(&t.result.model)}) {
      nn::Batch b;
      b.n_in = m->n_inputs();
      b.xs = xs;
      b.ys = {y};
      std::vector<double> g0, g1;
      nn::loss_and_gradient_serial(*m, b, 0.0, &g0);
      nn::loss_and_gradient_serial(*m, b, tc.l2, &g1);
      for (size_t i = 0; i < g0.size(); ++i) {
        const double want = m->is_weight(i) ? 2 * tc.l2 * m->params[i] : 0.0;
        l2_err = std::max(l2_err, std::abs(g1[i] - g0[i] - want) / std::max(std::abs(want), 1e-12));
      }
    }
  }
  const int e = t.result.best_epoch;
  const double band = t.result.val_loss[e] / t.result.train_loss[e];
  o.detail << "; " << tc.epochs << " epochs, best " << e << ", val rel-RMSE " << fmt(t.result.val_rel_rmse, 3)
           << ", mean rel err " << fmt(t.result.val_mean_rel_err, 3) << ", val/train loss " << fmt(band, 3)
           << "; gradient check " << fmt(worst, 2) << " (with L2 " << fmt(worst_with_l2, 2) << "; trained net "
           << fmt(trained_fd, 2) << ", at h=1e-3 " << fmt(trained_wide, 2) << "), L2 term error " << fmt(l2_err, 2) << "; rerun " << (same ? "identical" : "differs");
  o.require(worst <= 1e-5, "gradient check");
  o.require(l2_err <= 1e-9, "L2 gradient");
  o.require(t.result.val_rel_rmse <= 0.08, "val rel-RMSE <= 8%");
  o.require(band <= 2.0, "val loss within 2x of train loss");
  o.require(same, "byte-identical rerun");
  trained() = std::move(t);
}

// Inputs of one frontier group: the nominal device on copper at 0.7 V.
struct Probe {
  std::vector<double> base, grid;
};

Probe nominal_probe(const Trained& t) {
  const sweep::SweepConfig& c = t.cfg;
  const std::vector<double> rho = c.rho_con.empty() ? std::vector<double>{1e-8} : c.rho_con;
  size_t k = 0, hit = SIZE_MAX;
  for (double mu : c.mu_scale)
    for (double v : c.v_scale)
      for (double rc : rho)
        for (double x : c.dataset_x_rw) {
          if (mu == 1 && v == 1 && rc == rho.front() && x == 1 && hit == SIZE_MAX) hit = k;
          ++k;
        }
  if (hit == SIZE_MAX || k != t.runs.size()) throw ConfigError("dataset config has no nominal variant");
  const int f = sweep::kFeatureCount - 1, vdd = f - 1;
  std::vector<std::vector<double>> group;
  for (const auto& row : sweep::emit_dataset({t.runs[hit]}))
    if (std::abs(row.x[vdd] - 0.7) < 1e-9) group.emplace_back(row.x.begin(), row.x.end());
  if (group.size() < 3) throw ConfigError("nominal 0.7 V frontier has fewer than 3 points");
  std::sort(group.begin(), group.end(), [&](const auto& a, const auto& b) { return a[f] < b[f]; });
  Probe p;
  p.base = group[group.size() / 2];
  const double lo = group.front()[f], hi = group.back()[f];
  for (int i = 0; i <= 60; ++i) p.grid.push_back(lo + (hi - lo) * i / 60.0);
  return p;
}

void c12_qualitative(Outcome& o) {
  if (!trained()) throw ConfigError("criterion 12 needs the model from criterion 11");
  const Trained& t = *trained();
  const nn::MLP& m = t.result.model;
  const int f = sweep::kFeatureCount - 1;
  const Probe p = nominal_probe(t);
  const auto curve = nn::predict_curve(m, p.base, f, p.grid);

  const size_t knee = std::min_element(curve.begin(), curve.end()) - curve.begin();
  const double range = *std::max_element(curve.begin(), curve.end()) - curve[knee];
  bool monotone = true;
  for (size_t i = knee + 1; i < curve.size(); ++i) monotone &= curve[i] >= curve[i - 1];
  // Second differences past the knee: any above 5% of their range must share a sign.
  std::vector<double> d2;
  for (size_t i = knee + 1; i + 1 < curve.size(); ++i) d2.push_back(curve[i + 1] - 2 * curve[i] + curve[i - 1]);
  int flips = 0;
  if (!d2.empty()) {
    const auto [mn, mx] = std::minmax_element(d2.begin(), d2.end());
    const double tol = 0.05 * (*mx - *mn);
    int sign = 0;
    for (double v : d2) {
      if (std::abs(v) <= tol) continue;
      const int s = v > 0 ? 1 : -1;
      if (sign && s != sign) ++flips;
      sign = s;
    }
  }
  o.detail << "softplus curve over f " << fmt(p.grid.front(), 3) << ".." << fmt(p.grid.back(), 3) << " GHz: knee at "
           << knee << "/60, rise " << fmt(range, 3) << " pJ, " << flips << " curvature sign flips";
  o.require(knee + 3 < curve.size(), "a rising segment past the knee");
  o.require(monotone, "monotone past the knee");
  o.require(flips == 0, "smooth past the knee");

  std::vector<double> raised = p.base;
  for (const char* n : {"R_M2", "R_M4", "R_M6"}) {
    const auto names = sweep::feature_names();
    raised[std::find(names.begin(), names.end(), n) - names.begin()] *= 2;
  }
  const auto up = nn::predict_curve(m, raised, f, p.grid);
  int above = 0;
  for (size_t i = 0; i < up.size(); ++i) above += up[i] > curve[i] ? 1 : 0;
  o.detail << "; 2x R_M2/M4/M6 raises " << above << "/" << up.size() << " points";
  o.require(above == static_cast<int>(up.size()), "higher wire resistance shifts the curve up");

  nn::TrainConfig rc;
  rc.epochs = 5000;
  const nn::ReluComparison cmp = nn::relu_compare(t.data, kSizes, 42, rc, p.base, f, p.grid);
  o.detail << "; smoothness relu " << fmt(cmp.smooth_relu, 3) << " vs softplus " << fmt(cmp.smooth_softplus, 3);
  o.require(cmp.smooth_relu >= cmp.smooth_softplus, "ReLU no smoother than softplus");

  const nn::PivotReport piv = nn::find_pivot(m, p.base, f, p.grid);
  o.detail << "; pivot: " << piv.transitioning.size() << " transitioning, " << piv.active.size() << " active, "
           << piv.inactive.size() << " inactive";
  o.require(!piv.transitioning.empty(), "transitioning neurons exist");
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  const std::vector<Criterion> all = {
      {1, "f_ach formula", 1e-3, c1_f_ach},
      {2, "contact resistance", 1, c2_contact},
      {3, "size-dependent resistivity", 1, c3_resistivity},
      {4, "virtual-source model", 10, c4_device},
      {5, "STA oracle equivalence", 30, c5_sta},
      {6, "spacer trade-off", 1800, c6_tradeoff},
      {7, "wire resistance sweep", 1800, c7_xrw},
      {8, "flow directionality", 600, c8_flow},
      {9, "pareto frontier", 5, c9_pareto},
      {10, "dataset schema", 1, c10_schema},
      {11, "predictor training", 1200, c11_train},
      {12, "predictor behaviour", 600, c12_qualitative},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  // 12 reads the model trained by 11.
  if (wanted.count(12)) wanted.insert(11);

  int failed = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Schema timing is measured on the emit step itself.
    if (c.id != 10 && s > c.limit_s) o.require(false, "time limit " + fmt(c.limit_s) + " s");
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << " (" << fmt(s, 3) << " s): "
              << o.detail.str() << std::endl;
  }
  return failed ? 1 : 0;
}
