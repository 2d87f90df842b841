#include "dispel/sweep/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>

#include "dispel/cells/library_io.hpp"
#include "dispel/cells/meol.hpp"
#include "dispel/common/csv.hpp"
#include "dispel/common/error.hpp"
#include "dispel/common/hash.hpp"
#include "dispel/device/device_io.hpp"
#include "dispel/interconnect/itf.hpp"

namespace dispel::sweep {

device::VSParams mos2_nfet() {
  device::VSParams n;
  n.v = 1.17e7;
  n.mu = 200;
  n.l_gate = 10;
  n.c_inv = 4.36;
  n.ss = 70;
  return n;
}

device::VSParams bp_pfet() {
  device::VSParams p;
  p.polarity = device::Polarity::p;
  p.v = 1.7e7;
  p.mu = 350;
  p.l_gate = 10;
  p.c_inv = 4.26;
  p.ss = 70;
  return p;
}

SweepSetup default_setup(const SweepConfig& cfg) {
  cfg.validate();
  SweepSetup s;
  s.stack = cfg.tech.empty() ? interconnect::default_stack() : interconnect::load_itf(cfg.tech);
  s.n = cfg.ndev.empty() ? mos2_nfet() : device::load_device(cfg.ndev);
  s.p = cfg.pdev.empty() ? bp_pfet() : device::load_device(cfg.pdev);
  if (s.n.polarity != device::Polarity::n || s.p.polarity != device::Polarity::p)
    throw ConfigError("sweep: ndev must be an n-FET and pdev a p-FET");
  if (!cfg.dims.empty()) s.dims = cells::load_dims(cfg.dims);
  s.dims.cgp = cfg.cgp;
  s.dims.l_gate = cfg.l_gate;
  s.dims.l_con = cfg.cgp - cfg.l_gate - 2 * s.dims.l_spa;
  if (!(s.dims.l_con > 0)) throw DomainError("sweep: cell dimensions leave no contact length");
  s.n.l_gate = s.p.l_gate = cfg.l_gate;
  if (!cfg.netlist.empty()) {
    s.netlist = flow::Netlist::load(cfg.netlist);
  } else {
    flow::NetlistSpec ns;
    ns.n_gates = cfg.n_gates;
    ns.depth = cfg.depth;
    ns.fanout_mean = cfg.fanout_mean;
    ns.rent = cfg.rent;
    ns.seed = cfg.seed;
    s.netlist = flow::generate_netlist(ns);
  }
  return s;
}

std::string setup_hash(const SweepConfig& cfg, const SweepSetup& s) {
  std::string text = cfg.to_text();
  text += interconnect::itf_to_text(s.stack);
  text += device::device_to_text(s.n);
  text += device::device_to_text(s.p);
  text += cells::dims_to_text(s.dims);
  text += hex64(s.netlist.hash());
  for (int z : s.lib_opt.sizes) text += "size=" + std::to_string(z) + "\n";
  return hex64(fnv1a(text));
}

EFPoint SweepResult::point(size_t i) const {
  const EFRecord& r = records.at(i);
  return {r.result.f_ach, r.result.energy, r.result.die_area, r.result.v_dd, r.provenance, static_cast<int>(i)};
}

std::vector<EFPoint> SweepResult::points() const {
  std::vector<EFPoint> out;
  for (size_t i = 0; i < records.size(); ++i) out.push_back(point(i));
  return out;
}

std::vector<EFPoint> SweepResult::points_at(int vdd_index) const {
  std::vector<EFPoint> out;
  for (size_t i = 0; i < records.size(); ++i)
    if (records[i].vdd_index == vdd_index) out.push_back(point(i));
  return out;
}

double SweepResult::min_edp(int* record) const {
  if (records.empty()) throw ConfigError("sweep result has no records");
  double best = 0;
  int arg = -1;
  for (size_t i = 0; i < records.size(); ++i) {
    const double edp = records[i].result.energy / records[i].result.f_ach;
    if (arg < 0 || edp < best) best = edp, arg = static_cast<int>(i);
  }
  if (record) *record = arg;
  return best;
}

namespace {

flow::FlowOptions flow_options(const SweepConfig& cfg) {
  flow::FlowOptions fo;
  fo.activity = cfg.activity;
  fo.top_k = cfg.top_k;
  return fo;
}

std::string at(double v_dd, double f_tar) {
  return "v_dd=" + format_double(v_dd) + " V, f_tar=" + format_double(f_tar) + " GHz";
}

EFRecord record(const flow::Design& d, double f_tar, const flow::FlowOptions& fo, int actions, int vdd_index,
                bool fine) {
  EFRecord r;
  r.result = flow::evaluate(d, f_tar, fo, actions);
  r.rc = flow::rc_contribution(d, fo.sta);
  r.vdd_index = vdd_index;
  r.fine = fine;
  return r;
}

std::vector<EFRecord> sweep_one_vdd(const SweepConfig& cfg, const SweepSetup& s, const cells::CellLibrary& lib,
                                    const flow::Placement& pl0, int vi) {
  const flow::FlowOptions fo = flow_options(cfg);
  const double v = cfg.vdd[vi];
  std::vector<EFRecord> out;
  double f_now = cfg.f_coarse.front();
  try {
    flow::Trajectory coarse(flow::Design(s.netlist, pl0, lib, s.stack), fo.opt, fo.sta);
    for (double f : cfg.f_coarse) {
      f_now = f;
      const size_t k = coarse.steps_for(flow::timing_budget(f, fo.sta));
      out.push_back(record(coarse.design_at(k), f, fo, static_cast<int>(k), vi, false));
    }
    size_t best = 0;
    for (size_t i = 1; i < out.size(); ++i)
      if (out[i].result.f_ach > out[best].result.f_ach) best = i;

    const flow::Floorplan fp1 = flow::resize_die(pl0.fp, out[best].result.cell_area, cfg.utilization, cfg.util_tol);
    const flow::Placement pl1 = flow::scale_placement(pl0, s.netlist, lib, fp1);
    flow::Trajectory fine(flow::Design(s.netlist, pl1, lib, s.stack), fo.opt, fo.sta);
    for (double f : cfg.fine_grid(out[best].result.f_ach)) {
      f_now = f;
      const size_t k = fine.steps_for(flow::timing_budget(f, fo.sta));
      out.push_back(record(fine.design_at(k), f, fo, static_cast<int>(k), vi, true));
    }
  } catch (const Error& e) {
    rethrow_with_context(e, at(v, f_now));
  }
  return out;
}

}  // namespace

std::vector<cells::CellLibrary> build_libraries(const SweepConfig& cfg, const SweepSetup& s) {
  cfg.validate();
  std::vector<cells::CellLibrary> libs;
  // Characterization parallelizes across cells inside each build.
  for (double v : cfg.vdd) {
    try {
      const device::VSParams n = device::tune_vt(s.n, cfg.i_off, v);
      const device::VSParams p = device::tune_vt(s.p, cfg.i_off, v);
      libs.push_back(cells::build_library(s.dims, s.stack, n, p, v, s.lib_opt));
    } catch (const Error& e) {
      rethrow_with_context(e, "v_dd=" + format_double(v) + " V");
    }
  }
  return libs;
}

SweepResult ef_sweep(const SweepConfig& cfg, const SweepSetup& s) { return ef_sweep(cfg, s, build_libraries(cfg, s)); }

SweepResult ef_sweep(const SweepConfig& cfg, const SweepSetup& s, std::vector<cells::CellLibrary> libraries) {
  cfg.validate();
  if (libraries.size() != cfg.vdd.size()) throw ConfigError("sweep: need one library per V_DD");
  for (size_t i = 0; i < libraries.size(); ++i)
    if (libraries[i].v_dd != cfg.vdd[i]) throw ConfigError("sweep: library V_DD does not match the grid");
  SweepResult res;
  res.config_hash = setup_hash(cfg, s);
  res.vdd = cfg.vdd;
  res.stack = s.stack;
  res.libraries = std::move(libraries);
  const int nv = static_cast<int>(cfg.vdd.size());
  for (const auto& lib : res.libraries) res.fo3.push_back(cells::fo3_features(lib, s.stack));

  // Cell footprints do not depend on V_DD, so one placement serves every supply.
  const cells::CellLibrary& lib0 = res.libraries.front();
  const flow::Floorplan fp0 =
      flow::size_die(flow::netlist_cell_area(s.netlist, lib0), cfg.utilization, cfg.aspect, lib0.dims.height() * 1e-3);
  flow::PlaceOptions po;
  po.moves_per_cell = cfg.place_moves;
  po.seed = cfg.seed;
  po.utilization_limit = cfg.utilization;
  const flow::Placement pl0 = flow::place(s.netlist, lib0, fp0, po);

  std::vector<std::vector<EFRecord>> per(nv);
  std::vector<std::exception_ptr> errors(nv);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < nv; ++i) {
    try {
      per[i] = sweep_one_vdd(cfg, s, res.libraries[i], pl0, i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& v : per)
    for (auto& r : v) {
      r.provenance = res.config_hash + "#" + std::to_string(res.records.size());
      res.records.push_back(std::move(r));
    }
  return res;
}

std::vector<SweepResult> variant_sweeps(const SweepConfig& cfg, const SweepSetup& base,
                                        const std::function<void(const SweepResult&)>& progress) {
  cfg.validate();
  const std::vector<double> rho = cfg.rho_con.empty() ? std::vector<double>{base.stack.rho_con} : cfg.rho_con;
  std::vector<SweepResult> out;
  for (double mu : cfg.mu_scale)
    for (double v : cfg.v_scale)
      for (double rc : rho) {
        SweepSetup s = base;
        s.n.mu *= mu;
        s.p.mu *= mu;
        s.n.v *= v;
        s.p.v *= v;
        s.stack.rho_con = rc;
        s.stack.scale_vias = cfg.scale_vias;
        const std::string where =
            "mu_scale=" + format_double(mu) + ", v_scale=" + format_double(v) + ", rho_con=" + format_double(rc);
        try {
          const std::vector<cells::CellLibrary> libs = build_libraries(cfg, s);
          for (double x : cfg.dataset_x_rw) {
            SweepSetup sx = s;
            sx.stack = interconnect::scale_wire_resistance(s.stack, x);
            out.push_back(ef_sweep(cfg, sx, libs));
            if (progress) progress(out.back());
          }
        } catch (const Error& e) {
          rethrow_with_context(e, where);
        }
      }
  return out;
}

DeviceOptResult device_opt(const SweepConfig& cfg, const SweepSetup& setup) {
  cfg.validate();
  DeviceOptResult out;
  for (double l_spa : cfg.l_spa) {
    SweepSetup s = setup;
    s.dims.cgp = cfg.cgp;
    s.dims.l_gate = cfg.l_gate;
    s.dims.l_spa = l_spa;
    s.dims.l_con = cfg.cgp - cfg.l_gate - 2 * l_spa;
    s.n.l_gate = s.p.l_gate = cfg.l_gate;
    DeviceOptRow row;
    row.l_spa = l_spa;
    row.l_con = s.dims.l_con;
    const cells::CellGeometry g = cells::scale_layout(cells::CellTemplate{cells::GateType::inv, 1}, s.dims, s.stack);
    const cells::MEOLParasitics m = cells::extract_meol(g, s.stack);
    row.c_g2c = m.c_g2c;
    row.r_con = m.r_con;
    try {
      const SweepResult r = ef_sweep(cfg, s);
      int arg = 0;
      row.min_edp = r.min_edp(&arg);
      row.area = r.records[arg].result.die_area;
    } catch (const Error& e) {
      rethrow_with_context(e, "l_spa=" + format_double(l_spa) + " nm");
    }
    out.rows.push_back(row);
  }
  for (size_t i = 1; i < out.rows.size(); ++i)
    if (out.rows[i].min_edp < out.rows[out.argmin].min_edp) out.argmin = static_cast<int>(i);
  return out;
}

double ring_oscillator_edp(const cells::CellLibrary& lib, const interconnect::TechStack& stack,
                           const RingOscillator& ro) {
  if (ro.stages < 3 || ro.stages % 2 == 0) throw DomainError("ring oscillator needs an odd stage count >= 3");
  if (!(ro.wire_um >= 0)) throw DomainError("ring oscillator wire length must be >= 0");
  const cells::Cell& inv = lib.cell("INV_X1");
  flow::NetRoute w = flow::route_wire(ro.wire_um, ro.wire_um, 0.0, lib.dims.cgp, stack, flow::RouteOptions{});
  // Every stage drives its neighbour plus two dummy loads.
  w.c_pins = 3 * inv.pin_cap[0];
  const double load = flow::net_load(w), elmore = flow::net_elmore(w);
  const cells::TimingArc& arc = inv.arcs[0];
  double slew = 16;
  double d_r = 0, d_f = 0;
  for (int it = 0; it < 50; ++it) {
    const double s_in = flow::wire_slew(slew, elmore);
    d_r = arc.delay[cells::kRise].lookup(s_in, load) + elmore;
    d_f = arc.delay[cells::kFall].lookup(s_in, load) + elmore;
    slew = 0.5 * (arc.slew[cells::kRise].lookup(s_in, load) + arc.slew[cells::kFall].lookup(s_in, load));
  }
  const double s_in = flow::wire_slew(slew, elmore);
  const double period_ns = ro.stages * (d_r + d_f) * 1e-3;
  const double e_pj =
      ro.stages * (arc.energy[cells::kRise].lookup(s_in, load) + arc.energy[cells::kFall].lookup(s_in, load)) * 1e-3;
  return e_pj * period_ns;
}

std::vector<XrwRow> xrw_sweep(const SweepConfig& cfg, const SweepSetup& setup) {
  cfg.validate();
  std::vector<SweepResult> runs;
  const std::vector<cells::CellLibrary> libs = build_libraries(cfg, setup);
  for (double x : cfg.x_rw) {
    SweepSetup s = setup;
    s.stack.scale_vias = cfg.scale_vias;
    s.stack = interconnect::scale_wire_resistance(s.stack, x);
    try {
      runs.push_back(ef_sweep(cfg, s, libs));
    } catch (const Error& e) {
      rethrow_with_context(e, "x_rw=" + format_double(x));
    }
  }
  // The reference wire is the average net of the run closest to copper.
  size_t ref = 0;
  for (size_t i = 1; i < cfg.x_rw.size(); ++i)
    if (std::abs(std::log(cfg.x_rw[i])) < std::abs(std::log(cfg.x_rw[ref]))) ref = i;
  int ref_rec = 0;
  runs[ref].min_edp(&ref_rec);
  RingOscillator ro;
  ro.wire_um = runs[ref].records[ref_rec].result.avg_net_length;
  const int ro_vdd = runs[ref].records[ref_rec].vdd_index;

  std::vector<XrwRow> out;
  for (size_t i = 0; i < runs.size(); ++i) {
    XrwRow row;
    row.x_rw = cfg.x_rw[i];
    int arg = 0;
    row.min_edp = runs[i].min_edp(&arg);
    row.area = runs[i].records[arg].result.die_area;
    row.ro_edp = ring_oscillator_edp(runs[i].libraries[ro_vdd], runs[i].stack, ro);
    out.push_back(row);
  }
  return out;
}

}  // namespace dispel::sweep
