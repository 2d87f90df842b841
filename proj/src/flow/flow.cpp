#include "dispel/flow/flow.hpp"

#include <algorithm>
#include <set>

#include "dispel/common/error.hpp"

namespace dispel::flow {

double f_ach(double f_tar_ghz, double t_slack_ns) {
  if (!(f_tar_ghz > 0)) throw DomainError("f_ach: f_tar must be > 0");
  const double period = 1.0 / f_tar_ghz - t_slack_ns;
  if (!(period > 0)) throw DomainError("f_ach: effective period is not positive");
  return 1.0 / period;
}

double switching_power(double c_ff, double v_dd, double f_ghz, double activity) {
  // fF * V^2 = fJ; fJ * GHz = uW.
  return activity * f_ghz * c_ff * v_dd * v_dd * 1e-3;
}

PowerReport power(const Design& d, const TimingReport& r, double f_ghz, double activity, const StaOptions& sta) {
  if (!(f_ghz > 0)) throw DomainError("power: frequency must be > 0");
  if (!(activity >= 0 && activity <= 1)) throw DomainError("power: activity must be in [0, 1]");
  const double v = d.lib->v_dd;
  PowerReport p;
  double c_switched = 0, e_internal = 0, c_clock = 0, leak_nw = 0;
  for (size_t id = 0; id < d.nl.nodes.size(); ++id) {
    const Node& n = d.nl.nodes[id];
    const cells::Cell* c = d.cell_of[id];
    if (!c) continue;
    const double load = net_load(d.routes[n.out]);
    c_switched += load;
    leak_nw += c->leakage;
    double e_cycle = 0;  // one rise plus one fall
    if (n.kind == NodeKind::reg) {
      c_clock += c->clock_pin_cap;
      e_cycle = c->arcs[0].energy[cells::kRise].lookup(sta.clock_slew, load) +
                c->arcs[0].energy[cells::kFall].lookup(sta.clock_slew, load);
    } else {
      const int in = n.ins[0];
      const double s_in = wire_slew(std::max(r.slew[0][in], r.slew[1][in]), r.elmore[in]);
      const cells::TimingArc& arc = c->arcs[c->pin_arc[0]];
      e_cycle = arc.energy[cells::kRise].lookup(s_in, load) + arc.energy[cells::kFall].lookup(s_in, load);
    }
    // The supply energy of a full cycle already contains the load charge.
    e_internal += std::max(0.0, e_cycle - load * v * v);
  }
  p.switching = switching_power(c_switched, v, f_ghz, activity);
  p.internal = activity * f_ghz * e_internal * 1e-3;
  p.clock = switching_power(c_clock, v, f_ghz, 1.0);
  p.leakage = leak_nw * 1e-6;
  return p;
}

DesignResult evaluate(const Design& d, double f_tar_ghz, const FlowOptions& opt, int actions) {
  const TimingReport r = run_sta(d, f_tar_ghz, opt.sta);
  DesignResult res;
  res.v_dd = d.lib->v_dd;
  res.f_tar = f_tar_ghz;
  res.t_cp = r.t_cp;
  res.t_slack = r.slack;
  res.f_ach = f_ach(f_tar_ghz, r.slack);
  res.power = power(d, r, res.f_ach, opt.activity, opt.sta);
  res.energy = res.power.total() / res.f_ach;
  res.cell_area = d.cell_area();
  res.die_area = d.pl.fp.area();
  res.utilization = res.cell_area / res.die_area;
  res.buffer_count = d.buffer_count();
  res.actions = actions;
  res.avg_net_length = d.avg_net_length();

  int inv_buf = 0, multi = 0;
  for (size_t id = 0; id < d.nl.nodes.size(); ++id) {
    const cells::Cell* c = d.cell_of[id];
    if (!c || (c->tmpl.gate != cells::GateType::inv && c->tmpl.gate != cells::GateType::buf)) continue;
    ++inv_buf;
    multi += c->tmpl.fingers >= 2 ? 1 : 0;
  }
  res.multi_finger_ratio = inv_buf ? static_cast<double>(multi) / inv_buf : 0.0;

  std::set<int> critical;
  for (const auto& path : top_paths(d, r, opt.top_k, opt.sta))
    for (const PathStep& s : path) critical.insert(s.net);
  std::array<double, 7> sum{}, crit_sum{};
  for (size_t i = 0; i < d.routes.size(); ++i) {
    const NetRoute& n = d.routes[i];
    if (n.layer < 2 || d.nl.nets[i].sinks.empty()) continue;
    ++res.layers[n.layer].nets;
    sum[n.layer] += n.length;
    if (critical.count(static_cast<int>(i))) {
      ++res.layers[n.layer].critical_nets;
      crit_sum[n.layer] += n.length;
    }
  }
  for (int l = 2; l <= 6; ++l) {
    LayerStats& s = res.layers[l];
    if (s.nets) s.avg_length = sum[l] / s.nets;
    if (s.critical_nets) s.critical_avg_length = crit_sum[l] / s.critical_nets;
  }
  for (const PathStep& s : r.path) res.critical_path.push_back(d.nl.nodes[s.node].name);
  return res;
}

DesignResult run_flow(const Design& d, double f_tar_ghz, const FlowOptions& opt) {
  Trajectory t(d, opt.opt, opt.sta);
  const size_t k = t.steps_for(timing_budget(f_tar_ghz, opt.sta));
  return evaluate(t.design_at(k), f_tar_ghz, opt, static_cast<int>(k));
}

RcShare rc_contribution(const Design& d, const StaOptions& sta) {
  const TimingReport r = run_sta(d, 1.0, sta);
  if (!(r.t_cp > 0)) throw NumericError("rc_contribution: critical path delay is not positive");
  auto retime = [&](bool zero_r) {
    Design z = d;
    for (const PathStep& s : r.path) {
      NetRoute& n = z.routes[s.net];
      if (zero_r) {
        n.r_wire = 0;
        n.r_via = 0;
      } else {
        n.c_wire = 0;
      }
    }
    return endpoint_arrival(z, run_sta(z, 1.0, sta), r.endpoint, sta);
  };
  RcShare s;
  s.share_r = 1.0 - retime(true) / r.t_cp;
  s.share_c = 1.0 - retime(false) / r.t_cp;
  return s;
}

}  // namespace dispel::flow
