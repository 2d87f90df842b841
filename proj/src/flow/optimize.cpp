#include "dispel/flow/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "dispel/common/error.hpp"
#include "dispel/common/units.hpp"

namespace dispel::flow {

double optimal_buffer_spacing(double r_buf, double c_buf, double r_per_um, double c_per_um) {
  if (!(r_buf > 0 && c_buf > 0 && r_per_um > 0 && c_per_um > 0))
    throw DomainError("optimal_buffer_spacing: all inputs must be > 0");
  return std::sqrt(2.0 * r_buf * c_buf / (r_per_um * c_per_um));
}

double drive_resistance(const cells::Cell& c, double v_dd) {
  const double i = 0.5 * (c.i_on_pu + c.i_on_pd);
  if (!(i > 0)) throw DomainError("cell " + c.name + " has no drive current");
  return v_dd / (i * 1e-6);
}

void apply_action(Design& d, const Action& a) {
  Netlist& nl = d.nl;
  if (a.kind == Action::upsize) {
    nl.nodes.at(a.node).cell = a.cell;
    d.bind_cell(a.node);
    for (int in : nl.nodes[a.node].ins) d.route_net(in);
    return;
  }
  if (a.count < 1) throw DomainError("buffer action needs at least one buffer");
  const Net& orig = nl.nets.at(a.net);
  const std::vector<Sink> sinks = orig.sinks;
  const Point p0 = d.pl.pos[orig.driver];
  Point pc;
  for (const Sink& s : sinks) {
    pc.x += d.pl.pos[s.node].x / sinks.size();
    pc.y += d.pl.pos[s.node].y / sinks.size();
  }
  std::vector<int> new_nets;
  int prev = a.net;
  for (int i = 1; i <= a.count; ++i) {
    const int net = nl.add_net("bn" + std::to_string(nl.nets.size()));
    Node b;
    b.kind = NodeKind::gate;
    b.name = "buf" + std::to_string(nl.nodes.size());
    b.cell = a.cell;
    b.ins = {prev};
    b.out = net;
    b.buffer = true;
    nl.add_node(std::move(b));
    const double t = static_cast<double>(i) / (a.count + 1);
    d.pl.pos.push_back({p0.x + t * (pc.x - p0.x), p0.y + t * (pc.y - p0.y)});
    new_nets.push_back(net);
    prev = net;
  }
  for (const Sink& s : sinks) nl.nodes[s.node].ins[s.pin] = prev;
  nl.rebuild();
  for (size_t i = d.cell_of.size(); i < nl.nodes.size(); ++i) d.bind_cell(static_cast<int>(i));
  d.route_net(a.net);
  for (int n : new_nets) d.route_net(n);
}

namespace {

int input_pin(const Node& n, int net) {
  for (size_t p = 0; p < n.ins.size(); ++p)
    if (n.ins[p] == net) return static_cast<int>(p);
  return -1;
}

// Delay of the driver at path step i for a given output load, using the
// slew that arrives on the path.
double step_delay(const Design& d, const TimingReport& r, const StaOptions& sta, size_t i, const cells::Cell& cell,
                  double load) {
  const PathStep& s = r.path[i];
  const Node& n = d.nl.nodes[s.node];
  if (n.kind == NodeKind::reg) return cell.arcs[0].delay[s.edge].lookup(sta.clock_slew, load);
  const PathStep& prev = r.path[i - 1];
  const int pin = input_pin(n, prev.net);
  const double s_in = wire_slew(r.slew[prev.edge][prev.net], r.elmore[prev.net]);
  return cell.arcs[cell.pin_arc[pin]].delay[s.edge].lookup(s_in, load);
}

}  // namespace

std::vector<Action> candidate_actions(const Design& d, const TimingReport& r, const OptimizeOptions& opt,
                                      const StaOptions& sta) {
  std::vector<Action> buffers;
  struct Ranked {
    double gain;
    Action a;
  };
  std::vector<Ranked> sizes;
  const cells::Cell& buf = d.lib->cell(opt.buffer_cell);
  const double r_buf = drive_resistance(buf, d.lib->v_dd);
  const double c_buf = buf.pin_cap[0];

  for (size_t i = 0; i < r.path.size(); ++i) {
    const PathStep& s = r.path[i];
    const Node& n = d.nl.nodes[s.node];
    const NetRoute& route = d.routes[s.net];
    const double stage = i == 0 ? s.arrival : s.arrival - (r.path[i - 1].arrival + r.elmore[r.path[i - 1].net]);

    // Wire share of the stage: the net's own Elmore plus the driver charging the wire.
    const double wire = n.kind == NodeKind::pin_in
                            ? 0.0
                            : r.elmore[s.net] + drive_resistance(*d.cell_of[s.node], d.lib->v_dd) * route.c_wire *
                                                    units::ohm_ff_to_ps;
    if (n.kind != NodeKind::pin_in && route.layer > 0 && route.length > 0 && wire > opt.buffer_threshold * stage) {
      const auto rc = interconnect::wire_rc_per_um(d.stack->layer("M" + std::to_string(route.layer)), *d.stack);
      const double l_opt = optimal_buffer_spacing(r_buf, c_buf, rc.r_per_um, rc.c_per_um);
      if (route.length > l_opt) {
        Action a;
        a.kind = Action::buffer;
        a.net = s.net;
        a.count = std::max(1, static_cast<int>(std::floor(route.length / l_opt)));
        a.cell = opt.buffer_cell;
        buffers.push_back(a);
      }
    }

    if (n.kind != NodeKind::gate || i == 0) continue;
    const cells::Cell& cur = *d.cell_of[s.node];
    const auto fam = d.lib->family(cur.tmpl.gate);
    auto it = std::find(fam.begin(), fam.end(), &cur);
    if (it == fam.end() || it + 1 == fam.end()) continue;
    const cells::Cell& up = **(it + 1);
    const double load = net_load(route);
    double gain = step_delay(d, r, sta, i, up, load) - step_delay(d, r, sta, i, cur, load);
    // The upstream driver sees the larger input pin.
    const PathStep& prev = r.path[i - 1];
    const int pin = input_pin(n, prev.net);
    const double extra = up.pin_cap[pin] - cur.pin_cap[pin];
    if (d.nl.nodes[prev.node].kind != NodeKind::pin_in) {
      const cells::Cell& pc = *d.cell_of[prev.node];
      const double pl = net_load(d.routes[prev.net]);
      gain += step_delay(d, r, sta, i - 1, pc, pl + extra) - step_delay(d, r, sta, i - 1, pc, pl);
    }
    if (gain < 0) {
      Action a;
      a.kind = Action::upsize;
      a.node = s.node;
      a.cell = up.name;
      sizes.push_back({gain, a});
    }
  }
  std::stable_sort(sizes.begin(), sizes.end(), [](const Ranked& a, const Ranked& b) { return a.gain < b.gain; });
  for (auto& s : sizes) buffers.push_back(std::move(s.a));
  return buffers;
}

Trajectory::Trajectory(Design base, OptimizeOptions opt, StaOptions sta)
    : base_(std::move(base)), tip_(base_), opt_(std::move(opt)), sta_(sta) {
  if (opt_.trials_per_round < 1 || opt_.stall_rounds < 1 || opt_.max_actions < 0)
    throw DomainError("optimizer options must be positive");
  t_cp_.push_back(run_sta(tip_, 1.0, sta_).t_cp);
}

void Trajectory::extend() {
  while (!done_) {
    if (static_cast<int>(actions_.size()) >= opt_.max_actions) {
      done_ = true;
      return;
    }
    const TimingReport r = run_sta(tip_, 1.0, sta_);
    const auto cands = candidate_actions(tip_, r, opt_, sta_);
    // Each stalled round looks further down the candidate list.
    const size_t start = static_cast<size_t>(stall_) * opt_.trials_per_round;
    const size_t stop = std::min(cands.size(), start + opt_.trials_per_round);
    for (size_t i = start; i < stop; ++i) {
      Design trial = tip_;
      apply_action(trial, cands[i]);
      const double t = run_sta(trial, 1.0, sta_).t_cp;
      if (t < t_cp_.back()) {
        tip_ = std::move(trial);
        actions_.push_back(cands[i]);
        t_cp_.push_back(t);
        stall_ = 0;
        return;
      }
    }
    if (++stall_ >= opt_.stall_rounds || stop >= cands.size()) done_ = true;
  }
}

size_t Trajectory::steps_for(double budget_ps) {
  size_t k = 0;
  for (;;) {
    if (t_cp_[k] <= budget_ps) return k;
    if (k + 1 < t_cp_.size()) {
      ++k;
      continue;
    }
    if (done_) return k;
    extend();
  }
}

Design Trajectory::design_at(size_t steps) const {
  if (steps > actions_.size()) throw DomainError("trajectory has only " + std::to_string(actions_.size()) + " steps");
  Design d = base_;
  for (size_t i = 0; i < steps; ++i) apply_action(d, actions_[i]);
  return d;
}

double timing_budget(double f_tar_ghz, const StaOptions& sta) {
  if (!(f_tar_ghz > 0)) throw DomainError("f_tar must be > 0");
  return (1.0 - sta.uncertainty_frac) / f_tar_ghz * 1e3;
}

Design optimize(const Design& d, double f_tar_ghz, const OptimizeOptions& opt, const StaOptions& sta) {
  Trajectory t(d, opt, sta);
  return t.design_at(t.steps_for(timing_budget(f_tar_ghz, sta)));
}

}  // namespace dispel::flow
