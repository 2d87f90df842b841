#include "dispel/flow/sta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "dispel/common/error.hpp"

namespace dispel::flow {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLn9 = std::log(9.0);

int out_edge(const cells::Cell& c, int in_edge) { return c.inverting ? 1 - in_edge : in_edge; }

const cells::TimingArc& arc_for(const cells::Cell& c, int pin) {
  const int a = c.pin_arc[pin];
  if (a < 0) throw ConfigError("cell " + c.name + " pin " + c.inputs[pin] + " has no timing arc");
  return c.arcs[a];
}

void check_options(const StaOptions& o) {
  if (!(o.clock_slew > 0) || !(o.input_slew > 0)) throw DomainError("sta: slews must be > 0");
  if (!(o.uncertainty_frac >= 0 && o.uncertainty_frac < 1)) throw DomainError("sta: uncertainty must be in [0, 1)");
}

// Endpoint arrival (driver arrival + wire + setup or output budget).
double endpoint_time(const Design& d, int node, double at_wire) {
  const Node& n = d.nl.nodes[node];
  return at_wire + (n.kind == NodeKind::reg ? d.cell_of[node]->setup : 0.0);
}

}  // namespace

double wire_slew(double slew_in, double elmore) {
  const double w = kLn9 * elmore;
  return std::sqrt(slew_in * slew_in + w * w);
}

TimingReport run_sta(const Design& d, double f_tar_ghz, const StaOptions& opt) {
  check_options(opt);
  if (!(f_tar_ghz > 0)) throw DomainError("sta: f_tar must be > 0");
  const Netlist& nl = d.nl;
  const size_t nn = nl.nets.size();
  TimingReport r;
  r.elmore.resize(nn);
  for (int e = 0; e < 2; ++e) {
    r.arrival[e].assign(nn, kNegInf);
    r.slew[e].assign(nn, 0.0);
  }
  // (input net, input edge) that set each output arrival
  std::vector<std::pair<int, int>> pred[2];
  pred[0].assign(nn, {-1, 0});
  pred[1].assign(nn, {-1, 0});
  for (size_t i = 0; i < nn; ++i) r.elmore[i] = net_elmore(d.routes[i]);

  for (size_t id = 0; id < nl.nodes.size(); ++id) {
    const Node& n = nl.nodes[id];
    if (n.kind == NodeKind::pin_in) {
      for (int e = 0; e < 2; ++e) {
        r.arrival[e][n.out] = opt.input_delay;
        r.slew[e][n.out] = opt.input_slew;
      }
    } else if (n.kind == NodeKind::reg) {
      const cells::Cell& c = *d.cell_of[id];
      const double load = net_load(d.routes[n.out]);
      for (int e = 0; e < 2; ++e) {
        r.arrival[e][n.out] = c.arcs[0].delay[e].lookup(opt.clock_slew, load);
        r.slew[e][n.out] = c.arcs[0].slew[e].lookup(opt.clock_slew, load);
      }
    }
  }
  for (int id : nl.topo_gates()) {
    const Node& n = nl.nodes[id];
    const cells::Cell& c = *d.cell_of[id];
    const double load = net_load(d.routes[n.out]);
    for (size_t p = 0; p < n.ins.size(); ++p) {
      const int in = n.ins[p];
      const cells::TimingArc& arc = arc_for(c, static_cast<int>(p));
      for (int ei = 0; ei < 2; ++ei) {
        const int eo = out_edge(c, ei);
        const double s_in = wire_slew(r.slew[ei][in], r.elmore[in]);
        const double at = (r.arrival[ei][in] + r.elmore[in]) + arc.delay[eo].lookup(s_in, load);
        if (at > r.arrival[eo][n.out]) {
          r.arrival[eo][n.out] = at;
          pred[eo][n.out] = {in, ei};
        }
        r.slew[eo][n.out] = std::max(r.slew[eo][n.out], arc.slew[eo].lookup(s_in, load));
      }
    }
  }

  r.t_cp = kNegInf;
  int end_net = -1;
  for (size_t id = 0; id < nl.nodes.size(); ++id) {
    const Node& n = nl.nodes[id];
    if (n.kind != NodeKind::reg && n.kind != NodeKind::pin_out) continue;
    const int net = n.ins[0];
    for (int e = 0; e < 2; ++e) {
      const double t = endpoint_time(d, static_cast<int>(id), r.arrival[e][net] + r.elmore[net]);
      if (t > r.t_cp) {
        r.t_cp = t;
        r.endpoint = static_cast<int>(id);
        r.endpoint_edge = e;
        end_net = net;
      }
    }
  }
  if (end_net < 0) throw ConfigError("sta: design has no timing endpoint");

  for (int net = end_net, e = r.endpoint_edge; net >= 0;) {
    r.path.push_back({nl.nets[net].driver, net, e, r.arrival[e][net]});
    const auto [pn, pe] = pred[e][net];
    net = pn;
    e = pe;
  }
  std::reverse(r.path.begin(), r.path.end());

  r.period = 1.0 / f_tar_ghz;
  r.uncertainty = opt.uncertainty_frac * r.period;
  r.slack = r.period - r.uncertainty - r.t_cp * 1e-3;
  return r;
}

double endpoint_arrival(const Design& d, const TimingReport& r, int endpoint, const StaOptions&) {
  const Node& n = d.nl.nodes.at(endpoint);
  if (n.kind != NodeKind::reg && n.kind != NodeKind::pin_out) throw ConfigError("node " + n.name + " is no endpoint");
  const int net = n.ins[0];
  return std::max(endpoint_time(d, endpoint, r.arrival[0][net] + r.elmore[net]),
                  endpoint_time(d, endpoint, r.arrival[1][net] + r.elmore[net]));
}

double sta_path_enumeration(const Design& d, const StaOptions& opt) {
  check_options(opt);
  const Netlist& nl = d.nl;
  const size_t nn = nl.nets.size();
  std::vector<double> elmore(nn), load(nn);
  for (size_t i = 0; i < nn; ++i) {
    elmore[i] = net_elmore(d.routes[i]);
    load[i] = net_load(d.routes[i]);
  }

  // Worst slew at a net driver, by recursion over the fan-in cone.
  std::vector<double> memo(2 * nn, -1.0);
  std::function<double(int, int)> slew = [&](int net, int e) -> double {
    double& m = memo[2 * net + e];
    if (m >= 0) return m;
    const int id = nl.nets[net].driver;
    const Node& n = nl.nodes[id];
    if (n.kind == NodeKind::pin_in) return m = opt.input_slew;
    const cells::Cell& c = *d.cell_of[id];
    if (n.kind == NodeKind::reg) return m = c.arcs[0].slew[e].lookup(opt.clock_slew, load[net]);
    double s = 0;
    for (size_t p = 0; p < n.ins.size(); ++p) {
      const int ei = c.inverting ? 1 - e : e;
      const double s_in = wire_slew(slew(n.ins[p], ei), elmore[n.ins[p]]);
      s = std::max(s, arc_for(c, static_cast<int>(p)).slew[e].lookup(s_in, load[net]));
    }
    return m = s;
  };

  double worst = kNegInf;
  // Walks every path forward from a driver output with arrival `at` on edge e.
  std::function<void(int, int, double)> walk = [&](int net, int e, double at) {
    const double s_in_raw = slew(net, e);
    for (const Sink& s : nl.nets[net].sinks) {
      const Node& n = nl.nodes[s.node];
      if (n.kind == NodeKind::reg || n.kind == NodeKind::pin_out) {
        worst = std::max(worst, endpoint_time(d, s.node, at + elmore[net]));
        continue;
      }
      const cells::Cell& c = *d.cell_of[s.node];
      const int eo = out_edge(c, e);
      const double s_in = wire_slew(s_in_raw, elmore[net]);
      const double next = (at + elmore[net]) + arc_for(c, s.pin).delay[eo].lookup(s_in, load[n.out]);
      walk(n.out, eo, next);
    }
  };
  for (size_t id = 0; id < nl.nodes.size(); ++id) {
    const Node& n = nl.nodes[id];
    for (int e = 0; e < 2; ++e) {
      if (n.kind == NodeKind::pin_in) walk(n.out, e, opt.input_delay);
      else if (n.kind == NodeKind::reg)
        walk(n.out, e, d.cell_of[id]->arcs[0].delay[e].lookup(opt.clock_slew, load[n.out]));
    }
  }
  if (worst == kNegInf) throw ConfigError("sta: design has no timing endpoint");
  return worst;
}

std::vector<std::vector<PathStep>> top_paths(const Design& d, const TimingReport& r, int k, const StaOptions&) {
  if (k < 1) throw DomainError("top_paths: k must be >= 1");
  const Netlist& nl = d.nl;
  struct End {
    double t;
    int node, edge;
  };
  std::vector<End> ends;
  for (size_t id = 0; id < nl.nodes.size(); ++id) {
    const Node& n = nl.nodes[id];
    if (n.kind != NodeKind::reg && n.kind != NodeKind::pin_out) continue;
    const int net = n.ins[0];
    const int e = r.arrival[1][net] > r.arrival[0][net] ? 1 : 0;
    ends.push_back({endpoint_time(d, static_cast<int>(id), r.arrival[e][net] + r.elmore[net]),
                    static_cast<int>(id), e});
  }
  std::stable_sort(ends.begin(), ends.end(), [](const End& a, const End& b) { return a.t > b.t; });
  if (static_cast<int>(ends.size()) > k) ends.resize(k);

  std::vector<std::vector<PathStep>> out;
  for (const End& end : ends) {
    std::vector<PathStep> path;
    int net = nl.nodes[end.node].ins[0], e = end.edge;
    while (net >= 0) {
      const int drv = nl.nets[net].driver;
      path.push_back({drv, net, e, r.arrival[e][net]});
      const Node& n = nl.nodes[drv];
      if (n.kind != NodeKind::gate) break;
      // Re-derive the dominating fan-in from the stored arrivals.
      const cells::Cell& c = *d.cell_of[drv];
      const int ei = c.inverting ? 1 - e : e;
      const double load = net_load(d.routes[net]);
      int best = -1;
      double best_at = kNegInf;
      for (size_t p = 0; p < n.ins.size(); ++p) {
        const int in = n.ins[p];
        const double s_in = wire_slew(r.slew[ei][in], r.elmore[in]);
        const double at = (r.arrival[ei][in] + r.elmore[in]) + arc_for(c, static_cast<int>(p)).delay[e].lookup(s_in, load);
        if (at > best_at) best_at = at, best = in;
      }
      net = best;
      e = ei;
    }
    std::reverse(path.begin(), path.end());
    out.push_back(std::move(path));
  }
  return out;
}

}  // namespace dispel::flow
