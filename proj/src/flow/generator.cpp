#include <algorithm>
#include <cmath>
#include <random>

#include "dispel/common/error.hpp"
#include "dispel/flow/netlist.hpp"

namespace dispel::flow {

namespace {

struct Driver {
  int net;
  int cap;   // sampled fanout capacity
  int used = 0;
};

const char* gate_for_inputs(int k, std::mt19937_64& rng) {
  static const char* two[] = {"NAND2_X1", "NOR2_X1"};
  static const char* three[] = {"NAND3_X1", "NOR3_X1", "AOI21_X1"};
  if (k == 1) return "INV_X1";
  if (k == 2) return two[rng() % 2];
  return three[rng() % 3];
}

}  // namespace

Netlist generate_netlist(const NetlistSpec& s) {
  if (s.depth < 1 || s.n_gates < s.depth) throw DomainError("generate_netlist needs n_gates >= depth >= 1");
  if (!(s.fanout_mean >= 1)) throw DomainError("fanout_mean must be >= 1");
  if (!(s.rent > 0 && s.rent <= 1)) throw DomainError("rent exponent must be in (0, 1]");
  if (!(s.io_fraction > 0)) throw DomainError("io_fraction must be > 0");

  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = s.n_gates;
  const int m = std::max(1, static_cast<int>(std::lround(static_cast<double>(n) / s.depth)));
  const int n_io = std::max(1, static_cast<int>(std::lround(s.io_fraction * m)));

  // Input count per gate so that total sinks / total drivers hits the fanout mean.
  const double drivers = n + static_cast<double>(m) + n_io;
  const double fixed_sinks = static_cast<double>(m) + n_io;
  const double k_mean = std::clamp((s.fanout_mean * drivers - fixed_sinks) / n, 1.0, 3.0);
  // Above two inputs per gate, keep some inverters and raise the 2/3-input split to compensate.
  const double p_inv = k_mean > 2 ? std::min(0.2, (3.0 - k_mean) / 2.0) : 0.0;
  const double k_wide = p_inv < 1 ? (k_mean - p_inv) / (1.0 - p_inv) : 2.0;
  std::poisson_distribution<int> extra(s.fanout_mean - 1.0);

  Netlist nl;
  nl.depth = s.depth;
  // levels[0] holds register outputs and input pins; levels[l + 1] holds logic level l.
  std::vector<std::vector<Driver>> levels(s.depth + 1);
  std::vector<int> pin_in_nets;
  for (int i = 0; i < n_io; ++i) {
    const int net = nl.add_net("pi" + std::to_string(i));
    Node p;
    p.kind = NodeKind::pin_in;
    p.name = "in" + std::to_string(i);
    p.out = net;
    nl.add_node(p);
    pin_in_nets.push_back(net);
  }
  // One register bank: Q feeds level 0, D closes the stage from the deepest logic.
  std::vector<int> reg_q(m), reg_d(m), po_net(n_io);
  for (int i = 0; i < m; ++i) reg_q[i] = nl.add_net("q" + std::to_string(i));
  // Interleave pins among registers so both sit along the same position axis.
  int next_pin = 0;
  for (int i = 0; i < m; ++i) {
    levels[0].push_back({reg_q[i], 1 + extra(rng)});
    while (next_pin < n_io && (next_pin + 0.5) * m / n_io <= i + 1)
      levels[0].push_back({pin_in_nets[next_pin++], 1 + extra(rng)});
  }
  while (next_pin < n_io) levels[0].push_back({pin_in_nets[next_pin++], 1 + extra(rng)});

  std::vector<int> level_size(s.depth, n / s.depth);
  for (int l = 0; l < n % s.depth; ++l) ++level_size[l];

  struct PendingGate {
    std::string cell;
    std::vector<int> ins;
    int out;
    int level;
  };
  std::vector<PendingGate> gates;
  gates.reserve(n);

  auto pick = [&](int lvl, double x, const std::vector<int>& taken) -> Driver* {
    auto& pool = levels[lvl];
    const int size = static_cast<int>(pool.size());
    const int w = std::max(1, static_cast<int>(std::lround(std::pow(size, s.rent))));
    const int c = std::min(size - 1, static_cast<int>(x * size));
    int lo = std::max(0, c - w / 2), hi = std::min(size - 1, lo + w - 1);
    lo = std::max(0, hi - w + 1);
    std::vector<int> uncovered;
    double total = 0;
    for (int i = lo; i <= hi; ++i) {
      if (std::find(taken.begin(), taken.end(), pool[i].net) != taken.end()) continue;
      if (pool[i].used == 0) uncovered.push_back(i);
      total += std::max(0, pool[i].cap - pool[i].used) + 0.1;
    }
    if (!uncovered.empty()) return &pool[uncovered[rng() % uncovered.size()]];
    if (total == 0) return nullptr;
    double r = unit(rng) * total;
    for (int i = lo; i <= hi; ++i) {
      if (std::find(taken.begin(), taken.end(), pool[i].net) != taken.end()) continue;
      r -= std::max(0, pool[i].cap - pool[i].used) + 0.1;
      if (r <= 0) return &pool[i];
    }
    for (int i = hi; i >= lo; --i)
      if (std::find(taken.begin(), taken.end(), pool[i].net) == taken.end()) return &pool[i];
    return nullptr;
  };

  int gid = 0;
  for (int l = 0; l < s.depth; ++l) {
    for (int idx = 0; idx < level_size[l]; ++idx) {
      const double x = (idx + 0.5) / level_size[l];
      const double u = unit(rng);
      int k;
      if (k_mean <= 2) {
        k = u < 2.0 - k_mean ? 1 : 2;
      } else if (u < p_inv) {
        k = 1;
      } else {
        k = (u - p_inv) / (1.0 - p_inv) < 3.0 - k_wide ? 2 : 3;
      }
      PendingGate g;
      g.cell = gate_for_inputs(k, rng);
      g.level = l;
      for (int pin = 0; pin < k; ++pin) {
        // Pin 0 keeps the chain to the previous level; others reach back geometrically.
        int src = l;
        if (pin > 0)
          while (src > 0 && unit(rng) < 0.5) --src;
        Driver* d = pick(src, x, g.ins);
        for (int back = src - 1; !d && back >= 0; --back) d = pick(back, x, g.ins);
        if (!d) break;
        ++d->used;
        g.ins.push_back(d->net);
      }
      if (static_cast<int>(g.ins.size()) != k) g.cell = gate_for_inputs(static_cast<int>(g.ins.size()), rng);
      g.out = nl.add_net("n" + std::to_string(gid));
      levels[l + 1].push_back({g.out, 1 + extra(rng)});
      gates.push_back(std::move(g));
      ++gid;
    }
  }

  // Register D pins, then output pins, take the deepest level first, preferring unused outputs.
  {
    std::vector<Driver*> order;
    for (int l = s.depth; l >= 1; --l)
      for (auto& d : levels[l])
        if (d.used == 0) order.push_back(&d);
    for (auto& d : levels[s.depth])
      if (d.used != 0) order.push_back(&d);
    for (int i = 0; i < m + n_io; ++i) {
      Driver* d = order[i % order.size()];
      ++d->used;
      (i < m ? reg_d[i] : po_net[i - m]) = d->net;
    }
  }

  // Rewire remaining unused gate outputs into a later gate whose current driver has fanout to spare.
  std::vector<int> net_gate(nl.nets.size(), -1);
  for (size_t g = 0; g < gates.size(); ++g) net_gate[gates[g].out] = static_cast<int>(g);
  std::vector<int> net_used(nl.nets.size(), 0);
  for (const auto& lv : levels)
    for (const auto& d : lv) net_used[d.net] = d.used;
  std::vector<int> level_start(s.depth + 1, 0);
  for (int l = 0; l < s.depth; ++l) level_start[l + 1] = level_start[l] + level_size[l];
  for (size_t g = 0; g < gates.size(); ++g) {
    if (net_used[gates[g].out] != 0) continue;
    const int l = gates[g].level;
    bool done = false;
    for (int tl = l + 1; tl < s.depth && !done; ++tl) {
      for (int t = level_start[tl]; t < level_start[tl + 1] && !done; ++t) {
        auto& tg = gates[t];
        if (std::find(tg.ins.begin(), tg.ins.end(), gates[g].out) != tg.ins.end()) continue;
        for (size_t p = (tl == l + 1 ? 0 : 1); p < tg.ins.size(); ++p) {
          const int old = tg.ins[p];
          if (net_used[old] < 2) continue;
          const int og = net_gate[old];
          // keep the level chain on pin 0
          if (p == 0 && og >= 0 && gates[og].level != tl - 1) continue;
          --net_used[old];
          ++net_used[gates[g].out];
          tg.ins[p] = gates[g].out;
          done = true;
          break;
        }
      }
    }
  }

  for (size_t g = 0; g < gates.size(); ++g) {
    Node node;
    node.kind = NodeKind::gate;
    node.name = "g" + std::to_string(g);
    node.cell = gates[g].cell;
    node.ins = gates[g].ins;
    node.out = gates[g].out;
    nl.add_node(std::move(node));
  }
  for (int i = 0; i < m; ++i) {
    Node r;
    r.kind = NodeKind::reg;
    r.cell = "DFF_X1";
    r.name = "r" + std::to_string(i);
    r.ins = {reg_d[i]};
    r.out = reg_q[i];
    nl.add_node(r);
  }
  for (int i = 0; i < n_io; ++i) {
    Node p;
    p.kind = NodeKind::pin_out;
    p.name = "out" + std::to_string(i);
    p.ins = {po_net[i]};
    nl.add_node(p);
  }
  nl.validate();
  return nl;
}

}  // namespace dispel::flow
