#include "dispel/flow/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "dispel/common/error.hpp"
#include "dispel/common/units.hpp"

namespace dispel::flow {

Floorplan size_die(double cell_area, double utilization, double aspect, double row_height) {
  if (!(cell_area > 0)) throw DomainError("size_die: cell area must be > 0");
  if (!(utilization > 0 && utilization <= 1)) throw DomainError("size_die: utilization must be in (0, 1]");
  if (!(aspect > 0)) throw DomainError("size_die: aspect must be > 0");
  if (!(row_height > 0)) throw DomainError("size_die: row height must be > 0");
  // Height snaps to whole rows; the width then restores the utilization, so the
  // rows always hold the cells however small the design.
  const double die = cell_area / utilization;
  const double rows = std::max(1.0, std::round(std::sqrt(die * aspect) / row_height));
  Floorplan fp;
  fp.height = rows * row_height;
  fp.width = die / fp.height;
  fp.row_height = row_height;
  return fp;
}

Floorplan resize_die(const Floorplan& fp, double cell_area, double target, double tol) {
  if (!(fp.width > 0 && fp.height > 0)) throw DomainError("resize_die: empty floorplan");
  if (!(target > 0 && target <= 1) || !(tol > 0)) throw DomainError("resize_die: bad utilization target");
  const double aspect = fp.aspect();
  auto util = [&](double w) { return cell_area / (w * w * aspect); };
  // Utilization falls monotonically with width.
  double lo = fp.width, hi = fp.width;
  while (util(lo) < target) lo *= 0.5;
  while (util(hi) > target) hi *= 2.0;
  for (int it = 0; it < 200 && std::abs(util(0.5 * (lo + hi)) - target) > 1e-6 * tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (util(mid) > target ? lo : hi) = mid;
  }
  Floorplan out = fp;
  out.width = 0.5 * (lo + hi);
  out.height = aspect * out.width;
  if (std::abs(util(out.width) - target) > tol) throw ConvergenceError("resize_die: utilization outside tolerance");
  return out;
}

double net_hpwl(const Netlist& nl, const std::vector<Point>& pos, int net) {
  const Net& n = nl.nets[net];
  if (n.driver < 0) return 0;
  double x0 = pos[n.driver].x, x1 = x0, y0 = pos[n.driver].y, y1 = y0;
  for (const Sink& s : n.sinks) {
    const Point& p = pos[s.node];
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return (x1 - x0) + (y1 - y0);
}

double total_hpwl(const Netlist& nl, const std::vector<Point>& pos) {
  double s = 0;
  for (size_t i = 0; i < nl.nets.size(); ++i) s += net_hpwl(nl, pos, static_cast<int>(i));
  return s;
}

std::vector<double> node_widths(const Netlist& nl, const cells::CellLibrary& lib) {
  std::vector<double> w(nl.nodes.size(), 0.0);
  for (size_t i = 0; i < nl.nodes.size(); ++i) {
    const Node& n = nl.nodes[i];
    if (n.kind == NodeKind::gate || n.kind == NodeKind::reg) w[i] = lib.cell(n.cell).geom.width * 1e-3;
  }
  return w;
}

double netlist_cell_area(const Netlist& nl, const cells::CellLibrary& lib) {
  double a = 0;
  for (const Node& n : nl.nodes)
    if (n.kind == NodeKind::gate || n.kind == NodeKind::reg) a += lib.cell(n.cell).area;
  return a;
}

namespace {

bool is_cell(const Node& n) { return n.kind == NodeKind::gate || n.kind == NodeKind::reg; }

int row_count(const Floorplan& fp) {
  const int r = static_cast<int>(std::floor(fp.height / fp.row_height + 1e-9));
  if (r < 1) throw CapacityError("die is shorter than one cell row");
  return r;
}

void place_pins(const Netlist& nl, const Floorplan& fp, std::vector<Point>& pos) {
  std::vector<int> pins;
  for (size_t i = 0; i < nl.nodes.size(); ++i)
    if (!is_cell(nl.nodes[i])) pins.push_back(static_cast<int>(i));
  for (size_t k = 0; k < pins.size(); ++k)
    pos[pins[k]] = {(k + 0.5) * fp.width / pins.size(), fp.height};
}

// Packs cells into rows near their desired centres. Rows that overflow spill
// their rightmost cells into the nearest row with room.
void legalize(const Floorplan& fp, const std::vector<int>& cells, const std::vector<double>& width,
              std::vector<int> row, const std::vector<double>& want_x, std::vector<Point>& pos) {
  const int rows = row_count(fp);
  std::vector<std::vector<int>> members(rows);
  std::vector<double> used(rows, 0.0);
  for (int c : cells) {
    members[row[c]].push_back(c);
    used[row[c]] += width[c];
  }
  auto by_x = [&](int a, int b) { return want_x[a] != want_x[b] ? want_x[a] < want_x[b] : a < b; };
  for (int r = 0; r < rows; ++r) std::sort(members[r].begin(), members[r].end(), by_x);
  for (int r = 0; r < rows; ++r) {
    while (used[r] > fp.width * (1 + 1e-12)) {
      // Rightmost cell that fits in the nearest row with room; a wide cell
      // that fits nowhere stays and a narrower one moves instead.
      int dest = -1;
      size_t k = members[r].size();
      while (dest < 0 && k-- > 0) {
        const int c = members[r][k];
        for (int d = 1; d < rows && dest < 0; ++d) {
          for (int cand : {r - d, r + d})
            if (cand >= 0 && cand < rows && used[cand] + width[c] <= fp.width) {
              dest = cand;
              break;
            }
        }
      }
      if (dest < 0) throw CapacityError("cells do not fit in the rows of the die");
      const int c = members[r][k];
      members[r].erase(members[r].begin() + k);
      used[r] -= width[c];
      auto& m = members[dest];
      m.insert(std::upper_bound(m.begin(), m.end(), c, by_x), c);
      used[dest] += width[c];
    }
  }
  for (int r = 0; r < rows; ++r) {
    auto& m = members[r];
    std::vector<double> left(m.size());
    double edge = 0;
    for (size_t i = 0; i < m.size(); ++i) {
      left[i] = std::max(want_x[m[i]] - 0.5 * width[m[i]], edge);
      edge = left[i] + width[m[i]];
    }
    edge = fp.width;
    for (size_t i = m.size(); i-- > 0;) {
      left[i] = std::min(left[i], edge - width[m[i]]);
      edge = left[i];
    }
    for (size_t i = 0; i < m.size(); ++i) pos[m[i]] = {left[i] + 0.5 * width[m[i]], (r + 0.5) * fp.row_height};
  }
}

struct SlotGrid {
  int rows = 0, cols = 0;
  double pitch = 0;

  SlotGrid(const Floorplan& fp, size_t n_cells) {
    rows = row_count(fp);
    cols = std::max(1, static_cast<int>(std::ceil(1.25 * static_cast<double>(n_cells) / rows)));
    pitch = fp.width / cols;
  }
  Point centre(int slot, double row_h) const { return {(slot % cols + 0.5) * pitch, (slot / cols + 0.5) * row_h}; }
};

void check_capacity(const Netlist& nl, const cells::CellLibrary& lib, const Floorplan& fp, double limit) {
  if (!(fp.width > 0 && fp.height > 0 && fp.row_height > 0)) throw DomainError("floorplan dimensions must be > 0");
  const double area = netlist_cell_area(nl, lib);
  if (area > limit * fp.area() * (1 + 1e-9))
    throw CapacityError("cell area " + std::to_string(area) + " um^2 exceeds " + std::to_string(limit * 100) +
                        "% of the die");
}

std::vector<int> cell_nodes(const Netlist& nl) {
  std::vector<int> c;
  for (size_t i = 0; i < nl.nodes.size(); ++i)
    if (is_cell(nl.nodes[i])) c.push_back(static_cast<int>(i));
  return c;
}

Placement finish(const Netlist& nl, const cells::CellLibrary& lib, const Floorplan& fp, const SlotGrid& g,
                 const std::vector<int>& slot_of) {
  Placement pl;
  pl.fp = fp;
  pl.pos.assign(nl.nodes.size(), {});
  place_pins(nl, fp, pl.pos);
  const auto cells = cell_nodes(nl);
  const auto width = node_widths(nl, lib);
  std::vector<int> row(nl.nodes.size(), 0);
  std::vector<double> want(nl.nodes.size(), 0.0);
  for (int c : cells) {
    row[c] = slot_of[c] / g.cols;
    want[c] = g.centre(slot_of[c], fp.row_height).x;
  }
  legalize(fp, cells, width, row, want, pl.pos);
  return pl;
}

std::vector<int> random_slots(const Netlist& nl, const SlotGrid& g, std::mt19937_64& rng) {
  const auto cells = cell_nodes(nl);
  std::vector<int> slots(static_cast<size_t>(g.rows) * g.cols);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::vector<int> slot_of(nl.nodes.size(), -1);
  for (size_t i = 0; i < cells.size(); ++i) slot_of[cells[i]] = slots[i];
  return slot_of;
}

}  // namespace

Placement random_placement(const Netlist& nl, const cells::CellLibrary& lib, const Floorplan& fp,
                           std::uint64_t seed) {
  check_capacity(nl, lib, fp, 1.0);
  const SlotGrid g(fp, cell_nodes(nl).size());
  std::mt19937_64 rng(seed);
  return finish(nl, lib, fp, g, random_slots(nl, g, rng));
}

Placement place(const Netlist& nl, const cells::CellLibrary& lib, const Floorplan& fp, const PlaceOptions& opt) {
  check_capacity(nl, lib, fp, opt.utilization_limit);
  const auto cells = cell_nodes(nl);
  const SlotGrid g(fp, cells.size());
  std::mt19937_64 rng(opt.seed);
  std::vector<int> slot_of = random_slots(nl, g, rng);
  if (cells.empty() || opt.moves_per_cell <= 0) return finish(nl, lib, fp, g, slot_of);

  std::vector<int> occupant(static_cast<size_t>(g.rows) * g.cols, -1);
  for (int c : cells) occupant[slot_of[c]] = c;
  std::vector<Point> pos(nl.nodes.size());
  place_pins(nl, fp, pos);
  for (int c : cells) pos[c] = g.centre(slot_of[c], fp.row_height);

  std::vector<std::vector<int>> node_nets(nl.nodes.size());
  for (size_t i = 0; i < nl.nodes.size(); ++i) {
    auto& v = node_nets[i];
    if (nl.nodes[i].out >= 0) v.push_back(nl.nodes[i].out);
    for (int in : nl.nodes[i].ins) v.push_back(in);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  std::vector<double> cost(nl.nets.size());
  for (size_t i = 0; i < nl.nets.size(); ++i) cost[i] = net_hpwl(nl, pos, static_cast<int>(i));

  std::vector<int> touched;
  std::vector<unsigned> stamp(nl.nets.size(), 0);
  unsigned epoch = 0;
  std::vector<double> fresh;
  std::uniform_int_distribution<size_t> pick_cell(0, cells.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Returns the HPWL change of moving cell a to slot t (swapping with its occupant).
  auto trial = [&](int a, int t) {
    const int b = occupant[t];
    const int sa = slot_of[a];
    ++epoch;
    touched.clear();
    for (int n : node_nets[a])
      if (stamp[n] != epoch) stamp[n] = epoch, touched.push_back(n);
    if (b >= 0)
      for (int n : node_nets[b])
        if (stamp[n] != epoch) stamp[n] = epoch, touched.push_back(n);
    pos[a] = g.centre(t, fp.row_height);
    if (b >= 0) pos[b] = g.centre(sa, fp.row_height);
    fresh.resize(touched.size());
    double delta = 0;
    for (size_t k = 0; k < touched.size(); ++k) {
      fresh[k] = net_hpwl(nl, pos, touched[k]);
      delta += fresh[k] - cost[touched[k]];
    }
    return delta;
  };
  auto undo = [&](int a, int t) {
    const int b = occupant[t];
    pos[a] = g.centre(slot_of[a], fp.row_height);
    if (b >= 0) pos[b] = g.centre(t, fp.row_height);
  };
  auto commit = [&](int a, int t) {
    const int b = occupant[t];
    const int sa = slot_of[a];
    occupant[sa] = b;
    occupant[t] = a;
    slot_of[a] = t;
    if (b >= 0) slot_of[b] = sa;
    for (size_t k = 0; k < touched.size(); ++k) cost[touched[k]] = fresh[k];
  };
  auto target = [&](int a, double reach) {
    const int s = slot_of[a];
    const int wr = std::max(1, static_cast<int>(std::lround(reach * g.rows)));
    const int wc = std::max(1, static_cast<int>(std::lround(reach * g.cols)));
    const int r = std::clamp(s / g.cols + static_cast<int>(rng() % (2 * wr + 1)) - wr, 0, g.rows - 1);
    const int c = std::clamp(s % g.cols + static_cast<int>(rng() % (2 * wc + 1)) - wc, 0, g.cols - 1);
    return r * g.cols + c;
  };

  // Starting temperature from the mean uphill cost of random full-range moves.
  double uphill = 0;
  int n_up = 0;
  for (size_t i = 0; i < std::min<size_t>(cells.size() * 2, 20000); ++i) {
    const int a = cells[pick_cell(rng)];
    const int t = target(a, 1.0);
    if (t == slot_of[a]) continue;
    const double d = trial(a, t);
    undo(a, t);
    if (d > 0) uphill += d, ++n_up;
  }
  const double t0 = n_up ? 5.0 * uphill / n_up : 1.0;
  const double t_end = t0 * 1e-4;
  const int steps = std::max(1, opt.temperature_steps);
  const double alpha = steps > 1 ? std::pow(t_end / t0, 1.0 / (steps - 1)) : 1.0;
  const auto per_step =
      static_cast<long>(std::ceil(opt.moves_per_cell * static_cast<double>(cells.size()) / steps));

  double temp = t0;
  for (int step = 0; step < steps; ++step, temp *= alpha) {
    // Range limiter: the move window shrinks with log temperature.
    const double reach = steps > 1 ? std::max(0.0, 1.0 - static_cast<double>(step) / (steps - 1)) : 1.0;
    for (long mv = 0; mv < per_step; ++mv) {
      const int a = cells[pick_cell(rng)];
      const int t = target(a, reach);
      if (t == slot_of[a]) continue;
      const double d = trial(a, t);
      if (d <= 0 || unit(rng) < std::exp(-d / temp)) commit(a, t);
      else undo(a, t);
    }
  }
  return finish(nl, lib, fp, g, slot_of);
}

Placement scale_placement(const Placement& pl, const Netlist& nl, const cells::CellLibrary& lib,
                          const Floorplan& fp) {
  if (pl.pos.size() != nl.nodes.size()) throw ConfigError("placement does not match the netlist");
  Placement out;
  out.fp = fp;
  out.pos.assign(nl.nodes.size(), {});
  place_pins(nl, fp, out.pos);
  const auto cells = cell_nodes(nl);
  const auto width = node_widths(nl, lib);
  const int rows = row_count(fp);
  const double sx = fp.width / pl.fp.width, sy = fp.height / pl.fp.height;
  std::vector<int> row(nl.nodes.size(), 0);
  std::vector<double> want(nl.nodes.size(), 0.0);
  for (int c : cells) {
    want[c] = pl.pos[c].x * sx;
    row[c] = std::clamp(static_cast<int>(pl.pos[c].y * sy / fp.row_height), 0, rows - 1);
  }
  legalize(fp, cells, width, row, want, out.pos);
  return out;
}

bool is_legal(const Placement& pl, const Netlist& nl, const cells::CellLibrary& lib) {
  if (pl.pos.size() != nl.nodes.size()) return false;
  const auto width = node_widths(nl, lib);
  const int rows = row_count(pl.fp);
  std::vector<std::vector<std::pair<double, double>>> spans(rows);
  const double eps = 1e-9 * pl.fp.width;
  for (int c : cell_nodes(nl)) {
    const double r = pl.pos[c].y / pl.fp.row_height - 0.5;
    const int ri = static_cast<int>(std::lround(r));
    if (std::abs(r - ri) > 1e-9 || ri < 0 || ri >= rows) return false;
    const double l = pl.pos[c].x - 0.5 * width[c], h = pl.pos[c].x + 0.5 * width[c];
    if (l < -eps || h > pl.fp.width + eps) return false;
    spans[ri].push_back({l, h});
  }
  for (auto& s : spans) {
    std::sort(s.begin(), s.end());
    for (size_t i = 1; i < s.size(); ++i)
      if (s[i].first < s[i - 1].second - eps) return false;
  }
  return true;
}

int assign_layer(double length_um, double dx, double dy, double cgp_nm, const RouteOptions& opt) {
  const double cgp = cgp_nm * 1e-3;
  const bool horizontal = dx >= dy;
  if (length_um <= opt.short_net_cgp * cgp) return horizontal ? 2 : 3;
  if (length_um <= opt.medium_net_cgp * cgp) return horizontal ? 4 : 5;
  return 6;
}

NetRoute route_wire(double length_um, double dx, double dy, double cgp_nm, const interconnect::TechStack& stack,
                    const RouteOptions& opt) {
  if (!(length_um >= 0)) throw DomainError("net length must be >= 0");
  NetRoute r;
  r.length = length_um;
  r.layer = assign_layer(length_um, dx, dy, cgp_nm, opt);
  r.vias = 2 * (r.layer - 1);
  const interconnect::WireRC rc = interconnect::wire_rc_per_um(stack.layer("M" + std::to_string(r.layer)), stack);
  r.r_wire = rc.r_per_um * length_um;
  r.c_wire = rc.c_per_um * length_um;
  for (int v = 1; v < r.layer; ++v) r.r_via += interconnect::via_resistance(stack.layer("V" + std::to_string(v)), stack);
  return r;
}

double elmore_ladder(const std::vector<double>& r, const std::vector<double>& c) {
  if (r.size() != c.size()) throw ConfigError("elmore_ladder: r and c differ in length");
  double downstream = 0, t = 0;
  for (size_t i = r.size(); i-- > 0;) {
    downstream += c[i];
    t += r[i] * downstream;
  }
  return t * units::ohm_ff_to_ps;
}

double net_elmore(const NetRoute& n) {
  // via stack, three pi sections, via stack into the lumped sinks
  const double rs = n.r_wire / 3, cs = n.c_wire / 3;
  return elmore_ladder({n.r_via, rs, rs, rs, n.r_via}, {cs / 2, cs, cs, cs / 2, n.c_pins});
}

Design::Design(const Netlist& n, const Placement& p, const cells::CellLibrary& l, const interconnect::TechStack& s,
               const RouteOptions& ro)
    : lib(&l), stack(&s), route_opt(ro), nl(n), pl(p) {
  if (pl.pos.size() != nl.nodes.size()) throw ConfigError("placement does not match the netlist");
  cell_of.assign(nl.nodes.size(), nullptr);
  for (size_t i = 0; i < nl.nodes.size(); ++i) bind_cell(static_cast<int>(i));
  route_all();
}

void Design::bind_cell(int node) {
  if (static_cast<int>(cell_of.size()) <= node) cell_of.resize(node + 1, nullptr);
  const Node& n = nl.nodes[node];
  cell_of[node] = is_cell(n) ? &lib->cell(n.cell) : nullptr;
}

double Design::pin_cap(int node, int pin) const {
  const Node& n = nl.nodes[node];
  if (n.kind == NodeKind::pin_out) return route_opt.po_load;
  if (!cell_of[node]) return 0;
  return cell_of[node]->pin_cap[pin];
}

void Design::route_net(int net) {
  if (static_cast<int>(routes.size()) <= net) routes.resize(net + 1);
  const Net& n = nl.nets[net];
  NetRoute r;
  if (n.driver >= 0) {
    double x0 = pl.pos[n.driver].x, x1 = x0, y0 = pl.pos[n.driver].y, y1 = y0;
    for (const Sink& s : n.sinks) {
      x0 = std::min(x0, pl.pos[s.node].x);
      x1 = std::max(x1, pl.pos[s.node].x);
      y0 = std::min(y0, pl.pos[s.node].y);
      y1 = std::max(y1, pl.pos[s.node].y);
    }
    r = route_wire((x1 - x0) + (y1 - y0), x1 - x0, y1 - y0, lib->dims.cgp, *stack, route_opt);
  }
  for (const Sink& s : n.sinks) r.c_pins += pin_cap(s.node, s.pin);
  routes[net] = r;
}

void Design::route_all() {
  routes.assign(nl.nets.size(), {});
  for (size_t i = 0; i < nl.nets.size(); ++i) route_net(static_cast<int>(i));
}

double Design::cell_area() const {
  double a = 0;
  for (const auto* c : cell_of)
    if (c) a += c->area;
  return a;
}

int Design::buffer_count() const {
  int n = 0;
  for (const Node& node : nl.nodes) n += node.buffer ? 1 : 0;
  return n;
}

double Design::avg_net_length() const {
  double s = 0;
  int n = 0;
  for (size_t i = 0; i < routes.size(); ++i) {
    if (nl.nets[i].driver < 0 || nl.nets[i].sinks.empty()) continue;
    s += routes[i].length;
    ++n;
  }
  return n ? s / n : 0.0;
}

}  // namespace dispel::flow
