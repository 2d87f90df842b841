#include "dispel/cells/library.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "dispel/common/parallel.hpp"

namespace dispel::cells {

namespace {

// Index of the segment [g[i], g[i+1]] used for x, clamped to the end segments.
size_t segment(const std::vector<double>& g, double x) {
  if (g.size() < 2) return 0;
  size_t i = std::upper_bound(g.begin(), g.end(), x) - g.begin();
  if (i == 0) return 0;
  return std::min(i - 1, g.size() - 2);
}

double frac(const std::vector<double>& g, size_t i, double x) {
  if (g.size() < 2) return 0.0;
  return (x - g[i]) / (g[i + 1] - g[i]);
}

}  // namespace

double Table2D::lookup(double slew, double load) const {
  const size_t i = segment(slews, slew), j = segment(loads, load);
  const double u = frac(slews, i, slew), w = frac(loads, j, load);
  const size_t i1 = slews.size() > 1 ? i + 1 : i, j1 = loads.size() > 1 ? j + 1 : j;
  const double a = at(i, j) + w * (at(i, j1) - at(i, j));
  const double b = at(i1, j) + w * (at(i1, j1) - at(i1, j));
  return a + u * (b - a);
}

int Cell::pin_index(const std::string& pin) const {
  for (size_t i = 0; i < inputs.size(); ++i)
    if (inputs[i] == pin) return static_cast<int>(i);
  throw ConfigError("cell " + name + " has no input pin '" + pin + "'");
}

const Cell* CellLibrary::find(const std::string& name) const {
  const auto it = index_.find(name);
  return it == index_.end() ? nullptr : &cells[it->second];
}

const Cell& CellLibrary::cell(const std::string& name) const {
  const Cell* c = find(name);
  if (!c) throw ConfigError("library has no cell '" + name + "'");
  return *c;
}

std::vector<const Cell*> CellLibrary::family(GateType g) const {
  std::vector<const Cell*> out;
  for (const auto& c : cells)
    if (c.tmpl.gate == g) out.push_back(&c);
  std::sort(out.begin(), out.end(), [](const Cell* a, const Cell* b) { return a->tmpl.fingers < b->tmpl.fingers; });
  return out;
}

CellLibrary assemble_library(const CellDims& dims, double v_dd, const device::VSParams& n, const device::VSParams& p,
                             std::vector<Cell> cells) {
  CellLibrary lib;
  lib.dims = dims;
  lib.v_dd = v_dd;
  lib.vs_n = n;
  lib.vs_p = p;
  lib.cells = std::move(cells);
  for (size_t i = 0; i < lib.cells.size(); ++i) {
    if (!lib.index_.emplace(lib.cells[i].name, i).second)
      throw ConfigError("duplicate cell '" + lib.cells[i].name + "'");
  }
  return lib;
}

std::vector<CellTemplate> library_templates(const std::vector<int>& sizes) {
  std::vector<CellTemplate> out;
  for (GateType g : kFeatureGates)
    for (int f : sizes) out.push_back({g, f});
  for (int f : sizes) out.push_back({GateType::buf, f});
  out.push_back({GateType::dff, 1});
  return out;
}

namespace {

struct Electrical {
  double w_um;      // device width per finger
  double cfet_n;    // fF per finger
  double cfet_p;
  double flank;     // fF, one gate flank incl. epi term
};

Electrical electrical(const CellDims& d, const MEOLParasitics& m, const device::VSParams& n,
                      const device::VSParams& p) {
  Electrical e;
  e.w_um = d.device_width() * 1e-3;
  e.cfet_n = device::gate_cap_per_width(n) * e.w_um;
  e.cfet_p = device::gate_cap_per_width(p) * e.w_um;
  e.flank = 0.5 * (m.c_g2c + m.c_g2e);
  return e;
}

// Input capacitance of one inverting stage with `fingers` fingers per input.
double stage_pin_cap(const Electrical& e, const MEOLParasitics& m, int fingers) {
  return fingers * (e.cfet_n + e.cfet_p + 4 * e.flank) + m.c_meol_in;
}

Stage inverting_stage(const Electrical& e, const MEOLParasitics& m, int fingers, int n_stack, int p_stack,
                      int n_out, int p_out, double c_meol_out) {
  Stage s;
  const SharedContacts sc = shared_contacts(m.r_con, fingers);
  s.n.width_um = fingers * e.w_um / n_stack;
  s.p.width_um = fingers * e.w_um / p_stack;
  s.n.r_s = s.p.r_s = sc.r_source + m.r_meol_series;
  s.n.r_d = s.p.r_d = sc.r_drain + m.r_meol_series;
  s.c_miller = 2 * fingers * e.flank;
  s.c_out = c_meol_out + (n_out + p_out - 2) * fingers * e.flank;
  return s;
}

}  // namespace

Cell prepare_cell(const CellTemplate& t, const CellDims& dims, const interconnect::TechStack& stack,
                  const device::VSParams& n, const device::VSParams& p, double v_dd) {
  Cell c;
  c.tmpl = t;
  c.geom = scale_layout(t, dims, stack);
  c.name = c.geom.name;
  c.meol = extract_meol(c.geom, stack);
  c.area = c.geom.area_um2();
  const GateTopology& topo = topology(t.gate);
  const Electrical e = electrical(dims, c.meol, n, p);

  const device::VSModel mn(n), mp(p);
  const double ion_n = mn.current(v_dd, v_dd), ion_p = mp.current(v_dd, v_dd);
  const double ioff_n = mn.current(0, v_dd), ioff_p = mp.current(0, v_dd);
  // Every gate column holds one n and one p device.
  c.leakage = 0.5 * (ioff_n + ioff_p) * c.geom.columns * e.w_um * v_dd * 1e3;

  switch (t.gate) {
    case GateType::buf: {
      const int s1 = buffer_first_stage(t.fingers);
      c.inputs = {"A"};
      c.pin_cap = {stage_pin_cap(e, c.meol, s1)};
      c.pin_arc = {0};
      c.inverting = false;
      c.i_on_pd = ion_n * t.fingers * e.w_um;
      c.i_on_pu = ion_p * t.fingers * e.w_um;
      break;
    }
    case GateType::dff: {
      c.inputs = {"D"};
      c.pin_cap = {stage_pin_cap(e, c.meol, 1)};
      c.pin_arc = {-1};
      c.inverting = false;
      c.sequential = true;
      c.clock_pin_cap = 2 * stage_pin_cap(e, c.meol, 1);
      c.i_on_pd = ion_n * e.w_um;
      c.i_on_pu = ion_p * e.w_um;
      break;
    }
    default: {
      c.inputs = topo.inputs;
      const double cap = stage_pin_cap(e, c.meol, t.fingers);
      c.pin_cap.assign(c.inputs.size(), cap);
      c.pin_arc.assign(c.inputs.size(), 0);
      for (size_t a = 0; a < topo.arcs.size(); ++a)
        for (const auto& pin : topo.arcs[a].pins) c.pin_arc[c.pin_index(pin)] = static_cast<int>(a);
      c.i_on_pd = ion_n * t.fingers * e.w_um / topo.arcs[0].n_stack;
      c.i_on_pu = ion_p * t.fingers * e.w_um / topo.arcs[0].p_stack;
    }
  }
  c.arcs.resize(topo.arcs.size());
  for (size_t a = 0; a < topo.arcs.size(); ++a) c.arcs[a].pins = topo.arcs[a].pins;
  return c;
}

std::vector<Stage> cell_stages(const Cell& c, size_t arc, const CellDims& dims, const interconnect::TechStack& stack,
                               const device::VSParams& n, const device::VSParams& p) {
  const Electrical e = electrical(dims, c.meol, n, p);
  const GateTopology& topo = topology(c.tmpl.gate);
  const int f = c.tmpl.fingers;
  std::vector<Stage> out;
  switch (c.tmpl.gate) {
    case GateType::buf: {
      const int s1 = buffer_first_stage(f);
      Stage first = inverting_stage(e, c.meol, s1, 1, 1, 1, 1, c.meol.c_meol_out);
      first.c_out += stage_pin_cap(e, c.meol, f) - c.meol.c_meol_in;
      out.push_back(first);
      out.push_back(inverting_stage(e, c.meol, f, 1, 1, 1, 1, c.meol.c_meol_out));
      break;
    }
    case GateType::dff: {
      // Clocked pass into the master inverter, then the output inverter.
      Stage first = inverting_stage(e, c.meol, 1, 2, 2, 1, 1, c.meol.c_meol_out);
      first.c_out += stage_pin_cap(e, c.meol, 1);
      out.push_back(first);
      out.push_back(inverting_stage(e, c.meol, 1, 1, 1, 1, 1, c.meol.c_meol_out));
      break;
    }
    default: {
      const ArcTopology& a = topo.arcs.at(arc);
      out.push_back(inverting_stage(e, c.meol, f, a.n_stack, a.p_stack, topo.n_out_devices, topo.p_out_devices,
                                    c.meol.c_meol_out));
    }
  }
  return out;
}

void characterize(Cell& c, const CellDims& dims, const interconnect::TechStack& stack, const device::VSParams& n,
                  const device::VSParams& p, double v_dd, const LibraryOptions& opt) {
  const device::VSModel mn(n), mp(p);
  const auto& slews = opt.grid.slews;
  const auto& loads = opt.grid.loads;
  for (size_t a = 0; a < c.arcs.size(); ++a) {
    const std::vector<Stage> base = cell_stages(c, a, dims, stack, n, p);
    TimingArc& arc = c.arcs[a];
    for (int edge : {kRise, kFall}) {
      for (Table2D* t : {&arc.delay[edge], &arc.slew[edge], &arc.energy[edge]}) {
        t->slews = slews;
        t->loads = loads;
        t->values.assign(slews.size() * loads.size(), 0.0);
      }
      const bool odd = base.size() % 2 == 1;
      const bool input_rising = (edge == kRise) != odd;
      for (size_t i = 0; i < slews.size(); ++i) {
        for (size_t j = 0; j < loads.size(); ++j) {
          std::vector<Stage> st = base;
          st.back().c_out += loads[j];
          ChainResult r;
          try {
            r = simulate_chain(mn, mp, st, v_dd, slews[i], input_rising, opt.transient);
          } catch (const CharacterizationError& ex) {
            throw CharacterizationError(c.name + " arc " + arc.pins.front() + (edge == kRise ? " rise" : " fall") +
                                        " slew " + std::to_string(slews[i]) + " load " + std::to_string(loads[j]) +
                                        ": " + ex.what());
          }
          const size_t k = i * loads.size() + j;
          arc.delay[edge].values[k] = r.nodes.back().t50;
          arc.slew[edge].values[k] = r.nodes.back().slew;
          double e = 0;
          for (double x : r.energy) e += x;
          arc.energy[edge].values[k] = e;
        }
      }
    }
  }
  if (c.sequential) {
    // Setup is one clocked-inverter delay at the mid grid slew.
    std::vector<Stage> st = cell_stages(c, 0, dims, stack, n, p);
    st.resize(1);
    const double mid = slews[slews.size() / 2];
    const ChainResult r1 = simulate_chain(mn, mp, st, v_dd, mid, true, opt.transient);
    const ChainResult r2 = simulate_chain(mn, mp, st, v_dd, mid, false, opt.transient);
    c.setup = std::max(r1.nodes[0].t50, r2.nodes[0].t50);
  }
}

CellLibrary build_library(const CellDims& dims, const interconnect::TechStack& stack, const device::VSParams& n,
                          const device::VSParams& p, double v_dd, const LibraryOptions& opt) {
  check_decomposition(dims);
  if (n.polarity != device::Polarity::n || p.polarity != device::Polarity::p)
    throw ConfigError("build_library needs an n-type and a p-type device");
  if (std::abs(n.l_gate - dims.l_gate) > 1e-9 || std::abs(p.l_gate - dims.l_gate) > 1e-9)
    throw ConfigError("device l_gate must equal the cell l_gate (" + std::to_string(dims.l_gate) + " nm)");
  if (!(v_dd > 0 && v_dd <= 2)) throw DomainError("v_dd must be in (0, 2] V");

  const std::vector<CellTemplate> tmpl = library_templates(opt.sizes);
  std::vector<Cell> cells(tmpl.size());
  // Geometry errors surface in template order before any transient runs.
  for (size_t i = 0; i < tmpl.size(); ++i) cells[i] = prepare_cell(tmpl[i], dims, stack, n, p, v_dd);

  std::vector<std::exception_ptr> errs(cells.size());
  const int nc = static_cast<int>(cells.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (int i = 0; i < nc; ++i) {
    try {
      characterize(cells[i], dims, stack, n, p, v_dd, opt);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);
  return assemble_library(dims, v_dd, n, p, std::move(cells));
}

}  // namespace dispel::cells
