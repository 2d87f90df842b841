#include "dispel/cells/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace dispel::cells {

double CellDims::device_width() const {
  if (structure == Structure::finfet) return fin.count * (2.0 * fin.height + fin.width);
  return planar_width_fraction * height();
}

double CellDims::footprint() const {
  if (structure == Structure::finfet) return (fin.count - 1) * fin.pitch + fin.width;
  return device_width();
}

void check_decomposition(const CellDims& d) {
  if (!(d.l_gate > 0) || !(d.l_spa > 0) || !(d.l_con > 0) || !(d.cgp > 0))
    throw DecompositionError("CGP parts must all be > 0 (l_gate=" + std::to_string(d.l_gate) +
                             ", l_spa=" + std::to_string(d.l_spa) + ", l_con=" + std::to_string(d.l_con) + ")");
  const double sum = d.l_gate + 2.0 * d.l_spa + d.l_con;
  if (std::abs(sum - d.cgp) > 1e-9 * d.cgp)
    throw DecompositionError("l_gate + 2 l_spa + l_con = " + std::to_string(sum) + " nm, cgp = " +
                             std::to_string(d.cgp) + " nm");
  if (!(d.m2_pitch > 0) || !(d.tracks > 0)) throw DomainError("m2_pitch and tracks must be > 0");
  if (!(d.k_spacer > 0) || !(d.contact_height > 0)) throw DomainError("k_spacer and contact_height must be > 0");
  if (d.structure == Structure::finfet) {
    if (d.fin.count < 1 || !(d.fin.width > 0) || !(d.fin.height > 0) || !(d.fin.pitch > d.fin.width))
      throw DomainError("fin geometry must have count >= 1 and pitch > width > 0");
  } else if (!(d.planar_width_fraction > 0 && d.planar_width_fraction < 0.5)) {
    throw DomainError("planar_width_fraction must be in (0, 0.5)");
  }
}

const GateTopology& topology(GateType g) {
  static const GateTopology table[] = {
      {GateType::inv, "INV", {"A"}, {{{"A"}, 1, 1}}, 1, 1},
      {GateType::nand2, "NAND2", {"A", "B"}, {{{"A", "B"}, 2, 1}}, 1, 2},
      {GateType::nand3, "NAND3", {"A", "B", "C"}, {{{"A", "B", "C"}, 3, 1}}, 1, 3},
      {GateType::nor2, "NOR2", {"A", "B"}, {{{"A", "B"}, 1, 2}}, 2, 1},
      {GateType::nor3, "NOR3", {"A", "B", "C"}, {{{"A", "B", "C"}, 1, 3}}, 3, 1},
      {GateType::aoi21, "AOI21", {"A", "B", "C"}, {{{"A", "B"}, 2, 2}, {{"C"}, 1, 2}}, 2, 1},
      {GateType::buf, "BUF", {"A"}, {{{"A"}, 1, 1}}, 1, 1},
      {GateType::dff, "DFF", {"D"}, {{{"CLK"}, 1, 1}}, 1, 1},
  };
  return table[static_cast<int>(g)];
}

std::string gate_name(GateType g) { return topology(g).name; }

GateType parse_gate(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(GateType::dff); ++i)
    if (topology(static_cast<GateType>(i)).name == name) return static_cast<GateType>(i);
  throw ConfigError("unknown gate type '" + name + "'");
}

std::string cell_name(const CellTemplate& t) { return gate_name(t.gate) + "_X" + std::to_string(t.fingers); }

int buffer_first_stage(int fingers) { return std::max(1, fingers / 4); }

std::string structure_name(Structure s) { return s == Structure::planar ? "planar" : "finfet"; }

Structure parse_structure(const std::string& s) {
  if (s == "planar") return Structure::planar;
  if (s == "finfet") return Structure::finfet;
  throw ConfigError("structure must be planar or finfet, got '" + s + "'");
}

namespace {

int gate_columns(const CellTemplate& t) {
  switch (t.gate) {
    case GateType::buf: return buffer_first_stage(t.fingers) + t.fingers;
    case GateType::dff: return 8;  // two clocked inverters, two latch keepers, two output stages
    default: return static_cast<int>(topology(t.gate).inputs.size()) * t.fingers;
  }
}

bool touches(const Rect& a, const Rect& b) {
  return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

}  // namespace

CellGeometry scale_layout(const CellTemplate& t, const CellDims& d, const interconnect::TechStack& stack) {
  check_decomposition(d);
  if (t.fingers < 1) throw DomainError("fingers must be >= 1");
  CellGeometry g;
  g.tmpl = t;
  g.name = cell_name(t);
  g.dims = d;
  g.columns = gate_columns(t);
  g.width = (g.columns + 1) * d.cgp;
  g.height = d.height();

  const double h = g.height;
  const double ma_w = std::max(d.l_con, stack.layer("MA").min_width);
  // Active regions: n in the lower half, p in the upper half.
  const double act[2][2] = {{0.05 * h, 0.45 * h}, {0.55 * h, 0.95 * h}};
  for (int c = 0; c < g.columns; ++c) {
    const double xc = (c + 1) * d.cgp;
    g.rects.push_back({"PO", xc - d.l_gate / 2, 0, xc + d.l_gate / 2, h});
  }
  for (int c = 0; c <= g.columns; ++c) {
    const double xc = (c + 0.5) * d.cgp;
    for (const auto& a : act) {
      g.rects.push_back({"TS", xc - d.l_con / 2, a[0], xc + d.l_con / 2, a[1]});
      g.rects.push_back({"MA", xc - ma_w / 2, a[0], xc + ma_w / 2, a[1]});
    }
  }
  for (size_t i = 0; i < g.rects.size(); ++i)
    for (size_t j = i + 1; j < g.rects.size(); ++j)
      if (g.rects[i].layer == g.rects[j].layer && touches(g.rects[i], g.rects[j]))
        throw LayoutError("cell " + g.name + ": " + g.rects[i].layer + " shapes " + std::to_string(i) + " and " +
                          std::to_string(j) + " touch or overlap");
  return g;
}

}  // namespace dispel::cells
