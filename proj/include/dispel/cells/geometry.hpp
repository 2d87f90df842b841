#pragma once

#include <string>
#include <vector>

#include "dispel/common/error.hpp"
#include "dispel/interconnect/tech_stack.hpp"

namespace dispel::cells {

class DecompositionError : public ConfigError {
 public:
  explicit DecompositionError(const std::string& what) : ConfigError(what) {}
};

// Relaxed design-rule violation found while scaling a cell.
class LayoutError : public ConfigError {
 public:
  explicit LayoutError(const std::string& what) : ConfigError(what) {}
};

enum class Structure { planar, finfet };

struct FinGeometry {
  double width = 5;    // nm
  double height = 30;  // nm
  double pitch = 21;   // nm
  int count = 3;       // fins per device

  bool operator==(const FinGeometry&) const = default;
};

// Front-end dimensions shared by every cell of a library.
struct CellDims {
  double cgp = 36;       // nm
  double m2_pitch = 24;  // nm
  double tracks = 6.5;
  double l_gate = 10;  // nm
  double l_spa = 8;    // nm
  double l_con = 10;   // nm
  Structure structure = Structure::planar;
  FinGeometry fin;
  double k_spacer = 4.5;
  double contact_height = 30;         // nm of gate flank facing the S/D contact
  double planar_width_fraction = 0.3;  // planar device width over cell height

  double height() const { return tracks * m2_pitch; }
  // Electrical width of one finger, nm. FinFETs count both sidewalls and the top.
  double device_width() const;
  // Lateral extent of the active region under one gate finger, nm.
  double footprint() const;

  bool operator==(const CellDims&) const = default;
};

// Throws DecompositionError unless cgp == l_gate + 2 l_spa + l_con with every part > 0.
void check_decomposition(const CellDims& d);

enum class GateType { inv, nand2, nand3, nor2, nor3, aoi21, buf, dff };

struct ArcTopology {
  std::vector<std::string> pins;  // input pins sharing this arc
  int n_stack = 1;                // series devices in the pull-down path
  int p_stack = 1;                // series devices in the pull-up path
};

struct GateTopology {
  GateType type;
  std::string name;
  std::vector<std::string> inputs;
  std::vector<ArcTopology> arcs;
  int n_out_devices = 1;  // pull-down devices whose drain is the output node
  int p_out_devices = 1;
};

const GateTopology& topology(GateType g);
std::string gate_name(GateType g);
GateType parse_gate(const std::string& name);

// The six logic gates in canonical feature order.
inline constexpr GateType kFeatureGates[] = {GateType::inv,  GateType::nand2, GateType::nand3,
                                             GateType::nor2, GateType::nor3,  GateType::aoi21};

struct CellTemplate {
  GateType gate = GateType::inv;
  int fingers = 1;  // drive size X1, X2, ...
};

std::string cell_name(const CellTemplate& t);

// Fingers of the first stage of a two-stage buffer of the given drive.
int buffer_first_stage(int fingers);

struct Rect {
  std::string layer;
  double x0, y0, x1, y1;  // nm
};

struct CellGeometry {
  std::string name;
  CellTemplate tmpl;
  CellDims dims;
  int columns = 0;  // gate columns
  double width = 0;   // nm
  double height = 0;  // nm
  std::vector<Rect> rects;

  double area_um2() const { return width * height * 1e-6; }
};

// Scales a cell template to the given dimensions and runs the relaxed overlap check.
CellGeometry scale_layout(const CellTemplate& t, const CellDims& d, const interconnect::TechStack& stack);

std::string structure_name(Structure s);
Structure parse_structure(const std::string& s);

}  // namespace dispel::cells
