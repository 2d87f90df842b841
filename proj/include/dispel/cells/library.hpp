#pragma once

#include <map>
#include <string>
#include <vector>

#include "dispel/cells/geometry.hpp"
#include "dispel/cells/meol.hpp"
#include "dispel/cells/transient.hpp"
#include "dispel/device/vs_model.hpp"
#include "dispel/interconnect/tech_stack.hpp"

namespace dispel::cells {

// Rectangular lookup table over (input slew, output load).
struct Table2D {
  std::vector<double> slews;  // ps, ascending
  std::vector<double> loads;  // fF, ascending
  std::vector<double> values; // row-major, one row per slew

  double at(size_t i, size_t j) const { return values[i * loads.size() + j]; }
  // Bilinear interpolation; linear extrapolation past the grid edges.
  double lookup(double slew, double load) const;
};

enum Edge { kRise = 0, kFall = 1 };  // output transition

struct TimingArc {
  std::vector<std::string> pins;
  Table2D delay[2];   // ps
  Table2D slew[2];    // ps, 10-90%
  Table2D energy[2];  // fJ drawn from the supply per event, load charge included
};

struct Cell {
  std::string name;
  CellTemplate tmpl;
  CellGeometry geom;
  MEOLParasitics meol;
  std::vector<std::string> inputs;
  std::vector<double> pin_cap;   // fF, parallel to inputs
  std::vector<int> pin_arc;      // arc index per input
  std::vector<TimingArc> arcs;
  bool inverting = true;
  bool sequential = false;
  double clock_pin_cap = 0;  // fF, sequential cells
  double setup = 0;          // ps, sequential cells
  double leakage = 0;        // nW
  double i_on_pu = 0;        // uA, intrinsic pull-up drive
  double i_on_pd = 0;        // uA, intrinsic pull-down drive
  double area = 0;           // um^2

  int pin_index(const std::string& pin) const;
};

struct CharGrid {
  std::vector<double> slews = {1, 4, 16, 64, 256};          // ps
  std::vector<double> loads = {0.05, 0.2, 0.8, 3.2, 12.8};  // fF
};

struct LibraryOptions {
  CharGrid grid;
  TransientOptions transient;
  std::vector<int> sizes = {1, 2, 4, 8};
  bool parallel = true;
};

struct CellLibrary {
  CellDims dims;
  double v_dd = 0;
  device::VSParams vs_n, vs_p;
  std::vector<Cell> cells;

  const Cell& cell(const std::string& name) const;  // throws ConfigError
  const Cell* find(const std::string& name) const;
  // Cells of one gate type ordered by drive.
  std::vector<const Cell*> family(GateType g) const;

 private:
  std::map<std::string, size_t> index_;
  friend CellLibrary assemble_library(const CellDims&, double, const device::VSParams&, const device::VSParams&,
                                      std::vector<Cell>);
};

CellLibrary assemble_library(const CellDims& dims, double v_dd, const device::VSParams& n, const device::VSParams& p,
                             std::vector<Cell> cells);

// Geometry, parasitics, pin capacitance and drive of one cell, without tables.
Cell prepare_cell(const CellTemplate& t, const CellDims& dims, const interconnect::TechStack& stack,
                  const device::VSParams& n, const device::VSParams& p, double v_dd);

// Electrical stages of one arc of a cell; the last stage's c_out excludes the
// external load.
std::vector<Stage> cell_stages(const Cell& c, size_t arc, const CellDims& dims, const interconnect::TechStack& stack,
                               const device::VSParams& n, const device::VSParams& p);

// Fills the timing/energy tables of a prepared cell.
void characterize(Cell& c, const CellDims& dims, const interconnect::TechStack& stack, const device::VSParams& n,
                  const device::VSParams& p, double v_dd, const LibraryOptions& opt = {});

// Builds and characterizes the full gate set. VS parameters are used as given
// (tune them to the leakage target first).
CellLibrary build_library(const CellDims& dims, const interconnect::TechStack& stack, const device::VSParams& n,
                          const device::VSParams& p, double v_dd, const LibraryOptions& opt = {});

// Templates in build order.
std::vector<CellTemplate> library_templates(const std::vector<int>& sizes);

}  // namespace dispel::cells
