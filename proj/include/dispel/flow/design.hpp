#pragma once

#include <cstdint>
#include <vector>

#include "dispel/cells/library.hpp"
#include "dispel/flow/netlist.hpp"
#include "dispel/interconnect/tech_stack.hpp"

namespace dispel::flow {

class CapacityError : public ConfigError {
 public:
  explicit CapacityError(const std::string& what) : ConfigError(what) {}
};

struct Point {
  double x = 0, y = 0;  // um
};

// Rectangular core with rows of standard-cell height; I/O pins on the top edge.
struct Floorplan {
  double width = 0;       // um
  double height = 0;      // um
  double row_height = 0;  // um
  double aspect() const { return height / width; }
  double area() const { return width * height; }
};

// Die close to the given aspect ratio (height/width) holding `cell_area` at
// `utilization`, with the height a whole number of rows.
Floorplan size_die(double cell_area, double utilization, double aspect, double row_height);
// Rescales the die at fixed aspect by bisection on the width until utilization
// is within `tol` of the target.
Floorplan resize_die(const Floorplan& fp, double cell_area, double target, double tol = 0.02);

struct Placement {
  Floorplan fp;
  std::vector<Point> pos;  // per netlist node: cell centre or pin location
};

struct PlaceOptions {
  double moves_per_cell = 1000;
  std::uint64_t seed = 42;
  int temperature_steps = 100;
  double utilization_limit = 0.6;  // capacity error above this
};

double net_hpwl(const Netlist& nl, const std::vector<Point>& pos, int net);
double total_hpwl(const Netlist& nl, const std::vector<Point>& pos);

// Cell widths (um) of every netlist node; zero for pins.
std::vector<double> node_widths(const Netlist& nl, const cells::CellLibrary& lib);
double netlist_cell_area(const Netlist& nl, const cells::CellLibrary& lib);

// Simulated annealing over row slots minimizing HPWL, then row legalization.
Placement place(const Netlist& nl, const cells::CellLibrary& lib, const Floorplan& fp, const PlaceOptions& opt = {});
// Seeded random slot assignment with the same legalization.
Placement random_placement(const Netlist& nl, const cells::CellLibrary& lib, const Floorplan& fp, std::uint64_t seed);
// Scales cell coordinates into a resized die and re-legalizes rows.
Placement scale_placement(const Placement& pl, const Netlist& nl, const cells::CellLibrary& lib, const Floorplan& fp);
// True when no two cells in a row overlap and every cell lies inside the die.
bool is_legal(const Placement& pl, const Netlist& nl, const cells::CellLibrary& lib);

// One routed net reduced to a 3-segment pi ladder between two via stacks.
struct NetRoute {
  double length = 0;  // um
  int layer = 0;      // 2..6 for M2..M6, 0 when unrouted
  int vias = 0;
  double r_wire = 0;  // Ohm
  double c_wire = 0;  // fF
  double r_via = 0;   // Ohm per end
  double c_pins = 0;  // fF of sinks
};

struct RouteOptions {
  double short_net_cgp = 20;   // <= this many CGP: M2/M3
  double medium_net_cgp = 100; // <= this many CGP: M4/M5, longer: M6
  double po_load = 1.0;        // fF at every output pin
};

int assign_layer(double length_um, double dx, double dy, double cgp_nm, const RouteOptions& opt);
NetRoute route_wire(double length_um, double dx, double dy, double cgp_nm, const interconnect::TechStack& stack,
                    const RouteOptions& opt);

// Elmore delay at the far node of an RC ladder: sum_i R_i * (sum_{j>=i} C_j).
double elmore_ladder(const std::vector<double>& r, const std::vector<double>& c);
// Elmore delay (ps) from the driver to the lumped sinks of one net.
double net_elmore(const NetRoute& n);
// Load (fF) seen by the driver.
inline double net_load(const NetRoute& n) { return n.c_wire + n.c_pins; }

// A placed, routed implementation. Owns the netlist so the optimizer can edit it.
struct Design {
  const cells::CellLibrary* lib = nullptr;
  const interconnect::TechStack* stack = nullptr;
  RouteOptions route_opt;
  Netlist nl;
  Placement pl;
  std::vector<const cells::Cell*> cell_of;  // per node, null for pins
  std::vector<NetRoute> routes;             // per net

  Design() = default;
  Design(const Netlist& n, const Placement& p, const cells::CellLibrary& l, const interconnect::TechStack& s,
         const RouteOptions& ro = {});

  void bind_cell(int node);
  void route_net(int net);
  void route_all();
  double pin_cap(int node, int pin) const;

  double cell_area() const;
  int buffer_count() const;
  double avg_net_length() const;
};

}  // namespace dispel::flow
