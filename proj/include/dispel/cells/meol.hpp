#pragma once

#include "dispel/cells/geometry.hpp"
#include "dispel/interconnect/tech_stack.hpp"

namespace dispel::cells {

// Cell-level middle-of-line parasitics for one device finger.
struct MEOLParasitics {
  double r_con = 0;          // Ohm, one S/D contact of one finger
  double r_meol_series = 0;  // Ohm, trench contact plus local strap
  double c_g2c = 0;          // fF, gate to both S/D contacts of one finger
  double c_g2e = 0;          // fF, gate to raised epi (FinFET only)
  double c_meol_in = 0;      // fF, per input pin
  double c_meol_out = 0;     // fF, output node
};

MEOLParasitics extract_meol(const CellGeometry& g, const interconnect::TechStack& stack);

// Contact resistance of a parallel network of `fingers` devices whose S/D
// contacts alternate and are shared by neighbours.
struct SharedContacts {
  double r_source = 0;  // Ohm
  double r_drain = 0;   // Ohm
};
SharedContacts shared_contacts(double r_per_contact, int fingers);

}  // namespace dispel::cells
