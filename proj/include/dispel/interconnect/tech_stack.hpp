#pragma once

#include <string>
#include <vector>

namespace dispel::interconnect {

enum class LayerKind { wire, via, meol };
enum class ResistivityModel { bulk, steinhogl };

struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::wire;
  double min_width = 0;    // nm
  double min_spacing = 0;  // nm
  double thickness = 0;    // nm (via height for vias)
  double k_ild = 2.7;
  ResistivityModel model = ResistivityModel::steinhogl;
  double rho = 0;         // uOhm cm, bulk model only; 0 means the stack's rho_bulk
  double ild_height = 0;  // nm to the next plane; 0 means equal to thickness

  bool operator==(const LayerSpec&) const = default;
};

struct TechStack {
  std::vector<LayerSpec> layers;
  double rho_bulk = 1.9;    // uOhm cm
  double mfp = 39.0;        // electron mean free path, nm
  double grain_r = 0.43;    // grain-boundary reflectivity, [0, 1)
  double specularity = 0;   // surface specularity, [0, 1]
  double rho_con = 1e-8;    // specific contact resistivity, Ohm cm^2
  double x_rw = 1.0;        // resistance multiplier on the routing layers M2..M6
  bool scale_vias = false;  // x_rw also applies to vias
  double fringe = 1.15;     // capacitance fringe factor

  const LayerSpec& layer(const std::string& name) const;  // throws ConfigError
  const LayerSpec* find(const std::string& name) const;
  bool operator==(const TechStack&) const = default;
};

struct WireRC {
  double r_per_um = 0;  // Ohm/um
  double c_per_um = 0;  // fF/um
};

// Size-dependent resistivity (grain-boundary plus surface scattering), uOhm cm.
double cu_resistivity(double width_nm, double thickness_nm, const TechStack& stack);
double layer_resistivity(const LayerSpec& layer, const TechStack& stack);

WireRC wire_rc_per_um(const LayerSpec& layer, const TechStack& stack);
double via_resistance(const LayerSpec& layer, const TechStack& stack);  // Ohm

// rho_con / (L_CON W) with rho_con in Ohm cm^2, l_con in nm and w in um.
double contact_resistance(double rho_con, double l_con_nm, double w_um);

TechStack scale_wire_resistance(const TechStack& stack, double x_rw);

// Projected 5-nm Cu stack: M1-M6 and V1-V5 from the node's width table, plus
// MEOL layers TS, MA and MB.
TechStack default_stack();

void validate(const TechStack& stack);

std::string kind_name(LayerKind k);

// Routing layers in order, M2..M6.
inline const char* const kRoutingLayers[] = {"M2", "M3", "M4", "M5", "M6"};
bool is_routing_layer(const std::string& name);

}  // namespace dispel::interconnect
