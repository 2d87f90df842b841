#include "dispel/interconnect/tech_stack.hpp"

#include <cmath>

#include "dispel/common/error.hpp"
#include "dispel/common/units.hpp"

namespace dispel::interconnect {

const LayerSpec* TechStack::find(const std::string& name) const {
  for (const auto& l : layers)
    if (l.name == name) return &l;
  return nullptr;
}

const LayerSpec& TechStack::layer(const std::string& name) const {
  const LayerSpec* l = find(name);
  if (!l) throw ConfigError("tech stack has no layer '" + name + "'");
  return *l;
}

bool is_routing_layer(const std::string& name) {
  for (const char* r : kRoutingLayers)
    if (name == r) return true;
  return false;
}

std::string kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::wire: return "wire";
    case LayerKind::via: return "via";
    case LayerKind::meol: return "meol";
  }
  return "?";
}

double cu_resistivity(double w, double t, const TechStack& s) {
  if (!(w > 0) || !(t > 0)) throw DomainError("cu_resistivity: width and thickness must be > 0");
  // Mayadas-Shatzkes grain term with grain size equal to the line width, plus
  // the Fuchs-Sondheimer surface term in its thin-film approximation.
  const double alpha = s.mfp * s.grain_r / (w * (1.0 - s.grain_r));
  double denom;
  if (alpha > 50) {
    // alpha^3 ln(1 + 1/alpha) cancels badly: use the series 1/(4 alpha) - 1/(5 alpha^2) + ...
    const double ia = 1.0 / alpha;
    denom = ia * (0.25 - ia * (0.2 - ia * (1.0 / 6 - ia / 7)));
  } else {
    denom = 1.0 / 3 - alpha / 2 + alpha * alpha - alpha * alpha * alpha * std::log1p(1.0 / alpha);
  }
  const double grain = (1.0 / 3) / denom;
  const double surface = 0.375 * (1.0 - s.specularity) * s.mfp * (w + t) / (w * t);
  return s.rho_bulk * (grain + surface);
}

double layer_resistivity(const LayerSpec& l, const TechStack& s) {
  if (l.model == ResistivityModel::bulk) return l.rho > 0 ? l.rho : s.rho_bulk;
  return cu_resistivity(l.min_width, l.thickness, s);
}

WireRC wire_rc_per_um(const LayerSpec& l, const TechStack& s) {
  if (l.kind != LayerKind::wire && l.kind != LayerKind::meol)
    throw ConfigError("wire_rc_per_um: layer '" + l.name + "' is a " + kind_name(l.kind));
  const double rho = layer_resistivity(l, s);
  WireRC rc;
  // uOhm cm -> Ohm m is 1e-8; per um of length over an nm^2 cross-section gives 1e4.
  rc.r_per_um = rho * 1e4 / (l.min_width * l.thickness);
  if (is_routing_layer(l.name)) rc.r_per_um *= s.x_rw;
  const double h = l.ild_height > 0 ? l.ild_height : l.thickness;
  rc.c_per_um = s.fringe * 2.0 * units::eps0_ff_per_um * l.k_ild *
                (l.thickness / l.min_spacing + l.min_width / h);
  return rc;
}

double via_resistance(const LayerSpec& l, const TechStack& s) {
  if (l.kind != LayerKind::via) throw ConfigError("via_resistance: layer '" + l.name + "' is not a via");
  const double size = l.min_width;
  const double rho = l.model == ResistivityModel::bulk ? layer_resistivity(l, s) : cu_resistivity(size, size, s);
  double r = rho * l.thickness / (size * size) * 10.0;
  if (s.scale_vias) r *= s.x_rw;
  return r;
}

double contact_resistance(double rho_con, double l_con_nm, double w_um) {
  if (!(rho_con > 0) || !(l_con_nm > 0) || !(w_um > 0))
    throw DomainError("contact_resistance: all arguments must be > 0");
  return rho_con / (l_con_nm * 1e-7 * w_um * 1e-4);
}

TechStack scale_wire_resistance(const TechStack& stack, double x_rw) {
  if (!(x_rw > 0)) throw DomainError("x_rw must be > 0");
  TechStack s = stack;
  s.x_rw *= x_rw;
  return s;
}

void validate(const TechStack& s) {
  if (!(s.rho_bulk > 0)) throw DomainError("rho_bulk must be > 0");
  if (!(s.mfp > 0)) throw DomainError("mfp must be > 0");
  if (!(s.grain_r >= 0 && s.grain_r < 1)) throw DomainError("grain_R must be in [0, 1)");
  if (!(s.specularity >= 0 && s.specularity <= 1)) throw DomainError("specularity must be in [0, 1]");
  if (!(s.rho_con > 0)) throw DomainError("rho_con must be > 0");
  if (!(s.x_rw > 0)) throw DomainError("x_rw must be > 0");
  if (!(s.fringe > 0)) throw DomainError("fringe must be > 0");
  for (const auto& l : s.layers) {
    if (!(l.min_width > 0) || !(l.min_spacing > 0) || !(l.thickness > 0))
      throw DomainError("layer " + l.name + ": width, spacing and thickness must be > 0");
    if (!(l.k_ild > 0)) throw DomainError("layer " + l.name + ": k_ild must be > 0");
  }
  for (const char* name : kRoutingLayers) {
    const LayerSpec* l = s.find(name);
    if (!l || l->kind != LayerKind::wire)
      throw ConfigError(std::string("tech stack needs wire layer ") + name);
  }
  for (int i = 1; i <= 5; ++i) {
    const LayerSpec* l = s.find("V" + std::to_string(i));
    if (!l || l->kind != LayerKind::via)
      throw ConfigError("tech stack needs via layer V" + std::to_string(i));
  }
}

TechStack default_stack() {
  TechStack s;
  auto wire = [](const char* n, double w, double t) {
    return LayerSpec{n, LayerKind::wire, w, w, t, 2.7, ResistivityModel::steinhogl, 0, 0};
  };
  auto via = [](const char* n, double w, double h) {
    return LayerSpec{n, LayerKind::via, w, w, h, 2.7, ResistivityModel::steinhogl, 0, 0};
  };
  s.layers = {
      LayerSpec{"TS", LayerKind::meol, 10, 26, 30, 3.9, ResistivityModel::bulk, 20.0, 0},
      LayerSpec{"MA", LayerKind::meol, 12, 12, 24, 3.9, ResistivityModel::steinhogl, 0, 0},
      LayerSpec{"MB", LayerKind::meol, 12, 12, 24, 3.9, ResistivityModel::steinhogl, 0, 0},
      wire("M1", 12, 24), via("V1", 12, 24), wire("M2", 12, 24), via("V2", 12, 24),
      wire("M3", 12, 24), via("V3", 12, 24), wire("M4", 18, 36), via("V4", 18, 36),
      wire("M5", 18, 36), via("V5", 18, 36), wire("M6", 24, 48),
  };
  return s;
}

}  // namespace dispel::interconnect
