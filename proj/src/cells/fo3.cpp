#include "dispel/cells/fo3.hpp"

namespace dispel::cells {

Fo3Gate fo3_measure(const CellLibrary& lib, const interconnect::TechStack& stack, GateType g, double in_slew_ps) {
  const Cell* c = lib.find(cell_name({g, 1}));
  if (!c) throw ConfigError("FO3 features need cell " + cell_name({g, 1}));
  Stage s = cell_stages(*c, 0, lib.dims, stack, lib.vs_n, lib.vs_p).front();
  s.c_out += 3.0 * c->pin_cap[0];
  const std::vector<Stage> chain(4, s);
  const device::VSModel mn(lib.vs_n), mp(lib.vs_p);

  Fo3Gate out;
  out.i_on_pu = c->i_on_pu;
  out.i_on_pd = c->i_on_pd;
  // Stage 3 (index 2) output rises when the chain input falls.
  const ChainResult up = simulate_chain(mn, mp, chain, lib.v_dd, in_slew_ps, false);
  const ChainResult dn = simulate_chain(mn, mp, chain, lib.v_dd, in_slew_ps, true);
  out.delay_rise = up.nodes[2].t50 - up.nodes[1].t50;
  out.delay_fall = dn.nodes[2].t50 - dn.nodes[1].t50;
  out.energy = 0.5 * (up.energy[2] + dn.energy[2]);
  return out;
}

std::array<double, kLogicFeatures> fo3_features(const CellLibrary& lib, const interconnect::TechStack& stack,
                                                double in_slew_ps) {
  std::array<double, kLogicFeatures> f{};
  size_t k = 0;
  for (GateType g : kFeatureGates) {
    const Fo3Gate m = fo3_measure(lib, stack, g, in_slew_ps);
    for (double x : {m.i_on_pu, m.i_on_pd, m.delay_rise, m.delay_fall, m.energy}) f[k++] = x;
  }
  return f;
}

std::vector<std::string> fo3_feature_names() {
  std::vector<std::string> names;
  for (GateType g : kFeatureGates) {
    const std::string n = gate_name(g);
    for (const char* q : {"ion_pu_uA", "ion_pd_uA", "delay_rise_ps", "delay_fall_ps", "energy_fJ"})
      names.push_back(n + "_" + q);
  }
  return names;
}

}  // namespace dispel::cells
