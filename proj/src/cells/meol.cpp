#include "dispel/cells/meol.hpp"

#include "dispel/common/units.hpp"

namespace dispel::cells {

MEOLParasitics extract_meol(const CellGeometry& g, const interconnect::TechStack& stack) {
  using interconnect::wire_rc_per_um;
  const CellDims& d = g.dims;
  check_decomposition(d);
  const double w_um = d.device_width() * 1e-3;
  const double h_um = g.height * 1e-3;

  MEOLParasitics m;
  m.r_con = interconnect::contact_resistance(stack.rho_con, d.l_con, w_um);

  // Vertical conduction through the trench contact, then a strap to the rail or output.
  const auto& ts = stack.layer("TS");
  const double rho_ts = interconnect::layer_resistivity(ts, stack);
  m.r_meol_series = rho_ts * ts.thickness / (d.l_con * d.device_width()) * 10.0 +
                    wire_rc_per_um(stack.layer("MA"), stack).r_per_um * h_um / 4;

  const double plate = 2.0 * units::eps0_ff_per_um * d.k_spacer / (d.l_spa * 1e-3);
  const double fp_um = d.footprint() * 1e-3;
  m.c_g2c = plate * d.contact_height * 1e-3 * fp_um;
  if (d.structure == Structure::finfet) m.c_g2e = plate * d.fin.height * 1e-3 * fp_um;

  m.c_meol_in = wire_rc_per_um(stack.layer("MB"), stack).c_per_um * h_um / 2;
  const int drains = (g.tmpl.fingers + 1) / 2;
  m.c_meol_out = wire_rc_per_um(stack.layer("M1"), stack).c_per_um * h_um / 2 +
                 drains * 2 * wire_rc_per_um(stack.layer("MA"), stack).c_per_um * h_um / 4;
  return m;
}

SharedContacts shared_contacts(double r_per_contact, int fingers) {
  // fingers + 1 contacts alternate S, D, S, ...; each carries its neighbours' current.
  const int n_source = (fingers + 2) / 2;
  const int n_drain = (fingers + 1) / 2;
  return {r_per_contact / n_source, r_per_contact / n_drain};
}

}  // namespace dispel::cells
