#include "dispel/cells/library_io.hpp"

#include <filesystem>
#include <sstream>

#include "dispel/common/csv.hpp"
#include "dispel/common/kv.hpp"

namespace dispel::cells {

CellDims parse_dims(const std::string& text, const std::string& origin) {
  KeyValues kv = KeyValues::parse(text, origin);
  kv.require_known({"cgp_nm", "m2_pitch_nm", "tracks", "l_gate_nm", "l_spa_nm", "l_con_nm", "structure",
                    "fin_width_nm", "fin_height_nm", "fin_pitch_nm", "fin_count", "k_spacer", "contact_height_nm",
                    "planar_width_fraction"});
  CellDims d;
  d.cgp = kv.num_or("cgp_nm", d.cgp);
  d.m2_pitch = kv.num_or("m2_pitch_nm", d.m2_pitch);
  d.tracks = kv.num_or("tracks", d.tracks);
  d.l_gate = kv.num("l_gate_nm");
  d.l_spa = kv.num("l_spa_nm");
  d.l_con = kv.num_or("l_con_nm", d.cgp - d.l_gate - 2 * d.l_spa);
  d.structure = parse_structure(kv.str_or("structure", "planar"));
  d.fin.width = kv.num_or("fin_width_nm", d.fin.width);
  d.fin.height = kv.num_or("fin_height_nm", d.fin.height);
  d.fin.pitch = kv.num_or("fin_pitch_nm", d.fin.pitch);
  d.fin.count = static_cast<int>(kv.integer_or("fin_count", d.fin.count));
  d.k_spacer = kv.num_or("k_spacer", d.k_spacer);
  d.contact_height = kv.num_or("contact_height_nm", d.contact_height);
  d.planar_width_fraction = kv.num_or("planar_width_fraction", d.planar_width_fraction);
  check_decomposition(d);
  return d;
}

CellDims load_dims(const std::string& path) { return parse_dims(read_file(path), path); }

std::string dims_to_text(const CellDims& d) {
  std::ostringstream o;
  o << "cgp_nm = " << format_double(d.cgp) << "\n"
    << "m2_pitch_nm = " << format_double(d.m2_pitch) << "\n"
    << "tracks = " << format_double(d.tracks) << "\n"
    << "l_gate_nm = " << format_double(d.l_gate) << "\n"
    << "l_spa_nm = " << format_double(d.l_spa) << "\n"
    << "l_con_nm = " << format_double(d.l_con) << "\n"
    << "structure = " << structure_name(d.structure) << "\n"
    << "fin_width_nm = " << format_double(d.fin.width) << "\n"
    << "fin_height_nm = " << format_double(d.fin.height) << "\n"
    << "fin_pitch_nm = " << format_double(d.fin.pitch) << "\n"
    << "fin_count = " << d.fin.count << "\n"
    << "k_spacer = " << format_double(d.k_spacer) << "\n"
    << "contact_height_nm = " << format_double(d.contact_height) << "\n"
    << "planar_width_fraction = " << format_double(d.planar_width_fraction) << "\n";
  return o.str();
}

void write_library(const CellLibrary& lib, const std::string& dir, const std::string& header_comment) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  std::ostringstream m;
  if (!header_comment.empty()) m << "# " << header_comment << "\n";
  m << dims_to_text(lib.dims) << "v_dd_V = " << format_double(lib.v_dd) << "\n"
    << "v_t0_n_V = " << format_double(lib.vs_n.v_t0) << "\n"
    << "v_t0_p_V = " << format_double(lib.vs_p.v_t0) << "\n";
  m << "# cell, width_nm, height_nm, area_um2, pin_cap_fF, leakage_nW, r_con_ohm, c_g2c_fF, c_g2e_fF\n";
  for (const auto& c : lib.cells) {
    m << "cell." << c.name << " = " << format_double(c.geom.width) << ", " << format_double(c.geom.height) << ", "
      << format_double(c.area) << ", " << format_double(c.pin_cap[0]) << ", " << format_double(c.leakage) << ", "
      << format_double(c.meol.r_con) << ", " << format_double(c.meol.c_g2c) << ", " << format_double(c.meol.c_g2e)
      << "\n";
  }
  write_file(dir + "/manifest.txt", m.str());

  for (const auto& c : lib.cells) {
    CsvTable t;
    if (!header_comment.empty()) t.comments.push_back(header_comment);
    t.comments.push_back("cell " + c.name + "; edge 0 = output rise, 1 = output fall");
    t.header = {"arc", "edge", "slew_ps", "load_fF", "delay_ps", "out_slew_ps", "energy_fJ"};
    for (size_t a = 0; a < c.arcs.size(); ++a) {
      const TimingArc& arc = c.arcs[a];
      for (int e : {kRise, kFall}) {
        const Table2D& d = arc.delay[e];
        for (size_t i = 0; i < d.slews.size(); ++i)
          for (size_t j = 0; j < d.loads.size(); ++j)
            t.rows.push_back({static_cast<double>(a), static_cast<double>(e), d.slews[i], d.loads[j], d.at(i, j),
                              arc.slew[e].at(i, j), arc.energy[e].at(i, j)});
      }
    }
    write_file(dir + "/" + c.name + ".csv", t.to_string());
  }
}

}  // namespace dispel::cells
