#include "dispel/interconnect/itf.hpp"

#include <map>
#include <set>
#include <sstream>

#include "dispel/common/csv.hpp"
#include "dispel/common/error.hpp"
#include "dispel/common/kv.hpp"

namespace dispel::interconnect {

namespace {

std::map<std::string, std::string> parse_fields(std::istringstream& in, const std::string& where,
                                                 const std::set<std::string>& allowed) {
  std::map<std::string, std::string> out;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    out[key] = tok.substr(eq + 1);
  }
  return out;
}

double need(const std::map<std::string, std::string>& f, const std::string& key, const std::string& where) {
  const auto it = f.find(key);
  if (it == f.end()) throw ConfigError(where + ": missing key '" + key + "'");
  return parse_double(it->second, where + ": " + key);
}

}  // namespace

TechStack parse_itf(const std::string& text, const std::string& origin) {
  TechStack s;
  s.layers.clear();
  bool have_header = false;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::istringstream in(line);
    std::string record;
    in >> record;
    if (record == "stack") {
      if (have_header) throw ConfigError(where + ": duplicate stack header");
      const auto f = parse_fields(in, where, {"rho_bulk_uohm_cm", "mfp_nm", "grain_R", "specularity",
                                              "rho_con_ohm_cm2", "x_rw", "scale_vias", "fringe"});
      s.rho_bulk = need(f, "rho_bulk_uohm_cm", where);
      s.mfp = need(f, "mfp_nm", where);
      s.grain_r = need(f, "grain_R", where);
      s.specularity = need(f, "specularity", where);
      s.rho_con = need(f, "rho_con_ohm_cm2", where);
      if (f.count("x_rw")) s.x_rw = need(f, "x_rw", where);
      if (f.count("fringe")) s.fringe = need(f, "fringe", where);
      if (f.count("scale_vias")) {
        const std::string v = f.at("scale_vias");
        if (v != "0" && v != "1") throw ConfigError(where + ": scale_vias must be 0 or 1");
        s.scale_vias = v == "1";
      }
      have_header = true;
    } else if (record == "layer") {
      LayerSpec l;
      if (!(in >> l.name)) throw ConfigError(where + ": layer needs a name");
      if (s.find(l.name)) throw ConfigError(where + ": duplicate layer '" + l.name + "'");
      const auto f = parse_fields(in, where, {"kind", "min_width_nm", "min_spacing_nm", "thickness_nm", "k_ild",
                                              "model", "rho_uohm_cm", "ild_height_nm"});
      const auto kind = f.find("kind");
      if (kind == f.end()) throw ConfigError(where + ": missing key 'kind'");
      if (kind->second == "wire") l.kind = LayerKind::wire;
      else if (kind->second == "via") l.kind = LayerKind::via;
      else if (kind->second == "meol") l.kind = LayerKind::meol;
      else throw ConfigError(where + ": kind must be wire, via or meol");
      l.min_width = need(f, "min_width_nm", where);
      l.min_spacing = need(f, "min_spacing_nm", where);
      l.thickness = need(f, "thickness_nm", where);
      l.k_ild = need(f, "k_ild", where);
      if (f.count("model")) {
        const std::string m = f.at("model");
        if (m == "bulk") l.model = ResistivityModel::bulk;
        else if (m == "steinhogl") l.model = ResistivityModel::steinhogl;
        else throw ConfigError(where + ": model must be bulk or steinhogl");
      }
      if (f.count("rho_uohm_cm")) l.rho = need(f, "rho_uohm_cm", where);
      if (f.count("ild_height_nm")) l.ild_height = need(f, "ild_height_nm", where);
      s.layers.push_back(l);
    } else {
      throw ConfigError(where + ": unknown record '" + record + "'");
    }
  }
  if (!have_header) throw ConfigError(origin + ": missing stack header");
  validate(s);
  return s;
}

TechStack load_itf(const std::string& path) { return parse_itf(read_file(path), path); }

std::string itf_to_text(const TechStack& s) {
  std::ostringstream o;
  o << "stack rho_bulk_uohm_cm=" << format_double(s.rho_bulk) << " mfp_nm=" << format_double(s.mfp)
    << " grain_R=" << format_double(s.grain_r) << " specularity=" << format_double(s.specularity)
    << " rho_con_ohm_cm2=" << format_double(s.rho_con) << " x_rw=" << format_double(s.x_rw)
    << " scale_vias=" << (s.scale_vias ? 1 : 0) << " fringe=" << format_double(s.fringe) << "\n";
  for (const auto& l : s.layers) {
    o << "layer " << l.name << " kind=" << kind_name(l.kind) << " min_width_nm=" << format_double(l.min_width)
      << " min_spacing_nm=" << format_double(l.min_spacing) << " thickness_nm=" << format_double(l.thickness)
      << " k_ild=" << format_double(l.k_ild)
      << " model=" << (l.model == ResistivityModel::bulk ? "bulk" : "steinhogl");
    if (l.rho > 0) o << " rho_uohm_cm=" << format_double(l.rho);
    if (l.ild_height > 0) o << " ild_height_nm=" << format_double(l.ild_height);
    o << "\n";
  }
  return o.str();
}

}  // namespace dispel::interconnect
