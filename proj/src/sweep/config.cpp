#include "dispel/sweep/config.hpp"

#include <cmath>
#include <sstream>

#include "dispel/common/csv.hpp"
#include "dispel/common/error.hpp"

namespace dispel::sweep {

namespace {

std::string join(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

void check_grid(const std::vector<double>& v, const std::string& name) {
  if (v.empty()) throw ConfigError("sweep: grid '" + name + "' is empty");
  for (size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0) || !std::isfinite(v[i])) throw DomainError("sweep: grid '" + name + "' needs positive values");
    if (i && !(v[i] > v[i - 1])) throw ConfigError("sweep: grid '" + name + "' must be strictly increasing");
  }
}

}  // namespace

SweepConfig::SweepConfig() {
  for (int i = 0; i <= 10; ++i) f_coarse.push_back(1.0 + 0.2 * i);
}

void SweepConfig::validate() const {
  check_grid(vdd, "vdd");
  check_grid(f_coarse, "f_coarse");
  check_grid(l_spa, "l_spa");
  check_grid(x_rw, "x_rw");
  check_grid(mu_scale, "mu_scale");
  check_grid(v_scale, "v_scale");
  check_grid(dataset_x_rw, "dataset_x_rw");
  if (!rho_con.empty()) check_grid(rho_con, "rho_con_ohm_cm2");
  for (double v : vdd)
    if (v > 2.0) throw DomainError("sweep: vdd above 2 V");
  if (!(f_fine_step > 0) || f_fine_half < 0) throw DomainError("sweep: fine grid needs step > 0 and half >= 0");
  if (!(i_off > 0)) throw DomainError("sweep: i_off must be > 0");
  if (!(utilization > 0 && utilization <= 1) || !(util_tol > 0)) throw DomainError("sweep: bad utilization");
  if (!(aspect > 0)) throw DomainError("sweep: aspect must be > 0");
  if (!(cgp > 0 && l_gate > 0)) throw DomainError("sweep: cgp and l_gate must be > 0");
  for (double s : l_spa)
    if (!(cgp - l_gate - 2 * s > 0)) throw DomainError("sweep: l_spa " + format_double(s) + " leaves no contact");
  if (n_gates < depth || depth < 1) throw DomainError("sweep: need n_gates >= depth >= 1");
  if (!(place_moves >= 0)) throw DomainError("sweep: place_moves must be >= 0");
  if (!(activity >= 0 && activity <= 1)) throw DomainError("sweep: activity must be in [0, 1]");
  if (top_k < 1) throw DomainError("sweep: top_k must be >= 1");
}

std::vector<double> SweepConfig::fine_grid(double centre) const {
  // Snap to the fine step so neighbouring sweeps share grid points.
  const double c = std::round(centre / f_fine_step) * f_fine_step;
  std::vector<double> g;
  for (int j = -f_fine_half; j <= f_fine_half; ++j) {
    const double f = c + j * f_fine_step;
    if (f > 0) g.push_back(f);
  }
  return g;
}

std::string SweepConfig::to_text() const {
  std::ostringstream o;
  o << "vdd=" << join(vdd) << "\n"
    << "f_coarse=" << join(f_coarse) << "\n"
    << "f_fine_step=" << format_double(f_fine_step) << "\n"
    << "f_fine_half=" << f_fine_half << "\n"
    << "i_off_na_per_um=" << format_double(i_off) << "\n"
    << "utilization=" << format_double(utilization) << "\n"
    << "util_tol=" << format_double(util_tol) << "\n"
    << "aspect=" << format_double(aspect) << "\n"
    << "l_spa_nm=" << join(l_spa) << "\n"
    << "cgp_nm=" << format_double(cgp) << "\n"
    << "l_gate_nm=" << format_double(l_gate) << "\n"
    << "x_rw=" << join(x_rw) << "\n"
    << "scale_vias=" << (scale_vias ? 1 : 0) << "\n"
    << "mu_scale=" << join(mu_scale) << "\n"
    << "v_scale=" << join(v_scale) << "\n"
    << "dataset_x_rw=" << join(dataset_x_rw) << "\n";
  if (!rho_con.empty()) o << "rho_con_ohm_cm2=" << join(rho_con) << "\n";
  o << "n_gates=" << n_gates << "\n"
    << "depth=" << depth << "\n"
    << "fanout_mean=" << format_double(fanout_mean) << "\n"
    << "rent=" << format_double(rent) << "\n"
    << "seed=" << seed << "\n"
    << "place_moves=" << format_double(place_moves) << "\n"
    << "activity=" << format_double(activity) << "\n"
    << "top_k=" << top_k << "\n";
  for (const auto& [k, v] : {std::pair{"tech", &tech}, {"ndev", &ndev}, {"pdev", &pdev}, {"dims", &dims},
                             {"netlist", &netlist}})
    if (!v->empty()) o << k << "=" << *v << "\n";
  return o.str();
}

SweepConfig SweepConfig::from_kv(const KeyValues& kv) {
  kv.require_known({"vdd", "f_coarse", "f_fine_step", "f_fine_half", "i_off_na_per_um", "utilization", "util_tol",
                    "aspect", "l_spa_nm", "cgp_nm", "l_gate_nm", "x_rw", "scale_vias", "mu_scale", "v_scale",
                    "rho_con_ohm_cm2", "dataset_x_rw", "n_gates", "depth", "fanout_mean", "rent", "seed",
                    "place_moves", "activity", "top_k", "tech", "ndev", "pdev", "dims", "netlist"});
  SweepConfig c;
  c.vdd = kv.list_or("vdd", c.vdd);
  c.f_coarse = kv.list_or("f_coarse", c.f_coarse);
  c.f_fine_step = kv.num_or("f_fine_step", c.f_fine_step);
  c.f_fine_half = static_cast<int>(kv.integer_or("f_fine_half", c.f_fine_half));
  c.i_off = kv.num_or("i_off_na_per_um", c.i_off);
  c.utilization = kv.num_or("utilization", c.utilization);
  c.util_tol = kv.num_or("util_tol", c.util_tol);
  c.aspect = kv.num_or("aspect", c.aspect);
  c.l_spa = kv.list_or("l_spa_nm", c.l_spa);
  c.cgp = kv.num_or("cgp_nm", c.cgp);
  c.l_gate = kv.num_or("l_gate_nm", c.l_gate);
  c.x_rw = kv.list_or("x_rw", c.x_rw);
  c.scale_vias = kv.integer_or("scale_vias", c.scale_vias ? 1 : 0) != 0;
  c.mu_scale = kv.list_or("mu_scale", c.mu_scale);
  c.v_scale = kv.list_or("v_scale", c.v_scale);
  c.rho_con = kv.list_or("rho_con_ohm_cm2", c.rho_con);
  c.dataset_x_rw = kv.list_or("dataset_x_rw", c.dataset_x_rw);
  c.n_gates = static_cast<int>(kv.integer_or("n_gates", c.n_gates));
  c.depth = static_cast<int>(kv.integer_or("depth", c.depth));
  c.fanout_mean = kv.num_or("fanout_mean", c.fanout_mean);
  c.rent = kv.num_or("rent", c.rent);
  c.seed = static_cast<std::uint64_t>(kv.integer_or("seed", static_cast<long>(c.seed)));
  c.place_moves = kv.num_or("place_moves", c.place_moves);
  c.activity = kv.num_or("activity", c.activity);
  c.top_k = static_cast<int>(kv.integer_or("top_k", c.top_k));
  c.tech = kv.str_or("tech", "");
  c.ndev = kv.str_or("ndev", "");
  c.pdev = kv.str_or("pdev", "");
  c.dims = kv.str_or("dims", "");
  c.netlist = kv.str_or("netlist", "");
  c.validate();
  return c;
}

SweepConfig SweepConfig::parse(const std::string& text, const std::string& origin) {
  return from_kv(KeyValues::parse(text, origin));
}

SweepConfig SweepConfig::load(const std::string& path) { return from_kv(KeyValues::load(path)); }

}  // namespace dispel::sweep
