#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dispel/common/kv.hpp"

namespace dispel::sweep {

// Grids and knobs of the energy-frequency methodology. Lists accept either
// `a,b,c` or the inclusive range `start:stop:step`.
struct SweepConfig {
  std::vector<double> vdd = {0.5, 0.6, 0.7, 0.8, 0.9};  // V
  std::vector<double> f_coarse;                         // GHz, default 1:3:0.2
  double f_fine_step = 0.02;                            // GHz
  int f_fine_half = 5;                                  // fine points on each side of the coarse optimum
  double i_off = 1.0;                                   // nA/um leakage target for tune_vt
  double utilization = 0.6;
  double util_tol = 0.02;
  double aspect = 1.0;

  // device structure study at fixed CGP and L_GATE
  std::vector<double> l_spa = {4, 6, 8, 10, 12};  // nm
  double cgp = 36, l_gate = 10;                   // nm
  std::vector<double> x_rw = {0.5, 1, 2, 4};
  bool scale_vias = true;

  // dataset variants: every (mu, v, rho_con) device combination is swept at
  // every dataset_x_rw; an empty rho_con list keeps the stack's value
  std::vector<double> mu_scale = {1}, v_scale = {1};
  std::vector<double> rho_con;  // Ohm cm^2
  std::vector<double> dataset_x_rw = {1};

  // synthetic design
  int n_gates = 5000;
  int depth = 24;
  double fanout_mean = 2.5;
  double rent = 0.6;
  std::uint64_t seed = 42;
  double place_moves = 1000;  // per cell
  double activity = 0.1;
  int top_k = 20;

  // optional inputs; empty selects the built-in defaults
  std::string tech, ndev, pdev, dims, netlist;

  SweepConfig();
  void validate() const;
  std::vector<double> fine_grid(double centre) const;
  std::string to_text() const;

  static SweepConfig from_kv(const KeyValues& kv);
  static SweepConfig parse(const std::string& text, const std::string& origin = "<sweep>");
  static SweepConfig load(const std::string& path);
};

}  // namespace dispel::sweep
