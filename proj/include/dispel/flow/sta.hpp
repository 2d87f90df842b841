#pragma once

#include <vector>

#include "dispel/flow/design.hpp"

namespace dispel::flow {

struct StaOptions {
  double clock_slew = 8.0;         // ps
  double input_slew = 8.0;         // ps
  double input_delay = 0.0;        // ps after the clock edge
  double output_delay = 0.0;       // ps reserved at output pins
  double uncertainty_frac = 0.05;  // clock uncertainty as a fraction of the period
};

struct PathStep {
  int node = -1;  // driver of `net`
  int net = -1;
  int edge = 0;   // cells::kRise / kFall at the driver output
  double arrival = 0;  // ps at the driver output
};

struct TimingReport {
  double t_cp = 0;         // ps, worst endpoint arrival including setup
  double period = 0;       // ns
  double uncertainty = 0;  // ns
  double slack = 0;        // ns
  int endpoint = -1;       // node
  int endpoint_edge = 0;
  std::vector<PathStep> path;  // startpoint first
  std::vector<double> arrival[2];  // ps per net at the driver output
  std::vector<double> slew[2];     // ps per net at the driver output
  std::vector<double> elmore;      // ps per net
};

// Output slew after a wire with the given Elmore delay.
double wire_slew(double slew_in, double elmore);

// Longest register-to-register (and pin) path by graph propagation with worst-slew merge.
TimingReport run_sta(const Design& d, double f_tar_ghz, const StaOptions& opt = {});
// Worst arrival (incl. setup) at one endpoint node; used to re-time a fixed endpoint.
double endpoint_arrival(const Design& d, const TimingReport& r, int endpoint, const StaOptions& opt = {});

// Exhaustive path enumeration with the same delay arithmetic; exponential, for small netlists.
double sta_path_enumeration(const Design& d, const StaOptions& opt = {});

// Top-K endpoint critical paths (worst first).
std::vector<std::vector<PathStep>> top_paths(const Design& d, const TimingReport& r, int k, const StaOptions& opt = {});

}  // namespace dispel::flow
