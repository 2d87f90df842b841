#pragma once

#include <array>
#include <string>
#include <vector>

#include "dispel/flow/optimize.hpp"

namespace dispel::flow {

// Achieved frequency from the target and the worst slack: 1/f_ach = 1/f_tar - slack.
double f_ach(double f_tar_ghz, double t_slack_ns);

struct PowerReport {
  double switching = 0;  // mW
  double internal = 0;
  double clock = 0;
  double leakage = 0;
  double total() const { return switching + internal + clock + leakage; }
  double dynamic() const { return switching + internal + clock; }
};

// activity * f * C * V^2 in mW for C in fF and f in GHz.
double switching_power(double c_ff, double v_dd, double f_ghz, double activity);
PowerReport power(const Design& d, const TimingReport& r, double f_ghz, double activity, const StaOptions& sta = {});

struct LayerStats {
  int nets = 0;
  double avg_length = 0;       // um, per net
  int critical_nets = 0;       // on the top-K critical paths
  double critical_avg_length = 0;
};

struct FlowOptions {
  StaOptions sta;
  OptimizeOptions opt;
  double activity = 0.1;
  int top_k = 20;
};

struct DesignResult {
  double v_dd = 0;
  double f_tar = 0, f_ach = 0;  // GHz
  double energy = 0;            // pJ per cycle
  PowerReport power;            // mW
  double cell_area = 0, die_area = 0, utilization = 0;  // um^2
  double t_cp = 0;     // ps
  double t_slack = 0;  // ns
  int buffer_count = 0;
  int actions = 0;
  double multi_finger_ratio = 0;  // INV/BUF instances with two or more fingers
  double avg_net_length = 0;      // um
  std::array<LayerStats, 7> layers{};  // indexed by metal level, 2..6 used
  std::vector<std::string> critical_path;  // driver names, startpoint first
};

DesignResult evaluate(const Design& d, double f_tar_ghz, const FlowOptions& opt = {}, int actions = 0);
// Optimizes the design against f_tar and reports it.
DesignResult run_flow(const Design& d, double f_tar_ghz, const FlowOptions& opt = {});

struct RcShare {
  double share_r = 0, share_c = 0;
};
// 1 - t'/t at the critical endpoint with wire R (then wire C) zeroed on the critical path nets.
RcShare rc_contribution(const Design& d, const StaOptions& sta = {});

}  // namespace dispel::flow
