#pragma once

#include <string>
#include <vector>

#include "dispel/flow/sta.hpp"

namespace dispel::flow {

struct OptimizeOptions {
  double buffer_threshold = 0.5;  // buffer a net when its wire delay exceeds this fraction of its stage delay
  std::string buffer_cell = "BUF_X4";
  int trials_per_round = 3;
  int stall_rounds = 3;
  int max_actions = 2000;
};

struct Action {
  enum Kind { upsize, buffer } kind = upsize;
  int node = -1;     // upsize target
  int net = -1;      // buffered net
  int count = 0;     // buffers along the net
  std::string cell;  // new cell, or buffer cell
};

// Optimal repeater spacing (um) for a driver resistance (Ohm) and input
// capacitance (fF) on a wire with r (Ohm/um) and c (fF/um).
double optimal_buffer_spacing(double r_buf, double c_buf, double r_per_um, double c_per_um);
// Effective output resistance (Ohm) of a cell at supply v_dd.
double drive_resistance(const cells::Cell& c, double v_dd);

void apply_action(Design& d, const Action& a);

// Candidate actions on the current critical path, best first: buffers on
// wire-dominated nets, then upsizes ranked by their local delay estimate.
std::vector<Action> candidate_actions(const Design& d, const TimingReport& r, const OptimizeOptions& opt,
                                      const StaOptions& sta);

// Greedy optimization history independent of the target frequency. Each
// accepted action strictly lowers t_CP; a target replays the prefix it needs.
class Trajectory {
 public:
  Trajectory(Design base, OptimizeOptions opt = {}, StaOptions sta = {});

  // Number of actions needed to reach t_cp <= budget_ps, or the full history
  // when optimization stalls first. Extends the history on demand.
  size_t steps_for(double budget_ps);
  Design design_at(size_t steps) const;

  const std::vector<double>& t_cp() const { return t_cp_; }
  const std::vector<Action>& actions() const { return actions_; }
  bool finished() const { return done_; }

 private:
  void extend();

  Design base_, tip_;
  OptimizeOptions opt_;
  StaOptions sta_;
  std::vector<Action> actions_;
  std::vector<double> t_cp_;  // t_cp_[k] after k actions
  int stall_ = 0;
  bool done_ = false;
};

// Clock budget for t_CP at a target frequency: period minus uncertainty, in ps.
double timing_budget(double f_tar_ghz, const StaOptions& sta);

// Optimizes one design for one target; slack >= 0 leaves it unchanged.
Design optimize(const Design& d, double f_tar_ghz, const OptimizeOptions& opt = {}, const StaOptions& sta = {});

}  // namespace dispel::flow
