#pragma once

#include <span>
#include <vector>

#include "dispel/common/error.hpp"
#include "dispel/device/vs_model.hpp"

namespace dispel::cells {

class CharacterizationError : public ConvergenceError {
 public:
  explicit CharacterizationError(const std::string& what) : ConvergenceError(what) {}
};

// A pull network reduced to one equivalent device.
struct PullNetwork {
  double width_um = 0;  // effective width (fingers * W / stack)
  double r_s = 0;       // Ohm, series at the source
  double r_d = 0;       // Ohm, series at the drain
};

// One inverting stage driving a lumped output node.
struct Stage {
  PullNetwork n, p;
  double c_miller = 0;  // fF between the stage input and output
  double c_out = 0;     // fF from output to ground, load included
};

// Current (uA) through a pull network with source/drain series resistance.
// Biases are polarity-normalized.
double degenerated_current(const device::VSModel& m, const PullNetwork& pn, double v_gs, double v_ds);

struct TransientOptions {
  double dt = 0.5;        // ps
  double t_max = 2.0e4;   // ps
  double settle = 0.98;   // fraction of swing that ends the run
};

struct NodeTiming {
  double t50 = 0;   // ps from the input 50% point
  double slew = 0;  // 10-90% ps
};

struct ChainResult {
  std::vector<NodeTiming> nodes;  // one per stage output
  std::vector<double> energy;     // fJ drawn from the supply by each stage
  double t_in50 = 0;
};

// Integrates a chain of inverting stages driven by a saturated ramp with the
// given 10-90% slew (0 means a step). Fixed-step RK4.
ChainResult simulate_chain(const device::VSModel& n, const device::VSModel& p, std::span<const Stage> stages,
                           double v_dd, double in_slew_ps, bool input_rising, const TransientOptions& opt = {});

}  // namespace dispel::cells
