#pragma once

#include <array>
#include <string>
#include <vector>

#include "dispel/cells/library.hpp"

namespace dispel::cells {

inline constexpr int kFo3Quantities = 5;
inline constexpr int kLogicFeatures = 6 * kFo3Quantities;

struct Fo3Gate {
  double i_on_pu = 0;     // uA
  double i_on_pd = 0;     // uA
  double delay_rise = 0;  // ps
  double delay_fall = 0;  // ps
  double energy = 0;      // fJ, mean of the rising and falling events
};

// Measures each X1 feature gate in a 4-stage chain where every stage drives
// three copies of the next; stage 3 is reported. Feature order is gate-major.
std::array<double, kLogicFeatures> fo3_features(const CellLibrary& lib, const interconnect::TechStack& stack,
                                                double in_slew_ps = 8.0);
Fo3Gate fo3_measure(const CellLibrary& lib, const interconnect::TechStack& stack, GateType g,
                    double in_slew_ps = 8.0);

std::vector<std::string> fo3_feature_names();

}  // namespace dispel::cells
