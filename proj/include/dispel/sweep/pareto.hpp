#pragma once

#include <string>
#include <vector>

namespace dispel::sweep {

struct EFPoint {
  double f_ach = 0;   // GHz
  double energy = 0;  // pJ per cycle
  double area = 0;    // um^2
  double v_dd = 0;    // V
  std::string provenance;
  int record = -1;  // index into the producing sweep's records
};

// Non-dominated points under (maximize f_ach, minimize energy), sorted by
// f_ach. Among points with equal (f_ach, energy) the lower area, then the
// lower V_DD, then the earlier point is kept.
std::vector<EFPoint> pareto_frontier(const std::vector<EFPoint>& points);

}  // namespace dispel::sweep
