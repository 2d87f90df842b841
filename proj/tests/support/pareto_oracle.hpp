#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "dispel/sweep/pareto.hpp"

namespace dispel::testing {

// O(n^2) dominance filter. Of several points with identical (f, E) the one
// with the lowest (area, v_dd, input position) survives.
inline std::vector<sweep::EFPoint> brute_force_frontier(const std::vector<sweep::EFPoint>& pts) {
  std::vector<sweep::EFPoint> out;
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    bool drop = false;
    for (size_t j = 0; j < pts.size() && !drop; ++j) {
      if (i == j) continue;
      const auto& q = pts[j];
      if (q.f_ach >= p.f_ach && q.energy <= p.energy && (q.f_ach > p.f_ach || q.energy < p.energy)) drop = true;
      if (q.f_ach == p.f_ach && q.energy == p.energy &&
          std::make_tuple(q.area, q.v_dd, j) < std::make_tuple(p.area, p.v_dd, i))
        drop = true;
    }
    if (!drop) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.f_ach < b.f_ach; });
  return out;
}

inline bool same_points(const std::vector<sweep::EFPoint>& a, const std::vector<sweep::EFPoint>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].f_ach != b[i].f_ach || a[i].energy != b[i].energy || a[i].area != b[i].area ||
        a[i].v_dd != b[i].v_dd || a[i].provenance != b[i].provenance)
      return false;
  return true;
}

}  // namespace dispel::testing
