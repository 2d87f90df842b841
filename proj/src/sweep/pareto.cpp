#include "dispel/sweep/pareto.hpp"

#include <algorithm>
#include <numeric>

#include "dispel/common/error.hpp"

namespace dispel::sweep {

std::vector<EFPoint> pareto_frontier(const std::vector<EFPoint>& points) {
  if (points.empty()) throw ConfigError("pareto_frontier: no points");
  std::vector<size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const EFPoint &p = points[a], &q = points[b];
    if (p.f_ach != q.f_ach) return p.f_ach > q.f_ach;
    if (p.energy != q.energy) return p.energy < q.energy;
    if (p.area != q.area) return p.area < q.area;
    return p.v_dd < q.v_dd;
  });
  // Walking down in frequency, a point survives only by beating every faster one.
  std::vector<EFPoint> out;
  for (size_t i : order) {
    if (!out.empty() && !(points[i].energy < out.back().energy)) continue;
    out.push_back(points[i]);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace dispel::sweep
