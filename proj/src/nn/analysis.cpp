#include "dispel/nn/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "dispel/common/error.hpp"

namespace dispel::nn {

namespace {

bool is_interconnect(const std::string& n) { return n.rfind("R_", 0) == 0 || n.rfind("C_", 0) == 0; }
bool is_logic(const std::string& n) {
  for (const char* s : {"_uA", "_ps", "_fJ"})
    if (n.size() > 3 && n.compare(n.size() - 3, 3, s) == 0) return true;
  return false;
}

int index_of(const std::vector<std::string>& v, const std::string& s) {
  auto it = std::find(v.begin(), v.end(), s);
  return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

}  // namespace

WeightReport analyze_weights(const MLP& m) {
  m.validate();
  std::vector<std::string> names = m.feature_names;
  if (names.empty())
    for (int i = 0; i < m.n_inputs(); ++i) names.push_back("x" + std::to_string(i));
  WeightReport rep;
  int pairs = 0, opposite = 0;
  for (int o = 0; o < m.sizes[1]; ++o) {
    NeuronWeights nw;
    nw.neuron = o;
    for (int i = 0; i < m.n_inputs(); ++i) {
      const double w = m.weight(0, o, i);
      nw.ranked.push_back({names[i], w});
      if (is_interconnect(names[i])) nw.interconnect_mass += std::abs(w);
      else if (is_logic(names[i])) nw.logic_mass += std::abs(w);
      // Pull-up current drives the rising output, pull-down the falling one.
      for (auto [ion, delay] : {std::pair{"_ion_pu_uA", "_delay_rise_ps"}, {"_ion_pd_uA", "_delay_fall_ps"}}) {
        const std::string& n = names[i];
        const std::string suffix = ion;
        if (n.size() <= suffix.size() || n.compare(n.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
        const int j = index_of(names, n.substr(0, n.size() - suffix.size()) + delay);
        if (j < 0) continue;
        ++pairs;
        opposite += (w > 0) != (m.weight(0, o, j) > 0) ? 1 : 0;
      }
    }
    std::stable_sort(nw.ranked.begin(), nw.ranked.end(),
                     [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
    nw.interconnect_dominated = nw.interconnect_mass > nw.logic_mass;
    rep.neurons.push_back(std::move(nw));
  }
  rep.ion_delay_opposite = pairs ? static_cast<double>(opposite) / pairs : 0.0;
  return rep;
}

std::vector<double> predict_curve(const MLP& m, const std::vector<double>& base, int index,
                                  const std::vector<double>& grid) {
  if (index < 0 || index >= m.n_inputs()) throw ConfigError("feature index out of range");
  std::vector<double> x = base, out;
  for (double g : grid) {
    x[index] = g;
    out.push_back(predict_normalized(m, x));
  }
  return out;
}

double smoothness(const std::vector<double>& c) {
  if (c.size() < 3) throw ConfigError("smoothness needs at least three points");
  double s = 0;
  for (size_t i = 1; i + 1 < c.size(); ++i) s += std::abs(c[i + 1] - 2 * c[i] + c[i - 1]);
  return s / (c.size() - 2);
}

PivotReport find_pivot(const MLP& m, const std::vector<double>& base, int f_index, const std::vector<double>& f_grid,
                       double theta_lo, double theta_hi) {
  m.validate();
  if (m.n_layers() < 2) throw ConfigError("find_pivot needs a hidden layer");
  if (f_grid.empty()) throw ConfigError("find_pivot needs a frequency grid");
  if (f_index < 0 || f_index >= m.n_inputs()) throw ConfigError("feature index out of range");
  if (!(theta_lo >= 0 && theta_lo <= theta_hi)) throw ConfigError("pivot thresholds need 0 <= lo <= hi");
  PivotReport rep;
  rep.f_grid = f_grid;
  rep.theta_lo = theta_lo;
  rep.theta_hi = theta_hi;
  const int width = m.sizes[m.n_layers() - 1];
  rep.traces.assign(width, {});
  std::vector<double> x = base;
  std::vector<std::vector<double>> acts;
  for (double f : f_grid) {
    x[f_index] = f;
    forward(m, m.scale_input(x), &acts);
    for (int k = 0; k < width; ++k) rep.traces[k].push_back(acts.back()[k]);
  }
  double peak = 0;
  for (const auto& t : rep.traces) peak = std::max(peak, *std::max_element(t.begin(), t.end()));
  for (int k = 0; k < width; ++k) {
    const auto [lo, hi] = std::minmax_element(rep.traces[k].begin(), rep.traces[k].end());
    if (*hi <= theta_lo * peak) rep.inactive.push_back(k);
    else if (*lo > theta_hi * peak) rep.active.push_back(k);
    else rep.transitioning.push_back(k);
  }
  return rep;
}

ReluComparison relu_compare(const Dataset& data, const std::vector<int>& sizes, std::uint64_t init_seed,
                            const TrainConfig& cfg, const std::vector<double>& base, int f_index,
                            const std::vector<double>& f_grid) {
  ReluComparison c;
  c.f_grid = f_grid;
  c.softplus = train(build_mlp(sizes, Activation::softplus, init_seed), data, cfg);
  c.relu = train(build_mlp(sizes, Activation::relu, init_seed), data, cfg);
  c.curve_softplus = predict_curve(c.softplus.model, base, f_index, f_grid);
  c.curve_relu = predict_curve(c.relu.model, base, f_index, f_grid);
  c.smooth_softplus = smoothness(c.curve_softplus);
  c.smooth_relu = smoothness(c.curve_relu);
  return c;
}

}  // namespace dispel::nn
