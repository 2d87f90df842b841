#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dispel/nn/train.hpp"

namespace dispel::nn {

struct NeuronWeights {
  int neuron = 0;
  std::vector<std::pair<std::string, double>> ranked;  // by |weight|, descending
  double logic_mass = 0, interconnect_mass = 0;          // sum of |weight| per group
  bool interconnect_dominated = false;
};

struct WeightReport {
  std::vector<NeuronWeights> neurons;  // first hidden layer
  // Fraction of (neuron, gate) pairs whose I_ON and delay weights have opposite signs.
  double ion_delay_opposite = 0;
};

// Feature groups come from the names: R_*/C_* are interconnect, *_uA/_ps/_fJ logic.
WeightReport analyze_weights(const MLP& m);

struct PivotReport {
  std::vector<double> f_grid;
  std::vector<std::vector<double>> traces;  // [neuron][grid point], last hidden layer
  std::vector<int> inactive, active, transitioning;
  double theta_lo = 0.05, theta_hi = 0.5;
};

// Sweeps feature `f_index` over f_grid with the others at base and classifies
// every neuron of the last hidden layer against the largest trace value:
// inactive when its max < theta_lo * peak, active when its min > theta_hi * peak.
PivotReport find_pivot(const MLP& m, const std::vector<double>& base, int f_index, const std::vector<double>& f_grid,
                       double theta_lo = 0.05, double theta_hi = 0.5);

// Prediction along one feature with the others fixed.
std::vector<double> predict_curve(const MLP& m, const std::vector<double>& base, int index,
                                  const std::vector<double>& grid);
// Mean |second difference| of a curve.
double smoothness(const std::vector<double>& curve);

struct ReluComparison {
  TrainResult softplus, relu;
  std::vector<double> f_grid, curve_softplus, curve_relu;
  double smooth_softplus = 0, smooth_relu = 0;
};

// Trains both activations from the same seeds and compares their curves along
// feature f_index, normalized to the label range.
ReluComparison relu_compare(const Dataset& data, const std::vector<int>& sizes, std::uint64_t init_seed,
                            const TrainConfig& cfg, const std::vector<double>& base, int f_index,
                            const std::vector<double>& f_grid);

// Text model file: header, sizes, activation, bounds, names, row-major weights.
std::string model_to_text(const MLP& m);
MLP parse_model(const std::string& text, const std::string& origin = "<model>");
void save_model(const MLP& m, const std::string& path);
MLP load_model(const std::string& path);

}  // namespace dispel::nn
