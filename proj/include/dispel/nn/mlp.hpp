#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dispel::nn {

enum class Activation { softplus, relu };

std::string activation_name(Activation a);
Activation parse_activation(const std::string& s);  // throws ConfigError

// ln(1 + e^x) without overflow.
double softplus(double x);
double sigmoid(double x);

// Fully connected regression network with one linear output. Parameters are
// packed layer by layer as a row-major (out x in) weight block followed by the
// biases. Inputs are rescaled per feature onto [-1, 1]; the output is the
// label normalized onto [0, 1].
struct MLP {
  std::vector<int> sizes;
  Activation act = Activation::softplus;
  std::uint64_t seed = 0;
  std::vector<double> params;
  std::vector<double> x_lo, x_hi;  // per-feature rescale bounds
  double y_lo = 0, y_hi = 1;       // label bounds
  std::vector<std::string> feature_names;
  std::string label;  // name of the predicted column, may be empty

  int n_layers() const { return static_cast<int>(sizes.size()) - 1; }
  int n_inputs() const { return sizes.front(); }
  size_t w_offset(int layer) const;
  size_t b_offset(int layer) const { return w_offset(layer) + static_cast<size_t>(sizes[layer]) * sizes[layer + 1]; }
  double weight(int layer, int out, int in) const { return params[w_offset(layer) + out * sizes[layer] + in]; }
  bool is_weight(size_t param) const;

  void set_bounds(std::vector<double> lo, std::vector<double> hi, double ylo, double yhi);
  std::vector<double> scale_input(std::span<const double> x) const;
  double normalize_label(double y) const;
  double denormalize_label(double yn) const;
  void validate() const;
};

// Xavier-uniform weights, zero biases, identity bounds.
MLP build_mlp(const std::vector<int>& sizes, Activation act, std::uint64_t seed);

// Forward pass on a rescaled input. When `acts` is given it receives the
// post-activation outputs of every hidden layer.
double forward(const MLP& m, std::span<const double> xs, std::vector<std::vector<double>>* acts = nullptr);

// Normalized prediction from raw features, and the same in label units.
double predict_normalized(const MLP& m, std::span<const double> features);
double predict(const MLP& m, std::span<const double> features);

}  // namespace dispel::nn
