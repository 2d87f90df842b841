#include "dispel/nn/mlp.hpp"

#include <cmath>
#include <random>

#include "dispel/common/error.hpp"

namespace dispel::nn {

std::string activation_name(Activation a) { return a == Activation::relu ? "relu" : "softplus"; }

Activation parse_activation(const std::string& s) {
  if (s == "softplus") return Activation::softplus;
  if (s == "relu") return Activation::relu;
  throw ConfigError("unknown activation '" + s + "' (softplus|relu)");
}

double softplus(double x) {
  // x + ln(1 + e^-x) for positive x keeps e^x from overflowing.
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

size_t MLP::w_offset(int layer) const {
  size_t off = 0;
  for (int l = 0; l < layer; ++l) off += static_cast<size_t>(sizes[l] + 1) * sizes[l + 1];
  return off;
}

bool MLP::is_weight(size_t param) const {
  for (int l = 0; l < n_layers(); ++l)
    if (param < b_offset(l)) return param >= w_offset(l);
  return false;
}

void MLP::set_bounds(std::vector<double> lo, std::vector<double> hi, double ylo, double yhi) {
  if (lo.size() != static_cast<size_t>(n_inputs()) || hi.size() != lo.size())
    throw ConfigError("rescale bounds need one entry per input");
  x_lo = std::move(lo);
  x_hi = std::move(hi);
  y_lo = ylo;
  y_hi = yhi;
}

std::vector<double> MLP::scale_input(std::span<const double> x) const {
  if (x.size() != static_cast<size_t>(n_inputs()))
    throw ConfigError("expected " + std::to_string(n_inputs()) + " features, got " + std::to_string(x.size()));
  std::vector<double> s(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw DomainError("feature " + std::to_string(i) + " is not finite");
    const double span = x_hi[i] - x_lo[i];
    // A feature that never varied in training carries no information.
    s[i] = span > 0 ? 2.0 * (x[i] - x_lo[i]) / span - 1.0 : 0.0;
  }
  return s;
}

double MLP::normalize_label(double y) const { return y_hi > y_lo ? (y - y_lo) / (y_hi - y_lo) : 0.0; }
double MLP::denormalize_label(double yn) const { return y_lo + yn * (y_hi - y_lo); }

void MLP::validate() const {
  if (sizes.size() < 2) throw ConfigError("network needs at least an input and an output layer");
  for (int s : sizes)
    if (s < 1) throw ConfigError("layer sizes must be >= 1");
  if (sizes.back() != 1) throw ConfigError("network output must be a single neuron");
  if (params.size() != w_offset(n_layers())) throw ConfigError("parameter count does not match the layer sizes");
  if (x_lo.size() != static_cast<size_t>(n_inputs()) || x_hi.size() != x_lo.size())
    throw ConfigError("rescale bounds need one entry per input");
  if (!feature_names.empty() && feature_names.size() != static_cast<size_t>(n_inputs()))
    throw ConfigError("feature names need one entry per input");
}

MLP build_mlp(const std::vector<int>& sizes, Activation act, std::uint64_t seed) {
  MLP m;
  m.sizes = sizes;
  m.act = act;
  m.seed = seed;
  if (sizes.size() < 2) throw ConfigError("network needs at least an input and an output layer");
  for (int s : sizes)
    if (s < 1) throw ConfigError("layer sizes must be >= 1");
  m.params.assign(m.w_offset(m.n_layers()), 0.0);
  m.x_lo.assign(sizes.front(), -1.0);
  m.x_hi.assign(sizes.front(), 1.0);
  std::mt19937_64 rng(seed);
  for (int l = 0; l < m.n_layers(); ++l) {
    const double a = std::sqrt(6.0 / (sizes[l] + sizes[l + 1]));
    std::uniform_real_distribution<double> u(-a, a);
    for (size_t i = m.w_offset(l); i < m.b_offset(l); ++i) m.params[i] = u(rng);
  }
  m.validate();
  return m;
}

double forward(const MLP& m, std::span<const double> xs, std::vector<std::vector<double>>* acts) {
  std::vector<double> in(xs.begin(), xs.end()), out;
  if (acts) acts->clear();
  for (int l = 0; l < m.n_layers(); ++l) {
    const int ni = m.sizes[l], no = m.sizes[l + 1];
    const double* w = &m.params[m.w_offset(l)];
    const double* b = &m.params[m.b_offset(l)];
    out.assign(no, 0.0);
    for (int o = 0; o < no; ++o) {
      double z = b[o];
      for (int i = 0; i < ni; ++i) z += w[o * ni + i] * in[i];
      out[o] = z;
    }
    if (l + 1 < m.n_layers()) {
      for (double& z : out) z = m.act == Activation::relu ? std::max(0.0, z) : softplus(z);
      if (acts) acts->push_back(out);
    }
    in.swap(out);
  }
  return in[0];
}

double predict_normalized(const MLP& m, std::span<const double> features) {
  const std::vector<double> xs = m.scale_input(features);
  return forward(m, xs);
}

double predict(const MLP& m, std::span<const double> features) {
  return m.denormalize_label(predict_normalized(m, features));
}

}  // namespace dispel::nn
