#pragma once

#include <string>
#include <vector>

#include "dispel/common/csv.hpp"
#include "dispel/nn/mlp.hpp"

namespace dispel::nn {

struct Dataset {
  std::vector<std::string> feature_names;
  std::string label;
  std::vector<std::vector<double>> x;  // raw features
  std::vector<double> y;               // label units
  size_t size() const { return y.size(); }
};

// Feature columns must equal `features` in order; `target` names the label column.
Dataset dataset_from_table(const CsvTable& t, const std::string& target, const std::vector<std::string>& features);

// Rescaled inputs and normalized labels, row-major.
struct Batch {
  int n_in = 0;
  std::vector<double> xs;
  std::vector<double> ys;
  size_t size() const { return ys.size(); }
};
Batch make_batch(const MLP& m, const Dataset& d, const std::vector<int>& rows);

// Mean squared error over the batch plus l2 * sum(weights^2). The gradient is
// accumulated in fixed chunks of rows that are summed in chunk order, so the
// result does not depend on the thread count.
double loss_and_gradient(const MLP& m, const Batch& b, double l2, std::vector<double>* grad);
// Row-by-row reference of the same quantity.
double loss_and_gradient_serial(const MLP& m, const Batch& b, double l2, std::vector<double>* grad);
double mse(const MLP& m, const Batch& b);

// Largest |analytic - numeric| / max(|analytic| + |numeric|, floor) over all
// parameters, central differences with step h.
double grad_check(const MLP& m, std::span<const double> xs, double y, double l2 = 0, double h = 1e-5,
                  double floor = 1e-8);

struct TrainConfig {
  double lr = 1e-3;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double l2 = 1e-4;
  int epochs = 50000;
  std::uint64_t seed = 42;  // split shuffle
};

struct TrainResult {
  MLP model;  // weights of the best validation epoch
  std::vector<double> train_loss, val_loss;  // normalized MSE per epoch
  int best_epoch = 0;
  double best_val = 0;
  std::vector<int> train_rows, val_rows;
  // Validation metrics of the returned model.
  double val_mse = 0;
  double val_rel_rmse = 0;  // sqrt(normalized MSE): RMSE over the training label range
  double val_mean_rel_err = 0;  // mean |y_hat - y| / |y| in label units
};

// 80/20 shuffled split, bounds from the training rows, full-batch Adam.
TrainResult train(const MLP& init, const Dataset& data, const TrainConfig& cfg);

}  // namespace dispel::nn
