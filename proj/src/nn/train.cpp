#include "dispel/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dispel/common/error.hpp"
#include "dispel/common/parallel.hpp"

namespace dispel::nn {

Dataset dataset_from_table(const CsvTable& t, const std::string& target, const std::vector<std::string>& features) {
  if (t.header.size() < features.size()) throw ConfigError("dataset has too few columns for the feature schema");
  for (size_t i = 0; i < features.size(); ++i)
    if (t.header[i] != features[i])
      throw ConfigError("dataset column " + std::to_string(i + 1) + " is '" + t.header[i] + "', expected '" +
                        features[i] + "'");
  const int yc = t.require_column(target);
  if (yc < static_cast<int>(features.size())) throw ConfigError("label column '" + target + "' is a feature");
  Dataset d;
  d.feature_names = features;
  d.label = target;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    std::vector<double> x(row.begin(), row.begin() + features.size());
    for (size_t i = 0; i < x.size(); ++i)
      if (!std::isfinite(x[i]))
        throw ConfigError("dataset row " + std::to_string(r + 1) + " column '" + features[i] + "' is not finite");
    if (!std::isfinite(row[yc])) throw ConfigError("dataset row " + std::to_string(r + 1) + " label is not finite");
    d.x.push_back(std::move(x));
    d.y.push_back(row[yc]);
  }
  return d;
}

Batch make_batch(const MLP& m, const Dataset& d, const std::vector<int>& rows) {
  Batch b;
  b.n_in = m.n_inputs();
  for (int r : rows) {
    const std::vector<double> xs = m.scale_input(d.x.at(r));
    b.xs.insert(b.xs.end(), xs.begin(), xs.end());
    b.ys.push_back(m.normalize_label(d.y[r]));
  }
  return b;
}

namespace {

constexpr size_t kChunk = 32;

// Scratch for one sample's forward and backward pass.
struct Work {
  std::vector<std::vector<double>> z, a;  // pre-activations and layer inputs
  std::vector<double> delta, next;

  explicit Work(const MLP& m) : z(m.n_layers()), a(m.n_layers() + 1) {}
};

double activate(Activation act, double z) { return act == Activation::relu ? std::max(0.0, z) : softplus(z); }
double activate_grad(Activation act, double z) { return act == Activation::relu ? (z > 0 ? 1.0 : 0.0) : sigmoid(z); }

// Adds scale * d(y_hat - y)^2 / d params to grad and returns the squared error.
double accumulate(const MLP& m, const double* x, double y, double scale, Work& w, double* grad) {
  const int L = m.n_layers();
  w.a[0].assign(x, x + m.n_inputs());
  for (int l = 0; l < L; ++l) {
    const int ni = m.sizes[l], no = m.sizes[l + 1];
    const double* W = &m.params[m.w_offset(l)];
    const double* b = &m.params[m.b_offset(l)];
    w.z[l].resize(no);
    w.a[l + 1].resize(no);
    for (int o = 0; o < no; ++o) {
      double z = b[o];
      for (int i = 0; i < ni; ++i) z += W[o * ni + i] * w.a[l][i];
      w.z[l][o] = z;
      w.a[l + 1][o] = l + 1 < L ? activate(m.act, z) : z;
    }
  }
  const double err = w.a[L][0] - y;
  w.delta.assign(1, 2.0 * err * scale);
  for (int l = L - 1; l >= 0; --l) {
    const int ni = m.sizes[l], no = m.sizes[l + 1];
    const double* W = &m.params[m.w_offset(l)];
    double* gW = grad + m.w_offset(l);
    double* gb = grad + m.b_offset(l);
    for (int o = 0; o < no; ++o) {
      const double d = w.delta[o];
      gb[o] += d;
      for (int i = 0; i < ni; ++i) gW[o * ni + i] += d * w.a[l][i];
    }
    if (l == 0) break;
    w.next.assign(ni, 0.0);
    for (int o = 0; o < no; ++o)
      for (int i = 0; i < ni; ++i) w.next[i] += W[o * ni + i] * w.delta[o];
    for (int i = 0; i < ni; ++i) w.next[i] *= activate_grad(m.act, w.z[l - 1][i]);
    w.delta.swap(w.next);
  }
  return err * err;
}

double l2_term(const MLP& m, double l2, std::vector<double>* grad) {
  if (l2 == 0) return 0;
  double s = 0;
  for (int l = 0; l < m.n_layers(); ++l)
    for (size_t i = m.w_offset(l); i < m.b_offset(l); ++i) {
      s += m.params[i] * m.params[i];
      if (grad) (*grad)[i] += 2.0 * l2 * m.params[i];
    }
  return l2 * s;
}

void check_batch(const MLP& m, const Batch& b) {
  if (b.n_in != m.n_inputs() || b.xs.size() != b.size() * b.n_in) throw ConfigError("batch does not match the network");
  if (b.size() == 0) throw ConfigError("batch is empty");
}

}  // namespace

double loss_and_gradient(const MLP& m, const Batch& b, double l2, std::vector<double>* grad) {
  check_batch(m, b);
  const size_t n = b.size(), np = m.params.size();
  const size_t chunks = chunk_count(n, kChunk);
  const double scale = 1.0 / n;
  std::vector<double> sse(chunks, 0.0);
  std::vector<std::vector<double>> part(grad ? chunks : 0);
#pragma omp parallel
  {
    Work w(m);
    std::vector<double> dummy(np);
#pragma omp for schedule(static)
    for (size_t c = 0; c < chunks; ++c) {
      double* g = dummy.data();
      if (grad) {
        part[c].assign(np, 0.0);
        g = part[c].data();
      }
      const size_t end = std::min(n, (c + 1) * kChunk);
      for (size_t r = c * kChunk; r < end; ++r) sse[c] += accumulate(m, &b.xs[r * b.n_in], b.ys[r], scale, w, g);
    }
  }
  double total = 0;
  if (grad) grad->assign(np, 0.0);
  for (size_t c = 0; c < chunks; ++c) {
    total += sse[c];
    if (grad)
      for (size_t i = 0; i < np; ++i) (*grad)[i] += part[c][i];
  }
  return total / n + l2_term(m, l2, grad);
}

double loss_and_gradient_serial(const MLP& m, const Batch& b, double l2, std::vector<double>* grad) {
  check_batch(m, b);
  const size_t n = b.size();
  Work w(m);
  std::vector<double> g(m.params.size(), 0.0);
  double total = 0;
  for (size_t r = 0; r < n; ++r) total += accumulate(m, &b.xs[r * b.n_in], b.ys[r], 1.0 / n, w, g.data());
  const double l2v = l2_term(m, l2, &g);
  if (grad) *grad = std::move(g);
  return total / n + l2v;
}

double mse(const MLP& m, const Batch& b) {
  check_batch(m, b);
  double s = 0;
  for (size_t r = 0; r < b.size(); ++r) {
    const double e = forward(m, std::span<const double>(&b.xs[r * b.n_in], b.n_in)) - b.ys[r];
    s += e * e;
  }
  return s / b.size();
}

double grad_check(const MLP& m, std::span<const double> xs, double y, double l2, double h, double floor) {
  Batch b;
  b.n_in = m.n_inputs();
  b.xs.assign(xs.begin(), xs.end());
  b.ys = {y};
  std::vector<double> g;
  loss_and_gradient_serial(m, b, l2, &g);
  MLP p = m;
  double worst = 0;
  for (size_t i = 0; i < p.params.size(); ++i) {
    const double keep = p.params[i];
    p.params[i] = keep + h;
    const double up = loss_and_gradient_serial(p, b, l2, nullptr);
    p.params[i] = keep - h;
    const double down = loss_and_gradient_serial(p, b, l2, nullptr);
    p.params[i] = keep;
    const double num = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(g[i] - num) / std::max(std::abs(g[i]) + std::abs(num), floor));
  }
  return worst;
}

TrainResult train(const MLP& init, const Dataset& data, const TrainConfig& cfg) {
  init.validate();
  if (data.size() < 100) throw ConfigError("training needs at least 100 rows, got " + std::to_string(data.size()));
  if (!(cfg.lr > 0) || cfg.epochs < 1) throw ConfigError("training needs lr > 0 and epochs >= 1");
  if (!(cfg.beta1 >= 0 && cfg.beta1 < 1 && cfg.beta2 >= 0 && cfg.beta2 < 1 && cfg.eps > 0 && cfg.l2 >= 0))
    throw ConfigError("bad Adam or L2 settings");
  for (const auto& x : data.x)
    if (x.size() != static_cast<size_t>(init.n_inputs())) throw ConfigError("dataset width does not match the network");

  TrainResult res;
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), rng);
  const size_t n_val = static_cast<size_t>(std::llround(0.2 * data.size()));
  res.train_rows.assign(order.begin(), order.end() - n_val);
  res.val_rows.assign(order.end() - n_val, order.end());
  std::sort(res.train_rows.begin(), res.train_rows.end());
  std::sort(res.val_rows.begin(), res.val_rows.end());

  MLP m = init;
  if (m.feature_names.empty()) m.feature_names = data.feature_names;
  if (m.label.empty()) m.label = data.label;
  const size_t nf = m.n_inputs();
  std::vector<double> lo(nf, INFINITY), hi(nf, -INFINITY);
  double ylo = INFINITY, yhi = -INFINITY;
  for (int r : res.train_rows) {
    for (size_t i = 0; i < nf; ++i) {
      lo[i] = std::min(lo[i], data.x[r][i]);
      hi[i] = std::max(hi[i], data.x[r][i]);
    }
    ylo = std::min(ylo, data.y[r]);
    yhi = std::max(yhi, data.y[r]);
  }
  m.set_bounds(lo, hi, ylo, yhi);
  const Batch tb = make_batch(m, data, res.train_rows);
  const Batch vb = make_batch(m, data, res.val_rows);

  std::vector<double> g, mom(m.params.size(), 0.0), vel(m.params.size(), 0.0);
  res.best_val = INFINITY;
  res.model = m;
  double b1t = 1, b2t = 1;
  for (int e = 0; e < cfg.epochs; ++e) {
    const double loss = loss_and_gradient(m, tb, cfg.l2, &g);
    const double tr = loss - l2_term(m, cfg.l2, nullptr);
    const double va = vb.size() ? mse(m, vb) : tr;
    if (!std::isfinite(loss) || !std::isfinite(va))
      throw ConvergenceError("training diverged at epoch " + std::to_string(e + 1));
    res.train_loss.push_back(tr);
    res.val_loss.push_back(va);
    if (va < res.best_val) {
      res.best_val = va;
      res.best_epoch = e;
      res.model.params = m.params;
    }
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    for (size_t i = 0; i < m.params.size(); ++i) {
      mom[i] = cfg.beta1 * mom[i] + (1 - cfg.beta1) * g[i];
      vel[i] = cfg.beta2 * vel[i] + (1 - cfg.beta2) * g[i] * g[i];
      m.params[i] -= cfg.lr * (mom[i] / (1 - b1t)) / (std::sqrt(vel[i] / (1 - b2t)) + cfg.eps);
    }
  }

  const Batch& eval = vb.size() ? vb : tb;
  const std::vector<int>& eval_rows = vb.size() ? res.val_rows : res.train_rows;
  res.val_mse = mse(res.model, eval);
  res.val_rel_rmse = std::sqrt(res.val_mse);
  double rel = 0;
  for (int r : eval_rows) {
    const double yh = predict(res.model, data.x[r]);
    rel += data.y[r] != 0 ? std::abs(yh - data.y[r]) / std::abs(data.y[r]) : 0.0;
  }
  res.val_mean_rel_err = rel / eval_rows.size();
  return res;
}

}  // namespace dispel::nn
