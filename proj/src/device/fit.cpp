#include "dispel/device/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "dispel/common/error.hpp"

namespace dispel::device {

namespace {

constexpr int kParams = 5;  // ln v, ln mu, v_t0, dibl, ln beta
using Vec = Eigen::Matrix<double, kParams, 1>;

VSParams unpack(const Vec& th, const FitFixed& f) {
  VSParams p;
  p.polarity = f.polarity;
  p.l_gate = f.l_gate;
  p.c_inv = f.c_inv;
  p.ss = f.ss;
  p.temperature = f.temperature;
  p.v = std::exp(th[0]);
  p.mu = std::exp(th[1]);
  p.v_t0 = th[2];
  p.dibl = th[3];
  p.beta = std::exp(th[4]);
  return p;
}

void clamp(Vec& th) {
  th[0] = std::clamp(th[0], std::log(1e5), std::log(1e9));
  th[1] = std::clamp(th[1], std::log(1.0), std::log(1e5));
  th[2] = std::clamp(th[2], -1.5, 1.5);
  th[3] = std::clamp(th[3], 0.0, 0.5);
  th[4] = std::clamp(th[4], std::log(1.0), std::log(4.0));
}

struct Problem {
  std::vector<double> vgs, vds, id;  // polarity-normalized, id > 0
  FitFixed fixed;

  Eigen::VectorXd residuals(const Vec& th) const {
    const VSModel m(unpack(th, fixed));
    Eigen::VectorXd r(static_cast<Eigen::Index>(id.size()));
    for (std::size_t i = 0; i < id.size(); ++i)
      r[static_cast<Eigen::Index>(i)] = (m.current(vgs[i], vds[i]) - id[i]) / id[i];
    return r;
  }
};

FitResult levenberg_marquardt(const Problem& prob, Vec th) {
  clamp(th);
  Eigen::VectorXd r = prob.residuals(th);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  int it = 0;
  const auto m = static_cast<Eigen::Index>(prob.id.size());
  for (; it < 300; ++it) {
    Eigen::MatrixXd jac(m, kParams);
    for (int k = 0; k < kParams; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(th[k]));
      Vec a = th, b = th;
      a[k] += h;
      b[k] -= h;
      jac.col(k) = (prob.residuals(a) - prob.residuals(b)) / (2 * h);
    }
    const Eigen::Matrix<double, kParams, kParams> jtj = jac.transpose() * jac;
    const Vec grad = jac.transpose() * r;
    if (grad.cwiseAbs().maxCoeff() < 1e-14) break;

    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::Matrix<double, kParams, kParams> a = jtj;
      for (int k = 0; k < kParams; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-12);
      Vec cand = th - a.ldlt().solve(grad);
      clamp(cand);
      const Eigen::VectorXd rc = prob.residuals(cand);
      const double c = rc.squaredNorm();
      if (std::isfinite(c) && c < cost) {
        const double rel = (cost - c) / std::max(cost, 1e-300);
        th = cand;
        r = rc;
        cost = c;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (rel < 1e-14) it = 1 << 20;
        break;
      }
      lambda *= 10;
    }
    if (!improved || it >= (1 << 20)) break;
  }
  FitResult res;
  res.params = unpack(th, prob.fixed);
  res.rms_rel_error = std::sqrt(cost / static_cast<double>(m));
  res.iterations = std::min(it, 300);
  return res;
}

}  // namespace

FitResult fit_iv(std::span<const IVPoint> points, const FitFixed& fixed) {
  Problem prob;
  prob.fixed = fixed;
  std::set<double> gs_values, ds_values;
  const double sign = fixed.polarity == Polarity::p ? -1.0 : 1.0;
  for (const auto& pt : points) {
    const double id = std::abs(pt.i_d);
    if (!(id > 0) || !std::isfinite(id)) continue;
    const double vds = sign * pt.v_ds;
    if (vds <= 0) continue;
    prob.vgs.push_back(sign * pt.v_gs);
    prob.vds.push_back(vds);
    prob.id.push_back(id);
    gs_values.insert(sign * pt.v_gs);
    ds_values.insert(vds);
  }
  if (prob.id.size() < 10)
    throw NumericError("fit_iv: need at least 10 forward-bias points with non-zero current");
  if (gs_values.size() < 2 || ds_values.size() < 2)
    throw NumericError("fit_iv: degenerate data, biases must vary in both v_gs and v_ds");

  // Seed v_t0 from the data: pick the scan value with the lowest cost at nominal transport.
  const std::array<std::pair<double, double>, 3> starts{{{0.5e7, 100.0}, {1.0e7, 300.0}, {2.0e7, 800.0}}};
  FitResult best;
  best.rms_rel_error = std::numeric_limits<double>::infinity();
  for (const auto& [v0, mu0] : starts) {
    Vec th;
    th << std::log(v0), std::log(mu0), 0.3, 0.05, std::log(1.8);
    double best_vt = 0.3, best_cost = std::numeric_limits<double>::infinity();
    for (double vt = -0.5; vt <= 1.0; vt += 0.02) {
      th[2] = vt;
      const double c = prob.residuals(th).squaredNorm();
      if (c < best_cost) { best_cost = c; best_vt = vt; }
    }
    th[2] = best_vt;
    const FitResult r = levenberg_marquardt(prob, th);
    if (r.rms_rel_error < best.rms_rel_error) best = r;
  }
  return best;
}

std::vector<IVPoint> synthesize_iv(const VSParams& p, std::span<const double> v_gs,
                                   std::span<const double> v_ds) {
  std::vector<IVPoint> out;
  for (double g : v_gs)
    for (double d : v_ds) out.push_back({g, d, drain_current(p, g, d)});
  return out;
}

}  // namespace dispel::device
