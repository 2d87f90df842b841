#include "dispel/cells/transient.hpp"

#include <cmath>

namespace dispel::cells {

double degenerated_current(const device::VSModel& m, const PullNetwork& pn, double v_gs, double v_ds) {
  if (pn.width_um <= 0) return 0.0;
  const double i0 = pn.width_um * m.current(v_gs, v_ds);
  if ((pn.r_s == 0 && pn.r_d == 0) || i0 == 0) return i0;
  // Solve I = W i(v_gs - I Rs, v_ds - I (Rs + Rd)); I is bracketed by 0 and i0.
  const double rs = pn.r_s * 1e-6, rsd = (pn.r_s + pn.r_d) * 1e-6;  // V per uA
  double lo = std::min(0.0, i0), hi = std::max(0.0, i0);
  double x = i0;
  for (int it = 0; it < 60; ++it) {
    const device::CurrentDerivs d = m.eval(v_gs - x * rs, v_ds - x * rsd);
    const double g = x - pn.width_um * d.id;
    if (g > 0) hi = x;
    else lo = x;
    const double dg = 1.0 + pn.width_um * (d.gm * rs + d.gds * rsd);
    double nx = x - g / dg;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 1e-12 * std::abs(i0) + 1e-18) return nx;
    x = nx;
  }
  return x;
}

namespace {

struct Crossing {
  double t10 = -1, t50 = -1, t90 = -1;
};

void mark(double& slot, double t0, double v0, double t1, double v1, double level, bool rising) {
  if (slot >= 0) return;
  if (rising ? (v0 < level && v1 >= level) : (v0 > level && v1 <= level))
    slot = t0 + (level - v0) / (v1 - v0) * (t1 - t0);
}

}  // namespace

ChainResult simulate_chain(const device::VSModel& nm, const device::VSModel& pm, std::span<const Stage> stages,
                           double v_dd, double in_slew_ps, bool input_rising, const TransientOptions& opt) {
  const size_t k = stages.size();
  const double ramp = in_slew_ps / 0.8;  // full 0-100% ramp time
  const double v_from = input_rising ? 0.0 : v_dd, v_to = input_rising ? v_dd : 0.0;
  const double dvin = ramp > 0 ? (v_to - v_from) / ramp : 0.0;

  auto vin_at = [&](double t) { return t >= ramp ? v_to : v_from + dvin * t; };
  auto dvin_at = [&](double t) { return t < ramp ? dvin : 0.0; };

  std::vector<double> ctot(k);
  std::vector<bool> rising(k);
  std::vector<double> v(k);
  for (size_t i = 0; i < k; ++i) {
    ctot[i] = stages[i].c_out + stages[i].c_miller;
    rising[i] = (i % 2 == 0) ? !input_rising : input_rising;
    v[i] = rising[i] ? 0.0 : v_dd;
  }
  if (ramp == 0) {
    // Step input: instantaneous charge sharing through the Miller capacitance.
    v[0] += stages[0].c_miller / ctot[0] * (v_to - v_from);
  }

  // Derivative of every node voltage (V/ps) and p-network supply current (uA).
  std::vector<double> ip(k);
  auto deriv = [&](double t, const std::vector<double>& x, std::vector<double>& dx) {
    double in = vin_at(t), din = dvin_at(t);
    for (size_t i = 0; i < k; ++i) {
      const Stage& s = stages[i];
      const double i_n = degenerated_current(nm, s.n, in, x[i]);
      const double i_p = degenerated_current(pm, s.p, v_dd - in, v_dd - x[i]);
      ip[i] = i_p;
      dx[i] = (1e-3 * (i_p - i_n) + s.c_miller * din) / ctot[i];
      in = x[i];
      din = dx[i];
    }
  };

  std::vector<Crossing> cross(k);
  std::vector<double> energy(k, 0.0);
  std::vector<double> k1(k), k2(k), k3(k), k4(k), tmp(k);
  std::vector<double> p1(k), p2(k), p3(k), p4(k);
  const double h = opt.dt;
  double t = 0;
  while (true) {
    deriv(t, v, k1);
    p1 = ip;
    for (size_t i = 0; i < k; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
    deriv(t + 0.5 * h, tmp, k2);
    p2 = ip;
    for (size_t i = 0; i < k; ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
    deriv(t + 0.5 * h, tmp, k3);
    p3 = ip;
    for (size_t i = 0; i < k; ++i) tmp[i] = v[i] + h * k3[i];
    deriv(t + h, tmp, k4);
    p4 = ip;

    bool settled = t + h >= ramp;
    for (size_t i = 0; i < k; ++i) {
      const double nv = v[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      // Simpson on the supply current, uA*ps*V -> fJ
      energy[i] += v_dd * h / 6.0 * (p1[i] + 2 * p2[i] + 2 * p3[i] + p4[i]) * 1e-3;
      const bool r = rising[i];
      mark(cross[i].t10, t, v[i], t + h, nv, 0.1 * v_dd, r);
      mark(cross[i].t50, t, v[i], t + h, nv, 0.5 * v_dd, r);
      mark(cross[i].t90, t, v[i], t + h, nv, 0.9 * v_dd, r);
      v[i] = nv;
      const double frac = r ? v[i] / v_dd : 1.0 - v[i] / v_dd;
      if (frac < opt.settle || cross[i].t90 < 0 || cross[i].t10 < 0) settled = false;
    }
    t += h;
    if (settled) break;
    if (t > opt.t_max || !std::isfinite(v[k - 1]))
      throw CharacterizationError("transient did not settle within " + std::to_string(opt.t_max) + " ps");
  }

  ChainResult res;
  res.t_in50 = ramp / 2;
  for (size_t i = 0; i < k; ++i) {
    res.nodes.push_back({cross[i].t50 - res.t_in50, std::abs(cross[i].t90 - cross[i].t10)});
  }
  res.energy = energy;
  return res;
}

}  // namespace dispel::cells
