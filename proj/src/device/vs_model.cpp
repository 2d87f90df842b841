#include "dispel/device/vs_model.hpp"

#include <cmath>
#include <string>

#include "dispel/common/error.hpp"
#include "dispel/common/units.hpp"

namespace dispel::device {

namespace {

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

void validate(const VSParams& p) {
  auto bad = [](const std::string& what) { throw DomainError("VS parameter: " + what); };
  if (!(p.v > 0)) bad("v must be > 0");
  if (!(p.mu > 0)) bad("mu must be > 0");
  if (!(p.c_inv > 0)) bad("c_inv must be > 0");
  if (!(p.l_gate > 0)) bad("l_gate must be > 0");
  if (!(p.temperature > 0)) bad("temperature must be > 0");
  if (!(p.ss >= 59.5 * p.temperature / 300.0)) bad("ss below the thermal limit");
  if (!(p.beta > 0)) bad("beta must be > 0");
  if (!(p.dibl >= 0)) bad("dibl must be >= 0");
  if (!std::isfinite(p.v_t0)) bad("v_t0 must be finite");
}

double body_factor(const VSParams& p) {
  return p.ss * 1e-3 / (units::thermal_voltage(p.temperature) * units::ln10);
}

double vdsat(const VSParams& p) { return p.v * (p.l_gate * 1e-7) / p.mu; }

VSModel::VSModel(const VSParams& p) : p_(p) {
  validate(p);
  n_phit_ = body_factor(p) * units::thermal_voltage(p.temperature);
  // Q [F/cm^2] * v [cm/s] = A/cm; 1 A/cm = 100 uA/um.
  k_ = p.c_inv * 1e-6 * p.v * 100.0;
  vdsat_ = vdsat(p);
}

CurrentDerivs VSModel::forward(double v_gs, double v_ds) const {
  const double x = (v_gs - p_.v_t0 + p_.dibl * v_ds) / n_phit_;
  const double q = n_phit_ * softplus(x);  // inversion charge / C_INV, V
  const double dq = sigmoid(x);            // d q / d v_gs

  const double r = v_ds / vdsat_;
  const double rb = std::pow(r, p_.beta);
  const double base = 1.0 + rb;
  const double f = r * std::pow(base, -1.0 / p_.beta);
  const double df_dr = std::pow(base, -1.0 / p_.beta - 1.0);

  CurrentDerivs d;
  d.id = k_ * q * f;
  d.gm = k_ * dq * f;
  d.gds = k_ * (p_.dibl * dq * f + q * df_dr / vdsat_);
  return d;
}

CurrentDerivs VSModel::eval(double v_gs, double v_ds) const {
  if (v_ds >= 0) return forward(v_gs, v_ds);
  // Source and drain swap roles: the gate now references the other terminal.
  const CurrentDerivs f = forward(v_gs - v_ds, -v_ds);
  return {-f.id, -f.gm, f.gm + f.gds};
}

double VSModel::current(double v_gs, double v_ds) const { return eval(v_gs, v_ds).id; }

double drain_current(const VSParams& p, double v_gs, double v_ds) {
  if (std::abs(v_gs) > 2.0 || std::abs(v_ds) > 2.0) throw DomainError("bias outside [-2, 2] V");
  const VSModel m(p);
  if (p.polarity == Polarity::p) return m.current(-v_gs, -v_ds);
  return m.current(v_gs, v_ds);
}

VSParams tune_vt(const VSParams& p, double i_off_target_na_per_um, double v_dd) {
  if (!(i_off_target_na_per_um > 0)) throw DomainError("i_off target must be > 0");
  if (!(v_dd > 0)) throw DomainError("v_dd must be > 0");
  validate(p);
  const double target = i_off_target_na_per_um * 1e-3;  // uA/um
  const double log_target = std::log(target);

  VSParams q = p;
  auto residual = [&](double vt, double* slope) {
    q.v_t0 = vt;
    const CurrentDerivs d = VSModel(q).eval(0.0, v_dd);
    // v_t0 enters the model exactly as -v_gs does.
    if (slope) *slope = -d.gm / d.id;
    return std::log(d.id) - log_target;
  };

  double slope = 0;
  double g = residual(p.v_t0, &slope);
  if (std::abs(std::expm1(g)) <= 1e-6) return p;

  // Bracket: current decreases monotonically with v_t0.
  double lo = p.v_t0, hi = p.v_t0;
  double step = 0.1;
  if (g > 0) {
    do { lo = hi; hi += step; step *= 2; } while (residual(hi, nullptr) > 0 && step < 64);
  } else {
    do { hi = lo; lo -= step; step *= 2; } while (residual(lo, nullptr) < 0 && step < 64);
  }
  if (residual(lo, nullptr) < 0 || residual(hi, nullptr) > 0)
    throw ConvergenceError("tune_vt: cannot bracket the leakage target");

  double vt = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    g = residual(vt, &slope);
    if (g > 0) lo = vt; else hi = vt;
    if (std::abs(g) < 1e-13) {
      q.v_t0 = vt;
      return q;
    }
    double next = vt - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - vt) < 1e-15) {
      q.v_t0 = next;
      return q;
    }
    vt = next;
  }
  throw ConvergenceError("tune_vt: no convergence in 200 iterations");
}

double c_inv_series(double eot_nm, double c_q) {
  if (!(eot_nm > 0) || !(c_q > 0)) throw DomainError("c_inv_series: eot and c_q must be > 0");
  // F/m^2 -> uF/cm^2 is a factor of 100.
  const double c_ox = units::eps_r_sio2 * units::eps0_f_per_m / (eot_nm * 1e-9) * 100.0;
  return c_ox * c_q / (c_ox + c_q);
}

double gate_cap_per_width(const VSParams& p) {
  validate(p);
  // uF/cm^2 * nm -> fF/um: 1e-6 F/cm^2 * 1e-7 cm = 1e-13 F/cm = 1e-2 fF/um.
  return p.c_inv * p.l_gate * 1e-2;
}

VSParams scale_transport(const VSParams& p, double factor) {
  if (!(factor > 0)) throw DomainError("transport scale must be > 0");
  VSParams q = p;
  q.v *= factor;
  q.mu *= factor;
  return q;
}

std::string polarity_name(Polarity p) { return p == Polarity::n ? "n" : "p"; }

Polarity parse_polarity(const std::string& s) {
  if (s == "n") return Polarity::n;
  if (s == "p") return Polarity::p;
  throw ConfigError("polarity must be 'n' or 'p', got '" + s + "'");
}

}  // namespace dispel::device
