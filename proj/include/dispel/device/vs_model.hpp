#pragma once

#include <span>
#include <string>
#include <vector>

namespace dispel::device {

enum class Polarity { n, p };

// Virtual-Source compact model parameters for one FET polarity.
struct VSParams {
  Polarity polarity = Polarity::n;
  double v = 1.0e7;          // injection velocity, cm/s
  double mu = 200.0;         // apparent mobility, cm^2/(V s)
  double l_gate = 10.0;      // nm
  double c_inv = 4.0;        // uF/cm^2
  double ss = 70.0;          // mV/dec
  double v_t0 = 0.3;         // V, threshold at V_DS = 0
  double dibl = 0.1;         // V/V
  double beta = 1.8;         // saturation smoothing exponent
  double temperature = 300;  // K

  bool operator==(const VSParams&) const = default;
};

// Throws DomainError when a field violates the model's parameter domain.
void validate(const VSParams& p);

double body_factor(const VSParams& p);  // n = SS / (phi_t ln 10)
double vdsat(const VSParams& p);        // v * L_GATE / mu, V

struct CurrentDerivs {
  double id = 0;   // uA/um
  double gm = 0;   // d id / d v_gs, uA/um/V
  double gds = 0;  // d id / d v_ds, uA/um/V
};

// Precomputed evaluator. Biases are polarity-normalized: a p-FET is evaluated
// with (V_SG, V_SD), so forward conduction is always positive.
class VSModel {
 public:
  explicit VSModel(const VSParams& p);

  double current(double v_gs, double v_ds) const;
  CurrentDerivs eval(double v_gs, double v_ds) const;
  const VSParams& params() const { return p_; }

 private:
  CurrentDerivs forward(double v_gs, double v_ds) const;

  VSParams p_;
  double n_phit_;
  double k_;  // uA/um per volt of inversion charge potential
  double vdsat_;
};

// Drain current per width (uA/um) at physical terminal biases. For a p-FET the
// biases are negated before evaluation and the forward-conduction magnitude is
// returned.
double drain_current(const VSParams& p, double v_gs, double v_ds);

// Shifts v_t0 so that drain_current(p, 0, +-v_dd) == i_off_target (nA/um).
VSParams tune_vt(const VSParams& p, double i_off_target_na_per_um, double v_dd);

// Series combination of oxide and quantum capacitance, uF/cm^2.
double c_inv_series(double eot_nm, double c_q_uf_per_cm2);

// Intrinsic gate capacitance C_INV * L_GATE per unit width, fF/um.
double gate_cap_per_width(const VSParams& p);

// Multiplies v and mu (ballistic projection knob).
VSParams scale_transport(const VSParams& p, double factor);

std::string polarity_name(Polarity p);
Polarity parse_polarity(const std::string& s);

}  // namespace dispel::device
