#pragma once

#include <span>
#include <vector>

#include "dispel/device/vs_model.hpp"

namespace dispel::device {

struct IVPoint {
  double v_gs = 0;  // V (physical sign)
  double v_ds = 0;  // V
  double i_d = 0;   // uA/um, magnitude
};

// Parameters held fixed during extraction.
struct FitFixed {
  Polarity polarity = Polarity::n;
  double l_gate = 10;
  double c_inv = 4;
  double ss = 70;
  double temperature = 300;
};

struct FitResult {
  VSParams params;
  double rms_rel_error = 0;
  int iterations = 0;
};

// Least-squares extraction of {v, mu, v_t0, dibl, beta} on relative current
// error. Levenberg-Marquardt from three starting points; best result wins.
FitResult fit_iv(std::span<const IVPoint> points, const FitFixed& fixed);

std::vector<IVPoint> synthesize_iv(const VSParams& p, std::span<const double> v_gs,
                                   std::span<const double> v_ds);

}  // namespace dispel::device
