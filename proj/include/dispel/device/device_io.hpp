#pragma once

#include <string>
#include <vector>

#include "dispel/device/fit.hpp"
#include "dispel/device/vs_model.hpp"

namespace dispel::device {

// Key-value parameter file using the VSParams field names.
VSParams parse_device(const std::string& text, const std::string& origin = "<device>");
VSParams load_device(const std::string& path);
std::string device_to_text(const VSParams& p);

// CSV with columns v_gs,v_ds,i_d_uA_per_um.
std::vector<IVPoint> parse_iv_csv(const std::string& text, const std::string& origin = "<iv>");
std::vector<IVPoint> load_iv_csv(const std::string& path);
std::string iv_to_csv(const std::vector<IVPoint>& pts);

FitFixed parse_fit_fixed(const std::string& text, const std::string& origin = "<fixed>");

}  // namespace dispel::device
