#pragma once

#include <string>

#include "dispel/interconnect/tech_stack.hpp"

namespace dispel::interconnect {

// ITF-like text format:
//   stack rho_bulk_uohm_cm=<f> mfp_nm=<f> grain_R=<f> specularity=<f> rho_con_ohm_cm2=<e>
//         [x_rw=<f>] [scale_vias=<0|1>] [fringe=<f>]
//   layer <name> kind=<wire|via|meol> min_width_nm=<f> min_spacing_nm=<f> thickness_nm=<f> k_ild=<f>
//         [model=<bulk|steinhogl>] [rho_uohm_cm=<f>] [ild_height_nm=<f>]
TechStack parse_itf(const std::string& text, const std::string& origin = "<itf>");
TechStack load_itf(const std::string& path);
std::string itf_to_text(const TechStack& stack);

}  // namespace dispel::interconnect
