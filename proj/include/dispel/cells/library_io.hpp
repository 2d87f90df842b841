#pragma once

#include <string>

#include "dispel/cells/library.hpp"

namespace dispel::cells {

CellDims parse_dims(const std::string& text, const std::string& origin = "<dims>");
CellDims load_dims(const std::string& path);
std::string dims_to_text(const CellDims& d);

// Writes <dir>/manifest.txt and <dir>/<cell>.csv with columns
// arc,edge,slew_ps,load_fF,delay_ps,out_slew_ps,energy_fJ.
void write_library(const CellLibrary& lib, const std::string& dir, const std::string& header_comment = "");

}  // namespace dispel::cells
