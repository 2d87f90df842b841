#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "dispel/cells/fo3.hpp"
#include "dispel/cells/library.hpp"
#include "dispel/flow/flow.hpp"
#include "dispel/sweep/config.hpp"
#include "dispel/sweep/pareto.hpp"

namespace dispel::sweep {

// Everything an energy-frequency sweep needs besides the grids.
struct SweepSetup {
  interconnect::TechStack stack;
  device::VSParams n, p;  // threshold voltages are retuned per V_DD
  cells::CellDims dims;
  flow::Netlist netlist;
  cells::LibraryOptions lib_opt;
};

// MoS2 n-FET / black-phosphorus p-FET devices.
device::VSParams mos2_nfet();
device::VSParams bp_pfet();
// Devices, stack, cell dimensions and netlist named by the config; empty paths
// select the MoS2/BP devices, the copper stack, default dimensions and the
// synthetic netlist described by the config. CGP and L_GATE always come from
// the config.
SweepSetup default_setup(const SweepConfig& cfg);

struct EFRecord {
  flow::DesignResult result;
  flow::RcShare rc;
  int vdd_index = 0;
  bool fine = false;
  std::string provenance;  // config hash plus record index
};

struct SweepResult {
  std::string config_hash;
  std::vector<double> vdd;
  std::vector<std::array<double, cells::kLogicFeatures>> fo3;  // per V_DD
  std::vector<cells::CellLibrary> libraries;                   // per V_DD
  std::vector<EFRecord> records;                               // V_DD-major, coarse then fine
  interconnect::TechStack stack;

  EFPoint point(size_t record) const;
  std::vector<EFPoint> points() const;
  std::vector<EFPoint> points_at(int vdd_index) const;
  // Minimum over points of energy / f_ach (pJ*ns) and the record achieving it.
  double min_edp(int* record = nullptr) const;
};

std::string setup_hash(const SweepConfig& cfg, const SweepSetup& setup);

// Tune V_T, characterize, sweep the coarse f_TAR grid, resize the die to the
// utilization target at the fastest design, sweep the fine grid around its
// f_ACH; for every V_DD. V_DD points run in parallel and merge in grid order.
SweepResult ef_sweep(const SweepConfig& cfg, const SweepSetup& setup);
// Same with pre-built libraries, one per V_DD in grid order. Libraries do not
// depend on the routing layers, so x_rw variants may share them.
SweepResult ef_sweep(const SweepConfig& cfg, const SweepSetup& setup, std::vector<cells::CellLibrary> libraries);
// V_T tuned to the leakage target and characterized, per V_DD.
std::vector<cells::CellLibrary> build_libraries(const SweepConfig& cfg, const SweepSetup& setup);

// One sweep per dataset variant: devices scaled by (mu_scale, v_scale), the
// stack's rho_con replaced, then routing resistance scaled by dataset_x_rw.
// Order is mu-major, then v, rho_con and x_rw.
std::vector<SweepResult> variant_sweeps(const SweepConfig& cfg, const SweepSetup& base,
                                        const std::function<void(const SweepResult&)>& progress = {});

struct DeviceOptRow {
  double l_spa = 0, l_con = 0;  // nm
  double c_g2c = 0, r_con = 0;  // INV_X1: fF, Ohm
  double min_edp = 0;           // pJ*ns
  double area = 0;              // um^2 at the EDP optimum
};
struct DeviceOptResult {
  std::vector<DeviceOptRow> rows;
  int argmin = 0;
};

// Minimum EDP vs spacer length at fixed CGP and L_GATE (L_CON takes the rest).
DeviceOptResult device_opt(const SweepConfig& cfg, const SweepSetup& setup);

// Fixed-wire ring oscillator used as the linear reference for wire scaling:
// FO3 inverter stages each driving a fixed M2 wire, no repeaters or sizing.
struct RingOscillator {
  int stages = 31;
  double wire_um = 1.0;
};
double ring_oscillator_edp(const cells::CellLibrary& lib, const interconnect::TechStack& stack,
                           const RingOscillator& ro);

struct XrwRow {
  double x_rw = 0;
  double min_edp = 0;  // pJ*ns
  double area = 0;     // um^2 at the EDP optimum
  double ro_edp = 0;   // reference ring oscillator
};
std::vector<XrwRow> xrw_sweep(const SweepConfig& cfg, const SweepSetup& setup);

}  // namespace dispel::sweep
