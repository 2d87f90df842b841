#pragma once

#include <array>
#include <string>
#include <vector>

#include "dispel/common/csv.hpp"
#include "dispel/sweep/sweep.hpp"

namespace dispel::sweep {

inline constexpr int kInterconnectFeatures = 9;
inline constexpr int kFeatureCount = cells::kLogicFeatures + kInterconnectFeatures + 2;

// Frozen column order: logic features, interconnect features, v_dd, f_ach.
std::vector<std::string> feature_names();
std::vector<std::string> label_names();  // label_energy, label_area

// R (Ohm/um) and C (fF/um) of M2, M4, M6, then via resistance (Ohm) of V1, V3, V5.
std::array<double, kInterconnectFeatures> interconnect_features(const interconnect::TechStack& stack);

struct FeatureRow {
  std::array<double, kFeatureCount> x{};
  double energy = 0;  // pJ
  double area = 0;    // um^2, die
  std::string provenance;
};

// One row per point on the per-V_DD Pareto frontier of every sweep.
std::vector<FeatureRow> emit_dataset(const std::vector<SweepResult>& results);

CsvTable dataset_table(const std::vector<FeatureRow>& rows, const std::vector<std::string>& comments = {});

// Every record in the result schema.
std::string result_csv(const SweepResult& r);
// Global energy-frequency frontier across all V_DD, in the result schema plus
// the record index.
std::string frontier_csv(const SweepResult& r);

// Several sweeps in one table; the manifest hash covers all of them.
std::string manifest_hash(const std::vector<SweepResult>& rs);
std::string result_csv(const std::vector<SweepResult>& rs);
std::string frontier_csv(const std::vector<SweepResult>& rs);

}  // namespace dispel::sweep
