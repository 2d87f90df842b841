#include "dispel/sweep/dataset.hpp"

#include <sstream>

#include "dispel/common/error.hpp"
#include "dispel/common/hash.hpp"

namespace dispel::sweep {

std::vector<std::string> feature_names() {
  std::vector<std::string> n = cells::fo3_feature_names();
  for (const char* s : {"R_M2", "C_M2", "R_M4", "C_M4", "R_M6", "C_M6", "R_V1", "R_V3", "R_V5", "v_dd", "f_ach"})
    n.push_back(s);
  return n;
}

std::vector<std::string> label_names() { return {"label_energy", "label_area"}; }

std::array<double, kInterconnectFeatures> interconnect_features(const interconnect::TechStack& stack) {
  std::array<double, kInterconnectFeatures> f{};
  int k = 0;
  for (const char* m : {"M2", "M4", "M6"}) {
    const auto rc = interconnect::wire_rc_per_um(stack.layer(m), stack);
    f[k++] = rc.r_per_um;
    f[k++] = rc.c_per_um;
  }
  for (const char* v : {"V1", "V3", "V5"}) f[k++] = interconnect::via_resistance(stack.layer(v), stack);
  return f;
}

std::vector<FeatureRow> emit_dataset(const std::vector<SweepResult>& results) {
  if (results.empty()) throw ConfigError("emit_dataset needs at least one sweep result");
  std::vector<FeatureRow> rows;
  for (const SweepResult& r : results) {
    if (r.fo3.size() != r.vdd.size()) throw ConfigError("sweep result has no logic features for every V_DD");
    const auto ic = interconnect_features(r.stack);
    for (size_t vi = 0; vi < r.vdd.size(); ++vi) {
      const auto pts = r.points_at(static_cast<int>(vi));
      if (pts.empty()) continue;
      for (const EFPoint& p : pareto_frontier(pts)) {
        FeatureRow row;
        size_t k = 0;
        for (double v : r.fo3[vi]) row.x[k++] = v;
        for (double v : ic) row.x[k++] = v;
        row.x[k++] = p.v_dd;
        row.x[k++] = p.f_ach;
        row.energy = p.energy;
        row.area = p.area;
        row.provenance = p.provenance;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

CsvTable dataset_table(const std::vector<FeatureRow>& rows, const std::vector<std::string>& comments) {
  CsvTable t;
  t.comments = comments;
  t.comments.push_back("units: ion uA, delay ps, energy fJ, R_M Ohm/um, C_M fF/um, R_V Ohm, v_dd V, f_ach GHz, "
                       "label_energy pJ, label_area um^2");
  t.header = feature_names();
  for (const auto& l : label_names()) t.header.push_back(l);
  for (const FeatureRow& r : rows) {
    std::vector<double> v(r.x.begin(), r.x.end());
    v.push_back(r.energy);
    v.push_back(r.area);
    t.rows.push_back(std::move(v));
  }
  return t;
}

namespace {

const char* const kResultHeader =
    "config_hash,v_dd_V,f_tar_GHz,f_ach_GHz,t_slack_ns,energy_pJ,power_mW,cell_area_um2,die_area_um2,buffer_count,"
    "avg_net_len_um,shareR,shareC";

void result_row(std::ostream& os, const SweepResult& s, const EFRecord& rec) {
  const flow::DesignResult& r = rec.result;
  os << s.config_hash;
  for (double v : {r.v_dd, r.f_tar, r.f_ach, r.t_slack, r.energy, r.power.total(), r.cell_area, r.die_area})
    os << ',' << format_double(v);
  os << ',' << r.buffer_count;
  for (double v : {r.avg_net_length, rec.rc.share_r, rec.rc.share_c}) os << ',' << format_double(v);
}

}  // namespace

std::string manifest_hash(const std::vector<SweepResult>& rs) {
  if (rs.empty()) throw ConfigError("no sweep results");
  if (rs.size() == 1) return rs[0].config_hash;
  std::string all;
  for (const auto& r : rs) all += r.config_hash + "\n";
  return hex64(fnv1a(all));
}

std::string result_csv(const std::vector<SweepResult>& rs) {
  std::ostringstream os;
  os << "# manifest " << manifest_hash(rs) << '\n' << kResultHeader << '\n';
  for (const SweepResult& s : rs)
    for (const EFRecord& rec : s.records) {
      result_row(os, s, rec);
      os << '\n';
    }
  return os.str();
}

std::string frontier_csv(const std::vector<SweepResult>& rs) {
  std::ostringstream os;
  os << "# manifest " << manifest_hash(rs) << '\n' << kResultHeader << ",record\n";
  for (const SweepResult& s : rs)
    for (const EFPoint& p : pareto_frontier(s.points())) {
      result_row(os, s, s.records.at(p.record));
      os << ',' << p.record << '\n';
    }
  return os.str();
}

std::string result_csv(const SweepResult& s) { return result_csv(std::vector<SweepResult>{s}); }
std::string frontier_csv(const SweepResult& s) { return frontier_csv(std::vector<SweepResult>{s}); }

}  // namespace dispel::sweep
