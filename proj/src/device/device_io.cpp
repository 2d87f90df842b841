#include "dispel/device/device_io.hpp"

#include "dispel/common/csv.hpp"
#include "dispel/common/error.hpp"
#include "dispel/common/kv.hpp"

namespace dispel::device {

VSParams parse_device(const std::string& text, const std::string& origin) {
  const KeyValues kv = KeyValues::parse(text, origin);
  kv.require_known({"polarity", "v", "mu", "l_gate", "c_inv", "ss", "v_t0", "dibl", "beta", "temperature"});
  VSParams p;
  p.polarity = parse_polarity(kv.str("polarity"));
  p.v = kv.num("v");
  p.mu = kv.num("mu");
  p.l_gate = kv.num("l_gate");
  p.c_inv = kv.num("c_inv");
  p.ss = kv.num("ss");
  p.v_t0 = kv.num_or("v_t0", p.v_t0);
  p.dibl = kv.num_or("dibl", p.dibl);
  p.beta = kv.num_or("beta", p.beta);
  p.temperature = kv.num_or("temperature", p.temperature);
  validate(p);
  return p;
}

VSParams load_device(const std::string& path) { return parse_device(read_file(path), path); }

std::string device_to_text(const VSParams& p) {
  std::string s;
  s += "polarity=" + polarity_name(p.polarity) + "\n";
  s += "v=" + format_double(p.v) + "\n";
  s += "mu=" + format_double(p.mu) + "\n";
  s += "l_gate=" + format_double(p.l_gate) + "\n";
  s += "c_inv=" + format_double(p.c_inv) + "\n";
  s += "ss=" + format_double(p.ss) + "\n";
  s += "v_t0=" + format_double(p.v_t0) + "\n";
  s += "dibl=" + format_double(p.dibl) + "\n";
  s += "beta=" + format_double(p.beta) + "\n";
  s += "temperature=" + format_double(p.temperature) + "\n";
  return s;
}

std::vector<IVPoint> parse_iv_csv(const std::string& text, const std::string& origin) {
  const CsvTable t = CsvTable::parse(text, origin);
  const int gs = t.require_column("v_gs");
  const int ds = t.require_column("v_ds");
  const int id = t.require_column("i_d_uA_per_um");
  std::vector<IVPoint> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back({r[gs], r[ds], r[id]});
  return out;
}

std::vector<IVPoint> load_iv_csv(const std::string& path) { return parse_iv_csv(read_file(path), path); }

std::string iv_to_csv(const std::vector<IVPoint>& pts) {
  CsvTable t;
  t.header = {"v_gs", "v_ds", "i_d_uA_per_um"};
  for (const auto& p : pts) t.rows.push_back({p.v_gs, p.v_ds, p.i_d});
  return t.to_string();
}

FitFixed parse_fit_fixed(const std::string& text, const std::string& origin) {
  const KeyValues kv = KeyValues::parse(text, origin);
  kv.require_known({"polarity", "l_gate", "c_inv", "ss", "temperature"});
  FitFixed f;
  f.polarity = parse_polarity(kv.str_or("polarity", "n"));
  f.l_gate = kv.num("l_gate");
  f.c_inv = kv.num("c_inv");
  f.ss = kv.num("ss");
  f.temperature = kv.num_or("temperature", 300.0);
  return f;
}

}  // namespace dispel::device
