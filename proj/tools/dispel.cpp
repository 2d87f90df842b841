// dispel: device-to-system evaluation pipeline.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dispel/cells/fo3.hpp"
#include "dispel/cells/library_io.hpp"
#include "dispel/common/error.hpp"
#include "dispel/common/hash.hpp"
#include "dispel/common/kv.hpp"
#include "dispel/common/parallel.hpp"
#include "dispel/device/device_io.hpp"
#include "dispel/device/fit.hpp"
#include "dispel/interconnect/itf.hpp"
#include "dispel/nn/analysis.hpp"
#include "dispel/plot/svg.hpp"
#include "dispel/sweep/dataset.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace dispel;

namespace {

const char* const kVersion = "1.0.0";

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_file(path, text);
}

void write_manifest(const std::string& dir, const std::string& command, const json& inputs, std::uint64_t seed,
                    const std::string& hash, const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["inputs"] = inputs;
  m["seed"] = seed;
  m["version"] = kVersion;
  m["config_hash"] = hash;
  m["timestamp"] = utc_now();
  m["outputs"] = outputs;
  write_file((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
}

// Paths inside a config file are relative to the file.
std::string resolve(const std::string& path, const fs::path& base) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (base / path).lexically_normal().string();
}

std::string error_class_name(ErrorClass c) {
  switch (c) {
    case ErrorClass::config: return "config";
    case ErrorClass::numeric: return "numeric";
    case ErrorClass::io: return "io";
  }
  return "internal";
}

// Single-line message for scripts: key=value pairs, message last.
std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// ---- fit-device ----------------------------------------------------------

struct FitArgs {
  std::string iv, fixed, out;
};

int cmd_fit_device(const FitArgs& a) {
  const auto pts = device::load_iv_csv(a.iv);
  const device::FitFixed fixed = device::parse_fit_fixed(read_file(a.fixed), a.fixed);
  const device::FitResult r = device::fit_iv(pts, fixed);
  std::ostringstream o;
  o << "# fitted to " << a.iv << ": rms relative error " << format_double(r.rms_rel_error) << "\n"
    << device::device_to_text(r.params);
  write_out(a.out, o.str());
  json j = {{"rms_rel_error", r.rms_rel_error}, {"iterations", r.iterations}, {"v", r.params.v},
            {"mu", r.params.mu},        {"v_t0", r.params.v_t0},  {"dibl", r.params.dibl}};
  std::cerr << j.dump() << "\n";
  return 0;
}

// ---- characterize / library directory ------------------------------------

struct CharArgs {
  std::string tech, ndev, pdev, dims, out;
  double vdd = 0, i_off = 1.0;
};

struct LibraryInputs {
  interconnect::TechStack stack;
  device::VSParams n, p;  // V_T already tuned
  cells::CellDims dims;
  double v_dd = 0;
};

std::string inputs_hash(const LibraryInputs& in) {
  return hex64(fnv1a(interconnect::itf_to_text(in.stack) + device::device_to_text(in.n) +
                     device::device_to_text(in.p) + cells::dims_to_text(in.dims) + format_double(in.v_dd)));
}

int cmd_characterize(const CharArgs& a) {
  LibraryInputs in;
  in.stack = a.tech.empty() ? interconnect::default_stack() : interconnect::load_itf(a.tech);
  in.n = a.ndev.empty() ? sweep::mos2_nfet() : device::load_device(a.ndev);
  in.p = a.pdev.empty() ? sweep::bp_pfet() : device::load_device(a.pdev);
  if (!a.dims.empty()) in.dims = cells::load_dims(a.dims);
  in.v_dd = a.vdd;
  in.n = device::tune_vt(in.n, a.i_off, a.vdd);
  in.p = device::tune_vt(in.p, a.i_off, a.vdd);
  const std::string hash = inputs_hash(in);
  const cells::CellLibrary lib = cells::build_library(in.dims, in.stack, in.n, in.p, in.v_dd);

  make_dir(a.out);
  const fs::path d(a.out);
  cells::write_library(lib, a.out, "manifest " + hash);
  // The inputs travel with the dump so run-flow can rebuild the exact library.
  write_file((d / "tech.itf").string(), interconnect::itf_to_text(in.stack));
  write_file((d / "nfet.dev").string(), device::device_to_text(in.n));
  write_file((d / "pfet.dev").string(), device::device_to_text(in.p));
  write_file((d / "cell.dims").string(), cells::dims_to_text(in.dims));
  write_file((d / "library.cfg").string(), "v_dd = " + format_double(in.v_dd) + "\n");

  CsvTable fo3;
  fo3.comments = {" manifest " + hash, " ion uA, delay ps, energy fJ"};
  fo3.header = cells::fo3_feature_names();
  const auto f = cells::fo3_features(lib, in.stack);
  fo3.rows.push_back(std::vector<double>(f.begin(), f.end()));
  write_file((d / "fo3.csv").string(), fo3.to_string());

  json inputs = {{"tech", a.tech}, {"ndev", a.ndev}, {"pdev", a.pdev}, {"dims", a.dims}, {"vdd", a.vdd}};
  write_manifest(a.out, "characterize", inputs, 0, hash, {"manifest.txt", "fo3.csv"});
  std::cerr << "characterized " << lib.cells.size() << " cells at " << format_double(a.vdd) << " V into " << a.out
            << "\n";
  return 0;
}

LibraryInputs load_library_inputs(const std::string& dir) {
  const fs::path d(dir);
  LibraryInputs in;
  in.stack = interconnect::load_itf((d / "tech.itf").string());
  in.n = device::load_device((d / "nfet.dev").string());
  in.p = device::load_device((d / "pfet.dev").string());
  in.dims = cells::load_dims((d / "cell.dims").string());
  const KeyValues kv = KeyValues::load((d / "library.cfg").string());
  kv.require_known({"v_dd"});
  in.v_dd = kv.num("v_dd");
  return in;
}

// ---- run-flow ------------------------------------------------------------

struct FlowArgs {
  std::string netlist, synth, lib, out;
  double f_tar = 0, moves = 1000, utilization = 0.6;
  std::uint64_t seed = 42;
};

int cmd_run_flow(const FlowArgs& a) {
  const LibraryInputs in = load_library_inputs(a.lib);
  const cells::CellLibrary lib = cells::build_library(in.dims, in.stack, in.n, in.p, in.v_dd);

  flow::Netlist nl;
  std::string source;
  if (!a.netlist.empty()) {
    nl = flow::Netlist::load(a.netlist);
    source = nl.to_text();
  } else {
    const KeyValues kv = a.synth.empty() ? KeyValues() : KeyValues::load(a.synth);
    kv.require_known({"n_gates", "depth", "fanout_mean", "rent", "seed", "io_fraction"});
    flow::NetlistSpec s;
    s.n_gates = static_cast<int>(kv.integer_or("n_gates", s.n_gates));
    s.depth = static_cast<int>(kv.integer_or("depth", s.depth));
    s.fanout_mean = kv.num_or("fanout_mean", s.fanout_mean);
    s.rent = kv.num_or("rent", s.rent);
    s.io_fraction = kv.num_or("io_fraction", s.io_fraction);
    s.seed = static_cast<std::uint64_t>(kv.integer_or("seed", static_cast<long>(a.seed)));
    nl = flow::generate_netlist(s);
    source = nl.to_text();
  }

  const flow::Floorplan fp =
      flow::size_die(flow::netlist_cell_area(nl, lib), a.utilization, 1.0, lib.dims.height() * 1e-3);
  flow::PlaceOptions po;
  po.moves_per_cell = a.moves;
  po.seed = a.seed;
  po.utilization_limit = a.utilization;
  const flow::Placement pl = flow::place(nl, lib, fp, po);
  const flow::FlowOptions fo;
  flow::Trajectory traj(flow::Design(nl, pl, lib, in.stack), fo.opt, fo.sta);
  const size_t k = traj.steps_for(flow::timing_budget(a.f_tar, fo.sta));
  const flow::Design d = traj.design_at(k);

  sweep::SweepResult r;
  r.config_hash = hex64(fnv1a(inputs_hash(in) + source + format_double(a.f_tar) + format_double(a.moves) +
                              std::to_string(a.seed) + format_double(a.utilization)));
  sweep::EFRecord rec;
  rec.result = flow::evaluate(d, a.f_tar, fo, static_cast<int>(k));
  rec.rc = flow::rc_contribution(d, fo.sta);
  r.records.push_back(rec);
  write_out(a.out, sweep::result_csv(r));
  return 0;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  std::string config, out = ".", mode = "ef";
  std::uint64_t seed = 42;
  bool seed_given = false;
};

int cmd_sweep(const SweepArgs& a) {
  sweep::SweepConfig cfg = sweep::SweepConfig::load(a.config);
  const fs::path base = fs::path(a.config).parent_path();
  for (std::string* p : {&cfg.tech, &cfg.ndev, &cfg.pdev, &cfg.dims, &cfg.netlist}) *p = resolve(*p, base);
  if (a.seed_given) cfg.seed = a.seed;
  const sweep::SweepSetup setup = sweep::default_setup(cfg);
  make_dir(a.out);
  const fs::path d(a.out);
  const json inputs = {{"config", a.config}, {"mode", a.mode}};
  const std::string hash = sweep::setup_hash(cfg, setup);

  if (a.mode == "ef") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto runs = sweep::variant_sweeps(cfg, setup, [&](const sweep::SweepResult& r) {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << "sweep " << r.config_hash << ": " << r.records.size() << " designs, " << std::lround(s) << " s\n";
    });
    const std::string mh = sweep::manifest_hash(runs);
    write_file((d / "results.csv").string(), sweep::result_csv(runs));
    write_file((d / "frontier.csv").string(), sweep::frontier_csv(runs));
    write_file((d / "features.csv").string(),
               sweep::dataset_table(sweep::emit_dataset(runs), {" manifest " + mh}).to_string());
    write_manifest(a.out, "sweep", inputs, cfg.seed, mh, {"results.csv", "frontier.csv", "features.csv"});
  } else if (a.mode == "device-opt") {
    const sweep::DeviceOptResult r = sweep::device_opt(cfg, setup);
    CsvTable t;
    t.comments = {" manifest " + hash, " argmin l_spa_nm = " + format_double(r.rows[r.argmin].l_spa)};
    t.header = {"l_spa_nm", "l_con_nm", "c_g2c_fF", "r_con_ohm", "min_edp_pJns", "area_um2"};
    for (const auto& row : r.rows) t.rows.push_back({row.l_spa, row.l_con, row.c_g2c, row.r_con, row.min_edp, row.area});
    write_file((d / "edp_lspa.csv").string(), t.to_string());
    write_manifest(a.out, "sweep", inputs, cfg.seed, hash, {"edp_lspa.csv"});
  } else if (a.mode == "xrw") {
    CsvTable t;
    t.comments = {" manifest " + hash};
    t.header = {"x_rw", "min_edp_pJns", "area_um2", "ro_edp_pJns"};
    for (const auto& row : sweep::xrw_sweep(cfg, setup)) t.rows.push_back({row.x_rw, row.min_edp, row.area, row.ro_edp});
    write_file((d / "edp_xrw.csv").string(), t.to_string());
    write_manifest(a.out, "sweep", inputs, cfg.seed, hash, {"edp_xrw.csv"});
  } else {
    throw ConfigError("unknown sweep mode '" + a.mode + "' (ef|device-opt|xrw)");
  }
  return 0;
}

// ---- neural network ------------------------------------------------------

std::string label_column(const std::string& target) {
  if (target == "energy") return "label_energy";
  if (target == "area") return "label_area";
  throw ConfigError("unknown target '" + target + "' (energy|area)");
}

struct TrainArgs {
  std::string data, target = "energy", out, activation = "softplus";
  int epochs = 50000;
  double lr = 1e-3, l2 = 1e-4;
  std::uint64_t seed = 42;
};

nn::TrainConfig train_config(const TrainArgs& a) {
  nn::TrainConfig c;
  c.epochs = a.epochs;
  c.lr = a.lr;
  c.l2 = a.l2;
  c.seed = a.seed;
  return c;
}

int cmd_train(const TrainArgs& a) {
  const nn::Dataset d =
      nn::dataset_from_table(CsvTable::load(a.data), label_column(a.target), sweep::feature_names());
  const nn::MLP init = nn::build_mlp({sweep::kFeatureCount, 40, 20, 1}, nn::parse_activation(a.activation), a.seed);
  const nn::TrainResult r = nn::train(init, d, train_config(a));
  nn::save_model(r.model, a.out);
  CsvTable loss;
  loss.header = {"epoch", "train_mse", "val_mse"};
  for (size_t e = 0; e < r.train_loss.size(); ++e) loss.rows.push_back({double(e), r.train_loss[e], r.val_loss[e]});
  write_file(a.out + ".loss.csv", loss.to_string());
  json j = {{"rows", d.size()},           {"train_rows", r.train_rows.size()}, {"val_rows", r.val_rows.size()},
            {"best_epoch", r.best_epoch}, {"val_mse", r.val_mse},              {"val_rel_rmse", r.val_rel_rmse},
            {"val_mean_rel_err", r.val_mean_rel_err}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

std::vector<std::vector<double>> model_rows(const nn::MLP& m, const CsvTable& t) {
  std::vector<int> cols;
  for (const auto& n : m.feature_names) cols.push_back(t.require_column(n));
  std::vector<std::vector<double>> rows;
  for (const auto& r : t.rows) {
    std::vector<double> x;
    for (int c : cols) x.push_back(r[c]);
    rows.push_back(std::move(x));
  }
  return rows;
}

int cmd_predict(const std::string& model, const std::string& features, const std::string& out) {
  const nn::MLP m = nn::load_model(model);
  if (m.feature_names.empty()) throw ConfigError(model + ": model has no feature names");
  const CsvTable t = CsvTable::load(features);
  CsvTable o;
  o.comments = {" model " + model};
  o.header = {"row", "predicted_" + (m.label.empty() ? std::string("label") : m.label)};
  const auto rows = model_rows(m, t);
  for (size_t r = 0; r < rows.size(); ++r) o.rows.push_back({double(r), nn::predict(m, rows[r])});
  write_out(out, o.to_string());
  return 0;
}

struct AnalyzeArgs {
  std::string model, mode = "weights", data, target = "energy", out;
  int row = 0, epochs = 5000;
  std::uint64_t seed = 42;
};

// Frequency grid over the rows that share every feature but f_ach with `base`.
std::vector<double> f_grid_for(const std::vector<std::vector<double>>& rows, const std::vector<double>& base,
                               int f_index) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& r : rows) {
    bool same = true;
    for (size_t i = 0; i < r.size() && same; ++i) same = static_cast<int>(i) == f_index || r[i] == base[i];
    if (!same) continue;
    lo = std::min(lo, r[f_index]);
    hi = std::max(hi, r[f_index]);
  }
  if (!(hi > lo))
    for (const auto& r : rows) {
      lo = std::min(lo, r[f_index]);
      hi = std::max(hi, r[f_index]);
    }
  if (!(hi > lo)) throw ConfigError("dataset has no frequency spread");
  std::vector<double> g;
  for (int i = 0; i <= 60; ++i) g.push_back(lo + (hi - lo) * i / 60.0);
  return g;
}

int cmd_analyze(const AnalyzeArgs& a) {
  json j;
  j["mode"] = a.mode;
  if (a.mode == "weights") {
    const nn::WeightReport rep = nn::analyze_weights(nn::load_model(a.model));
    j["ion_delay_opposite_fraction"] = rep.ion_delay_opposite;
    for (const auto& n : rep.neurons) {
      json e = {{"neuron", n.neuron},
                {"logic_mass", n.logic_mass},
                {"interconnect_mass", n.interconnect_mass},
                {"interconnect_dominated", n.interconnect_dominated}};
      for (const auto& [name, w] : n.ranked) e["weights"].push_back({{"feature", name}, {"weight", w}});
      j["neurons"].push_back(e);
    }
  } else if (a.mode == "pivot" || a.mode == "relu-compare") {
    if (a.data.empty()) throw ConfigError("--data is required for mode " + a.mode);
    const CsvTable t = CsvTable::load(a.data);
    const auto names = sweep::feature_names();
    const int f_index = static_cast<int>(names.size()) - 1;
    nn::MLP m;
    std::vector<std::vector<double>> rows;
    if (a.mode == "pivot") {
      m = nn::load_model(a.model);
      rows = model_rows(m, t);
    } else {
      const nn::Dataset d = nn::dataset_from_table(t, label_column(a.target), names);
      rows = d.x;
    }
    if (a.row < 0 || a.row >= static_cast<int>(rows.size())) throw ConfigError("--row is out of range");
    const auto& base = rows[a.row];
    const auto grid = f_grid_for(rows, base, f_index);
    j["f_grid"] = grid;
    if (a.mode == "pivot") {
      const nn::PivotReport p = nn::find_pivot(m, base, f_index, grid);
      j["inactive"] = p.inactive;
      j["active"] = p.active;
      j["transitioning"] = p.transitioning;
      j["traces"] = p.traces;
    } else {
      const nn::Dataset d = nn::dataset_from_table(t, label_column(a.target), names);
      TrainArgs ta;
      ta.epochs = a.epochs;
      ta.seed = a.seed;
      const auto c = nn::relu_compare(d, {sweep::kFeatureCount, 40, 20, 1}, a.seed, train_config(ta), base, f_index, grid);
      j["smoothness_softplus"] = c.smooth_softplus;
      j["smoothness_relu"] = c.smooth_relu;
      j["val_rel_rmse_softplus"] = c.softplus.val_rel_rmse;
      j["val_rel_rmse_relu"] = c.relu.val_rel_rmse;
      j["curve_softplus"] = c.curve_softplus;
      j["curve_relu"] = c.curve_relu;
    }
  } else {
    throw ConfigError("unknown analysis mode '" + a.mode + "' (weights|pivot|relu-compare)");
  }
  write_out(a.out, j.dump(2) + "\n");
  return 0;
}

int cmd_plot(const std::string& in, const std::string& kind, const std::string& out) {
  const CsvTable t = CsvTable::load(in, {"config_hash"});
  write_out(out, plot::render_svg(plot::figure(kind, t)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  CLI::App app{"Device-to-system performance evaluation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  std::function<int()> run;

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit-device", "Extract virtual-source parameters from I-V data");
  c_fit->add_option("--iv", fit.iv, "I-V CSV (v_gs,v_ds,i_d_uA_per_um)")->required()->check(CLI::ExistingFile);
  c_fit->add_option("--fixed", fit.fixed, "fixed parameters (key=value)")->required()->check(CLI::ExistingFile);
  c_fit->add_option("--out", fit.out, "device parameter file (default stdout)");
  c_fit->callback([&] { run = [&] { return cmd_fit_device(fit); }; });

  CharArgs ch;
  auto* c_char = app.add_subcommand("characterize", "Build and dump a standard-cell library");
  c_char->add_option("--tech", ch.tech, "ITF stack (default: built-in 5-nm Cu)");
  c_char->add_option("--ndev", ch.ndev, "n-FET parameters (default: MoS2)");
  c_char->add_option("--pdev", ch.pdev, "p-FET parameters (default: BP)");
  c_char->add_option("--dims", ch.dims, "cell dimensions (key=value)");
  c_char->add_option("--vdd", ch.vdd, "supply, V")->required();
  c_char->add_option("--i-off", ch.i_off, "leakage target, nA/um");
  c_char->add_option("--out", ch.out, "output directory")->required();
  c_char->callback([&] { run = [&] { return cmd_characterize(ch); }; });

  FlowArgs fl;
  auto* c_flow = app.add_subcommand("run-flow", "Place, route, optimize and time one design");
  auto* o_nl = c_flow->add_option("--netlist", fl.netlist, "structural netlist");
  auto* o_syn = c_flow->add_option("--synth", fl.synth, "synthetic netlist spec (key=value)");
  o_nl->excludes(o_syn);
  c_flow->add_option("--lib", fl.lib, "library directory from characterize")->required();
  c_flow->add_option("--ftar", fl.f_tar, "target frequency, GHz")->required();
  c_flow->add_option("--moves", fl.moves, "annealing moves per cell");
  c_flow->add_option("--utilization", fl.utilization, "initial utilization");
  c_flow->add_option("--seed", fl.seed, "placement and synthesis seed");
  c_flow->add_option("--out", fl.out, "result CSV (default stdout)");
  c_flow->callback([&] { run = [&] { return cmd_run_flow(fl); }; });

  SweepArgs sw;
  auto* c_sweep = app.add_subcommand("sweep", "Energy-frequency sweep and derived studies");
  c_sweep->add_option("--config", sw.config, "sweep configuration")->required()->check(CLI::ExistingFile);
  c_sweep->add_option("--out", sw.out, "output directory");
  c_sweep->add_option("--mode", sw.mode, "ef | device-opt | xrw");
  auto* o_sseed = c_sweep->add_option("--seed", sw.seed, "netlist and placement seed (overrides the config)");
  c_sweep->callback([&] {
    sw.seed_given = o_sseed->count() > 0;
    run = [&] { return cmd_sweep(sw); };
  });

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train-nn", "Train an energy or area predictor");
  c_train->add_option("--data", tr.data, "feature CSV from sweep")->required()->check(CLI::ExistingFile);
  c_train->add_option("--target", tr.target, "energy | area");
  c_train->add_option("--out", tr.out, "model file")->required();
  c_train->add_option("--epochs", tr.epochs, "full-batch epochs");
  c_train->add_option("--lr", tr.lr, "Adam learning rate");
  c_train->add_option("--l2", tr.l2, "L2 coefficient");
  c_train->add_option("--activation", tr.activation, "softplus | relu");
  c_train->add_option("--seed", tr.seed, "initialization and split seed");
  c_train->callback([&] { run = [&] { return cmd_train(tr); }; });

  std::string p_model, p_features, p_out;
  auto* c_pred = app.add_subcommand("predict", "Predict with a trained model");
  c_pred->add_option("--model", p_model, "model file")->required()->check(CLI::ExistingFile);
  c_pred->add_option("--features", p_features, "CSV with the model's feature columns")->required()->check(CLI::ExistingFile);
  c_pred->add_option("--out", p_out, "prediction CSV (default stdout)");
  c_pred->callback([&] { run = [&] { return cmd_predict(p_model, p_features, p_out); }; });

  AnalyzeArgs an;
  auto* c_an = app.add_subcommand("analyze-nn", "Inspect a trained model");
  c_an->add_option("--model", an.model, "model file");
  c_an->add_option("--mode", an.mode, "weights | pivot | relu-compare");
  c_an->add_option("--data", an.data, "feature CSV (pivot, relu-compare)");
  c_an->add_option("--target", an.target, "energy | area (relu-compare)");
  c_an->add_option("--row", an.row, "dataset row used as the base point");
  c_an->add_option("--epochs", an.epochs, "epochs per model (relu-compare)");
  c_an->add_option("--seed", an.seed, "training seed (relu-compare)");
  c_an->add_option("--out", an.out, "JSON report (default stdout)");
  c_an->callback([&] {
    if (an.mode != "relu-compare" && an.model.empty()) throw CLI::ValidationError("--model", "required for " + an.mode);
    run = [&] { return cmd_analyze(an); };
  });

  std::string pl_in, pl_kind = "ef", pl_out;
  auto* c_plot = app.add_subcommand("plot", "Render an SVG figure from a CSV");
  c_plot->add_option("--in", pl_in, "input CSV")->required()->check(CLI::ExistingFile);
  c_plot->add_option("--kind", pl_kind, "ef | edp-lspa | edp-xrw | area-f");
  c_plot->add_option("--out", pl_out, "SVG file (default stdout)");
  c_plot->callback([&] { run = [&] { return cmd_plot(pl_in, pl_kind, pl_out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: class=config code=2 message=" << one_line(e.what()) << "\n";
    return 2;
  }
  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "error: class=" << error_class_name(e.error_class()) << " code=" << e.exit_code()
              << " message=" << one_line(e.what()) << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: class=internal code=1 message=" << one_line(e.what()) << "\n";
    return 1;
  }
}
