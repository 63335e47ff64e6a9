#include "gammaflow/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>

#include "gammaflow/constants.hpp"
#include "gammaflow/decomposition.hpp"
#include "gammaflow/flat_norm.hpp"
#include "gammaflow/grid.hpp"
#include "gammaflow/jacobian.hpp"
#include "gammaflow/minimizer.hpp"
#include "gammaflow/mollify.hpp"
#include "gammaflow/recovery.hpp"
#include "gammaflow/version.hpp"
#include "gammaflow/vortex_maps.hpp"
#include "golden_data.hpp"

namespace gammaflow {

namespace fs = std::filesystem;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw UsageError("config: unknown key \"" + it.key() + "\" in " + where);
}

const std::set<std::string> kExperiments = {"energy",  "jacobian", "decompose", "flatnorm",
                                            "deform",  "recover",  "minimize",  "sweep",
                                            "selftest", "fixtures"};

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw UsageError("config: document must be a JSON object");
  check_keys(doc, {"experiment", "seed", "threads", "out", "params"}, "top level");
  ExperimentConfig cfg;
  if (!doc.contains("experiment")) throw UsageError("config: missing \"experiment\"");
  cfg.experiment = doc.at("experiment").get<std::string>();
  if (!kExperiments.count(cfg.experiment))
    throw UsageError("config: unknown experiment \"" + cfg.experiment + "\"");
  if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("threads")) cfg.threads = doc.at("threads").get<int>();
  if (doc.contains("out")) cfg.out_dir = doc.at("out").get<std::string>();
  if (doc.contains("params")) {
    if (!doc.at("params").is_object()) throw UsageError("config: \"params\" must be an object");
    cfg.params = doc.at("params");
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Fixtures

const std::map<std::string, std::string>& fixtures() {
  static const std::map<std::string, std::string> kFixtures = {
      {"dipole.json",
       R"({"dim":2,"atoms":[{"x":[4.0,5.0],"m":1},{"x":[4.2,5.0],"m":-1}],)"
       R"("domain":{"lo":[0.0,0.0],"hi":[10.0,10.0]}})"
       "\n"},
      {"three_atoms.json",
       R"({"dim":2,"atoms":[{"x":[0.25,0.25],"m":1},{"x":[0.5,0.5],"m":-1},)"
       R"({"x":[0.75,0.75],"m":1}],"domain":{"lo":[0.0,0.0],"hi":[1.0,1.0]}})"
       "\n"},
      {"square_loop.json",
       R"({"dim":3,"segments":[)"
       R"({"a":[0.2003,0.20051,0.50077],"b":[1.2003,0.20051,0.50077],"m":1},)"
       R"({"a":[1.2003,0.20051,0.50077],"b":[1.2003,1.20051,0.50077],"m":1},)"
       R"({"a":[1.2003,1.20051,0.50077],"b":[0.2003,1.20051,0.50077],"m":1},)"
       R"({"a":[0.2003,1.20051,0.50077],"b":[0.2003,0.20051,0.50077],"m":1}],)"
       R"("domain":{"lo":[-1.3,-1.3,-1.3],"hi":[2.5,2.5,2.5]}})"
       "\n"},
      {"disk_degree1.json",
       R"({"shape":"disk","degree":1,"grid":128,"center":[0.0,0.0],"radius":1.0})"
       "\n"},
      {"disk_degree2.json",
       R"({"shape":"disk","degree":2,"grid":128,"center":[0.0,0.0],"radius":1.0})"
       "\n"},
      {"golden_dipole_ledger.csv", std::string(kGoldenDipoleLedger)},
      {"golden_selftest.csv", std::string(kGoldenSelftest)},
  };
  return kFixtures;
}

void write_fixtures(const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& [name, content] : fixtures())
    write_text_file((fs::path(dir) / name).string(), content);
}

namespace {

json fixture_json(const std::string& name) {
  auto it = fixtures().find(name + ".json");
  if (it == fixtures().end()) throw UsageError("unknown fixture \"" + name + "\"");
  return json::parse(it->second);
}

// Resolves {"fixture": "name"} or inline current+domain parameters.
std::pair<json, Domain> resolve_current_input(const json& params) {
  if (params.contains("fixture")) {
    json fx = fixture_json(params.at("fixture").get<std::string>());
    Domain dom = domain_from_json(fx.at("domain"));
    return {fx, dom};
  }
  if (!params.contains("current") || !params.contains("domain"))
    throw UsageError("config: need \"current\" and \"domain\" (or \"fixture\")");
  return {params.at("current"), domain_from_json(params.at("domain"))};
}

LatticeField build_field(const json& desc) {
  check_keys(desc, {"kind", "domain", "h", "centers", "point", "axis", "curve", "path", "phase"},
             "field");
  const std::string kind = desc.at("kind").get<std::string>();
  if (kind == "file") return read_field(desc.at("path").get<std::string>());
  const Domain dom = domain_from_json(desc.at("domain"));
  if (dom.kind != Domain::Kind::Box) throw UsageError("field: builders need a box domain");
  const double h = desc.at("h").get<double>();
  if (kind == "product_vortex") {
    std::vector<VortexCenter> centers;
    for (const auto& c : desc.at("centers")) {
      Point p(c.at("x")[0].get<double>(), c.at("x")[1].get<double>());
      centers.push_back({p, c.at("degree").get<int>()});
    }
    return product_vortex(centers, dom.box, h);
  }
  if (kind == "axis_vortex") {
    const auto& pt = desc.at("point");
    Point p(pt[0].get<double>(), pt[1].get<double>(), pt[2].get<double>());
    return axis_vortex_3d(p, desc.at("axis").get<int>(), dom.box, h);
  }
  if (kind == "solid_angle")
    return solid_angle_vortex(one_current_from_json(desc.at("curve")), dom.box, h);
  if (kind == "constant") {
    LatticeField f(dom.box, lattice_dims(dom.box, h), Target::S1);
    const double phase = desc.value("phase", 0.0);
    for (auto& v : f.values) v = phase;
    return f;
  }
  throw UsageError("field: unknown kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Experiment bodies. Each returns the list of files it wrote (relative).

std::vector<std::string> exp_flatnorm(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"current", "domain", "fixture"}, "params");
  auto [cur, dom] = resolve_current_input(cfg.params);
  const ZeroCurrent t = zero_current_from_json(cur);
  const FlatNormResult r = flat_norm_zero(t, dom);
  json out;
  out["value"] = r.value;
  out["witness"] = current_to_json(r.witness);
  out["input"] = current_to_json(t);
  out["domain"] = domain_to_json(dom);
  write_text_file((fs::path(cfg.out_dir) / "flatnorm.json").string(), out.dump(2) + "\n");
  return {"flatnorm.json"};
}

std::vector<std::string> exp_decompose(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"current", "domain", "fixture", "n", "p", "alpha"}, "params");
  auto [cur, dom] = resolve_current_input(cfg.params);
  const ZeroCurrent t = zero_current_from_json(cur);
  DecompParams params;
  params.n = cfg.params.value("n", 2);
  if (!cfg.params.contains("p") || !cfg.params.contains("alpha"))
    throw UsageError("decompose: params need \"p\" and \"alpha\"");
  params.p = cfg.params.at("p").get<double>();
  params.alpha = cfg.params.at("alpha").get<double>();

  const DecompositionResult res = decompose(t, dom, params);

  json out;
  out["X"] = current_to_json(res.X);
  out["S"] = current_to_json(res.S);
  out["params"] = {{"n", params.n}, {"p", params.p}, {"alpha", params.alpha}};
  const auto adm = check_admissible(params.n, params.p, params.alpha);
  out["admissible"] = adm.ok;
  json ledger;
  ledger["e0"] = res.ledger.e0;
  ledger["e0_prime"] = res.ledger.e0_prime;
  ledger["scales"] = json::array();
  for (int k = 1; k <= res.ledger.max_scale(); ++k) {
    const long long ek = res.ledger.e.count(k) ? res.ledger.e.at(k) : 0;
    const long long epk = res.ledger.e_prime.count(k) ? res.ledger.e_prime.at(k) : 0;
    if (ek == 0 && epk == 0) continue;
    ledger["scales"].push_back(
        {{"k", k}, {"alpha_k", params.alpha_k(k)}, {"e_k", ek}, {"e_prime_k", epk}});
  }
  out["ledger"] = ledger;
  json trace = json::array();
  for (const auto& tr : res.trace) {
    json row;
    row["y"] = {tr.y[0], tr.y[1]};
    row["z"] = {tr.z[0], tr.z[1]};
    row["y_is_boundary"] = tr.y_is_boundary;
    row["z_is_boundary"] = tr.z_is_boundary;
    row["distance"] = tr.distance;
    row["k"] = tr.scale_k;
    trace.push_back(row);
  }
  out["trace"] = trace;
  write_text_file((fs::path(cfg.out_dir) / "result.json").string(), out.dump(2) + "\n");

  CsvWriter csv((fs::path(cfg.out_dir) / "ledger.csv").string(),
                {"k", "alpha_k", "e_k", "e_prime_k"});
  csv.row({"0", format_double(1.0), std::to_string(res.ledger.e0),
           std::to_string(res.ledger.e0_prime)});
  for (int k = 1; k <= res.ledger.max_scale(); ++k) {
    const long long ek = res.ledger.e.count(k) ? res.ledger.e.at(k) : 0;
    const long long epk = res.ledger.e_prime.count(k) ? res.ledger.e_prime.at(k) : 0;
    if (ek == 0 && epk == 0) continue;
    csv.row({std::to_string(k), format_double(params.alpha_k(k)), std::to_string(ek),
             std::to_string(epk)});
  }
  csv.close();
  return {"result.json", "ledger.csv"};
}

std::vector<std::string> exp_energy(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"field", "p", "variant"}, "params");
  const LatticeField f = build_field(cfg.params.at("field"));
  const double p = cfg.params.at("p").get<double>();
  const bool variant = cfg.params.value("variant", false);
  const EnergyReport rep = p_energy(f, p, variant, /*with_density=*/false);
  json out;
  out["p"] = rep.p;
  out["variant"] = rep.variant;
  out["total"] = rep.total;
  out["rescaled"] = rep.rescaled;
  out["h"] = f.h;
  write_text_file((fs::path(cfg.out_dir) / "energy.json").string(), out.dump(2) + "\n");
  return {"energy.json"};
}

std::vector<std::string> exp_jacobian(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"field"}, "params");
  const LatticeField f = build_field(cfg.params.at("field"));
  json out;
  if (f.dim == 2) {
    out = current_to_json(plaquette_vorticity(f), "plaquette_winding");
  } else {
    out = current_to_json(face_vorticity_3d(f), "face_winding");
  }
  write_text_file((fs::path(cfg.out_dir) / "vorticity.json").string(), out.dump(2) + "\n");
  return {"vorticity.json"};
}

std::vector<std::string> exp_deform(const ExperimentConfig& cfg) {
  check_keys(cfg.params, {"curve", "fixture", "domain", "ell", "delta", "shift"}, "params");
  json curve_json;
  Domain dom;
  if (cfg.params.contains("fixture")) {
    json fx = fixture_json(cfg.params.at("fixture").get<std::string>());
    curve_json = fx;
    dom = domain_from_json(fx.at("domain"));
  } else {
    curve_json = cfg.params.at("curve");
    dom = domain_from_json(cfg.params.at("domain"));
  }
  const OneCurrent curve = one_current_from_json(curve_json);
  const double ell = cfg.params.at("ell").get<double>();
  const double delta = cfg.params.value("delta", 0.5);

  Point shift(0.0, 0.0, 0.0);
  ShiftDiagnostics diag;
  if (cfg.params.contains("shift")) {
    const auto& s = cfg.params.at("shift");
    shift = Point(s[0].get<double>(), s[1].get<double>(), s[2].get<double>());
  } else {
    shift = select_shift(curve, ell, delta, cfg.seed, &diag);
  }
  const GridSpec grid(ell, shift);
  const OneCurrent deformed = deform_to_dual(curve, grid, dom.box);
  const auto counts = intersection_numbers(curve, grid);

  json out;
  out["shift"] = {shift[0], shift[1], shift[2]};
  out["ell"] = ell;
  out["deformed"] = current_to_json(deformed, "deform_to_dual");
  out["select_shift"] = {{"attempts", diag.attempts},
                         {"pilot_mean", diag.criteria.pilot_mean},
                         {"threshold", diag.criteria.threshold},
                         {"accepted_margin", diag.accepted_margin},
                         {"accepted_integral", diag.accepted_integral}};
  // Homology diagnostic: input and output differ by a per-cube filling whose
  // mass scales with ell per crossing (constant not asserted).
  long long crossings = 0;
  for (const auto& [key, count] : counts) crossings += std::llabs(count);
  out["diagnostics"] = {{"transversal_cells", counts.size()},
                        {"total_crossings", crossings},
                        {"mass_input", mass_one(curve)},
                        {"mass_deformed", mass_one(deformed)},
                        {"filling_scale_per_crossing", ell * std::sqrt(3.0)}};
  write_text_file((fs::path(cfg.out_dir) / "deformed.json").string(), out.dump(2) + "\n");

  CsvWriter csv((fs::path(cfg.out_dir) / "intersections.csv").string(),
                {"cell_ix", "cell_iy", "cell_iz", "normal_axis", "count"});
  for (const auto& [key, count] : counts)
    csv.row({std::to_string(key.index[0]), std::to_string(key.index[1]),
             std::to_string(key.index[2]), std::to_string(key.axis), std::to_string(count)});
  csv.close();
  return {"deformed.json", "intersections.csv"};
}

std::vector<std::string> exp_sweep(const ExperimentConfig& cfg, bool single_p) {
  check_keys(cfg.params,
             {"mode", "sigma", "curve", "domain", "fixture", "p", "p_schedule", "delta_tube",
              "gamma_tube", "h_override"},
             "params");
  RecoveryPlan plan;
  plan.seed = cfg.seed;
  if (single_p) {
    plan.p_schedule = {cfg.params.at("p").get<double>()};
  } else if (cfg.params.contains("p_schedule")) {
    plan.p_schedule = cfg.params.at("p_schedule").get<std::vector<double>>();
  }
  plan.delta_tube = cfg.params.value("delta_tube", 0.1);
  plan.gamma_tube = cfg.params.value("gamma_tube", 1.0);
  plan.h_override = cfg.params.value("h_override", 0.0);

  const std::string mode = cfg.params.value("mode", "2d");
  std::vector<SweepRow> rows;
  if (mode == "2d") {
    auto [cur, dom] = resolve_current_input(cfg.params);
    rows = limsup_sweep_2d(zero_current_from_json(cur), dom.box, plan);
  } else if (mode == "3d") {
    auto [cur, dom] = resolve_current_input(cfg.params);
    rows = limsup_sweep_3d(one_current_from_json(cur), dom.box, plan);
  } else {
    throw UsageError("sweep: mode must be \"2d\" or \"3d\"");
  }

  CsvWriter csv((fs::path(cfg.out_dir) / "sweep.csv").string(),
                {"p", "h", "rescaled_energy", "target", "ratio", "flat_distance", "tube_part",
                 "skeleton_part", "exterior_part"});
  for (const auto& r : rows)
    csv.row_values({r.p, r.h, r.rescaled_energy, r.target, r.ratio, r.flat_distance, r.tube_part,
                    r.skeleton_part, r.exterior_part});
  csv.close();
  return {"sweep.csv"};
}

std::vector<std::string> exp_minimize(const ExperimentConfig& cfg) {
  check_keys(cfg.params,
             {"shape", "degree", "grid", "center", "radius", "box", "p", "variant", "tol",
              "max_sweeps", "warm_from", "fixture"},
             "params");
  BoundaryDatum datum;
  json p = cfg.params;
  if (p.contains("fixture")) {
    json fx = fixture_json(p.at("fixture").get<std::string>());
    for (auto it = fx.begin(); it != fx.end(); ++it) p[it.key()] = it.value();
  }
  const std::string shape = p.value("shape", "disk");
  datum.shape = shape == "disk" ? BoundaryDatum::Shape::Disk : BoundaryDatum::Shape::Box;
  datum.degree = p.value("degree", 1);
  datum.grid_nodes = p.value("grid", 128);
  if (p.contains("center"))
    datum.center = Point(p.at("center")[0].get<double>(), p.at("center")[1].get<double>());
  datum.radius = p.value("radius", 1.0);
  if (datum.shape == BoundaryDatum::Shape::Box) {
    if (!p.contains("box")) throw UsageError("minimize: box shape needs \"box\"");
    datum.box = domain_from_json(p.at("box")).box;
  }

  SolveOptions opts;
  opts.p = p.value("p", 1.5);
  opts.variant = p.value("variant", false);
  opts.tol = p.value("tol", 1e-7);
  opts.max_sweeps = p.value("max_sweeps", 400);
  opts.seed = cfg.seed;

  MinimizeResult res;
  if (p.contains("warm_from")) {
    LatticeField warm = read_field(p.at("warm_from").get<std::string>());
    res = minimize_field(warm, free_nodes(warm), opts);
  } else {
    res = minimize(datum, opts);
  }

  json meta;
  meta["experiment"] = "minimize";
  meta["p"] = opts.p;
  meta["degree"] = datum.degree;
  if (datum.shape == BoundaryDatum::Shape::Disk)
    meta["domain"] = {{"center", {datum.center[0], datum.center[1]}}, {"radius", datum.radius}};
  write_field(res.field, (fs::path(cfg.out_dir) / "field.sphf").string(), meta.dump());

  const ZeroCurrent vort = plaquette_vorticity(res.field);
  json rep;
  rep["p"] = res.report.p;
  rep["variant"] = res.report.variant;
  rep["total"] = res.report.total;
  rep["rescaled"] = res.report.rescaled;
  rep["sweeps"] = res.sweeps;
  rep["converged"] = res.converged;
  rep["budget_exhausted_warning"] = !res.converged;
  write_text_file((fs::path(cfg.out_dir) / "report.json").string(), rep.dump(2) + "\n");

  CsvWriter csv((fs::path(cfg.out_dir) / "vortices.csv").string(), {"x", "y", "multiplicity"});
  for (const auto& a : vort.atoms)
    csv.row({format_double(a.p[0]), format_double(a.p[1]), std::to_string(a.m)});
  csv.close();
  return {"field.sphf", "field.sphf.json", "report.json", "vortices.csv"};
}

std::vector<std::string> exp_selftest(const ExperimentConfig& cfg) {
  const auto results = run_selftest_table();
  CsvWriter csv((fs::path(cfg.out_dir) / "selftest.csv").string(), {"check", "status"});
  int failures = 0;
  for (const auto& [name, ok] : results) {
    csv.row({name, ok ? "pass" : "FAIL"});
    if (!ok) ++failures;
  }
  csv.close();
  if (failures > 0) throw InvariantError("selftest: " + std::to_string(failures) + " check(s) failed");
  return {"selftest.csv"};
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
  if (cfg.out_dir.empty()) throw UsageError("run: output directory not set");
  fs::create_directories(cfg.out_dir);
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::string> outputs;
  if (cfg.experiment == "flatnorm") outputs = exp_flatnorm(cfg);
  else if (cfg.experiment == "decompose") outputs = exp_decompose(cfg);
  else if (cfg.experiment == "energy") outputs = exp_energy(cfg);
  else if (cfg.experiment == "jacobian") outputs = exp_jacobian(cfg);
  else if (cfg.experiment == "deform") outputs = exp_deform(cfg);
  else if (cfg.experiment == "recover") outputs = exp_sweep(cfg, /*single_p=*/true);
  else if (cfg.experiment == "sweep") outputs = exp_sweep(cfg, /*single_p=*/false);
  else if (cfg.experiment == "minimize") outputs = exp_minimize(cfg);
  else if (cfg.experiment == "selftest") outputs = exp_selftest(cfg);
  else if (cfg.experiment == "fixtures") {
    write_fixtures(cfg.out_dir);
    for (const auto& [name, _] : fixtures()) outputs.push_back(name);
  } else {
    throw UsageError("run: unknown experiment \"" + cfg.experiment + "\"");
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest;
  manifest["artifact"] = "gammaflow";
  manifest["version"] = GAMMAFLOW_VERSION;
  manifest["config"] = {{"experiment", cfg.experiment},
                        {"seed", cfg.seed},
                        {"threads", cfg.threads},
                        {"out", cfg.out_dir},
                        {"params", cfg.params}};
  manifest["wall_time_s"] = wall;
  json sums = json::object();
  for (const auto& name : outputs)
    sums[name] = file_checksum((fs::path(cfg.out_dir) / name).string());
  manifest["checksums"] = sums;
  write_text_file((fs::path(cfg.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

}  // namespace gammaflow
