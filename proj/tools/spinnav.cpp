// spinnav: command-line studies of adiabatic navigation in the symmetric
// collective states of N spin-1/2 particles.
//
// Subcommands: spectrum | simulate | scan | minarea | route | ghz | map.
// Every run is driven by a JSON config (see README); common flags override
// config fields. Exit codes: 0 ok, 2 config error, 3 numerical failure,
// 4 infeasible route or search bracket.

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spinnav/analysis.hpp"
#include "spinnav/dynamics.hpp"
#include "spinnav/errors.hpp"
#include "spinnav/io.hpp"
#include "spinnav/navigator.hpp"
#include "spinnav/physmap.hpp"
#include "spinnav/system.hpp"

namespace {

using json = nlohmann::json;
using namespace spinnav;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInfeasible = 4;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
  std::optional<double> tol;
  std::optional<int> threads;
  std::optional<long long> seed;
};

RunConfig resolve(const Overrides& o) {
  RunConfig c = load_config_file(o.config_path);
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.format) {
    if (*o.format == "csv")
      c.format = OutputFormat::csv;
    else if (*o.format == "json")
      c.format = OutputFormat::json;
    else
      throw ConfigError("--format must be csv or json");
  }
  if (o.tol) {
    if (!(*o.tol > 0.0) || *o.tol > 1e-2) throw ConfigError("--tol must be in (0, 1e-2]");
    c.tol = *o.tol;
  }
  if (o.threads) c.threads = *o.threads;
  if (o.seed) c.seed = *o.seed;
  return c;
}

// thread count used for sweeps; the config value is authoritative for
// provenance, the environment only fills in an unset (0) value at runtime
int effective_threads(const RunConfig& c) {
  if (c.threads > 0) return c.threads;
  if (const char* env = std::getenv("SPINNAV_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::thread::hardware_concurrency());
}

const SystemParams& need_system(const RunConfig& c) {
  if (!c.system) throw ConfigError("config: this command needs a 'system' section");
  return *c.system;
}

json resolved_config_json(const RunConfig& c) { return json::parse(config_to_json_text(c)); }

std::string out_path(const RunConfig& c, const std::string& name) {
  return (std::filesystem::path(c.out_dir) / name).string();
}

void write_json_file(const RunConfig& c, const std::string& name, const json& doc) {
  write_text_file(out_path(c, name), doc.dump(2) + "\n");
}

json amplitudes_json(const StateVector& v) {
  json out = json::array();
  for (Eigen::Index n = 0; n < v.size(); ++n) out.push_back({v(n).real(), v(n).imag()});
  return out;
}

json simulation_summary_json(const SimulationResult& r) {
  json j;
  j["final_state"] = amplitudes_json(r.final_state);
  json pops = json::array();
  for (Eigen::Index n = 0; n < r.final_state.size(); ++n)
    pops.push_back(std::norm(r.final_state(n)));
  j["final_populations"] = pops;
  j["norm_drift"] = r.norm_drift;
  j["steps_accepted"] = r.steps_accepted;
  j["steps_rejected"] = r.steps_rejected;
  j["min_step"] = r.min_step;
  j["error_estimate"] = r.error_estimate;
  j["window"] = {r.window.first, r.window.second};
  j["samples"] = r.times.size();
  return j;
}

PropagationOptions propagation_options(const RunConfig& c) {
  PropagationOptions opts;
  opts.tol = c.tol;
  if (c.sample_dt > 0.0) opts.sample_dt = c.sample_dt;
  return opts;
}

// ---- spectrum ---------------------------------------------------------------

int run_spectrum(const RunConfig& c) {
  const SystemParams& p = need_system(c);
  const CrossingGraph graph = build_crossing_graph(p);

  const double tau = p.xi / p.A;
  SpectrumConfig sc = c.spectrum.value_or(SpectrumConfig{});
  const auto times = graph.distinct_times();
  const double t_min = sc.t_min.value_or(times.front() - tau);
  const double t_max = sc.t_max.value_or(times.back() + tau);
  if (!(t_min < t_max)) throw ConfigError("config: spectrum window must have t_min < t_max");

  CsvTable energies;
  energies.comments = {"spinnav spectrum v1", "config " + config_to_json_text(c)};
  energies.columns = {"t"};
  for (int n = 0; n <= p.N; ++n) energies.columns.push_back("E_" + std::to_string(n));
  for (int i = 0; i < sc.points; ++i) {
    const double t = t_min + (t_max - t_min) * i / (sc.points - 1);
    std::vector<double> row{t};
    for (int n = 0; n <= p.N; ++n) row.push_back(energy(p, n, t));
    energies.rows.push_back(std::move(row));
  }

  CsvTable crossings;
  crossings.comments = energies.comments;
  crossings.columns = {"n", "k", "time", "order", "energy", "N_invariant"};
  for (const auto& e : graph.edges)
    crossings.rows.push_back({static_cast<double>(e.n), static_cast<double>(e.k), e.time,
                              static_cast<double>(e.order), e.energy,
                              e.n_invariant ? 1.0 : 0.0});

  if (c.format == OutputFormat::csv) {
    write_text_file(out_path(c, "spectrum_energies.csv"), csv_to_text(energies));
    write_text_file(out_path(c, "spectrum_crossings.csv"), csv_to_text(crossings));
  } else {
    json doc;
    doc["config"] = resolved_config_json(c);
    doc["energies"] = json::array();
    for (const auto& row : energies.rows) doc["energies"].push_back(row);
    doc["energy_columns"] = energies.columns;
    doc["crossings"] = json::parse(graph_to_json_text(graph))["edges"];
    write_json_file(c, "spectrum.json", doc);
  }
  std::cout << "spectrum: " << graph.edges.size() << " crossings, "
            << graph.distinct_times().size() << " distinct times\n";
  return kExitOk;
}

// ---- simulate ---------------------------------------------------------------

int run_simulate(const RunConfig& c) {
  const SystemParams& p = need_system(c);
  if (!c.schedule) throw ConfigError("config: simulate needs a 'schedule' section");
  const StateVector psi0 = c.initial_state.realize(p);
  const SimulationResult r = propagate(p, *c.schedule, psi0, propagation_options(c));

  CsvTable series;
  series.comments = {"spinnav simulate v1", "config " + config_to_json_text(c)};
  series.columns = {"t"};
  for (int n = 0; n <= p.N; ++n) series.columns.push_back("P_" + std::to_string(n));
  series.columns.push_back("norm");
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::vector<double> row{r.times[i]};
    double norm = 0.0;
    for (int n = 0; n <= p.N; ++n) {
      row.push_back(r.populations(i, n));
      norm += r.populations(i, n);
    }
    row.push_back(norm);
    series.rows.push_back(std::move(row));
  }

  if (c.format == OutputFormat::csv) {
    write_text_file(out_path(c, "simulate_timeseries.csv"), csv_to_text(series));
  } else {
    json doc;
    doc["config"] = resolved_config_json(c);
    doc["columns"] = series.columns;
    doc["rows"] = json::array();
    for (const auto& row : series.rows) doc["rows"].push_back(row);
    write_json_file(c, "simulate_timeseries.json", doc);
  }

  json summary;
  summary["config"] = resolved_config_json(c);
  summary["result"] = simulation_summary_json(r);
  write_json_file(c, "simulate_summary.json", summary);

  std::cout << "simulate: " << r.times.size() << " samples, norm drift " << r.norm_drift << "\n";
  return kExitOk;
}

// ---- scan -------------------------------------------------------------------

int run_scan(const RunConfig& c) {
  const SystemParams& p = need_system(c);
  if (!c.scan) throw ConfigError("config: scan needs a 'scan' section");
  const ScanConfig& sc = *c.scan;
  std::vector<double> grid(sc.points);
  for (int i = 0; i < sc.points; ++i)
    grid[i] = (sc.points == 1)
                  ? sc.t0_min
                  : sc.t0_min + (sc.t0_max - sc.t0_min) * i / (sc.points - 1);

  SweepOptions opts;
  opts.tol = c.tol;
  opts.threads = effective_threads(c);
  const ScanResult result = scan_pulse_center(p, sc.pulse, grid, c.initial_state.realize(p), opts);

  CsvTable table;
  table.comments = {"spinnav scan v1", "config " + config_to_json_text(c)};
  table.columns = {"t0"};
  for (int n = 0; n <= p.N; ++n) table.columns.push_back("P_" + std::to_string(n));
  for (const auto& point : result.points) {
    std::vector<double> row{point.t0};
    for (int n = 0; n <= p.N; ++n)
      row.push_back(point.ok ? point.populations(n) : std::nan(""));
    table.rows.push_back(std::move(row));
  }

  json summary;
  summary["config"] = resolved_config_json(c);
  summary["all_ok"] = result.all_ok();
  summary["points"] = json::array();
  for (const auto& point : result.points) {
    json pj{{"t0", point.t0}, {"ok", point.ok}, {"norm_drift", point.norm_drift}};
    if (!point.ok) pj["error"] = point.error;
    summary["points"].push_back(pj);
  }

  if (c.format == OutputFormat::csv) {
    write_text_file(out_path(c, "scan.csv"), csv_to_text(table));
  } else {
    json doc;
    doc["config"] = resolved_config_json(c);
    doc["columns"] = table.columns;
    doc["rows"] = json::array();
    for (const auto& row : table.rows) doc["rows"].push_back(row);
    write_json_file(c, "scan.json", doc);
  }
  write_json_file(c, "scan_summary.json", summary);

  std::cout << "scan: " << result.points.size() << " points"
            << (result.all_ok() ? "" : " (with failures)") << "\n";
  return result.all_ok() ? kExitOk : kExitNumerical;
}

// ---- minarea ----------------------------------------------------------------

int run_minarea(const RunConfig& c) {
  const SystemParams& p = need_system(c);
  if (!c.minarea) throw ConfigError("config: minarea needs a 'minarea' section");
  MinAreaOptions options = c.minarea->options;
  options.tol = c.tol;
  const AreaCurve curve =
      scaling_curve(p, c.minarea->n_list, c.minarea->shape, options, effective_threads(c));

  CsvTable table;
  table.comments = {"spinnav minarea v1", "config " + config_to_json_text(c)};
  table.columns = {"N", "area_min", "omega0", "efficiency"};
  for (const auto& point : curve.points) {
    if (point.ok)
      table.rows.push_back({static_cast<double>(point.N), point.result.area,
                            point.result.omega0, point.result.efficiency});
    else
      table.rows.push_back({static_cast<double>(point.N), std::nan(""), std::nan(""),
                            std::nan("")});
  }

  json summary;
  summary["config"] = resolved_config_json(c);
  summary["all_ok"] = curve.all_ok();
  summary["points"] = json::array();
  for (const auto& point : curve.points) {
    json pj{{"N", point.N}, {"ok", point.ok}};
    if (point.ok) {
      pj["area"] = point.result.area;
      pj["omega0"] = point.result.omega0;
      pj["efficiency"] = point.result.efficiency;
      pj["omega0_below"] = point.result.omega0_below;
      pj["efficiency_below"] = point.result.efficiency_below;
      pj["doublings"] = point.result.doublings;
      pj["bisections"] = point.result.bisections;
    } else {
      pj["error"] = point.error;
    }
    summary["points"].push_back(pj);
  }

  if (c.format == OutputFormat::csv) {
    write_text_file(out_path(c, "minarea.csv"), csv_to_text(table));
  } else {
    json doc;
    doc["config"] = resolved_config_json(c);
    doc["columns"] = table.columns;
    doc["rows"] = json::array();
    for (const auto& row : table.rows) doc["rows"].push_back(row);
    write_json_file(c, "minarea.json", doc);
  }
  write_json_file(c, "minarea_summary.json", summary);

  std::cout << "minarea: " << curve.points.size() << " N values"
            << (curve.all_ok() ? "" : " (with failures)") << "\n";
  return curve.all_ok() ? kExitOk : kExitInfeasible;
}

// ---- route ------------------------------------------------------------------

int run_route(const RunConfig& c) {
  const SystemParams& p = need_system(c);
  if (!c.route) throw ConfigError("config: route needs a 'route' section");
  const RouteConfig& rc = *c.route;

  const CrossingGraph graph = build_crossing_graph(p);
  const Route route = plan_route(graph, rc.source, rc.target, rc.constraints);

  // schedule: explicit amplitudes when given, otherwise the per-hop
  // recommendations from the planner
  Schedule schedule;
  if (!rc.omega0_per_hop.empty() || rc.omega0) {
    double width = rc.width;
    if (width <= 0.0) {
      width = std::numeric_limits<double>::infinity();
      for (const auto& hop : route.hops) width = std::min(width, hop.recommended.width);
    }
    schedule = rc.omega0_per_hop.empty()
                   ? schedule_from_route(route, *rc.omega0, width)
                   : schedule_from_route(route, rc.omega0_per_hop, width);
  } else {
    for (const auto& hop : route.hops) schedule.pulses.push_back(hop.recommended);
  }

  json doc;
  doc["config"] = resolved_config_json(c);
  doc["route"] = json::parse(route_to_json_text(route));
  doc["schedule"] = json::parse(schedule_to_json_text(schedule));
  const auto report = validate_schedule(schedule, p);
  doc["schedule_ok"] = report.ok;
  doc["schedule_report"] = report.summary();
  doc["adiabaticity"] = json::array();
  for (std::size_t i = 0; i < route.hops.size(); ++i) {
    const auto& hop = route.hops[i];
    const Pulse& pulse = schedule.pulses.at(i);
    const auto rep = adiabaticity_check(p, hop.edge, pulse);
    doc["adiabaticity"].push_back(json{{"from", hop.from},
                                       {"to", hop.to},
                                       {"coupling_ratio", rep.coupling_ratio},
                                       {"sweep_ratio", rep.sweep_ratio},
                                       {"perturbative", rep.perturbative},
                                       {"pass", rep.pass}});
  }

  if (rc.simulate) {
    const SimulationResult r =
        propagate(p, schedule, basis_state(p, rc.source), propagation_options(c));
    doc["simulation"] = simulation_summary_json(r);
    doc["simulation"]["efficiency"] = std::norm(r.final_state(rc.target));
  }
  write_json_file(c, "route.json", doc);

  std::cout << "route: " << route.hops.size() << " hop(s)";
  if (rc.simulate) std::cout << ", efficiency " << doc["simulation"]["efficiency"].get<double>();
  std::cout << "\n";
  return kExitOk;
}

// ---- ghz --------------------------------------------------------------------

int run_ghz(const RunConfig& c) {
  const SystemParams& p = need_system(c);
  if (!c.ghz) throw ConfigError("config: ghz needs a 'ghz' section");
  const Schedule schedule = ghz_schedule(p, c.ghz->rotation_time, c.ghz->pulse);
  const SimulationResult r = propagate(p, schedule, c.initial_state.realize(p),
                                       propagation_options(c));
  const GhzScore score = score_ghz(p, r.final_state);

  json doc;
  doc["config"] = resolved_config_json(c);
  doc["schedule"] = json::parse(schedule_to_json_text(schedule));
  doc["fidelity_raw"] = score.raw;
  doc["fidelity_phase_optimized"] = score.optimized;
  doc["relative_phase"] = score.relative_phase;
  doc["result"] = simulation_summary_json(r);
  write_json_file(c, "ghz.json", doc);

  std::cout << "ghz: phase-optimized fidelity " << score.optimized << " (raw " << score.raw
            << ")\n";
  return kExitOk;
}

// ---- map --------------------------------------------------------------------

int run_map(const RunConfig& c) {
  if (!c.map) throw ConfigError("config: map needs a 'map' section");
  const MapConfig& mc = *c.map;

  json doc;
  doc["config"] = resolved_config_json(c);
  json warnings = json::array();

  double xi = 0.0;
  if (mc.platform == Platform::ion_trap) {
    const IonTrapMapping m = ion_trap_xi(mc.ion);
    xi = m.xi;
    doc["platform"] = "ion_trap";
    doc["xi"] = m.xi;
    if (m.weak_detuning_warning)
      warnings.push_back("detuning is not large against the laser Rabi frequency; the "
                         "two-photon picture behind the mapping is strained");
    if (m.negative_xi) {
      warnings.push_back("delta > nu gives negative xi; run the time-reflected schedule "
                         "(t -> -t) with |xi|");
      doc["time_reflected"] = true;
    }
  } else {
    const BecEffective eff = bec_effective_params(mc.bec);
    xi = eff.xi;
    doc["platform"] = "bec";
    doc["xi"] = eff.xi;
    doc["alpha"] = eff.alpha;
    const Chirp chirp = design_chirp(eff.alpha, mc.A);
    doc["chirp"] = {{"alpha", chirp.alpha}, {"A", chirp.A}};
    doc["transverse_amplitude_factor"] = 2.0;
    if (xi == 0.0)
      warnings.push_back("U = U_ab/2 gives xi = 0: the level crossings collapse and "
                         "navigation is impossible");
  }

  if (xi != 0.0) {
    doc["system"] = {{"N", mc.N}, {"xi", std::fabs(xi)}, {"A", mc.A}};
  }
  doc["warnings"] = warnings;
  write_json_file(c, "map.json", doc);

  std::cout << "map: xi = " << xi << (warnings.empty() ? "" : " (with warnings)") << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adiabatic navigation in the symmetric collective states of N spin-1/2 "
               "particles: spectra, pulse schedules, propagation and parameter studies"};
  app.require_subcommand(1);

  Overrides o;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run configuration")->required();
    sub->add_option("--out", o.out_dir, "output directory (overrides config)");
    sub->add_option("--format", o.format, "csv|json (overrides config)");
    sub->add_option("--tol", o.tol, "integration tolerance (overrides config)");
    sub->add_option("--threads", o.threads,
                    "sweep threads; 0 = SPINNAV_THREADS env or hardware");
    sub->add_option("--seed", o.seed, "recorded for future stochastic extensions; unused");
  };

  add_common(app.add_subcommand("spectrum", "diabatic energies and the crossing network"));
  add_common(app.add_subcommand("simulate", "propagate a schedule"));
  add_common(app.add_subcommand("scan", "final populations vs pulse center"));
  add_common(app.add_subcommand("minarea", "minimal pulse area vs particle number"));
  add_common(app.add_subcommand("route", "plan a navigation route and its schedule"));
  add_common(app.add_subcommand("ghz", "pi/2 + adiabatic pulse GHZ sequence"));
  add_common(app.add_subcommand("map", "platform parameters to system parameters"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const RunConfig c = resolve(o);
    if (app.got_subcommand("spectrum")) return run_spectrum(c);
    if (app.got_subcommand("simulate")) return run_simulate(c);
    if (app.got_subcommand("scan")) return run_scan(c);
    if (app.got_subcommand("minarea")) return run_minarea(c);
    if (app.got_subcommand("route")) return run_route(c);
    if (app.got_subcommand("ghz")) return run_ghz(c);
    if (app.got_subcommand("map")) return run_map(c);
    std::cerr << "error: no subcommand\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
