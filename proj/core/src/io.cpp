#include "spinnav/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "spinnav/errors.hpp"

namespace spinnav {

using json = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config: " + where + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) fail(where, "expected a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

// ---- pulses / schedules ----------------------------------------------------

json pulse_to_json(const Pulse& p) {
  json j;
  switch (p.shape) {
    case PulseShape::gaussian:
      j["shape"] = "gaussian";
      j["omega0"] = p.omega0;
      j["t0"] = p.t0;
      j["width"] = p.width;
      break;
    case PulseShape::flattop:
      j["shape"] = "flattop";
      j["omega0"] = p.omega0;
      j["t0"] = p.t0;
      j["duration"] = p.duration;
      j["rise"] = p.rise;
      break;
    case PulseShape::tabulated:
      j["shape"] = "tabulated";
      j["times"] = p.sample_times;
      j["values"] = p.sample_values;
      break;
  }
  return j;
}

Pulse pulse_from_json(const json& j, const std::string& where) {
  const std::string shape = as_string(require(j, "shape", where), where + ".shape");
  try {
    if (shape == "gaussian") {
      return Pulse::make_gaussian(as_double(require(j, "omega0", where), where + ".omega0"),
                                  as_double(require(j, "t0", where), where + ".t0"),
                                  as_double(require(j, "width", where), where + ".width"));
    }
    if (shape == "flattop") {
      return Pulse::make_flattop(as_double(require(j, "omega0", where), where + ".omega0"),
                                 as_double(require(j, "t0", where), where + ".t0"),
                                 as_double(require(j, "duration", where), where + ".duration"),
                                 as_double(require(j, "rise", where), where + ".rise"));
    }
    if (shape == "tabulated") {
      const json& jt = require(j, "times", where);
      const json& jv = require(j, "values", where);
      if (!jt.is_array() || !jv.is_array()) fail(where, "times/values must be arrays");
      return Pulse::make_tabulated(jt.get<std::vector<double>>(), jv.get<std::vector<double>>());
    }
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  fail(where + ".shape", "unknown shape '" + shape + "'");
}

json rotation_to_json(const Rotation& r) {
  return json{{"t", r.t}, {"subspace", {r.a, r.b}}, {"angle", r.angle}};
}

Rotation rotation_from_json(const json& j, const std::string& where) {
  Rotation r;
  r.t = as_double(require(j, "t", where), where + ".t");
  const json& sub = require(j, "subspace", where);
  if (!sub.is_array() || sub.size() != 2) fail(where + ".subspace", "expected [a, b]");
  r.a = as_int(sub[0], where + ".subspace[0]");
  r.b = as_int(sub[1], where + ".subspace[1]");
  r.angle = as_double(require(j, "angle", where), where + ".angle");
  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return r;
}

json schedule_to_json(const Schedule& s) {
  json j;
  j["pulses"] = json::array();
  for (const auto& p : s.pulses) j["pulses"].push_back(pulse_to_json(p));
  j["rotations"] = json::array();
  for (const auto& r : s.rotations) j["rotations"].push_back(rotation_to_json(r));
  if (s.window) j["window"] = {s.window->first, s.window->second};
  return j;
}

Schedule schedule_from_json(const json& j, const std::string& where) {
  Schedule s;
  if (auto it = j.find("pulses"); it != j.end()) {
    if (!it->is_array()) fail(where + ".pulses", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      s.pulses.push_back(pulse_from_json((*it)[i], where + ".pulses[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("rotations"); it != j.end()) {
    if (!it->is_array()) fail(where + ".rotations", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      s.rotations.push_back(
          rotation_from_json((*it)[i], where + ".rotations[" + std::to_string(i) + "]"));
  }
  if (auto it = j.find("window"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) fail(where + ".window", "expected [t_start, t_end]");
    s.window = {as_double((*it)[0], where + ".window[0]"), as_double((*it)[1], where + ".window[1]")};
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return s;
}

// ---- system / enums ---------------------------------------------------------

json system_to_json(const SystemParams& p) {
  return json{{"N", p.N}, {"xi", p.xi}, {"A", p.A}};
}

SystemParams system_from_json(const json& j, const std::string& where) {
  SystemParams p;
  p.N = as_int(require(j, "N", where), where + ".N");
  p.xi = as_double(require(j, "xi", where), where + ".xi");
  p.A = as_double(require(j, "A", where), where + ".A");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return p;
}

}  // namespace

const char* target_state_name(TargetState t) {
  switch (t) {
    case TargetState::product_down: return "product_down";
    case TargetState::product_up: return "product_up";
    case TargetState::w_low: return "W_low";
    case TargetState::w_high: return "W_high";
    case TargetState::ghz: return "GHZ";
  }
  return "?";
}

TargetState target_state_from_name(const std::string& name) {
  if (name == "product_down") return TargetState::product_down;
  if (name == "product_up") return TargetState::product_up;
  if (name == "W_low") return TargetState::w_low;
  if (name == "W_high") return TargetState::w_high;
  if (name == "GHZ") return TargetState::ghz;
  throw ConfigError("config: unknown named state '" + name + "'");
}

const char* strategy_name(RouteStrategy s) {
  switch (s) {
    case RouteStrategy::sequential: return "sequential";
    case RouteStrategy::direct: return "direct";
    case RouteStrategy::n_invariant: return "N_invariant";
  }
  return "?";
}

RouteStrategy strategy_from_name(const std::string& name) {
  if (name == "sequential") return RouteStrategy::sequential;
  if (name == "direct") return RouteStrategy::direct;
  if (name == "N_invariant") return RouteStrategy::n_invariant;
  throw ConfigError("config: unknown route strategy '" + name + "'");
}

StateVector InitialStateSpec::realize(const SystemParams& p) const {
  const int given = (named ? 1 : 0) + (basis_n ? 1 : 0) + (amplitudes ? 1 : 0);
  if (given > 1)
    throw ConfigError("config: initial_state must be a single specification");
  if (named) return named_state(p, *named);
  if (basis_n) return basis_state(p, *basis_n);
  if (amplitudes) {
    if (static_cast<int>(amplitudes->size()) != p.dim())
      throw ConfigError("config: initial_state amplitudes must have N+1 entries");
    StateVector v(p.dim());
    for (int n = 0; n < p.dim(); ++n) v(n) = (*amplitudes)[n];
    check_unit_norm(v);
    return v;
  }
  return named_state(p, TargetState::product_down);
}

namespace {

json initial_state_to_json(const InitialStateSpec& s) {
  if (s.basis_n) return json{{"n", *s.basis_n}};
  if (s.amplitudes) {
    json amps = json::array();
    for (const auto& c : *s.amplitudes) amps.push_back({c.real(), c.imag()});
    return json{{"amplitudes", amps}};
  }
  return json(target_state_name(s.named.value_or(TargetState::product_down)));
}

InitialStateSpec initial_state_from_json(const json& j, const std::string& where) {
  InitialStateSpec s;
  if (j.is_string()) {
    s.named = target_state_from_name(j.get<std::string>());
    return s;
  }
  if (!j.is_object()) fail(where, "expected a named state or an object");
  if (auto it = j.find("n"); it != j.end()) {
    s.basis_n = as_int(*it, where + ".n");
    return s;
  }
  if (auto it = j.find("amplitudes"); it != j.end()) {
    if (!it->is_array()) fail(where + ".amplitudes", "expected an array of [re, im]");
    std::vector<std::complex<double>> amps;
    for (const auto& e : *it) {
      if (!e.is_array() || e.size() != 2) fail(where + ".amplitudes", "entries must be [re, im]");
      amps.emplace_back(as_double(e[0], where), as_double(e[1], where));
    }
    s.amplitudes = std::move(amps);
    return s;
  }
  fail(where, "expected 'n' or 'amplitudes'");
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  RunConfig c;
  c.version = as_int(require(j, "version", "top"), "version");
  if (c.version != 1) fail("version", "unsupported config version " + std::to_string(c.version));
  if (auto it = j.find("units"); it != j.end()) c.units = as_string(*it, "units");
  if (c.units != "T") fail("units", "only the T-based convention is supported");

  if (auto it = j.find("system"); it != j.end()) c.system = system_from_json(*it, "system");
  if (auto it = j.find("schedule"); it != j.end())
    c.schedule = schedule_from_json(*it, "schedule");
  if (auto it = j.find("initial_state"); it != j.end())
    c.initial_state = initial_state_from_json(*it, "initial_state");
  else
    c.initial_state.named = TargetState::product_down;
  if (!c.initial_state.named && !c.initial_state.basis_n && !c.initial_state.amplitudes)
    c.initial_state.named = TargetState::product_down;

  if (auto it = j.find("spectrum"); it != j.end()) {
    SpectrumConfig sc;
    if (auto f = it->find("t_min"); f != it->end()) sc.t_min = as_double(*f, "spectrum.t_min");
    if (auto f = it->find("t_max"); f != it->end()) sc.t_max = as_double(*f, "spectrum.t_max");
    if (auto f = it->find("points"); f != it->end()) sc.points = as_int(*f, "spectrum.points");
    if (sc.points < 2) fail("spectrum.points", "need at least 2 points");
    c.spectrum = sc;
  }

  if (auto it = j.find("scan"); it != j.end()) {
    ScanConfig sc;
    sc.t0_min = as_double(require(*it, "t0_min", "scan"), "scan.t0_min");
    sc.t0_max = as_double(require(*it, "t0_max", "scan"), "scan.t0_max");
    sc.points = as_int(require(*it, "points", "scan"), "scan.points");
    if (sc.points < 1) fail("scan.points", "need at least 1 point");
    if (!(sc.t0_min <= sc.t0_max)) fail("scan", "t0_min must be <= t0_max");
    sc.pulse = pulse_from_json(require(*it, "pulse", "scan"), "scan.pulse");
    c.scan = sc;
  }

  if (auto it = j.find("minarea"); it != j.end()) {
    MinAreaConfig mc;
    const json& jn = require(*it, "N_list", "minarea");
    if (!jn.is_array() || jn.empty()) fail("minarea.N_list", "expected a nonempty array");
    for (const auto& e : jn) mc.n_list.push_back(as_int(e, "minarea.N_list"));
    mc.shape = pulse_from_json(require(*it, "shape", "minarea"), "minarea.shape");
    if (auto f = it->find("target_efficiency"); f != it->end())
      mc.options.target_efficiency = as_double(*f, "minarea.target_efficiency");
    if (auto f = it->find("area_resolution"); f != it->end())
      mc.options.area_resolution = as_double(*f, "minarea.area_resolution");
    if (auto f = it->find("omega0_seed"); f != it->end())
      mc.options.omega0_seed = as_double(*f, "minarea.omega0_seed");
    if (auto f = it->find("omega0_cap"); f != it->end())
      mc.options.omega0_cap = as_double(*f, "minarea.omega0_cap");
    c.minarea = mc;
  }

  if (auto it = j.find("route"); it != j.end()) {
    RouteConfig rc;
    rc.source = as_int(require(*it, "source", "route"), "route.source");
    rc.target = as_int(require(*it, "target", "route"), "route.target");
    rc.constraints.strategy =
        strategy_from_name(as_string(require(*it, "strategy", "route"), "route.strategy"));
    if (auto f = it->find("max_order"); f != it->end() && !f->is_null())
      rc.constraints.max_order = as_int(*f, "route.max_order");
    if (auto f = it->find("require_N_invariant"); f != it->end())
      rc.constraints.require_n_invariant = as_bool(*f, "route.require_N_invariant");
    if (auto f = it->find("omega0"); f != it->end()) rc.omega0 = as_double(*f, "route.omega0");
    if (auto f = it->find("omega0_per_hop"); f != it->end()) {
      if (!f->is_array()) fail("route.omega0_per_hop", "expected an array");
      for (const auto& e : *f) rc.omega0_per_hop.push_back(as_double(e, "route.omega0_per_hop"));
    }
    if (auto f = it->find("width"); f != it->end()) rc.width = as_double(*f, "route.width");
    if (auto f = it->find("simulate"); f != it->end())
      rc.simulate = as_bool(*f, "route.simulate");
    c.route = rc;
  }

  if (auto it = j.find("ghz"); it != j.end()) {
    GhzConfig gc;
    gc.rotation_time = as_double(require(*it, "rotation_time", "ghz"), "ghz.rotation_time");
    gc.pulse = pulse_from_json(require(*it, "pulse", "ghz"), "ghz.pulse");
    c.ghz = gc;
  }

  if (auto it = j.find("map"); it != j.end()) {
    MapConfig mc;
    const std::string platform = as_string(require(*it, "platform", "map"), "map.platform");
    mc.N = as_int(require(*it, "N", "map"), "map.N");
    mc.A = as_double(require(*it, "A", "map"), "map.A");
    if (platform == "ion_trap") {
      mc.platform = Platform::ion_trap;
      mc.ion.eta = as_double(require(*it, "eta", "map"), "map.eta");
      mc.ion.omega_laser = as_double(require(*it, "omega_laser", "map"), "map.omega_laser");
      mc.ion.nu = as_double(require(*it, "nu", "map"), "map.nu");
      mc.ion.delta = as_double(require(*it, "delta", "map"), "map.delta");
    } else if (platform == "bec") {
      mc.platform = Platform::bec;
      mc.bec.E_a = as_double(require(*it, "E_a", "map"), "map.E_a");
      mc.bec.E_b = as_double(require(*it, "E_b", "map"), "map.E_b");
      mc.bec.U_aa = as_double(require(*it, "U_aa", "map"), "map.U_aa");
      mc.bec.U_bb = as_double(require(*it, "U_bb", "map"), "map.U_bb");
      mc.bec.U_ab = as_double(require(*it, "U_ab", "map"), "map.U_ab");
    } else {
      fail("map.platform", "expected 'ion_trap' or 'bec'");
    }
    c.map = mc;
  }

  if (auto it = j.find("tol"); it != j.end()) c.tol = as_double(*it, "tol");
  if (!(c.tol > 0.0) || c.tol > 1e-2) fail("tol", "tolerance must be in (0, 1e-2]");
  if (auto it = j.find("sample_dt"); it != j.end()) c.sample_dt = as_double(*it, "sample_dt");
  if (auto it = j.find("threads"); it != j.end()) c.threads = as_int(*it, "threads");
  if (auto it = j.find("seed"); it != j.end() && !it->is_null())
    c.seed = it->get<long long>();

  if (auto it = j.find("output"); it != j.end()) {
    if (auto f = it->find("format"); f != it->end()) {
      const std::string fmt = as_string(*f, "output.format");
      if (fmt == "csv")
        c.format = OutputFormat::csv;
      else if (fmt == "json")
        c.format = OutputFormat::json;
      else
        fail("output.format", "expected 'csv' or 'json'");
    }
    if (auto f = it->find("path"); f != it->end()) c.out_dir = as_string(*f, "output.path");
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  return config_from_json_text(read_text_file(path));
}

std::string config_to_json_text(const RunConfig& c) {
  json j;
  j["version"] = c.version;
  j["units"] = c.units;
  if (c.system) j["system"] = system_to_json(*c.system);
  if (c.schedule) j["schedule"] = schedule_to_json(*c.schedule);
  j["initial_state"] = initial_state_to_json(c.initial_state);
  if (c.spectrum) {
    json sj;
    if (c.spectrum->t_min) sj["t_min"] = *c.spectrum->t_min;
    if (c.spectrum->t_max) sj["t_max"] = *c.spectrum->t_max;
    sj["points"] = c.spectrum->points;
    j["spectrum"] = sj;
  }
  if (c.scan) {
    j["scan"] = json{{"t0_min", c.scan->t0_min},
                     {"t0_max", c.scan->t0_max},
                     {"points", c.scan->points},
                     {"pulse", pulse_to_json(c.scan->pulse)}};
  }
  if (c.minarea) {
    j["minarea"] = json{{"N_list", c.minarea->n_list},
                        {"shape", pulse_to_json(c.minarea->shape)},
                        {"target_efficiency", c.minarea->options.target_efficiency},
                        {"area_resolution", c.minarea->options.area_resolution},
                        {"omega0_seed", c.minarea->options.omega0_seed},
                        {"omega0_cap", c.minarea->options.omega0_cap}};
  }
  if (c.route) {
    json rj;
    rj["source"] = c.route->source;
    rj["target"] = c.route->target;
    rj["strategy"] = strategy_name(c.route->constraints.strategy);
    if (c.route->constraints.max_order) rj["max_order"] = *c.route->constraints.max_order;
    rj["require_N_invariant"] = c.route->constraints.require_n_invariant;
    if (c.route->omega0) rj["omega0"] = *c.route->omega0;
    if (!c.route->omega0_per_hop.empty()) rj["omega0_per_hop"] = c.route->omega0_per_hop;
    rj["width"] = c.route->width;
    rj["simulate"] = c.route->simulate;
    j["route"] = rj;
  }
  if (c.ghz)
    j["ghz"] = json{{"rotation_time", c.ghz->rotation_time}, {"pulse", pulse_to_json(c.ghz->pulse)}};
  if (c.map) {
    json mj;
    mj["N"] = c.map->N;
    mj["A"] = c.map->A;
    if (c.map->platform == Platform::ion_trap) {
      mj["platform"] = "ion_trap";
      mj["eta"] = c.map->ion.eta;
      mj["omega_laser"] = c.map->ion.omega_laser;
      mj["nu"] = c.map->ion.nu;
      mj["delta"] = c.map->ion.delta;
    } else {
      mj["platform"] = "bec";
      mj["E_a"] = c.map->bec.E_a;
      mj["E_b"] = c.map->bec.E_b;
      mj["U_aa"] = c.map->bec.U_aa;
      mj["U_bb"] = c.map->bec.U_bb;
      mj["U_ab"] = c.map->bec.U_ab;
    }
    j["map"] = mj;
  }
  j["tol"] = c.tol;
  j["sample_dt"] = c.sample_dt;
  j["threads"] = c.threads;
  if (c.seed) j["seed"] = *c.seed;
  j["output"] = json{{"format", c.format == OutputFormat::csv ? "csv" : "json"},
                     {"path", c.out_dir}};
  return j.dump();
}

std::string schedule_to_json_text(const Schedule& s) { return schedule_to_json(s).dump(); }

Schedule schedule_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schedule: JSON parse error: ") + e.what());
  }
  return schedule_from_json(j, "schedule");
}

std::string route_to_json_text(const Route& r) {
  json j;
  j["params"] = system_to_json(r.params);
  j["source"] = r.source;
  j["target"] = r.target;
  j["hops"] = json::array();
  for (const auto& h : r.hops) {
    j["hops"].push_back(json{{"from", h.from},
                             {"to", h.to},
                             {"time", h.edge.time},
                             {"order", h.edge.order},
                             {"energy", h.edge.energy},
                             {"N_invariant", h.edge.n_invariant},
                             {"recommended_pulse", pulse_to_json(h.recommended)}});
  }
  return j.dump();
}

std::string graph_to_json_text(const CrossingGraph& g) {
  json j;
  j["params"] = system_to_json(g.params);
  j["edges"] = json::array();
  for (const auto& e : g.edges) {
    j["edges"].push_back(json{{"n", e.n},
                              {"k", e.k},
                              {"time", e.time},
                              {"order", e.order},
                              {"energy", e.energy},
                              {"N_invariant", e.n_invariant}});
  }
  return j.dump();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_to_text(const CsvTable& t) {
  std::ostringstream os;
  for (const auto& c : t.comments) os << "# " << c << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "");
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

namespace {
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  return cells;
}
}  // namespace

CsvTable csv_from_text(const std::string& text) {
  CsvTable t;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      t.comments.push_back(line.substr(2));
      continue;
    }
    if (!header_seen) {
      t.columns = split_csv_line(line);
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split_csv_line(line)) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace spinnav
