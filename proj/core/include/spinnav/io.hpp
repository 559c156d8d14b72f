#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "spinnav/analysis.hpp"
#include "spinnav/navigator.hpp"
#include "spinnav/physmap.hpp"
#include "spinnav/pulses.hpp"
#include "spinnav/system.hpp"

namespace spinnav {

// Declarative run configuration, versioned JSON with all quantities in the
// T-based unit convention. Numbers survive a parse -> serialize -> parse
// round trip bit-exactly.

enum class OutputFormat { csv, json };

struct InitialStateSpec {
  // at most one of these; none means product_down
  std::optional<TargetState> named;
  std::optional<int> basis_n;
  std::optional<std::vector<std::complex<double>>> amplitudes;

  StateVector realize(const SystemParams& p) const;
};

struct SpectrumConfig {
  std::optional<double> t_min;  // default: crossing span padded by xi/A
  std::optional<double> t_max;
  int points = 201;
};

struct ScanConfig {
  double t0_min = 0.0;
  double t0_max = 0.0;
  int points = 2;
  Pulse pulse;  // template; t0 is swept
};

struct MinAreaConfig {
  std::vector<int> n_list;
  Pulse shape;  // template; omega0 is searched, t0 forced to xi/A
  MinAreaOptions options;
};

struct RouteConfig {
  int source = 0;
  int target = 1;
  RouteConstraints constraints;
  std::optional<double> omega0;             // uniform pulse amplitude
  std::vector<double> omega0_per_hop;       // overrides omega0 when nonempty
  double width = 0.0;                       // 0 = per-hop recommendation width
  bool simulate = false;                    // also propagate the schedule
};

struct GhzConfig {
  double rotation_time = 0.0;
  Pulse pulse;  // template for the t_1N transfer pulse
};

enum class Platform { ion_trap, bec };

struct MapConfig {
  Platform platform = Platform::ion_trap;
  IonTrapParams ion;
  BecParams bec;
  int N = 1;
  double A = 1.0;
};

struct RunConfig {
  int version = 1;
  std::string units = "T";
  std::optional<SystemParams> system;
  std::optional<Schedule> schedule;
  InitialStateSpec initial_state;
  std::optional<SpectrumConfig> spectrum;
  std::optional<ScanConfig> scan;
  std::optional<MinAreaConfig> minarea;
  std::optional<RouteConfig> route;
  std::optional<GhzConfig> ghz;
  std::optional<MapConfig> map;
  double tol = 1e-10;
  double sample_dt = 0.0;  // 0 = automatic
  int threads = 0;         // 0 = SPINNAV_THREADS env or hardware concurrency
  std::optional<long long> seed;  // recorded for future stochastic extensions; unused
  OutputFormat format = OutputFormat::csv;
  std::string out_dir = ".";
};

// throws ConfigError with field diagnostics
RunConfig config_from_json_text(const std::string& text);
RunConfig load_config_file(const std::string& path);
std::string config_to_json_text(const RunConfig& c);

std::string schedule_to_json_text(const Schedule& s);
Schedule schedule_from_json_text(const std::string& text);

std::string route_to_json_text(const Route& r);
std::string graph_to_json_text(const CrossingGraph& g);

// CSV tables: "# " comment lines, a header row, then rows printed with 17
// significant digits so values round-trip exactly.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string csv_to_text(const CsvTable& t);
CsvTable csv_from_text(const std::string& text);

std::string format_double(double v);  // %.17g

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

const char* target_state_name(TargetState t);
TargetState target_state_from_name(const std::string& name);
const char* strategy_name(RouteStrategy s);
RouteStrategy strategy_from_name(const std::string& name);

}  // namespace spinnav
