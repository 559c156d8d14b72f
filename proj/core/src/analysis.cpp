#include "spinnav/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "spinnav/errors.hpp"

namespace spinnav {

namespace {

// index-chunked parallel loop; results are written by index, so aggregation
// order never depends on the thread count
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

bool ScanResult::all_ok() const {
  return std::all_of(points.begin(), points.end(), [](const ScanPoint& p) { return p.ok; });
}

ScanResult scan_pulse_center(const SystemParams& p, const Pulse& pulse_template,
                             const std::vector<double>& t0_grid, const StateVector& psi0,
                             const SweepOptions& opts) {
  p.validate();
  pulse_template.validate();
  check_unit_norm(psi0);

  ScanResult result;
  result.params = p;
  result.pulse_template = pulse_template;
  result.tol = opts.tol;
  result.points.resize(t0_grid.size());

  parallel_for(t0_grid.size(), opts.threads, [&](std::size_t i) {
    ScanPoint& point = result.points[i];
    point.t0 = t0_grid[i];
    try {
      Schedule s;
      Pulse pulse = pulse_template;
      pulse.t0 = t0_grid[i];
      s.pulses.push_back(pulse);
      PropagationOptions popts;
      popts.tol = opts.tol;
      const SimulationResult run = propagate(p, s, psi0, popts);
      point.populations = run.final_state.cwiseAbs2();
      point.norm_drift = run.norm_drift;
      point.ok = true;
    } catch (const std::exception& e) {
      point.ok = false;
      point.error = e.what();
    }
  });
  return result;
}

double transfer_efficiency(const SystemParams& p, const Schedule& s, int source, int target,
                           double tol) {
  check_state_index(p, source);
  check_state_index(p, target);
  PropagationOptions opts;
  opts.tol = tol;
  const SimulationResult run = propagate(p, s, basis_state(p, source), opts);
  return std::norm(run.final_state(target));
}

MinAreaResult minimal_area(const SystemParams& p, const Pulse& shape, const MinAreaOptions& opts) {
  p.validate();
  shape.validate();
  if (!(opts.omega0_seed > 0.0)) throw std::invalid_argument("minimal_area: seed must be > 0");
  if (!(opts.area_resolution > 0.0) || !(opts.area_resolution < 1.0))
    throw std::invalid_argument("minimal_area: area resolution must be in (0, 1)");

  MinAreaResult result;
  if (p.N == 1) return result;  // |1> -> |1>: already at the target, zero area

  const int source = p.N;
  const int target = 1;
  const double center = p.xi / p.A;  // t_1N

  const auto efficiency_at = [&](double omega0) {
    Schedule s;
    Pulse pulse = shape;
    pulse.omega0 = omega0;
    pulse.t0 = center;
    s.pulses.push_back(pulse);
    return transfer_efficiency(p, s, source, target, opts.tol);
  };
  const auto area_at = [&](double omega0) {
    Pulse pulse = shape;
    pulse.omega0 = omega0;
    pulse.t0 = center;
    return pulse_area(pulse);
  };

  // bracket by doubling
  double hi = opts.omega0_seed;
  double eff_hi = efficiency_at(hi);
  double lo = 0.0;
  double eff_lo = 0.0;
  while (eff_hi < opts.target_efficiency) {
    lo = hi;
    eff_lo = eff_hi;
    hi *= 2.0;
    ++result.doublings;
    if (hi > opts.omega0_cap)
      throw InfeasibleError("minimal_area: no bracket below the omega0 cap of " +
                            std::to_string(opts.omega0_cap));
    eff_hi = efficiency_at(hi);
  }

  // bisect to the requested relative area resolution; a seed already above
  // target bisects against omega0 = 0, where the efficiency is zero
  while ((hi - lo) / hi > opts.area_resolution) {
    const double mid = 0.5 * (lo + hi);
    const double eff_mid = efficiency_at(mid);
    ++result.bisections;
    if (eff_mid >= opts.target_efficiency) {
      hi = mid;
      eff_hi = eff_mid;
    } else {
      lo = mid;
      eff_lo = eff_mid;
    }
  }

  result.omega0 = hi;
  result.efficiency = eff_hi;
  result.area = area_at(hi);
  result.omega0_below = lo;
  result.efficiency_below = eff_lo;
  return result;
}

bool AreaCurve::all_ok() const {
  return std::all_of(points.begin(), points.end(), [](const AreaCurvePoint& p) { return p.ok; });
}

AreaCurve scaling_curve(const SystemParams& params_template, const std::vector<int>& n_list,
                        const Pulse& shape, const MinAreaOptions& opts, int threads) {
  if (!std::is_sorted(n_list.begin(), n_list.end()))
    throw std::invalid_argument("scaling_curve: N list must be sorted");
  AreaCurve curve;
  curve.params_template = params_template;
  curve.shape = shape;
  curve.options = opts;
  curve.points.resize(n_list.size());

  parallel_for(n_list.size(), threads, [&](std::size_t i) {
    AreaCurvePoint& point = curve.points[i];
    point.N = n_list[i];
    try {
      SystemParams p = params_template;
      p.N = n_list[i];
      point.result = minimal_area(p, shape, opts);
      point.ok = true;
    } catch (const std::exception& e) {
      point.ok = false;
      point.error = e.what();
    }
  });
  return curve;
}

}  // namespace spinnav
