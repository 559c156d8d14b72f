#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spinnav/dynamics.hpp"
#include "spinnav/pulses.hpp"
#include "spinnav/system.hpp"

namespace spinnav {

struct SweepOptions {
  double tol = 1e-10;
  int threads = 0;  // 0 = hardware concurrency
};

// One propagation per grid point; failures are recorded per point and the
// sweep continues. Points are independent, so the results do not depend on
// evaluation order or thread count.
struct ScanPoint {
  double t0 = 0.0;
  bool ok = false;
  std::string error;
  Eigen::VectorXd populations;  // final |c_n|^2
  double norm_drift = 0.0;
};

struct ScanResult {
  SystemParams params;
  Pulse pulse_template;
  double tol = 0.0;
  std::vector<ScanPoint> points;

  bool all_ok() const;
};

// Final populations against the center T0 of a single pulse from the given
// template, starting from psi0.
ScanResult scan_pulse_center(const SystemParams& p, const Pulse& pulse_template,
                             const std::vector<double>& t0_grid, const StateVector& psi0,
                             const SweepOptions& opts = {});

// Final |c_target|^2 from a propagation starting at e_source.
double transfer_efficiency(const SystemParams& p, const Schedule& s, int source, int target,
                           double tol = 1e-10);

struct MinAreaOptions {
  double target_efficiency = 0.9;
  double area_resolution = 0.01;  // relative resolution of the returned area
  double omega0_seed = 1.0;
  double omega0_cap = 1e6;
  double tol = 1e-10;
};

struct MinAreaResult {
  double area = 0.0;    // integral of the envelope at the boundary amplitude
  double omega0 = 0.0;
  double efficiency = 0.0;        // at the returned omega0 (>= target)
  double omega0_below = 0.0;      // one resolution step below
  double efficiency_below = 0.0;  // < target there
  int doublings = 0;
  int bisections = 0;
};

// Minimal pulse area reaching the target transfer efficiency for the
// |N> -> |1> transition with a single pulse of the given shape centered at
// t_1N = xi/A (the scaling-study convention). Brackets by doubling omega0
// from the seed, then bisects omega0 holding shape, width and center fixed.
// Throws InfeasibleError when no bracket is found below omega0_cap.
MinAreaResult minimal_area(const SystemParams& p, const Pulse& shape,
                           const MinAreaOptions& opts = {});

struct AreaCurvePoint {
  int N = 0;
  bool ok = false;
  std::string error;
  MinAreaResult result;
};

struct AreaCurve {
  SystemParams params_template;  // xi and A shared across N
  Pulse shape;
  MinAreaOptions options;
  std::vector<AreaCurvePoint> points;

  bool all_ok() const;
};

// minimal_area per N with the shared shape/center convention. Per-N failures
// are recorded and the curve continues.
AreaCurve scaling_curve(const SystemParams& params_template, const std::vector<int>& n_list,
                        const Pulse& shape, const MinAreaOptions& opts = {}, int threads = 0);

}  // namespace spinnav
