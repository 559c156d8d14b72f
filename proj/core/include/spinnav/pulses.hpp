#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spinnav {

struct SystemParams;

enum class PulseShape { gaussian, flattop, tabulated };

// Pulsed transverse-field envelope. The Gaussian convention is
//
//   omega(t) = omega0 * exp(-(t - t0)^2 / width^2)
//
// with no factor 2 in the denominator. A flattop holds omega0 over a plateau
// of length `duration` centered on t0, with Gaussian shoulders of width
// `rise`. A tabulated pulse interpolates its samples linearly and vanishes
// outside the sampled range.
//
// Envelopes are truncated to zero beyond 8 widths from the plateau/center,
// where the Gaussian has dropped below exp(-64) ~ 1.6e-28 of its peak.
struct Pulse {
  PulseShape shape = PulseShape::gaussian;
  double omega0 = 0.0;  // peak amplitude [1/T]
  double t0 = 0.0;      // center time
  double width = 1.0;   // Gaussian width
  double rise = 1.0;    // flattop shoulder width
  double duration = 0.0;  // flattop plateau length
  std::vector<double> sample_times;   // tabulated, strictly increasing
  std::vector<double> sample_values;  // tabulated, nonnegative

  static Pulse make_gaussian(double omega0, double t0, double width);
  static Pulse make_flattop(double omega0, double t0, double duration, double rise);
  static Pulse make_tabulated(std::vector<double> times, std::vector<double> values);

  double envelope(double t) const;

  // Half of the interval where the envelope stays above peak/e; equals the
  // Gaussian width for a Gaussian. This is the T of the separation and
  // adiabaticity conditions.
  double effective_width() const;
  // Scale of the fastest feature of the envelope; controls sampling density.
  double feature_width() const;
  // Half-extent of the truncated support around t0.
  double half_extent() const;
  std::pair<double, double> support() const;

  void validate() const;  // throws std::invalid_argument
};

// Instantaneous rotation on the two-state subspace {a, b}:
//
//   c_a -> cos(angle/2) c_a - sin(angle/2) c_b
//   c_b -> sin(angle/2) c_a + cos(angle/2) c_b
//
// so angle = pi/2 takes e_a to (e_a + e_b)/sqrt(2).
struct Rotation {
  double t = 0.0;
  int a = 0;
  int b = 1;
  double angle = 0.0;  // radians, in (-2 pi, 2 pi]

  void validate() const;
};

// A transverse-field schedule: pulses plus instantaneous rotations. The
// optional window must contain every pulse center and rotation time; when
// absent the dynamics module derives one from the crossing layout.
struct Schedule {
  std::vector<Pulse> pulses;
  std::vector<Rotation> rotations;
  std::optional<std::pair<double, double>> window;

  void validate() const;
};

// Total transverse amplitude at time t (sum of the pulse envelopes).
double amplitude(const Schedule& s, double t);

// Integral of the envelope over its support. Gaussian: omega0 * width *
// sqrt(pi) in closed form; flattop and tabulated by quadrature with relative
// error <= 1e-10 (tabulated envelopes are piecewise linear, so the trapezoid
// rule is exact).
double pulse_area(const Pulse& p);

// Schedule diagnostics against the crossing layout of a system: each pulse
// must be narrow against the crossing separation xi/A (width * A / xi below
// the threshold), unless it is a deliberate wide pulse covering the whole
// crossing span; pulses targeting different crossings must not overlap above
// the given fraction of peak.
enum class PulseMode { narrow, wide_all_crossings, too_wide };

struct PulseCheck {
  int index = 0;
  double separation_ratio = 0.0;  // feature width * A / xi
  PulseMode mode = PulseMode::narrow;
  bool ok = true;
};

struct OverlapCheck {
  int first = 0;
  int second = 0;
  double overlap = 0.0;  // max_t min of the two relative envelopes
  bool ok = true;
};

struct ScheduleReport {
  std::vector<PulseCheck> pulses;
  std::vector<OverlapCheck> overlaps;
  bool ok = true;

  std::string summary() const;
};

ScheduleReport validate_schedule(const Schedule& s, const SystemParams& p,
                                 double separation_threshold = 0.2,
                                 double overlap_threshold = 0.01);

}  // namespace spinnav
