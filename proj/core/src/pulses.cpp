#include "spinnav/pulses.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spinnav/system.hpp"

namespace spinnav {

namespace {
constexpr double kTruncationWidths = 8.0;  // envelope cut beyond 8 widths

double gaussian_env(double u) { return std::fabs(u) > kTruncationWidths ? 0.0 : std::exp(-u * u); }
}  // namespace

Pulse Pulse::make_gaussian(double omega0, double t0, double width) {
  Pulse p;
  p.shape = PulseShape::gaussian;
  p.omega0 = omega0;
  p.t0 = t0;
  p.width = width;
  p.validate();
  return p;
}

Pulse Pulse::make_flattop(double omega0, double t0, double duration, double rise) {
  Pulse p;
  p.shape = PulseShape::flattop;
  p.omega0 = omega0;
  p.t0 = t0;
  p.duration = duration;
  p.rise = rise;
  p.validate();
  return p;
}

Pulse Pulse::make_tabulated(std::vector<double> times, std::vector<double> values) {
  Pulse p;
  p.shape = PulseShape::tabulated;
  p.sample_times = std::move(times);
  p.sample_values = std::move(values);
  if (!p.sample_values.empty())
    p.omega0 = *std::max_element(p.sample_values.begin(), p.sample_values.end());
  if (!p.sample_times.empty())
    p.t0 = 0.5 * (p.sample_times.front() + p.sample_times.back());
  p.validate();
  return p;
}

void Pulse::validate() const {
  if (!(omega0 >= 0.0) || !std::isfinite(omega0))
    throw std::invalid_argument("Pulse: omega0 must be >= 0 and finite");
  if (!std::isfinite(t0)) throw std::invalid_argument("Pulse: t0 must be finite");
  switch (shape) {
    case PulseShape::gaussian:
      if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("Pulse: gaussian width must be > 0");
      break;
    case PulseShape::flattop:
      if (!(rise > 0.0) || !std::isfinite(rise))
        throw std::invalid_argument("Pulse: flattop rise must be > 0");
      if (!(duration >= 0.0) || !std::isfinite(duration))
        throw std::invalid_argument("Pulse: flattop duration must be >= 0");
      break;
    case PulseShape::tabulated: {
      if (sample_times.size() < 2 || sample_times.size() != sample_values.size())
        throw std::invalid_argument("Pulse: tabulated needs >= 2 matching samples");
      for (std::size_t i = 0; i + 1 < sample_times.size(); ++i)
        if (!(sample_times[i] < sample_times[i + 1]))
          throw std::invalid_argument("Pulse: tabulated times must be strictly increasing");
      for (double v : sample_values)
        if (!(v >= 0.0) || !std::isfinite(v))
          throw std::invalid_argument("Pulse: tabulated values must be >= 0 and finite");
      break;
    }
  }
}

double Pulse::envelope(double t) const {
  switch (shape) {
    case PulseShape::gaussian:
      return omega0 * gaussian_env((t - t0) / width);
    case PulseShape::flattop: {
      const double s = std::fabs(t - t0) - 0.5 * duration;
      if (s <= 0.0) return omega0;
      return omega0 * gaussian_env(s / rise);
    }
    case PulseShape::tabulated: {
      if (t <= sample_times.front() || t >= sample_times.back()) {
        // endpoints hold their sampled values; outside is zero
        if (t == sample_times.front()) return sample_values.front();
        if (t == sample_times.back()) return sample_values.back();
        return 0.0;
      }
      const auto it = std::upper_bound(sample_times.begin(), sample_times.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - sample_times.begin()) - 1;
      const double f = (t - sample_times[i]) / (sample_times[i + 1] - sample_times[i]);
      return sample_values[i] + f * (sample_values[i + 1] - sample_values[i]);
    }
  }
  return 0.0;
}

double Pulse::feature_width() const {
  switch (shape) {
    case PulseShape::gaussian:
      return width;
    case PulseShape::flattop:
      return rise;
    case PulseShape::tabulated: {
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < sample_times.size(); ++i)
        d = std::min(d, sample_times[i + 1] - sample_times[i]);
      return d;
    }
  }
  return 0.0;
}

double Pulse::half_extent() const {
  switch (shape) {
    case PulseShape::gaussian:
      return kTruncationWidths * width;
    case PulseShape::flattop:
      return 0.5 * duration + kTruncationWidths * rise;
    case PulseShape::tabulated:
      return 0.5 * (sample_times.back() - sample_times.front());
  }
  return 0.0;
}

std::pair<double, double> Pulse::support() const {
  if (shape == PulseShape::tabulated) return {sample_times.front(), sample_times.back()};
  return {t0 - half_extent(), t0 + half_extent()};
}

void Rotation::validate() const {
  if (!std::isfinite(t)) throw std::invalid_argument("Rotation: time must be finite");
  if (a == b) throw std::invalid_argument("Rotation: subspace indices must be distinct");
  if (a < 0 || b < 0) throw std::invalid_argument("Rotation: negative state index");
  constexpr double two_pi = 2.0 * M_PI;
  if (!(angle > -two_pi) || !(angle <= two_pi) || !std::isfinite(angle))
    throw std::invalid_argument("Rotation: angle must lie in (-2 pi, 2 pi]");
}

void Schedule::validate() const {
  for (const auto& p : pulses) p.validate();
  for (const auto& r : rotations) r.validate();
  if (window) {
    const auto [lo, hi] = *window;
    if (!(lo < hi)) throw std::invalid_argument("Schedule: window must satisfy t_start < t_end");
    for (const auto& p : pulses)
      if (p.t0 < lo || p.t0 > hi)
        throw std::invalid_argument("Schedule: pulse center outside window");
    for (const auto& r : rotations)
      if (r.t < lo || r.t > hi)
        throw std::invalid_argument("Schedule: rotation time outside window");
  }
}

double amplitude(const Schedule& s, double t) {
  double sum = 0.0;
  for (const auto& p : s.pulses) sum += p.envelope(t);
  return sum;
}

double pulse_area(const Pulse& p) {
  p.validate();
  switch (p.shape) {
    case PulseShape::gaussian:
      return p.omega0 * p.width * std::sqrt(M_PI);
    case PulseShape::flattop: {
      // exact plateau plus quadrature over the two shoulders
      const double plateau = p.omega0 * p.duration;
      const auto shoulder = [&](double s) { return p.omega0 * gaussian_env(s / p.rise); };
      const double wing = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          shoulder, 0.0, kTruncationWidths * p.rise, 15, 1e-12);
      return plateau + 2.0 * wing;
    }
    case PulseShape::tabulated: {
      // trapezoid is exact for the piecewise-linear envelope
      double area = 0.0;
      for (std::size_t i = 0; i + 1 < p.sample_times.size(); ++i)
        area += 0.5 * (p.sample_values[i] + p.sample_values[i + 1]) *
                (p.sample_times[i + 1] - p.sample_times[i]);
      return area;
    }
  }
  return 0.0;
}

double Pulse::effective_width() const {
  switch (shape) {
    case PulseShape::gaussian:
      return width;
    case PulseShape::flattop:
      return 0.5 * duration + rise;
    case PulseShape::tabulated: {
      const double cut = omega0 / M_E;
      double lo = sample_times.back(), hi = sample_times.front();
      for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_values[i] >= cut) {
          lo = std::min(lo, sample_times[i]);
          hi = std::max(hi, sample_times[i]);
        }
      }
      return std::max(0.0, 0.5 * (hi - lo));
    }
  }
  return 0.0;
}

ScheduleReport validate_schedule(const Schedule& s, const SystemParams& params,
                                 double separation_threshold, double overlap_threshold) {
  params.validate();
  s.validate();
  ScheduleReport report;

  // crossing layout: equidistant times spanning +-(N-1) xi/A
  const double tau = params.xi / params.A;
  const double t_first = -(params.N - 1) * tau;
  const double t_last = +(params.N - 1) * tau;

  for (std::size_t i = 0; i < s.pulses.size(); ++i) {
    const Pulse& p = s.pulses[i];
    PulseCheck check;
    check.index = static_cast<int>(i);
    const double w = p.effective_width();
    check.separation_ratio = w * params.A / params.xi;
    if (check.separation_ratio <= separation_threshold) {
      check.mode = PulseMode::narrow;
      check.ok = true;
    } else {
      // a pulse still at >= peak/e across every crossing is the deliberate
      // wide mode; anything between narrow and that is a separation violation
      bool covers = p.envelope(t_first) >= p.omega0 / M_E && p.envelope(t_last) >= p.omega0 / M_E;
      if (p.omega0 == 0.0) covers = false;
      check.mode = covers ? PulseMode::wide_all_crossings : PulseMode::too_wide;
      check.ok = covers;
    }
    if (!check.ok) report.ok = false;
    report.pulses.push_back(check);
  }

  // pairwise overlap between pulses aimed at different crossings
  for (std::size_t i = 0; i < s.pulses.size(); ++i) {
    for (std::size_t j = i + 1; j < s.pulses.size(); ++j) {
      const Pulse& a = s.pulses[i];
      const Pulse& b = s.pulses[j];
      if (report.pulses[i].mode == PulseMode::wide_all_crossings ||
          report.pulses[j].mode == PulseMode::wide_all_crossings)
        continue;
      // nearest crossing each pulse is centered on
      const auto nearest = [&](double t0) { return std::clamp(std::round(t0 / tau), t_first / tau, t_last / tau); };
      if (nearest(a.t0) == nearest(b.t0)) continue;  // same target, overlap intended
      if (a.omega0 == 0.0 || b.omega0 == 0.0) continue;
      const double lo = std::min(a.support().first, b.support().first);
      const double hi = std::max(a.support().second, b.support().second);
      double worst = 0.0;
      constexpr int kGrid = 2000;
      for (int g = 0; g <= kGrid; ++g) {
        const double t = lo + (hi - lo) * g / kGrid;
        worst = std::max(worst, std::min(a.envelope(t) / a.omega0, b.envelope(t) / b.omega0));
      }
      OverlapCheck oc;
      oc.first = static_cast<int>(i);
      oc.second = static_cast<int>(j);
      oc.overlap = worst;
      oc.ok = worst <= overlap_threshold;
      if (!oc.ok) report.ok = false;
      report.overlaps.push_back(oc);
    }
  }
  return report;
}

std::string ScheduleReport::summary() const {
  std::ostringstream os;
  os << (ok ? "schedule ok" : "schedule has violations") << "\n";
  for (const auto& c : pulses) {
    os << "  pulse " << c.index << ": separation ratio " << c.separation_ratio << " ";
    switch (c.mode) {
      case PulseMode::narrow: os << "(narrow)"; break;
      case PulseMode::wide_all_crossings: os << "(wide pulse covering all crossings)"; break;
      case PulseMode::too_wide: os << "(VIOLATES separation)"; break;
    }
    os << "\n";
  }
  for (const auto& o : overlaps) {
    if (!o.ok)
      os << "  pulses " << o.first << "," << o.second << " overlap at " << o.overlap
         << " of peak\n";
  }
  return os.str();
}

}  // namespace spinnav
