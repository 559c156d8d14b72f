#include "spinnav/physmap.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace spinnav {

void IonTrapParams::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("IonTrapParams: delta must be > 0");
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("IonTrapParams: nu must be > 0");
  if (delta == nu)
    throw std::invalid_argument("IonTrapParams: delta == nu is the pole of the mapping");
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("IonTrapParams: eta must be >= 0");
  if (!(omega_laser >= 0.0) || !std::isfinite(omega_laser))
    throw std::invalid_argument("IonTrapParams: omega_laser must be >= 0");
}

IonTrapMapping ion_trap_xi(const IonTrapParams& p) {
  p.validate();
  IonTrapMapping m;
  m.xi = 2.0 * p.eta * p.eta * p.omega_laser * p.omega_laser * p.nu /
         (p.nu * p.nu - p.delta * p.delta);
  m.weak_detuning_warning = p.delta <= p.omega_laser;
  m.negative_xi = m.xi < 0.0;
  return m;
}

BecEffective bec_effective_params(const BecParams& p) {
  if (!p.equal_scattering())
    throw std::domain_error("bec_effective_params: U_aa != U_bb is outside the stated "
                            "equal-scattering case; refusing to guess the mapping");
  BecEffective eff;
  eff.xi = p.U_aa - 0.5 * p.U_ab;
  eff.alpha = p.E_a - p.E_b;
  return eff;
}

Chirp design_chirp(double alpha, double A) { return Chirp{alpha, A}; }

double bec_lab_frame_check(const BecParams& p, int N, double sweep_A, const Schedule& s,
                           const StateVector& psi0, double tol) {
  const BecEffective eff = bec_effective_params(p);
  if (!(eff.xi > 0.0))
    throw std::domain_error("bec_lab_frame_check: nonpositive xi, the crossing network "
                            "degenerates and the sweep protocols do not apply");
  if (!s.rotations.empty())
    throw std::invalid_argument("bec_lab_frame_check: rotations are not frame-covariant here; "
                                "use pulse-only schedules");
  SystemParams params{N, eff.xi, sweep_A};
  params.validate();
  if (psi0.size() != params.dim())
    throw std::invalid_argument("bec_lab_frame_check: psi0 dimension does not match N+1");

  const Chirp chirp = design_chirp(eff.alpha, sweep_A);
  const auto window = s.window ? *s.window : default_window(params, s);

  PropagationOptions opts;
  opts.tol = tol;
  opts.window = window;

  // rotating frame: H = xi Jz^2 - A t Jz + 2 Omega(t) Jx
  Schedule doubled = s;
  for (auto& pulse : doubled.pulses) {
    pulse.omega0 *= 2.0;
    for (auto& v : pulse.sample_values) v *= 2.0;
  }
  const SimulationResult rotating = propagate(params, doubled, psi0, opts);

  // lab frame: H = alpha Jz + xi Jz^2 + 2 Omega(t) [Jx cos phi + Jy sin phi],
  // band element <n|H|n+1> = Omega f_n exp(i phi)
  const Eigen::VectorXd m = jz_diagonal(params);
  const Eigen::VectorXd f_half = jx_upper(params);  // f_n / 2
  const auto lab_ham = [&](double t, Eigen::VectorXd& diag, Eigen::VectorXcd& upper) {
    const double om = amplitude(s, t);
    const double phi = chirp.phase(t);
    const std::complex<double> band = om * std::exp(std::complex<double>(0.0, phi));
    for (int n = 0; n <= N; ++n) diag(n) = eff.xi * m(n) * m(n) + eff.alpha * m(n);
    for (int n = 0; n < N; ++n) upper(n) = 2.0 * f_half(n) * band;
  };

  // both frames share psi0 at t_start: map it back into the lab frame there
  const double t_start = window.first;
  StateVector psi_lab0(params.dim());
  for (int n = 0; n <= N; ++n)
    psi_lab0(n) = std::exp(std::complex<double>(0.0, -chirp.phase(t_start) * m(n))) * psi0(n);

  PropagationOptions lab_opts = opts;
  lab_opts.sample_dt = (rotating.times.size() > 1)
                           ? (window.second - window.first) /
                                 static_cast<double>(rotating.times.size() - 1)
                           : 0.0;
  const SimulationResult lab =
      propagate_tridiagonal(lab_ham, params.dim(), {}, window, psi_lab0, lab_opts);

  // compare exp(+i phi(t) Jz) psi_lab(t) against the rotating-frame run
  const std::size_t rows = std::min(lab.times.size(), rotating.times.size());
  double deviation = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double phi = chirp.phase(lab.times[r]);
    for (int n = 0; n <= N; ++n) {
      const std::complex<double> mapped =
          std::exp(std::complex<double>(0.0, phi * m(n))) * lab.amplitudes(r, n);
      deviation = std::max(deviation, std::abs(mapped - rotating.amplitudes(r, n)));
    }
  }
  return deviation;
}

}  // namespace spinnav
