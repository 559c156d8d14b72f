#pragma once

#include "spinnav/dynamics.hpp"
#include "spinnav/pulses.hpp"
#include "spinnav/system.hpp"

namespace spinnav {

// Two-level ions sharing a phonon mode, driven by a symmetrically detuned
// bichromatic field in the Lamb-Dicke limit.
struct IonTrapParams {
  double eta = 0.0;          // Lamb-Dicke parameter
  double omega_laser = 0.0;  // laser Rabi frequency [1/T]
  double nu = 0.0;           // phonon frequency [1/T]
  double delta = 0.0;        // symmetric detuning [1/T]

  void validate() const;  // delta, nu > 0; throws on the delta == nu pole
};

struct IonTrapMapping {
  double xi = 0.0;
  // detuning not large against the Rabi frequency: the two-photon picture
  // behind the mapping is strained
  bool weak_detuning_warning = false;
  // delta > nu flips the sign; the sweep protocols assume xi > 0, so a
  // negative value suggests running the time-reflected schedule
  bool negative_xi = false;
};

// Effective nonlinearity xi = 2 eta^2 omega^2 nu / (nu^2 - delta^2).
IonTrapMapping ion_trap_xi(const IonTrapParams& p);

// Two-component BEC in the two-mode approximation with coherent coupling of
// amplitude Omega(t) and phase phi(t) between the components.
struct BecParams {
  double E_a = 0.0;   // mode energies [1/T]
  double E_b = 0.0;
  double U_aa = 0.0;  // intra- and inter-component interaction strengths [1/T]
  double U_bb = 0.0;
  double U_ab = 0.0;

  bool equal_scattering() const { return U_aa == U_bb; }
};

// Collective-spin form of the BEC Hamiltonian (valid for equal scattering
// lengths U_aa = U_bb = U):
//
//   H = alpha Jz + xi Jz^2 + 2 Omega(t) [Jx cos phi + Jy sin phi]
//
// with xi = U - U_ab/2 and alpha = E_a - E_b. With a chirp phi(t) the frame
// |Psi> = exp(-i phi(t) Jz)|Phi> removes the transverse phase, leaving the
// Jz coefficient alpha - dphi/dt and the transverse amplitude 2 Omega(t).
struct BecEffective {
  double xi = 0.0;
  double alpha = 0.0;
};

// Throws std::domain_error when U_aa != U_bb: the mapping is only stated for
// equal scattering lengths, and guessing a generalization is refused.
BecEffective bec_effective_params(const BecParams& p);

// Coupling phase phi(t) = alpha t + A t^2 / 2, so that the rotating-frame Jz
// coefficient alpha - dphi/dt equals the linear sweep -A t.
struct Chirp {
  double alpha = 0.0;
  double A = 0.0;

  double phase(double t) const { return alpha * t + 0.5 * A * t * t; }
  double rate(double t) const { return alpha + A * t; }
};

Chirp design_chirp(double alpha, double A);

// Consistency check of the frame transformation: propagates the lab-frame
// Hamiltonian with the designed chirp, maps the result into the rotating
// frame, and returns the max amplitude deviation (over the common sample
// grid) from the rotating-frame propagation with transverse amplitude
// 2 Omega(t). The schedule supplies Omega(t) and must contain no rotations.
double bec_lab_frame_check(const BecParams& p, int N, double sweep_A, const Schedule& s,
                           const StateVector& psi0, double tol = 1e-9);

}  // namespace spinnav
