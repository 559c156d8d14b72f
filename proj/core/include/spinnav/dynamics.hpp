#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "spinnav/pulses.hpp"
#include "spinnav/system.hpp"

namespace spinnav {

// Amplitudes over the symmetric basis |0>..|N>, unit norm.
using StateVector = Eigen::VectorXcd;

StateVector basis_state(const SystemParams& p, int n);

// throws std::invalid_argument when | ||psi||^2 - 1 | exceeds tol
void check_unit_norm(const StateVector& psi, double tol = 1e-9);

struct PropagationOptions {
  double tol = 1e-10;     // local error target of the adaptive engine
  double sample_dt = 0.0; // output sampling step; 0 = finest pulse feature / 10
  std::optional<std::pair<double, double>> window;  // overrides schedule/default
};

struct SimulationResult {
  std::vector<double> times;
  Eigen::MatrixXcd amplitudes;   // sample x state
  Eigen::MatrixXd populations;   // sample x state, |c_n(t)|^2
  StateVector final_state;
  double norm_drift = 0.0;       // max_t | ||psi||^2 - 1 |, never renormalized away
  long steps_accepted = 0;
  long steps_rejected = 0;
  double min_step = 0.0;
  // crude global bound used by the convergence contract:
  // max(norm_drift, tol * steps_accepted)
  double error_estimate = 0.0;
  std::pair<double, double> window{0.0, 0.0};
};

// Integration window when neither the options nor the schedule give one:
// [min(crossings, pulse centers) - 8 w, max(crossings, pulse centers) + 8 w]
// with w the largest pulse feature width (xi/(5A) for pulse-free schedules).
std::pair<double, double> default_window(const SystemParams& p, const Schedule& s);

// Solves i dpsi/dt = H(t) psi for H(t) = xi Jz^2 - A t Jz + omega(t) Jx with
// an adaptive embedded Runge-Kutta engine (local error controlled to tol).
// Rotations are applied exactly at their times as unitaries on their
// two-state subspace. Populations are sampled densely enough that no feature
// narrower than a tenth of the finest pulse width is aliased.
SimulationResult propagate(const SystemParams& p, const Schedule& s, const StateVector& psi0,
                           const PropagationOptions& opts = {});

// Independent fixed-step reference: each step applies the exact exponential
// of the Hamiltonian frozen at the step midpoint, via eigendecomposition of
// the real symmetric tridiagonal matrix. Steps are exactly unitary, so the
// norm is preserved to machine precision. Used as the cross-check oracle for
// the adaptive engine.
SimulationResult propagate_reference(const SystemParams& p, const Schedule& s,
                                     const StateVector& psi0, double dt,
                                     const PropagationOptions& opts = {});

// Time-dependent Hermitian tridiagonal Hamiltonian source: fills the (real)
// diagonal and the complex superdiagonal <n|H|n+1> at time t.
using TridiagonalFn =
    std::function<void(double t, Eigen::VectorXd& diag, Eigen::VectorXcd& upper)>;

// Generic adaptive propagation for caller-supplied Hamiltonians (used by the
// physical-platform mappings, whose transverse phase makes the band complex).
SimulationResult propagate_tridiagonal(const TridiagonalFn& ham, int dim,
                                       const std::vector<Rotation>& rotations,
                                       std::pair<double, double> window,
                                       const StateVector& psi0,
                                       const PropagationOptions& opts = {});

// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

// Fidelity maximized over a relative phase applied to component j of b
// (component i carries the reference phase; only the pair matters).
double fidelity_phase_optimized(const StateVector& a, const StateVector& b, int i, int j);

struct GhzScore {
  double raw = 0.0;        // |<GHZ|psi>|^2
  double optimized = 0.0;  // max over the relative phase of the two product components
  double relative_phase = 0.0;  // achieved arg(c_N) - arg(c_0)
};

GhzScore score_ghz(const SystemParams& p, const StateVector& psi);

}  // namespace spinnav
